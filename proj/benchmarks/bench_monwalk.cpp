#include <benchmark/benchmark.h>

#include <complex>

#include <Eigen/Dense>

#include "monwalk/effective.hpp"
#include "monwalk/lattice.hpp"
#include "monwalk/reset.hpp"
#include "monwalk/walk.hpp"

using namespace monwalk;

namespace {

LatticeConfig ring(int N, double alpha = 1.5) {
    LatticeConfig c;
    c.N = N;
    c.alpha = alpha;
    return c;
}

}  // namespace

static void BM_MonitoredStepFFT(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    Propagator prop(ring(N), 0.2);
    prop.load(site_state(N, 0));
    for (auto _ : state) {
        double s = prop.monitored_step(N / 2);
        if (s < 1e-3) prop.load(site_state(N, 0));
        benchmark::DoNotOptimize(s);
    }
    state.SetComplexityN(N);
}
BENCHMARK(BM_MonitoredStepFFT)->RangeMultiplier(2)->Range(128, 4096)->Complexity(benchmark::oNLogN);

// Same step as a dense matrix-vector product with a precomputed U.
static void BM_MonitoredStepDense(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const auto H = hamiltonian_dense(ring(N));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::MatrixXcd V = es.eigenvectors().cast<std::complex<double>>();
    Eigen::VectorXcd ph(N);
    for (int a = 0; a < N; ++a) ph[a] = std::polar(1.0, -es.eigenvalues()[a] * 0.2);
    const Eigen::MatrixXcd U = V * ph.asDiagonal() * V.adjoint();
    Eigen::VectorXcd psi = site_state(N, 0), next(N);
    for (auto _ : state) {
        next.noalias() = U * psi;
        next[N / 2] = 0.0;
        const double s = next.squaredNorm();
        psi.swap(next);
        if (s < 1e-3) psi = site_state(N, 0);
        benchmark::DoNotOptimize(s);
    }
    state.SetComplexityN(N);
}
BENCHMARK(BM_MonitoredStepDense)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

static void BM_ExactSpectrum(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const auto h = build_h_eff(ring(N), 10, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(exact_spectrum(h, 0.2).gamma_max());
}
BENCHMARK(BM_ExactSpectrum)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_PerturbativeSpectrum(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const auto lat = ring(N);
    for (auto _ : state) benchmark::DoNotOptimize(gamma_perturbative(lat, 10, 0.2).gamma_max());
}
BENCHMARK(BM_PerturbativeSpectrum)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_ResetScan(benchmark::State& state) {
    ProtocolConfig p;
    p.n_steps = 500;
    const auto tr = run_monitored(ring(static_cast<int>(state.range(0))), p);
    ResetConfig scan;
    for (auto _ : state) benchmark::DoNotOptimize(optimize_r(tr, scan).t_best);
}
BENCHMARK(BM_ResetScan)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
