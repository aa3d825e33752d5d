#include "monwalk/darkstates.hpp"

#include <cmath>
#include <numbers>

#include "monwalk/errors.hpp"

namespace monwalk {
namespace {

double angle(long long m, int N) {
    const long long r = ((m % N) + N) % N;
    return 2.0 * std::numbers::pi * static_cast<double>(r) / N;
}

void check_sites(int N, int D, int l) {
    if (N < 4 || N % 2 != 0) throw ConfigError("N", "must be even and >= 4");
    if (D < 0 || D >= N) throw ConfigError("detector", "site index out of range");
    if (l < 0 || l >= N) throw ConfigError("init", "site index out of range");
    if (D == l) throw ConfigError("init", "must differ from the detector site");
}

}  // namespace

Eigen::MatrixXd DarkBasis::matrix() const {
    if (vectors.empty()) return {};
    Eigen::MatrixXd M(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t c = 0; c < vectors.size(); ++c) M.col(static_cast<Eigen::Index>(c)) = vectors[c];
    return M;
}

DarkBasis dark_basis(const LatticeConfig& lat, int D) {
    lat.validate();
    if (!lat.nearest_neighbor && lat.alpha == 0.0)
        throw ConfigError("alpha", "dark basis needs alpha > 0; use bright_state for alpha = 0");
    const int N = lat.N;
    if (D < 0 || D >= N) throw ConfigError("detector", "site index out of range");
    const auto table = dispersion(lat);
    const double norm = std::sqrt(2.0 / N);
    DarkBasis b;
    for (int a = 1; a < N / 2; ++a) {
        // cos(aD) sin(aj) - sin(aD) cos(aj) = sin(a (j - D)), evaluated on the reduced integer phase.
        Eigen::VectorXd v(N);
        for (int j = 0; j < N; ++j) v[j] = norm * std::sin(angle(1LL * a * (j - D), N));
        b.mode.push_back(a);
        b.energy.push_back(table.E[static_cast<std::size_t>(a)]);
        b.vectors.push_back(std::move(v));
    }
    Eigen::VectorXd alt(N);
    for (int j = 0; j < N; ++j) alt[j] = (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(static_cast<double>(N));
    if (std::abs(alt[D]) < 1e-14) {
        b.mode.push_back(N / 2);
        b.energy.push_back(table.E[static_cast<std::size_t>(N / 2)]);
        b.vectors.push_back(std::move(alt));
    }
    return b;
}

double survival_infinity(int N, int D, int l) {
    check_sites(N, D, l);
    double s = 0.0;
    for (int a = 1; a <= N / 2; ++a) {
        const double x = std::sin(angle(1LL * a * (D - l), N));
        s += x * x;
    }
    return 2.0 / N * s;
}

BrightState bright_state(int N, int D, int l) {
    check_sites(N, D, l);
    BrightState b;
    b.vector = Eigen::VectorXd::Constant(N, 1.0 / std::sqrt(static_cast<double>(N - 1)));
    b.vector[D] = 0.0;
    b.pdet_exact = b.vector[l] * b.vector[l];
    double c = 0.0;
    for (int a = 1; a < N; ++a) c += std::cos(angle(1LL * a * (D - l), N));
    b.pdet_closed = 2.0 / N * c * c;
    return b;
}

}  // namespace monwalk
