#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "monwalk/darkstates.hpp"
#include "monwalk/effective.hpp"
#include "monwalk/errors.hpp"
#include "monwalk/walk.hpp"
#include "oracles.hpp"

using namespace monwalk;

namespace {

double late_mean(const SurvivalTrace& tr, double t_from) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < tr.size(); ++i)
        if (tr.time(i) >= t_from) {
            sum += tr.survival[i];
            ++n;
        }
    return sum / n;
}

}  // namespace

TEST_CASE("dark basis construction") {
    const LatticeConfig lat{64, 1.3};
    const int D = 9;
    const auto basis = dark_basis(lat, D);
    REQUIRE(basis.size() == 31);
    const auto H = oracle::hamiltonian(64, 1.3);
    const Eigen::MatrixXd V = basis.matrix();
    CHECK(V.cols() == 31);
    CHECK((V.transpose() * V - Eigen::MatrixXd::Identity(31, 31)).cwiseAbs().maxCoeff() < 1e-10);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& v = basis.vectors[i];
        CHECK(std::abs(v[D]) < 1e-14);
        CHECK((H * v - basis.energy[i] * v).norm() < 1e-9 * H.norm());
        CHECK(basis.mode[i] == static_cast<int>(i) + 1);
    }
}

TEST_CASE("dark states are stationary under the monitored map") {
    const LatticeConfig lat{128, 0.7};
    const int D = 17;
    const double tau = 0.2;
    const auto basis = dark_basis(lat, D);
    for (std::size_t i = 0; i < basis.size(); i += 7) {
        const WalkerState v = basis.vectors[i].cast<std::complex<double>>();
        const auto out = project_no_click(evolve_unitary(v, lat, tau), D);
        CHECK(out.p_click < 1e-24);
        CHECK((out.state - std::polar(1.0, -basis.energy[i] * tau) * v).norm() < 1e-12);
    }
}

TEST_CASE("dark count matches the exact spectrum") {
    // The exact count also includes the null mode on the detector site itself.
    const auto basis = dark_basis({1000, 1.0}, 10);
    CHECK(basis.size() + 1 == 500);
    for (double alpha : {0.5, 2.0}) {
        const LatticeConfig lat{128, alpha};
        const auto spec = exact_spectrum(build_h_eff(lat, 11, 0.2), 0.2, {.vectors = false});
        CHECK(dark_basis(lat, 11).size() + 1 == spec.dark_count());
    }
}

TEST_CASE("dark subspace does not depend on the range") {
    const Eigen::MatrixXd A = dark_basis({64, 0.5}, 5).matrix();
    const Eigen::MatrixXd B = dark_basis({64, 3.0}, 5).matrix();
    const Eigen::MatrixXd C = dark_basis({64, 0.0, 1.0, true}, 5).matrix();
    const Eigen::MatrixXd PA = A * A.transpose();
    CHECK((PA - B * B.transpose()).norm() < 1e-9);
    CHECK((PA - C * C.transpose()).norm() < 1e-9);
}

TEST_CASE("dark basis rejects all-to-all coupling") {
    CHECK_THROWS_AS(dark_basis({64, 0.0}, 5), ConfigError);
    CHECK_THROWS_AS(dark_basis({64, 1.0}, 64), ConfigError);
}

TEST_CASE("asymptotic survival") {
    CHECK(survival_infinity(1000, 510, 10) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(survival_infinity(1000, 500, 0)) < 1e-12);
    CHECK(survival_infinity(1000, 10, 0) == doctest::Approx(0.5).epsilon(1e-12));
    for (int N : {64, 256, 4096}) CHECK(std::abs(survival_infinity(N, 7, 2) - 0.5) < 1e-10);
    CHECK(survival_infinity(64, 3, 40) == doctest::Approx(survival_infinity(64, 40, 3)).epsilon(1e-14));
    CHECK_THROWS_AS(survival_infinity(64, 3, 3), ConfigError);

    // overlap with the explicit basis
    for (int l : {0, 2, 20, 37}) {
        const auto V = dark_basis({64, 1.0}, 5).matrix();
        Eigen::VectorXd e = Eigen::VectorXd::Zero(64);
        e[l] = 1.0;
        CHECK((V.transpose() * e).squaredNorm() == doctest::Approx(survival_infinity(64, 5, l)).epsilon(1e-12));
    }
}

TEST_CASE("asymptotic survival against monitored plateaus") {
    struct Geometry {
        int N, D, l;
        double alpha;
    };
    for (auto g : {Geometry{64, 5, 0, 1.5}, Geometry{64, 32, 0, 2.0}, Geometry{48, 30, 7, 3.0}}) {
        ProtocolConfig p;
        p.D = g.D;
        p.l = g.l;
        p.n_steps = 500000;
        p.record_stride = 10;
        const auto tr = run_monitored({g.N, g.alpha}, p);
        CAPTURE(g.N);
        CAPTURE(g.D);
        CHECK(std::abs(late_mean(tr, 0.8 * tr.time(tr.size() - 1)) - survival_infinity(g.N, g.D, g.l)) < 0.01);
    }
}

TEST_CASE("asymptotic survival at N = 1000 within a 1e4 horizon" * doctest::may_fail()) {
    ProtocolConfig p;
    p.n_steps = 50000;
    p.record_stride = 10;
    const auto tr = run_monitored({1000, 1.5}, p);
    const double plateau = late_mean(tr, 5000.0);
    MESSAGE("late-time mean over [5e3, 1e4]: " << plateau);
    CHECK(std::abs(plateau - survival_infinity(1000, 10, 0)) < 0.01);
}

TEST_CASE("bright state") {
    const auto b = bright_state(1000, 10, 0);
    CHECK(b.pdet_closed < 0.01);
    CHECK(b.pdet_closed == doctest::Approx(2.0 / 1000).epsilon(1e-10));
    CHECK(b.pdet_exact == doctest::Approx(1.0 / 999).epsilon(1e-12));
    CHECK(b.vector.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b.vector[10] == 0.0);
    CHECK(b.survival_exact() == doctest::Approx(1.0 - 1.0 / 999));
    CHECK_THROWS_AS(bright_state(1000, 10, 10), ConfigError);

    // The bright vector is the only mode that couples to the detector at alpha = 0.
    const auto H = oracle::hamiltonian(200, 0.0);
    const auto b200 = bright_state(200, 10, 0);
    Eigen::VectorXd Hb = H * b200.vector;
    CHECK(std::abs(Hb[10]) > 1.0);

    ProtocolConfig p;
    p.n_steps = 20000;
    const auto tr = run_monitored({200, 0.0}, p);
    const double plateau = late_mean(tr, 0.5 * tr.time(tr.size() - 1));
    CHECK(std::abs(plateau - b200.survival_exact()) < 0.02);
    CHECK(std::abs(plateau - (1.0 - b200.pdet_closed)) < 0.02);
}
