#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "monwalk/asymptotics.hpp"
#include "monwalk/darkstates.hpp"
#include "monwalk/effective.hpp"
#include "monwalk/errors.hpp"
#include "monwalk/walk.hpp"

using namespace monwalk;

namespace {

struct Series {
    std::vector<double> t, S;
};

Series power_law(double s_inf, double amp, double beta, double t0, double t1, int n) {
    Series s;
    for (int i = 0; i < n; ++i) {
        const double t = t0 * std::pow(t1 / t0, static_cast<double>(i) / (n - 1));
        s.t.push_back(t);
        s.S.push_back(s_inf + amp * std::pow(t, -beta));
    }
    return s;
}

}  // namespace

TEST_CASE("fit on exact power laws") {
    auto s = power_law(0.5, 1.0, 0.5, 1.0, 1e5, 4000);
    auto fit = fit_tail(s.t, s.S, 0.5, {10.0, 1e4});
    CHECK(std::abs(fit.beta - 0.5) < 1e-3);
    CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.residual < 1e-8);
    CHECK(fit.beta_err < 1e-8);
    CHECK(fit.points == 60);
    CHECK(fit.window.t_lo == 10.0);
    CHECK(fit.window.t_hi == 1e4);

    s = power_law(0.2, 3.0, 1.5, 1.0, 1e6, 2000);
    fit = fit_tail(s.t, s.S, 0.2, {100.0, 1e5}, {.samples = 200, .jitter = false});
    CHECK(fit.beta == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(fit.points >= 195);
    CHECK(fit.points <= 200);
    CHECK(fit.beta_err == 0.0);
}

TEST_CASE("fit rejects bad windows and signals") {
    const auto s = power_law(0.5, 1.0, 0.5, 1.0, 1e3, 500);
    CHECK_THROWS_AS(fit_tail(s.t, s.S, 0.5, {100.0, 10.0}), ConfigError);
    CHECK_THROWS_AS(fit_tail(s.t, s.S, 0.5, {10.0, 1e5}), ConfigError);
    CHECK_THROWS_AS(fit_tail(s.t, s.S, 0.9, {10.0, 100.0}), ConfigError);
    CHECK_THROWS_AS(fit_tail(s.t, std::vector<double>(3, 1.0), 0.5, {10.0, 100.0}), ConfigError);
}

TEST_CASE("default window") {
    const auto w = default_tail_window(2e4);
    CHECK(w.t_lo == doctest::Approx(1600.0));
    CHECK(w.t_hi == doctest::Approx(16000.0));
    CHECK_THROWS_AS(default_tail_window(0.0), ConfigError);
}

TEST_CASE("closed-form tail") {
    // deep in the t^{-1/2} branch the second term is below double precision
    const double r = tail_closed_form(1.0, 0.2, 1000, 50, 1e3) / tail_closed_form(1.0, 0.2, 1000, 50, 4e3);
    CHECK(std::abs(r - 2.0) < 1e-6);

    // odd l well inside D*: Taylor branch, local slope 3/2
    const double t = 1e5;
    const double slope = std::log(tail_closed_form(1.0, 0.2, 1000, 1, t) / tail_closed_form(1.0, 0.2, 1000, 1, 4.0 * t)) / std::log(4.0);
    CHECK(slope == doctest::Approx(1.5).epsilon(0.01));
    CHECK_THROWS_AS(tail_closed_form(1.0, 0.2, 1000, 1, 0.0), ConfigError);
}

TEST_CASE("crossover distance and branches") {
    CHECK(d_star(1000, 1.0, 0.2, 1e4) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(d_star(1000, 1.0, 0.2, 4e4) == doctest::Approx(2.0 * d_star(1000, 1.0, 0.2, 1e4)).epsilon(1e-14));
    CHECK_THROWS_AS(d_star(1000, 1.0, -0.2, 1e4), ConfigError);

    auto b = classify_branch(1, 1000, 1.0, 0.2, 1e4);
    CHECK(b.branch == TailBranch::Steep);
    CHECK(b.ratio == doctest::Approx(1.0 / 16.0));
    CHECK(b.beta_expected == 1.5);
    b = classify_branch(50, 1000, 1.0, 0.2, 1e4);
    CHECK(b.branch == TailBranch::Shallow);
    CHECK(b.beta_expected == 0.5);
    b = classify_branch(4, 1000, 1.0, 0.2, 1e4);
    CHECK(b.branch == TailBranch::Crossover);
    CHECK(std::isnan(b.beta_expected));
    CHECK(b.d_star == doctest::Approx(4.0));
    CHECK(to_string(TailBranch::Steep) == "t^-3/2");
    CHECK(to_string(TailBranch::Shallow) == "t^-1/2");
    CHECK(to_string(TailBranch::Crossover) == "crossover");
    CHECK_THROWS_AS(classify_branch(4, 1000, 1.0, 0.2, 1e4, 1.5), ConfigError);
}

TEST_CASE("nearest-neighbour tail against simulation") {
    const int N = 1000, D = 50;
    ProtocolConfig p;
    p.D = D;
    p.n_steps = 200000;
    p.record_stride = 10;
    const auto tr = run_monitored({N, 0.0, 1.0, true}, p);
    const double s_inf = survival_infinity(N, D, 0);

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double t = tr.time(i);
        if (t < 2e3 || t > 2e4) continue;
        const double ratio = (tr.survival[i] - s_inf) / tail_closed_form(1.0, p.tau, N, D, t);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    MESSAGE("simulation / closed form over [2e3, 2e4]: " << lo << " .. " << hi);
    CHECK(lo > 0.8);
    CHECK(hi < 1.25);
    CHECK(hi / lo < 1.2);

    const auto fit = fit_tail(tr, s_inf, default_tail_window(tr.time(tr.size() - 1)));
    CHECK(fit.beta == doctest::Approx(0.5).epsilon(0.2));
    CHECK(fit.window.t_lo < fit.window.t_hi);
    CHECK(std::isfinite(fit.residual));
}

TEST_CASE("the tail is carried by gray modes") {
    const int N = 1000, D = 50;
    const double tau = 0.2;
    const auto spec = gamma_perturbative({N, 1.5}, D, tau, 0);
    std::vector<double> nondark;
    for (std::size_t a = 0; a < spec.size(); ++a)
        if (!spec.is_dark(a)) nondark.push_back(spec.gamma[a]);
    std::nth_element(nondark.begin(), nondark.begin() + static_cast<std::ptrdiff_t>(nondark.size() / 2), nondark.end());
    const double median = nondark[nondark.size() / 2];
    std::vector<bool> gray(spec.size()), bright(spec.size());
    for (std::size_t a = 0; a < spec.size(); ++a) {
        gray[a] = !spec.is_dark(a) && spec.gamma[a] < median;
        bright[a] = !spec.is_dark(a);
    }
    std::vector<double> t, full, slow;
    for (int i = 0; i <= 400; ++i) {
        const double ti = 1e3 * std::pow(1e3, i / 400.0);
        t.push_back(ti);
        full.push_back(survival_from_spectrum(spec, ti, bright));
        slow.push_back(survival_from_spectrum(spec, ti, gray));
    }
    const TailWindow w{1e4, 1e5};
    const auto f_full = fit_tail(t, full, 0.0, w);
    const auto f_gray = fit_tail(t, slow, 0.0, w);
    MESSAGE("beta full " << f_full.beta << ", gray only " << f_gray.beta);
    CHECK(std::abs(f_full.beta - f_gray.beta) < 0.1);
    CHECK(std::abs(f_gray.beta - 0.5) < 0.1);
}
