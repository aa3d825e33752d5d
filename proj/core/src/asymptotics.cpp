#include "monwalk/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "monwalk/errors.hpp"

namespace monwalk {

TailWindow default_tail_window(double t_max) {
    if (!(t_max > 0.0)) throw ConfigError("t_max", "must be > 0");
    return {0.08 * t_max, 0.8 * t_max};
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
    std::size_t n = 0;
};

LineFit fit_window(std::span<const double> t, std::span<const double> S, double s_inf, TailWindow w,
                   std::size_t samples) {
    if (!(w.t_lo > 0.0 && w.t_lo < w.t_hi)) throw ConfigError("window", "needs 0 < t_lo < t_hi");
    if (t.empty() || w.t_lo < t.front() || w.t_hi > t.back())
        throw ConfigError("window", "trace does not cover the fit window");
    if (samples < 3) throw ConfigError("samples", "needs at least 3 samples");

    std::vector<std::size_t> idx;
    const double ratio = w.t_hi / w.t_lo;
    for (std::size_t k = 0; k < samples; ++k) {
        const double target = w.t_lo * std::pow(ratio, static_cast<double>(k) / static_cast<double>(samples - 1));
        auto it = std::lower_bound(t.begin(), t.end(), target);
        std::size_t i = static_cast<std::size_t>(it - t.begin());
        if (i == t.size()) i = t.size() - 1;
        if (i > 0 && std::abs(t[i - 1] - target) <= std::abs(t[i] - target)) --i;
        if (t[i] < w.t_lo) ++i;
        if (i >= t.size() || t[i] > w.t_hi) continue;
        if (idx.empty() || idx.back() != i) idx.push_back(i);
    }
    if (idx.size() < 3) throw ConfigError("window", "fewer than 3 distinct samples in the fit window");

    std::vector<double> x, y;
    for (std::size_t i : idx) {
        const double g = S[i] - s_inf;
        if (!(g > 0.0)) throw ConfigError("window", "S - S_inf is not positive inside the fit window");
        x.push_back(std::log(t[i]));
        y.push_back(std::log(g));
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    f.n = x.size();
    return f;
}

}  // namespace

TailFit fit_tail(std::span<const double> t, std::span<const double> S, double s_inf, TailWindow window,
                 const TailFitOptions& opts) {
    if (t.size() != S.size()) throw ConfigError("trace", "time and survival series differ in length");
    const LineFit main = fit_window(t, S, s_inf, window, opts.samples);
    TailFit out;
    out.beta = -main.slope;
    out.amplitude = std::exp(main.intercept);
    out.window = window;
    out.residual = main.rms;
    out.points = main.n;
    if (opts.jitter) {
        constexpr std::pair<double, double> shifts[] = {{0.8, 1.0}, {1.25, 1.0}, {1.0, 0.9}, {0.8, 0.9}, {1.25, 0.9}};
        double acc = 0.0;
        int used = 0;
        for (auto [flo, fhi] : shifts) {
            TailWindow w{window.t_lo * flo, window.t_hi * fhi};
            w.t_lo = std::max(w.t_lo, t.front());
            if (!(w.t_lo < w.t_hi)) continue;
            try {
                const double b = -fit_window(t, S, s_inf, w, opts.samples).slope;
                acc += (b - out.beta) * (b - out.beta);
                ++used;
            } catch (const ConfigError&) {
            }
        }
        out.beta_err = used > 0 ? std::sqrt(acc / used) : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

TailFit fit_tail(const SurvivalTrace& trace, double s_inf, TailWindow window, const TailFitOptions& opts) {
    const auto t = trace.times();
    return fit_tail(t, trace.survival, s_inf, window, opts);
}

double tail_closed_form(double J, double tau, int N, int l, double t) {
    if (!(J > 0.0 && tau > 0.0 && t > 0.0 && N > 0)) throw ConfigError("tail", "J, tau, N and t must be positive");
    const double g = 8.0 * J * J * t * tau / N;
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    const double lead = std::sqrt(std::numbers::pi) / (2.0 * J * std::sqrt(8.0 * t * tau / N)) / std::numbers::pi;
    return lead * (1.0 + sign * std::exp(-static_cast<double>(l) * l / g));
}

double d_star(int N, double J, double tau, double t) {
    if (!(J > 0.0 && tau > 0.0 && t > 0.0 && N > 0)) throw ConfigError("d_star", "inputs must be positive");
    return std::sqrt(8.0 * J * J * t * tau / N);
}

BranchReport classify_branch(int D, int N, double J, double tau, double t, double margin) {
    if (!(margin > 0.0 && margin < 1.0)) throw ConfigError("margin", "must lie in (0, 1)");
    BranchReport r;
    r.d_star = d_star(N, J, tau, t);
    r.ratio = static_cast<double>(D) * D / (r.d_star * r.d_star);
    if (r.ratio <= margin) {
        r.branch = TailBranch::Steep;
        r.beta_expected = 1.5;
    } else if (r.ratio >= 1.0 / margin) {
        r.branch = TailBranch::Shallow;
        r.beta_expected = 0.5;
    } else {
        r.branch = TailBranch::Crossover;
        r.beta_expected = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

std::string to_string(TailBranch b) {
    switch (b) {
        case TailBranch::Steep: return "t^-3/2";
        case TailBranch::Shallow: return "t^-1/2";
        case TailBranch::Crossover: return "crossover";
    }
    return "crossover";
}

}  // namespace monwalk
