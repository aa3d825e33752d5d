#include "monwalk/reset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monwalk/errors.hpp"

namespace monwalk {

void ResetConfig::validate() const {
    if (r < 1) throw ConfigError("reset-r", "must be >= 1");
    if (!(target_pdet > 0.0 && target_pdet < 1.0)) throw ConfigError("target-pdet", "must lie in (0, 1)");
    for (auto v : r_scan)
        if (v < 1) throw ConfigError("r_scan", "entries must be >= 1");
    if (step_cap < 1) throw ConfigError("step_cap", "must be >= 1");
}

std::vector<std::int64_t> default_r_grid(std::int64_t r_max, std::int64_t dense_until, int log_points) {
    std::vector<std::int64_t> g;
    for (std::int64_t r = 1; r <= std::min(dense_until, r_max); ++r) g.push_back(r);
    if (r_max > dense_until && log_points > 0) {
        const double lo = std::log(static_cast<double>(dense_until));
        const double hi = std::log(static_cast<double>(r_max));
        for (int i = 1; i <= log_points; ++i) {
            const auto r = static_cast<std::int64_t>(std::llround(std::exp(lo + (hi - lo) * i / log_points)));
            if (r > g.back()) g.push_back(r);
        }
    }
    return g;
}

namespace {

void require_steps(const SurvivalTrace& trace, std::int64_t n) {
    if (n < 0 || static_cast<std::size_t>(n) >= trace.size() || trace.step[static_cast<std::size_t>(n)] != n)
        throw HorizonError("trace too short: needs contiguous steps up to " + std::to_string(n));
}

}  // namespace

double pdet_with_reset(const SurvivalTrace& trace, std::int64_t r, std::int64_t n) {
    if (r < 1) throw ConfigError("reset-r", "must be >= 1");
    if (n < 0) throw ConfigError("n", "must be >= 0");
    require_steps(trace, std::min(r, n));
    if (n < r) return 1.0 - trace.survival[static_cast<std::size_t>(n)];
    const std::int64_t m = n / r;
    const std::int64_t j = n % r;
    const double Sr = trace.survival[static_cast<std::size_t>(r)];
    return 1.0 - std::pow(Sr, static_cast<double>(m)) * trace.survival[static_cast<std::size_t>(j)];
}

Convergence convergence_time(const SurvivalTrace& trace, std::int64_t r, double target, std::int64_t step_cap) {
    if (r < 1) throw ConfigError("reset-r", "must be >= 1");
    if (!(target > 0.0 && target < 1.0)) throw ConfigError("target-pdet", "must lie in (0, 1)");
    require_steps(trace, r);
    const auto& S = trace.survival;
    const double Sr = S[static_cast<std::size_t>(r)];
    Convergence c;
    if (Sr >= 1.0 - 1e-14) {
        c.status = ConvergenceStatus::Never;
        return c;
    }
    const double goal = 1.0 - target;
    const double mstar = Sr <= 0.0 ? 1.0 : std::ceil(std::log(goal) / std::log(Sr));
    c.blocks_bound = static_cast<std::int64_t>(mstar);
    // Within block m the survival is Sr^m S_j, j = 1..r; the block is entered only if its
    // last value reaches the goal, then scanned for the first qualifying j.
    double base = 1.0;
    for (std::int64_t m = 0; m < c.blocks_bound; ++m) {
        if (m * r >= step_cap) break;
        if (base * Sr <= goal) {
            for (std::int64_t j = 1; j <= r; ++j) {
                if (base * S[static_cast<std::size_t>(j)] <= goal) {
                    const std::int64_t n = m * r + j;
                    if (n > step_cap) break;
                    c.status = ConvergenceStatus::Converged;
                    c.steps = n;
                    c.time = static_cast<double>(n) * trace.tau;
                    return c;
                }
            }
            break;
        }
        base *= Sr;
    }
    c.status = ConvergenceStatus::BeyondCap;
    return c;
}

std::int64_t predicted_optimal_r(double gamma_max, double tau) {
    if (!(gamma_max > 0.0)) throw ConfigError("gamma_max", "must be > 0");
    if (!(tau > 0.0)) throw ConfigError("tau", "must be > 0");
    return std::max<std::int64_t>(1, std::llround(1.0 / (gamma_max * tau)));
}

std::int64_t predicted_optimal_r(const EffectiveSpectrum& spec) { return predicted_optimal_r(spec.gamma_max(), spec.tau); }

ResetOptimum optimize_r(const SurvivalTrace& trace, const ResetConfig& scan) {
    scan.validate();
    const auto grid = scan.r_scan.empty() ? default_r_grid() : scan.r_scan;
    if (grid.empty()) throw ConfigError("r_scan", "empty sweep");
    ResetOptimum opt;
    for (auto r : grid) {
        LandscapePoint p{r, convergence_time(trace, r, scan.target_pdet, scan.step_cap)};
        if (p.result.converged() && p.result.time < opt.t_best) {
            opt.t_best = p.result.time;
            opt.r_best = r;
        }
        opt.landscape.push_back(p);
    }
    return opt;
}

ResetOptimum optimize_r(const LatticeConfig& lat, const ProtocolConfig& prot, const ResetConfig& scan) {
    scan.validate();
    const auto grid = scan.r_scan.empty() ? default_r_grid() : scan.r_scan;
    if (grid.empty()) throw ConfigError("r_scan", "empty sweep");
    ProtocolConfig p = prot;
    p.n_steps = *std::max_element(grid.begin(), grid.end());
    p.record_stride = 1;
    const auto trace = run_monitored(lat, p);
    ResetConfig s = scan;
    s.r_scan = grid;
    auto opt = optimize_r(trace, s);
    if (!opt.feasible()) throw HorizonError("no reset period converges within the step cap");
    return opt;
}

}  // namespace monwalk
