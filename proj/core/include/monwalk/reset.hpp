#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "monwalk/effective.hpp"
#include "monwalk/walk.hpp"

namespace monwalk {

// Sharp reset to the initial site after r unsuccessful detection attempts.
struct ResetConfig {
    std::int64_t r = 1;
    double target_pdet = 0.9;
    std::vector<std::int64_t> r_scan;  // empty: default_r_grid()
    std::int64_t step_cap = 1'000'000;

    void validate() const;
};

// r = 1..50, then log-spaced up to 500.
std::vector<std::int64_t> default_r_grid(std::int64_t r_max = 500, std::int64_t dense_until = 50, int log_points = 30);

// Renewal composition: for n = m r + j, P_det = 1 - S(t_r)^m S(t_j). Needs a stride-1 trace.
double pdet_with_reset(const SurvivalTrace& trace, std::int64_t r, std::int64_t n);

enum class ConvergenceStatus { Converged, Never, BeyondCap };

struct Convergence {
    ConvergenceStatus status = ConvergenceStatus::Never;
    std::int64_t steps = 0;
    double time = std::numeric_limits<double>::infinity();
    std::int64_t blocks_bound = 0;  // m* = ceil(ln(1 - target) / ln S(t_r))
    bool converged() const { return status == ConvergenceStatus::Converged; }
};

// First n with pdet_with_reset >= target. Never when S(t_r) >= 1 - 1e-14.
Convergence convergence_time(const SurvivalTrace& trace, std::int64_t r, double target = 0.9,
                             std::int64_t step_cap = 1'000'000);

// max(1, round(1 / (gamma_max tau)))
std::int64_t predicted_optimal_r(double gamma_max, double tau);
std::int64_t predicted_optimal_r(const EffectiveSpectrum& spec);

struct LandscapePoint {
    std::int64_t r = 0;
    Convergence result;
};

struct ResetOptimum {
    std::int64_t r_best = 0;
    double t_best = std::numeric_limits<double>::infinity();
    std::vector<LandscapePoint> landscape;
    bool feasible() const { return r_best > 0; }
};

// Scans r over one precomputed trace; each r costs O(r) after the trace exists.
ResetOptimum optimize_r(const SurvivalTrace& trace, const ResetConfig& scan);
// Simulates the trace (max r steps) and scans. Throws HorizonError when no r converges.
ResetOptimum optimize_r(const LatticeConfig& lat, const ProtocolConfig& prot, const ResetConfig& scan);

}  // namespace monwalk
