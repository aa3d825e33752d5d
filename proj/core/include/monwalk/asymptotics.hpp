#pragma once

#include <span>
#include <string>

#include "monwalk/walk.hpp"

namespace monwalk {

struct TailWindow {
    double t_lo = 0.0;
    double t_hi = 0.0;
};

// Power law S(t) - S_inf ~ amplitude * t^-beta fitted on a window.
struct TailFit {
    double beta = 0.0;
    double beta_err = 0.0;  // spread of beta under window jitter
    double amplitude = 0.0;
    TailWindow window;
    double residual = 0.0;  // RMS in log-log space
    std::size_t points = 0;
};

struct TailFitOptions {
    // Samples taken at log-uniform times so each decade weighs the same.
    std::size_t samples = 60;
    bool jitter = true;
};

// Default window: [0.08, 0.8] * t_max.
TailWindow default_tail_window(double t_max);

TailFit fit_tail(std::span<const double> t, std::span<const double> S, double s_inf, TailWindow window,
                 const TailFitOptions& opts = {});
TailFit fit_tail(const SurvivalTrace& trace, double s_inf, TailWindow window, const TailFitOptions& opts = {});

// (1/pi) sqrt(pi) / (2 J sqrt(8 t tau / N)) * (1 + (-1)^l exp(-l^2 / (8 J^2 t tau / N)))
double tail_closed_form(double J, double tau, int N, int l, double t);

// sqrt(8 J^2 t tau / N)
double d_star(int N, double J, double tau, double t);

enum class TailBranch { Steep, Shallow, Crossover };

struct BranchReport {
    TailBranch branch = TailBranch::Crossover;
    double d_star = 0.0;
    double ratio = 0.0;  // (D / D*)^2 = N D^2 / (8 J^2 t tau)
    double beta_expected = 0.0;  // 1.5, 0.5, or NaN for crossover
};

// Steep (t^-3/2) when ratio <= margin, shallow (t^-1/2) when ratio >= 1/margin.
BranchReport classify_branch(int D, int N, double J, double tau, double t, double margin = 0.1);

std::string to_string(TailBranch b);

}  // namespace monwalk
