#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "monwalk_app/manifest.hpp"

namespace monwalk::app {

// One parameter point of a sweep.
struct Point {
    int N = 1000;
    AlphaSpec alpha;
    double tau = 0.2;
    int D = 10;

    LatticeConfig lattice() const { return alpha.lattice(N); }
    std::string tag() const;  // e.g. N1000_alpha1.5_tau0.2_D10
};

// Cartesian product of the axes, N outermost, D innermost.
std::vector<Point> expand(const RunManifest& m);

struct CommandReport {
    std::vector<std::filesystem::path> files;
    int exit_code = 0;
    std::vector<std::string> notes;
};

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3, kNoConvergence = 4 };

// Trace CSV per point, long-format alpha,t,survival table, timescale summary.
CommandReport cmd_survival(const RunManifest& m);
// Spectrum CSV, dispersion and density per point; gap scan over all points.
CommandReport cmd_spectrum(const RunManifest& m);
// Reset landscape and optimum summary; exit code 4 if some point never converges.
CommandReport cmd_reset(const RunManifest& m);
// Tail fits with branch classification.
CommandReport cmd_tails(const RunManifest& m);

CommandReport run_command(const RunManifest& m);

}  // namespace monwalk::app
