#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monwalk/lattice.hpp"

namespace monwalk::app {

// One entry of the alpha axis: a power-law exponent or the nearest-neighbour limit.
struct AlphaSpec {
    double value = 1.0;
    bool nearest_neighbor = false;

    static AlphaSpec parse(const std::string& text);
    std::string label() const;
    LatticeConfig lattice(int N, double J = 1.0) const;
    bool operator==(const AlphaSpec&) const = default;
};

enum class SpectrumMode { Exact, Perturbative, Both };

SpectrumMode parse_mode(const std::string& text);
std::string to_string(SpectrumMode m);

// Every input that shapes the numbers. threads and out only affect scheduling and placement.
struct RunManifest {
    std::string command;
    // sweep axes; left empty they take the command defaults
    std::vector<int> N;
    std::vector<AlphaSpec> alpha;
    std::vector<double> tau;
    std::vector<int> D;
    int l = 0;
    std::optional<std::int64_t> steps;  // default: t_max = 2e4 / J
    std::int64_t record_stride = 1;
    std::vector<std::int64_t> reset_r;  // empty: default grid
    double target_pdet = 0.9;
    std::int64_t step_cap = 1'000'000;
    SpectrumMode mode = SpectrumMode::Perturbative;
    double bin_width = 1.0;
    double t_ref = 1e4;
    double margin = 0.1;
    std::string out = ".";
    int threads = 1;
    std::string version;

    void validate() const;
    std::int64_t steps_for(double tau) const;
    std::string canonical() const;  // stable text form hashed into every output
    std::string hash() const;       // SHA-256 of canonical(), lowercase hex
};

inline constexpr double kDefaultHorizon = 2e4;

// Command-specific axis defaults applied when the user left an axis unset.
void apply_command_defaults(RunManifest& m);

}  // namespace monwalk::app
