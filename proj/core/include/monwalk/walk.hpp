#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "monwalk/lattice.hpp"

namespace monwalk {

// Stroboscopic monitoring: detector at site D, walker starts on site l.
struct ProtocolConfig {
    double tau = 0.2;
    int D = 10;
    int l = 0;
    std::int64_t n_steps = 100000;
    // Only every record_stride-th step is stored (the final step always is).
    std::int64_t record_stride = 1;

    void validate(int N) const;
};

// Probability amplitudes; deliberately left unnormalized after projections.
using WalkerState = Eigen::VectorXcd;

struct SurvivalTrace {
    double tau = 0.0;
    std::vector<std::int64_t> step;
    std::vector<double> survival;
    std::vector<double> first_detection;
    std::vector<double> fidelity;

    std::size_t size() const { return step.size(); }
    double time(std::size_t i) const { return static_cast<double>(step[i]) * tau; }
    double pdet(std::size_t i) const { return 1.0 - survival[i]; }
    std::vector<double> times() const;
    // Survival at an absolute step number; requires a stride-1 trace covering n.
    double survival_at_step(std::int64_t n) const;
    bool contiguous() const;
};

// Applies U(tau) = exp(-i H tau) by diagonalizing the circulant in Fourier space.
// Each instance owns its FFT plans and work buffer and is not shareable across threads.
class Propagator {
public:
    Propagator(const LatticeConfig& cfg, double tau);
    ~Propagator();
    Propagator(Propagator&&) noexcept;
    Propagator& operator=(Propagator&&) noexcept;
    Propagator(const Propagator&) = delete;
    Propagator& operator=(const Propagator&) = delete;

    int size() const;
    void apply(WalkerState& psi);

    // Work buffer used by the in-place monitored step.
    std::span<std::complex<double>> buffer();
    void load(const WalkerState& psi);
    WalkerState store() const;
    // buffer <- (I - |D><D|) U buffer; returns the remaining norm squared.
    double monitored_step(int D);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

WalkerState site_state(int N, int site);

WalkerState evolve_unitary(const WalkerState& state, const LatticeConfig& cfg, double tau);

struct NoClickResult {
    WalkerState state;
    double p_click = 0.0;
};

NoClickResult project_no_click(WalkerState state, int D);

SurvivalTrace run_monitored(const LatticeConfig& lat, const ProtocolConfig& prot);

// f(t_n) = |<l|psi_n+>|^2 at the recorded steps.
std::vector<double> fidelity_trace(const LatticeConfig& lat, const ProtocolConfig& prot);

// Smallest recorded t after which f stays below threshold.
double equilibration_time(std::span<const double> t, std::span<const double> f, double threshold = 0.01);
double equilibration_time(const SurvivalTrace& trace, double threshold = 0.01);

// First recorded t with S(t) <= level.
double relaxation_time(const SurvivalTrace& trace, double level = 0.75);

}  // namespace monwalk
