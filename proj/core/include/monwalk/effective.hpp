#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "monwalk/lattice.hpp"

namespace monwalk {

// Modes of the non-Hermitian reduction, sorted by gamma descending (ties: lambda0 ascending).
struct EffectiveSpectrum {
    double tau = 0.0;
    int initial_site = -1;  // site l used for the weights, -1 if none were computed
    std::vector<double> lambda0;  // real energy, units of J
    std::vector<double> gamma;    // decay rate, units of J
    // Weight of |l> on mode a. Hermitian case: |<lambda_a|l>|^2. Exact case: the
    // biorthogonal weight Re(x_a[l]^2) with x_a^T x_a = 1, which sums to one.
    std::vector<double> overlap0;
    // <l|lambda_a><lambda~_a|l> used by the fidelity; real for the Hermitian case.
    std::vector<std::complex<double>> amplitude;

    std::size_t size() const { return gamma.size(); }
    bool has_weights() const { return !overlap0.empty(); }
    double gamma_max() const;
    double dark_threshold() const;  // 1e-12 * gamma_max
    bool is_dark(std::size_t a) const;
    std::size_t dark_count() const;
};

inline constexpr double kDarkRelativeThreshold = 1e-12;

// H_eff = P H P - (i tau / 2) P H |D><D| H P with P = I - |D><D|; N x N, row and column D zero.
Eigen::MatrixXcd build_h_eff(const LatticeConfig& lat, int D, double tau);

// H restricted to the N-1 sites other than D, and the couplings v_i = <i|H|D>.
struct ComplementBlock {
    Eigen::MatrixXd H0;
    Eigen::VectorXd v;
    std::vector<int> sites;  // complement index -> lattice site
    int index_of(int site) const;
};

ComplementBlock complement_block(const LatticeConfig& lat, int D);

struct ExactOptions {
    std::optional<int> initial_site;
    // Eigenvectors enable weights and Rayleigh-quotient refinement of the eigenvalues.
    bool vectors = true;
};

EffectiveSpectrum exact_spectrum(const Eigen::MatrixXcd& h_eff, double tau, const ExactOptions& opts = {});

// First-order rates gamma_a = |<lambda_a^(0)|H|D>|^2 / 2 on the complement block.
EffectiveSpectrum gamma_perturbative(const LatticeConfig& lat, int D, double tau,
                                     std::optional<int> initial_site = std::nullopt);

// Standing-wave estimate gamma_k = J_k^2 cos^2(k D) / N with the truncated band J_k.
double gamma_k(const LatticeConfig& lat, int D, double k);
double gamma_k_approx(const LatticeConfig& lat, int D, int a);

// 2 J^2 zeta_N(alpha)^2 / N
double gamma_max_closed(const LatticeConfig& lat);

double spectral_gap(const EffectiveSpectrum& spec);

// sum_a exp(-2 gamma_a tau t) * overlap0_a
double survival_from_spectrum(const EffectiveSpectrum& spec, double t);
double survival_from_spectrum(const EffectiveSpectrum& spec, double t, const std::vector<bool>& mask);

// (2/N) exp(-2 tau gamma_max t) + 2 * int_0^pi dk/pi exp(-2 tau gamma_k t), as printed.
// Not normalized: equals 2 + 2/N at t = 0.
double gapped_two_term_survival(const LatticeConfig& lat, int D, double tau, double t);

struct ModeDensity {
    double bin_width = 0.0;
    std::vector<double> lower;     // lower edge of each occupied 1/gamma bin, units of 1/J
    std::vector<double> fraction;  // n_a / N per bin
    double dark_fraction = 0.0;
    std::size_t modes = 0;
};

ModeDensity mode_density(const EffectiveSpectrum& spec, double bin_width);

// |sum_a exp(-(i lambda0_a + tau gamma_a) t) amplitude_a|^2
double fidelity_from_spectrum(const EffectiveSpectrum& spec, double t);

}  // namespace monwalk
