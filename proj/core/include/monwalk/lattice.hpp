#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace monwalk {

// Ring of N sites with hopping -J / d^alpha between every pair at ring distance d.
// Energies are in units of J and times in units of 1/J throughout the library.
struct LatticeConfig {
    int N = 1000;
    double alpha = 1.0;
    double J = 1.0;
    // Short-range limit: only d = 1 couples. alpha is ignored when set.
    bool nearest_neighbor = false;

    void validate() const;
    std::string label() const;  // "nn" or the exponent
};

// Circulant spectrum indexed by a = 0..N-1 with k = 2*pi*a/N.
struct DispersionTable {
    std::vector<double> k;
    std::vector<double> E;
};

int ring_distance(int i, int j, int N);

// Matrix element -J/d^alpha for ring distance d >= 1.
double hopping(const LatticeConfig& cfg, int d);

// First row of the circulant Hamiltonian: row[d] = H[0][d].
std::vector<double> circulant_row(const LatticeConfig& cfg);

Eigen::MatrixXd hamiltonian_dense(const LatticeConfig& cfg);

// Exact circulant eigenvalues, including the single antipodal coupling at d = N/2.
DispersionTable dispersion(const LatticeConfig& cfg);

// Band with the antipodal term dropped: -2J * sum_{r=1}^{N/2-1} cos(k r) / r^alpha.
double truncated_band(const LatticeConfig& cfg, double k);

// zeta_N(alpha) = sum_{r=1}^{N/2} r^-alpha.
double zeta_partial(double alpha, int N);

struct LiebRobinsonScale {
    std::string label;
    double value = 0.0;
};

// Table of Lieb-Robinson propagation-time scalings, known up to a constant.
LiebRobinsonScale lr_timescale(double alpha, int D, int N);
LiebRobinsonScale lr_timescale(const LatticeConfig& cfg, int D);

}  // namespace monwalk
