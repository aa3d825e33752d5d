#pragma once

#include <vector>

#include <Eigen/Dense>

#include "monwalk/lattice.hpp"

namespace monwalk {

// Unit-norm eigenvectors of H with an exact node at the detector site.
struct DarkBasis {
    std::vector<int> mode;  // Fourier index a of each vector
    std::vector<double> energy;
    std::vector<Eigen::VectorXd> vectors;

    std::size_t size() const { return vectors.size(); }
    Eigen::MatrixXd matrix() const;  // vectors as columns
};

// delta^a = cos(2 pi a D / N) f^a - sin(2 pi a D / N) e^a for each degenerate pair
// (e^a, f^a) = sqrt(2/N) (cos, sin)(2 pi a j / N), a = 1..N/2-1. The nondegenerate
// alternating mode a = N/2 joins only if it vanishes at D.
DarkBasis dark_basis(const LatticeConfig& lat, int D);

// Asymptotic survival: total weight of |l> on the dark basis,
// (2/N) sum_{a=1}^{N/2} sin^2(2 pi a (D - l) / N).
double survival_infinity(int N, int D, int l);

struct BrightState {
    // Normalized component of the complement sites that couples to the detector:
    // the uniform superposition over all sites except D.
    Eigen::VectorXd vector;
    // |<l|bright>|^2 = 1/(N-1): exact asymptotic detection probability at alpha = 0.
    double pdet_exact = 0.0;
    // (2/N) |sum_{a=1}^{N-1} cos(2 pi a (D - l) / N)|^2 as printed; equals 2/N.
    double pdet_closed = 0.0;
    double survival_exact() const { return 1.0 - pdet_exact; }
};

BrightState bright_state(int N, int D, int l);

}  // namespace monwalk
