#pragma once

#include <Eigen/Dense>

namespace monwalk::detail {

struct ComplexEigen {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;  // right eigenvectors as columns; empty when not requested
};

// General complex eigensolve (LAPACK zgeev).
ComplexEigen complex_eigen(const Eigen::MatrixXcd& A, bool want_vectors);

struct SymmetricEigen {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors;
};

// Real symmetric eigensolve (LAPACK dsyevd).
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& A);

}  // namespace monwalk::detail
