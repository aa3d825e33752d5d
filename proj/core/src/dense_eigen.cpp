#include "dense_eigen.hpp"

#include <complex>
#include <mutex>
#include <sstream>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "monwalk/errors.hpp"

extern "C" void openblas_set_num_threads(int);

namespace monwalk::detail {
namespace {

// A fixed BLAS thread count keeps reductions, and therefore results, reproducible.
void pin_blas_threads() {
    static std::once_flag once;
    std::call_once(once, [] { openblas_set_num_threads(1); });
}

[[noreturn]] void fail(const char* routine, lapack_int info, double norm, Eigen::Index n) {
    std::ostringstream os;
    os << routine << " failed (info=" << info << ", n=" << n << ", frobenius norm=" << norm << ")";
    if (info > 0) os << ": QR iteration did not converge for " << info << " eigenvalues";
    throw NumericalError(os.str());
}

}  // namespace

ComplexEigen complex_eigen(const Eigen::MatrixXcd& A, bool want_vectors) {
    pin_blas_threads();
    const auto n = A.rows();
    if (A.cols() != n) throw NumericalError("complex_eigen: matrix is not square");
    if (!A.allFinite()) throw NumericalError("complex_eigen: matrix has non-finite entries");
    Eigen::MatrixXcd work = A;
    ComplexEigen out;
    out.values.resize(n);
    if (want_vectors) out.vectors.resize(n, n);
    std::complex<double> dummy{};
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', static_cast<lapack_int>(n), work.data(),
        static_cast<lapack_int>(n), out.values.data(), &dummy, 1,
        want_vectors ? out.vectors.data() : &dummy, want_vectors ? static_cast<lapack_int>(n) : 1);
    if (info != 0) fail("zgeev", info, A.norm(), n);
    return out;
}

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& A) {
    pin_blas_threads();
    const auto n = A.rows();
    if (A.cols() != n) throw NumericalError("symmetric_eigen: matrix is not square");
    if (!A.allFinite()) throw NumericalError("symmetric_eigen: matrix has non-finite entries");
    SymmetricEigen out;
    out.vectors = A;
    out.values.resize(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(n),
                                           out.vectors.data(), static_cast<lapack_int>(n), out.values.data());
    if (info != 0) fail("dsyevd", info, A.norm(), n);
    return out;
}

}  // namespace monwalk::detail
