#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace ftdoa {

using cdouble = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

namespace linalg {

/// Thin SVD: `u` is rows x k, `v` is cols x k with k = min(rows, cols),
/// `s` holds the k singular values in descending order.
struct SvdFactors {
    ComplexMatrix u;
    Eigen::VectorXd s;
    ComplexMatrix v;

    ComplexMatrix reconstruct() const;
};

bool all_finite(const ComplexMatrix& a);

// Throws InvalidInput when `a` is empty or holds NaN/Inf. `what` names the
// operand in the message.
void require_finite(const ComplexMatrix& a, const char* what = "matrix");

SvdFactors svd(const ComplexMatrix& a);

/// Singular values only, descending.
Eigen::VectorXd singular_values(const ComplexMatrix& a);

/// Moore-Penrose pseudoinverse. Singular values at or below
/// sigma_max * max(rows, cols) * machine epsilon are treated as zero.
ComplexMatrix pinv(const ComplexMatrix& a);

/// Eigenvalues of a square matrix, in no particular order.
std::vector<cdouble> eig(const ComplexMatrix& a);

}  // namespace linalg
}  // namespace ftdoa
