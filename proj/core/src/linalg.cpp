#include "ftdoa/linalg.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "ftdoa/error.hpp"

namespace ftdoa::linalg {

ComplexMatrix SvdFactors::reconstruct() const {
    return u * s.cast<cdouble>().asDiagonal() * v.adjoint();
}

bool all_finite(const ComplexMatrix& a) {
    return a.allFinite();
}

void require_finite(const ComplexMatrix& a, const char* what) {
    if (a.rows() < 1 || a.cols() < 1) {
        throw Error(ErrorKind::InvalidInput, std::string(what) + " is empty");
    }
    if (!all_finite(a)) {
        throw Error(ErrorKind::InvalidInput, std::string(what) + " has non-finite entries");
    }
}

SvdFactors svd(const ComplexMatrix& a) {
    require_finite(a, "svd input");
    Eigen::BDCSVD<ComplexMatrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return SvdFactors{solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

Eigen::VectorXd singular_values(const ComplexMatrix& a) {
    require_finite(a, "svd input");
    Eigen::BDCSVD<ComplexMatrix> solver(a);
    return solver.singularValues();
}

ComplexMatrix pinv(const ComplexMatrix& a) {
    const SvdFactors f = svd(a);
    ComplexMatrix out = ComplexMatrix::Zero(a.cols(), a.rows());
    if (f.s.size() == 0) {
        return out;
    }
    const double tol = f.s(0) * static_cast<double>(std::max(a.rows(), a.cols())) *
                       std::numeric_limits<double>::epsilon();
    for (Eigen::Index k = 0; k < f.s.size(); ++k) {
        if (f.s(k) <= tol) {
            break;
        }
        out.noalias() += (f.v.col(k) / f.s(k)) * f.u.col(k).adjoint();
    }
    return out;
}

std::vector<cdouble> eig(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        std::ostringstream msg;
        msg << "eig needs a square matrix, got " << a.rows() << "x" << a.cols();
        throw Error(ErrorKind::Shape, msg.str());
    }
    require_finite(a, "eig input");
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::Divergence, "complex Schur iteration did not converge");
    }
    const auto& values = solver.eigenvalues();
    return {values.data(), values.data() + values.size()};
}

}  // namespace ftdoa::linalg
