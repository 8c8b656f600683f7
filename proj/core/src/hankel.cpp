#include "ftdoa/hankel.hpp"

#include <algorithm>
#include <sstream>

#include "ftdoa/error.hpp"

namespace ftdoa {

std::size_t max_window(std::size_t num_elements) {
    // M even: L <= M - L; M odd: L <= M - L + 1.
    return num_elements % 2 == 0 ? num_elements / 2 : (num_elements + 1) / 2;
}

namespace {

void check_window(std::size_t num_elements, std::size_t window) {
    const std::size_t upper = max_window(num_elements);
    if (window < 1 || window > upper || window >= num_elements) {
        std::ostringstream msg;
        msg << "pencil window L=" << window << " outside [1, " << std::min(upper, num_elements - 1)
            << "] for " << num_elements << " elements";
        throw Error(ErrorKind::Parameter, msg.str());
    }
}

}  // namespace

void PencilParams::validate(std::size_t num_elements) const {
    if (sources < 1) {
        throw Error(ErrorKind::Parameter, "number of sources must be at least 1");
    }
    if (window < sources) {
        std::ostringstream msg;
        msg << "pencil window L=" << window << " smaller than the source count N=" << sources;
        throw Error(ErrorKind::Parameter, msg.str());
    }
    check_window(num_elements, window);
}

bool PencilParams::in_recommended_range(std::size_t num_elements) const {
    // Integer reading of M/3..2M/3: floor at the low end, ceiling at the high end.
    return window >= num_elements / 3 && window <= (2 * num_elements + 2) / 3;
}

PencilParams PencilParams::defaults(std::size_t num_elements, std::size_t sources) {
    PencilParams p;
    p.sources = sources;
    p.window = std::clamp(num_elements / 3, std::max<std::size_t>(sources, 1),
                          std::max<std::size_t>(max_window(num_elements), 1));
    return p;
}

void MaskedMatrix::validate() const {
    if (data.rows() != observed.rows() || data.cols() != observed.cols()) {
        throw Error(ErrorKind::Shape, "mask shape differs from data shape");
    }
    if (observed_count() == 0) {
        throw Error(ErrorKind::Parameter, "mask has no observed entries");
    }
}

ComplexMatrix build_hankel(const Snapshot& x, std::size_t window) {
    const std::size_t m = x.size();
    check_window(m, window);
    const auto rows = static_cast<Eigen::Index>(m - window);
    const auto cols = static_cast<Eigen::Index>(window + 1);
    ComplexMatrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        out.col(j) = x.values.segment(j, rows);
    }
    return out;
}

std::pair<ComplexMatrix, ComplexMatrix> split_pencil(const ComplexMatrix& x) {
    if (x.cols() < 2) {
        throw Error(ErrorKind::Shape, "pencil split needs at least two columns");
    }
    const Eigen::Index l = x.cols() - 1;
    return {x.leftCols(l), x.rightCols(l)};
}

BoolMatrix hankel_mask(const LocationSet& loc, std::size_t num_elements, std::size_t window) {
    check_window(num_elements, window);
    std::vector<bool> working(num_elements, false);
    for (std::size_t idx : loc.working) {
        if (idx < num_elements) {
            working[idx] = true;
        }
    }
    const auto rows = static_cast<Eigen::Index>(num_elements - window);
    const auto cols = static_cast<Eigen::Index>(window + 1);
    BoolMatrix mask(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            mask(i, j) = working[static_cast<std::size_t>(i + j)];
        }
    }
    return mask;
}

Snapshot dehankel(const ComplexMatrix& x) {
    if (x.rows() < 1 || x.cols() < 1) {
        throw Error(ErrorKind::Shape, "cannot dehankel an empty matrix");
    }
    const Eigen::Index len = x.rows() + x.cols() - 1;
    // Mean taken as anchor + mean deviation so constant anti-diagonals come
    // back bit-exact.
    ComplexVector anchor(len);
    ComplexVector deviation = ComplexVector::Zero(len);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(len);
    for (Eigen::Index k = 0; k < len; ++k) {
        const Eigen::Index i = std::min(k, x.rows() - 1);
        anchor(k) = x(i, k - i);
    }
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            deviation(i + j) += x(i, j) - anchor(i + j);
            counts(i + j) += 1.0;
        }
    }
    Snapshot out;
    out.values = anchor.array() + deviation.array() / counts.array().cast<cdouble>();
    return out;
}

}  // namespace ftdoa
