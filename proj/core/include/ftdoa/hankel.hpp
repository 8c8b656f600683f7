#pragma once

#include <cstddef>
#include <utility>

#include "ftdoa/array_sim.hpp"
#include "ftdoa/failure_detect.hpp"
#include "ftdoa/linalg.hpp"

namespace ftdoa {

/// Pencil window L and model order N for an M-element snapshot.
///
/// Valid when N <= L <= M - L (M even) or N <= L <= M - L + 1 (M odd); inside
/// that window a noiseless pencil built from N exponentials has rank N.
struct PencilParams {
    std::size_t window = 0;   // L
    std::size_t sources = 0;  // N

    void validate(std::size_t num_elements) const;
    // True when M/3 <= L <= 2M/3.
    bool in_recommended_range(std::size_t num_elements) const;

    /// L = floor(M/3) clamped into the valid window for N sources.
    static PencilParams defaults(std::size_t num_elements, std::size_t sources);
};

/// Largest admissible L for an M-element snapshot.
std::size_t max_window(std::size_t num_elements);

struct MaskedMatrix {
    ComplexMatrix data;
    BoolMatrix observed;

    void validate() const;
    Eigen::Index observed_count() const { return observed.count(); }
};

/// (M - L) x (L + 1) matrix with X(i, j) = x[i + j].
ComplexMatrix build_hankel(const Snapshot& x, std::size_t window);

/// X1 drops the last column of X, X2 drops the first.
std::pair<ComplexMatrix, ComplexMatrix> split_pencil(const ComplexMatrix& x);

/// Observation mask in Hankel coordinates: (i, j) is observed iff element
/// i + j is working.
BoolMatrix hankel_mask(const LocationSet& loc, std::size_t num_elements, std::size_t window);

/// Averages each anti-diagonal, the Frobenius-nearest Hankel projection.
/// Output length is rows + cols - 1.
Snapshot dehankel(const ComplexMatrix& x);

}  // namespace ftdoa
