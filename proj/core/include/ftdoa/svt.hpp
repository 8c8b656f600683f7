#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "ftdoa/hankel.hpp"
#include "ftdoa/linalg.hpp"

namespace ftdoa {

/// Controls for the singular value thresholding iteration.
///
/// `tau` and `delta` default per problem when left unset:
///   tau   = 5 * sqrt(n1 * n2)
///   delta = 1.2 * n1 * n2 / |observed|
/// The relative residual tolerance and iteration cap default to 1e-2 and 50.
struct SvtParams {
    std::optional<double> tau;
    std::optional<double> delta;
    double epsilon = 1e-2;
    int k_max = 50;

    void validate() const;
    // Copy with tau and delta filled in for `obs`.
    SvtParams resolved_for(const MaskedMatrix& obs) const;
};

struct SvtTraceRow {
    int iteration = 0;
    double residual = 0.0;
    Eigen::Index rank = 0;  // singular values of Y above tau at this step
};

struct SvtResult {
    ComplexMatrix completed;
    int iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
    double tau = 0.0;
    double delta = 0.0;
    std::vector<SvtTraceRow> trace;
};

/// Soft-thresholds the singular values of `x` by `tau`.
ComplexMatrix shrink(const ComplexMatrix& x, double tau);

/// Completes a partially observed low-rank matrix.
///
/// Iterates X^k = shrink(Y^{k-1}, tau), Y^k = Y^{k-1} + delta * P(obs - X^k)
/// from Y^0 = 0, where P zeroes unobserved entries. Stops once
/// ||P(obs - X^k)||_F / ||P(obs)||_F <= epsilon or after k_max steps. Throws
/// a Divergence error naming the step when an iterate turns non-finite or
/// the residual exceeds 1e10.
SvtResult svt_complete(const MaskedMatrix& obs, const SvtParams& params = {});

// CSV with header `iter,residual,rank_estimate`.
void write_svt_trace(const std::filesystem::path& path, const SvtResult& result);

}  // namespace ftdoa
