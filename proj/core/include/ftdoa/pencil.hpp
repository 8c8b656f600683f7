#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ftdoa/array_sim.hpp"
#include "ftdoa/failure_detect.hpp"
#include "ftdoa/hankel.hpp"
#include "ftdoa/linalg.hpp"
#include "ftdoa/svt.hpp"

namespace ftdoa {

struct PoleSet {
    std::vector<cdouble> poles;
};

struct CompletionSummary {
    int iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
};

struct StageTimings {
    double detect_s = 0.0;
    double complete_s = 0.0;
    double estimate_s = 0.0;
};

struct DoaEstimate {
    std::vector<double> angles_deg;  // ascending
    PoleSet poles;                   // same order as angles_deg
    // sigma_N / sigma_{N+1} of the unfiltered Hankel matrix; +inf when
    // sigma_{N+1} vanishes or does not exist.
    double singular_gap = 0.0;
    // Filled by fault_tolerant_estimate.
    std::vector<std::size_t> failed_elements;  // 0-based, as detected
    std::optional<CompletionSummary> completion;
    StageTimings timings;
};

/// Best rank-N approximation of `x` (truncated SVD).
ComplexMatrix tls_filter(const ComplexMatrix& x, std::size_t rank);

/// The N largest-modulus eigenvalues of pinv(X1) * X2.
///
/// X1 holds the leading columns of the Hankel matrix and X2 the trailing
/// ones, so for noiseless data X2 is X1 advanced by one sample and the
/// eigenvalues are the generating poles exp(+j 2 pi d sin(theta) / lambda).
PoleSet pencil_eigs(const ComplexMatrix& x1, const ComplexMatrix& x2, std::size_t count);

/// theta = asin(arg(z) * lambda / (2 pi d)) in degrees, ascending. Throws an
/// Ambiguity error for a pole whose argument falls outside the visible region.
std::vector<double> doa_from_poles(const PoleSet& poles, const ArrayConfig& cfg);

/// Hankel lift, rank-N filtering, pencil solve and angle inversion.
DoaEstimate tls_mp(const Snapshot& x, const PencilParams& params, const ArrayConfig& cfg);

struct FaultTolerantOptions {
    SvtParams svt;
    double detect_epsilon = kDefaultDetectEpsilon;
    // Run the completion pass even when every element is working.
    bool force_completion = false;
};

/// Detects failed elements from two consecutive snapshots, completes the
/// Hankel lift of `curr` over the failed anti-diagonals when needed, then
/// runs tls_mp. Errors carry the stage that raised them.
DoaEstimate fault_tolerant_estimate(const Snapshot& prev, const Snapshot& curr,
                                    const PencilParams& params, const ArrayConfig& cfg,
                                    const FaultTolerantOptions& options = {});

/// The completion step alone: Hankel lift, mask from `loc`, SVT, anti-diagonal
/// averaging. Returns the recovered snapshot.
Snapshot complete_snapshot(const Snapshot& x, const LocationSet& loc, std::size_t window,
                           const SvtParams& params, SvtResult* diagnostics = nullptr);

}  // namespace ftdoa
