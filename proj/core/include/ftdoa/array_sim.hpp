#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "ftdoa/linalg.hpp"

namespace ftdoa {

// Uniform linear array. Spacing and wavelength share one length unit; the
// wavelength defaults to 1 so spacing reads in wavelengths.
struct ArrayConfig {
    std::size_t num_elements = 100;
    double spacing = 0.5;
    double wavelength = 1.0;

    void validate() const;
    // Phase advance per element for a unit sin(theta): 2*pi*d/lambda.
    double phase_scale() const;
};

struct SourceSet {
    std::vector<double> doas_deg;
    std::vector<double> phases;
    std::vector<double> amplitudes;

    std::size_t size() const { return doas_deg.size(); }
    void validate() const;
    // Complex source amplitudes a_i * exp(j * phi_i).
    ComplexVector signals() const;
};

struct Snapshot {
    ComplexVector values;
    long long time_index = 0;

    std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

enum class FailureKind { StuckAtZero, StuckAtPrevious, StuckAtConstant };

struct FailureModel {
    FailureKind kind = FailureKind::StuckAtZero;
    cdouble constant{0.0, 0.0};  // only read for StuckAtConstant
};

struct FailureSpec {
    std::vector<std::size_t> failed_indices;  // 0-based
    FailureModel model;
};

inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

/// M x N matrix with entry (m, n) = exp(+j * 2*pi/lambda * d * m * sin(theta_n)).
ComplexMatrix steering_matrix(const ArrayConfig& cfg, const std::vector<double>& doas_deg);

/// `n` unit-amplitude sources at the given angles with phases drawn uniformly
/// on [-pi, pi]. Angles default to 0 when `doas_deg` is empty.
SourceSet gen_sources(std::size_t n, std::uint64_t seed, std::vector<double> doas_deg = {});

/// One snapshot x = A s + w. Noise is circular complex Gaussian with
/// per-element power 10^(-snr_db/10) relative to a unit-power source;
/// `snr_db = kNoiseless` gives w = 0.
Snapshot snapshot(const ArrayConfig& cfg, const SourceSet& src, double snr_db,
                  std::uint64_t seed, long long time_index = 0);

Snapshot inject_failures(const Snapshot& x, const Snapshot& prev, const FailureSpec& spec);
// Same, for models that do not read the previous snapshot.
Snapshot inject_failures(const Snapshot& x, const FailureSpec& spec);

/// `count` distinct element indices drawn uniformly without replacement,
/// returned ascending.
std::vector<std::size_t> random_failure_indices(std::size_t num_elements, std::size_t count,
                                                std::uint64_t seed);

}  // namespace ftdoa
