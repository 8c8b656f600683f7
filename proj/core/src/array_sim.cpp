#include "ftdoa/array_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "ftdoa/error.hpp"

namespace ftdoa {

namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

void check_angle(double deg) {
    if (!(deg > -90.0 && deg < 90.0)) {
        std::ostringstream msg;
        msg << "angle " << deg << " deg outside the open interval (-90, 90)";
        throw Error(ErrorKind::Domain, msg.str());
    }
}

}  // namespace

void ArrayConfig::validate() const {
    if (num_elements < 2) {
        throw Error(ErrorKind::Parameter, "array needs at least 2 elements");
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw Error(ErrorKind::Parameter, "element spacing must be positive");
    }
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw Error(ErrorKind::Parameter, "wavelength must be positive");
    }
}

double ArrayConfig::phase_scale() const {
    return 2.0 * kPi * spacing / wavelength;
}

void SourceSet::validate() const {
    if (doas_deg.empty()) {
        throw Error(ErrorKind::Domain, "source set is empty");
    }
    if (phases.size() != doas_deg.size() || amplitudes.size() != doas_deg.size()) {
        throw Error(ErrorKind::Shape, "source angle, phase and amplitude lists differ in length");
    }
    for (double deg : doas_deg) {
        check_angle(deg);
    }
    for (double phi : phases) {
        if (!(phi >= -kPi && phi <= kPi)) {
            throw Error(ErrorKind::Domain, "source phase outside [-pi, pi]");
        }
    }
    for (double a : amplitudes) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw Error(ErrorKind::Domain, "source amplitude must be finite and nonnegative");
        }
    }
}

ComplexVector SourceSet::signals() const {
    ComplexVector s(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) {
        s(static_cast<Eigen::Index>(i)) = std::polar(amplitudes[i], phases[i]);
    }
    return s;
}

ComplexMatrix steering_matrix(const ArrayConfig& cfg, const std::vector<double>& doas_deg) {
    cfg.validate();
    for (double deg : doas_deg) {
        check_angle(deg);
    }
    const auto rows = static_cast<Eigen::Index>(cfg.num_elements);
    const auto cols = static_cast<Eigen::Index>(doas_deg.size());
    ComplexMatrix a(rows, cols);
    for (Eigen::Index n = 0; n < cols; ++n) {
        const double step = cfg.phase_scale() * std::sin(deg2rad(doas_deg[static_cast<std::size_t>(n)]));
        for (Eigen::Index m = 0; m < rows; ++m) {
            a(m, n) = std::polar(1.0, step * static_cast<double>(m));
        }
    }
    return a;
}

SourceSet gen_sources(std::size_t n, std::uint64_t seed, std::vector<double> doas_deg) {
    if (n == 0) {
        throw Error(ErrorKind::Domain, "need at least one source");
    }
    if (doas_deg.empty()) {
        doas_deg.assign(n, 0.0);
    } else if (doas_deg.size() != n) {
        throw Error(ErrorKind::Shape, "angle list length differs from source count");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(-kPi, kPi);
    SourceSet src;
    src.doas_deg = std::move(doas_deg);
    src.phases.resize(n);
    for (double& phi : src.phases) {
        phi = phase(rng);
    }
    src.amplitudes.assign(n, 1.0);
    return src;
}

Snapshot snapshot(const ArrayConfig& cfg, const SourceSet& src, double snr_db, std::uint64_t seed,
                  long long time_index) {
    src.validate();
    Snapshot out;
    out.time_index = time_index;
    out.values = steering_matrix(cfg, src.doas_deg) * src.signals();
    if (std::isinf(snr_db) && snr_db > 0) {
        return out;
    }
    if (std::isnan(snr_db) || std::isinf(snr_db)) {
        throw Error(ErrorKind::Parameter, "SNR must be finite or +infinity");
    }
    const double noise_power = std::pow(10.0, -snr_db / 10.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_power / 2.0));
    for (Eigen::Index m = 0; m < out.values.size(); ++m) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        out.values(m) += cdouble(re, im);
    }
    return out;
}

namespace {

void check_indices(const FailureSpec& spec, std::size_t m) {
    std::vector<std::size_t> sorted = spec.failed_indices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorKind::Domain, "duplicate failed element index");
    }
    for (std::size_t idx : sorted) {
        if (idx >= m) {
            std::ostringstream msg;
            msg << "failed element index " << idx << " out of range for " << m << " elements";
            throw Error(ErrorKind::Domain, msg.str());
        }
    }
}

Snapshot apply(const Snapshot& x, const Snapshot* prev, const FailureSpec& spec) {
    check_indices(spec, x.size());
    Snapshot out = x;
    if (spec.model.kind == FailureKind::StuckAtPrevious && !spec.failed_indices.empty()) {
        if (prev == nullptr) {
            throw Error(ErrorKind::Parameter, "stuck-at-previous failures need the previous snapshot");
        }
        if (prev->size() != x.size()) {
            throw Error(ErrorKind::Shape, "previous snapshot length differs from current");
        }
    }
    for (std::size_t idx : spec.failed_indices) {
        const auto i = static_cast<Eigen::Index>(idx);
        switch (spec.model.kind) {
            case FailureKind::StuckAtZero: out.values(i) = 0.0; break;
            case FailureKind::StuckAtPrevious: out.values(i) = prev->values(i); break;
            case FailureKind::StuckAtConstant: out.values(i) = spec.model.constant; break;
        }
    }
    return out;
}

}  // namespace

Snapshot inject_failures(const Snapshot& x, const Snapshot& prev, const FailureSpec& spec) {
    return apply(x, &prev, spec);
}

Snapshot inject_failures(const Snapshot& x, const FailureSpec& spec) {
    return apply(x, nullptr, spec);
}

std::vector<std::size_t> random_failure_indices(std::size_t num_elements, std::size_t count,
                                                std::uint64_t seed) {
    if (count > num_elements) {
        throw Error(ErrorKind::Domain, "more failures requested than elements");
    }
    std::vector<std::size_t> perm(num_elements);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates; the first `count` slots are the draw.
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, num_elements - 1);
        std::swap(perm[i], perm[pick(rng)]);
    }
    perm.resize(count);
    std::sort(perm.begin(), perm.end());
    return perm;
}

}  // namespace ftdoa
