#include "ftdoa/pencil.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ftdoa/error.hpp"

namespace ftdoa {

namespace {

constexpr double kNonzeroEigen = 1e-8;

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double dt = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return dt;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw e.with_stage(stage);
    }
}

}  // namespace

ComplexMatrix tls_filter(const ComplexMatrix& x, std::size_t rank) {
    if (rank == 0) {
        throw Error(ErrorKind::Parameter, "TLS filter rank must be at least 1");
    }
    linalg::require_finite(x, "TLS filter input");
    const auto keep = static_cast<Eigen::Index>(rank);
    if (keep >= std::min(x.rows(), x.cols())) {
        return x;
    }
    const linalg::SvdFactors f = linalg::svd(x);
    return f.u.leftCols(keep) * f.s.head(keep).cast<cdouble>().asDiagonal() *
           f.v.leftCols(keep).adjoint();
}

PoleSet pencil_eigs(const ComplexMatrix& x1, const ComplexMatrix& x2, std::size_t count) {
    if (x1.rows() != x2.rows() || x1.cols() != x2.cols()) {
        throw Error(ErrorKind::Shape, "pencil matrices differ in shape");
    }
    if (count == 0 || static_cast<Eigen::Index>(count) > x1.cols()) {
        throw Error(ErrorKind::Parameter, "requested pole count outside [1, L]");
    }
    const ComplexMatrix product = linalg::pinv(x1) * x2;
    std::vector<cdouble> values = linalg::eig(product);
    std::sort(values.begin(), values.end(),
              [](cdouble a, cdouble b) { return std::abs(a) > std::abs(b); });

    const double largest = values.empty() ? 0.0 : std::abs(values.front());
    const auto nonzero = static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(),
                      [&](cdouble v) { return std::abs(v) > kNonzeroEigen * largest; }));
    if (largest == 0.0 || nonzero < count) {
        std::ostringstream msg;
        msg << "pencil has " << (largest == 0.0 ? 0 : nonzero) << " nonzero eigenvalues, " << count
            << " requested";
        throw Error(ErrorKind::RankDeficiency, msg.str());
    }
    values.resize(count);
    return PoleSet{std::move(values)};
}

std::vector<double> doa_from_poles(const PoleSet& poles, const ArrayConfig& cfg) {
    cfg.validate();
    std::vector<double> out;
    out.reserve(poles.poles.size());
    for (cdouble z : poles.poles) {
        const double sine = std::arg(z) / cfg.phase_scale();
        if (!(sine >= -1.0 && sine <= 1.0)) {
            std::ostringstream msg;
            msg << "pole (" << z.real() << ", " << z.imag() << ") maps to sin(theta) = " << sine
                << ", outside [-1, 1]";
            throw Error(ErrorKind::Ambiguity, msg.str());
        }
        out.push_back(std::asin(sine) * 180.0 / std::numbers::pi);
    }
    std::sort(out.begin(), out.end());
    return out;
}

DoaEstimate tls_mp(const Snapshot& x, const PencilParams& params, const ArrayConfig& cfg) {
    cfg.validate();
    if (x.size() != cfg.num_elements) {
        throw Error(ErrorKind::Shape, "snapshot length differs from the array size");
    }
    params.validate(x.size());

    const ComplexMatrix hankel = build_hankel(x, params.window);
    const linalg::SvdFactors f = linalg::svd(hankel);
    const auto n = static_cast<Eigen::Index>(params.sources);

    DoaEstimate est;
    if (n < f.s.size() && f.s(n) > 0.0) {
        est.singular_gap = f.s(n - 1) / f.s(n);
    } else {
        est.singular_gap = std::numeric_limits<double>::infinity();
    }

    ComplexMatrix filtered = hankel;
    if (n < f.s.size()) {
        filtered = f.u.leftCols(n) * f.s.head(n).cast<cdouble>().asDiagonal() * f.v.leftCols(n).adjoint();
    }
    const auto [x1, x2] = split_pencil(filtered);
    const PoleSet poles = pencil_eigs(x1, x2, params.sources);

    // Pair poles with their angles, then order both by angle.
    std::vector<std::pair<double, cdouble>> paired;
    for (cdouble z : poles.poles) {
        paired.emplace_back(doa_from_poles(PoleSet{{z}}, cfg).front(), z);
    }
    std::sort(paired.begin(), paired.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [angle, z] : paired) {
        est.angles_deg.push_back(angle);
        est.poles.poles.push_back(z);
    }
    return est;
}

Snapshot complete_snapshot(const Snapshot& x, const LocationSet& loc, std::size_t window,
                           const SvtParams& params, SvtResult* diagnostics) {
    MaskedMatrix obs;
    obs.data = build_hankel(x, window);
    obs.observed = hankel_mask(loc, x.size(), window);
    // Failed outputs carry no information; keep them out of the iterate.
    obs.data = obs.observed.select(obs.data, ComplexMatrix::Zero(obs.data.rows(), obs.data.cols()));
    SvtResult result = svt_complete(obs, params);
    Snapshot out = dehankel(result.completed);
    out.time_index = x.time_index;
    if (diagnostics != nullptr) {
        *diagnostics = std::move(result);
    }
    return out;
}

DoaEstimate fault_tolerant_estimate(const Snapshot& prev, const Snapshot& curr,
                                    const PencilParams& params, const ArrayConfig& cfg,
                                    const FaultTolerantOptions& options) {
    StageTimings timings;
    Stopwatch clock;
    const LocationSet loc = in_stage("detect", [&] { return detect(prev, curr, options.detect_epsilon); });
    timings.detect_s = clock.lap();

    if (loc.complete() && !options.force_completion) {
        DoaEstimate est = in_stage("estimate", [&] { return tls_mp(curr, params, cfg); });
        timings.estimate_s = clock.lap();
        est.timings = timings;
        return est;
    }

    SvtResult svt;
    const Snapshot recovered = in_stage("complete", [&] {
        params.validate(curr.size());
        return complete_snapshot(curr, loc, params.window, options.svt, &svt);
    });
    timings.complete_s = clock.lap();
    DoaEstimate est = in_stage("estimate", [&] { return tls_mp(recovered, params, cfg); });
    timings.estimate_s = clock.lap();
    est.failed_elements = loc.failed();
    est.completion = CompletionSummary{svt.iterations, svt.final_residual, svt.converged};
    est.timings = timings;
    return est;
}

}  // namespace ftdoa
