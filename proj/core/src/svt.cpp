#include "ftdoa/svt.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ftdoa/error.hpp"

namespace ftdoa {

namespace {

constexpr double kDivergenceResidual = 1e10;

struct Shrunk {
    ComplexMatrix value;
    Eigen::Index rank = 0;
};

Shrunk shrink_with_rank(const ComplexMatrix& x, double tau) {
    const linalg::SvdFactors f = linalg::svd(x);
    Shrunk out;
    out.value = ComplexMatrix::Zero(x.rows(), x.cols());
    for (Eigen::Index k = 0; k < f.s.size() && f.s(k) > tau; ++k) {
        out.value.noalias() += (f.s(k) - tau) * f.u.col(k) * f.v.col(k).adjoint();
        ++out.rank;
    }
    return out;
}

ComplexMatrix masked(const ComplexMatrix& x, const BoolMatrix& mask) {
    return mask.select(x, ComplexMatrix::Zero(x.rows(), x.cols()));
}

}  // namespace

void SvtParams::validate() const {
    if (tau && !(*tau > 0.0 && std::isfinite(*tau))) {
        throw Error(ErrorKind::Parameter, "SVT threshold tau must be positive");
    }
    if (delta && !(*delta > 0.0 && std::isfinite(*delta))) {
        throw Error(ErrorKind::Parameter, "SVT step size delta must be positive");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw Error(ErrorKind::Parameter, "SVT tolerance must lie in (0, 1)");
    }
    if (k_max < 1) {
        throw Error(ErrorKind::Parameter, "SVT iteration cap must be at least 1");
    }
}

SvtParams SvtParams::resolved_for(const MaskedMatrix& obs) const {
    SvtParams out = *this;
    const double cells = static_cast<double>(obs.data.rows()) * static_cast<double>(obs.data.cols());
    if (!out.tau) {
        out.tau = 5.0 * std::sqrt(cells);
    }
    if (!out.delta) {
        const auto seen = static_cast<double>(obs.observed_count());
        out.delta = seen > 0 ? 1.2 * cells / seen : 1.2;
    }
    return out;
}

ComplexMatrix shrink(const ComplexMatrix& x, double tau) {
    if (!(tau >= 0.0)) {
        throw Error(ErrorKind::Parameter, "shrink threshold must be nonnegative");
    }
    return shrink_with_rank(x, tau).value;
}

SvtResult svt_complete(const MaskedMatrix& obs, const SvtParams& params) {
    obs.validate();
    linalg::require_finite(obs.data, "observed matrix");
    params.validate();
    const SvtParams p = params.resolved_for(obs);

    const ComplexMatrix target = masked(obs.data, obs.observed);
    const double target_norm = target.norm();

    SvtResult result;
    result.tau = *p.tau;
    result.delta = *p.delta;
    ComplexMatrix y = ComplexMatrix::Zero(obs.data.rows(), obs.data.cols());

    for (int k = 1; k <= p.k_max; ++k) {
        Shrunk x = shrink_with_rank(y, *p.tau);
        if (!linalg::all_finite(x.value)) {
            throw Error(ErrorKind::Divergence, "SVT iterate became non-finite at iteration " + std::to_string(k));
        }
        const ComplexMatrix residual = target - masked(x.value, obs.observed);
        const double rel = target_norm > 0.0 ? residual.norm() / target_norm : residual.norm();
        if (!std::isfinite(rel) || rel > kDivergenceResidual) {
            throw Error(ErrorKind::Divergence, "SVT residual blew up at iteration " + std::to_string(k));
        }
        result.trace.push_back({k, rel, x.rank});
        result.completed = std::move(x.value);
        result.iterations = k;
        result.final_residual = rel;
        if (rel <= p.epsilon) {
            result.converged = true;
            break;
        }
        y.noalias() += *p.delta * residual;
    }
    return result;
}

void write_svt_trace(const std::filesystem::path& path, const SvtResult& result) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write SVT trace to " + path.string());
    }
    out << "iter,residual,rank_estimate\n" << std::setprecision(17);
    for (const auto& row : result.trace) {
        out << row.iteration << ',' << row.residual << ',' << row.rank << '\n';
    }
    if (!out) {
        throw Error(ErrorKind::Io, "write failed for " + path.string());
    }
}

}  // namespace ftdoa
