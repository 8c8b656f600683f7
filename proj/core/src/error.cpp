#include "ftdoa/error.hpp"

namespace ftdoa {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::Shape: return "shape";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Parameter: return "parameter";
        case ErrorKind::Divergence: return "divergence";
        case ErrorKind::RankDeficiency: return "rank-deficiency";
        case ErrorKind::Ambiguity: return "ambiguity";
        case ErrorKind::Pairing: return "pairing";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

namespace {

std::string compose(ErrorKind kind, const std::string& message, const std::string& stage) {
    std::string out;
    if (!stage.empty()) {
        out += "[" + stage + "] ";
    }
    out += std::string(to_string(kind)) + " error: " + message;
    return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::string stage)
    : std::runtime_error(compose(kind, message, stage)),
      kind_(kind),
      detail_(message),
      stage_(std::move(stage)) {}

Error Error::with_stage(std::string stage) const {
    if (!stage_.empty()) {
        return *this;
    }
    return Error(kind_, detail_, std::move(stage));
}

}  // namespace ftdoa
