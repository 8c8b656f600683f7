#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ftdoa {

enum class ErrorKind {
    InvalidInput,
    Shape,
    Domain,
    Parameter,
    Divergence,
    RankDeficiency,
    Ambiguity,
    Pairing,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library. `stage()` is empty unless a pipeline
// step re-tagged the error on its way out (detect, complete, estimate, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::string stage = {});

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& stage() const noexcept { return stage_; }
    const std::string& detail() const noexcept { return detail_; }

    // Copy of this error carrying `stage`; an existing stage tag is kept.
    Error with_stage(std::string stage) const;

private:
    ErrorKind kind_;
    std::string detail_;
    std::string stage_;
};

}  // namespace ftdoa
