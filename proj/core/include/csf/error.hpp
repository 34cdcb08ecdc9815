#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csf {

enum class ErrorKind {
    InvalidInput,
    ExtinctSolution,
    OutOfDomain,
    GluingInfeasible,
    Stability,
    EmbeddednessViolation,
    GraphicalityLost,
    HypothesisViolation,
    RegionUndefined,
    Tracking,
    NotInRegime,
    NotApplicable,
    Resolution,
    InsufficientRange,
    Config,
    Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const std::string& what)
{
    if (!ok) fail(kind, what);
}

} // namespace csf
