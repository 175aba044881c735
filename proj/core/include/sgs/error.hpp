#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sgs {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    InvalidPartition,
    ConstantColumn,
    TooFewRows,
    ParseError,
    IoError,
    WeightOrderViolation,
    LengthMismatch,
    InvalidFdrLevel,
    AlphaOutOfRange,
    RootBracketFailure,
    ZeroGradient,
    NumericalOverflow,
    FoldTooSmall,
    DegenerateResidual,
    SupportCycle,
    InconsistentScenario,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception. `kind()` lets callers branch on the failure class
/// without parsing the message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what)
{
    if (!cond) fail(kind, what);
}

} // namespace sgs
