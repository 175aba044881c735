#include "sgs/error.hpp"

namespace sgs {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::ConstantColumn: return "ConstantColumn";
    case ErrorKind::TooFewRows: return "TooFewRows";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::WeightOrderViolation: return "WeightOrderViolation";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::InvalidFdrLevel: return "InvalidFdrLevel";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::RootBracketFailure: return "RootBracketFailure";
    case ErrorKind::ZeroGradient: return "ZeroGradient";
    case ErrorKind::NumericalOverflow: return "NumericalOverflow";
    case ErrorKind::FoldTooSmall: return "FoldTooSmall";
    case ErrorKind::DegenerateResidual: return "DegenerateResidual";
    case ErrorKind::SupportCycle: return "SupportCycle";
    case ErrorKind::InconsistentScenario: return "InconsistentScenario";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
{}

void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

} // namespace sgs
