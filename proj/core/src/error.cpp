#include "netloc/error.hpp"

namespace netloc {

std::string_view kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSize: return "invalid-size";
    case ErrorKind::InvalidProbability: return "invalid-probability";
    case ErrorKind::InvalidParams: return "invalid-params";
    case ErrorKind::InvalidGraph: return "invalid-graph";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::PreconditionViolation: return "precondition-violation";
    case ErrorKind::ConvergenceFailure: return "convergence-failure";
    case ErrorKind::NumericFailure: return "numeric-failure";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::StaleActivation: return "stale-activation";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::VersionMismatch: return "version-mismatch";
    case ErrorKind::CorruptFile: return "corrupt-file";
    case ErrorKind::IoError: return "io-error";
  }
  return "unknown";
}

}  // namespace netloc
