#include "hiergov/error.hpp"

namespace hiergov {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::UndefinedRatio: return "undefined-ratio";
    case ErrorKind::InconsistentInputs: return "inconsistent-inputs";
    case ErrorKind::TopologyTooSmall: return "topology-too-small";
    case ErrorKind::DegenerateNormalization: return "degenerate-normalization";
    case ErrorKind::InvalidConfiguration: return "invalid-configuration";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::FitRejected: return "fit-rejected";
    case ErrorKind::Solver: return "solver";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace hiergov
