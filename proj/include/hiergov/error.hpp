#ifndef HIERGOV_ERROR_HPP
#define HIERGOV_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace hiergov {

enum class ErrorKind {
  InvalidParameter,
  InvalidInput,
  UndefinedRatio,
  InconsistentInputs,
  TopologyTooSmall,
  DegenerateNormalization,
  InvalidConfiguration,
  InsufficientData,
  FitRejected,
  Solver,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Every library failure is reported through this type; `kind()` lets callers
// (and tests) distinguish the failure classes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hiergov

#endif
