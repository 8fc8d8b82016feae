#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace muskat {

/// Failure modes reported by the iterative solvers. Each one names the
/// subsystem-level reason a solve could not be completed.
enum class SolverErrorKind {
  NotContracting,
  DepthTruncationInsufficient,
  DegenerateJacobian,
  SeparationLost,
  SingularSystem,
};

std::string_view to_string(SolverErrorKind kind);

class SolverError : public std::runtime_error {
 public:
  SolverError(SolverErrorKind kind, std::string subsystem, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + " [" + subsystem + "]: " + detail),
        kind_(kind),
        subsystem_(std::move(subsystem)) {}

  SolverErrorKind kind() const noexcept { return kind_; }
  const std::string& subsystem() const noexcept { return subsystem_; }

 private:
  SolverErrorKind kind_;
  std::string subsystem_;
};

}  // namespace muskat
