#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace isohydra {

enum class ErrorCode {
  domain,
  non_convergence,
  grid_too_coarse,
  branch_mismatch,
  singular_family,
  missing_derivatives,
  combination_zero,
  certificate_failure,
  convergence_failure,
  bracket_failure,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; `radius` is set when the failure is
// tied to a position on the radial axis (singularities, bracket failures).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        double radius = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), code_(code), radius_(radius) {}

  ErrorCode code() const noexcept { return code_; }
  double radius() const noexcept { return radius_; }

 private:
  ErrorCode code_;
  double radius_;
};

}  // namespace isohydra
