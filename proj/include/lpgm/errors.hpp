#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lpgm {

enum class ErrorCode {
  domain,
  no_roots,
  no_good_set,
  aspect_too_large,
  eps_too_large,
  not_good_set,
  integrand_negative,
  h_reached_zero,
  step_failure,
  no_turning_point,
  non_positive_support,
  homotopy_stall,
  convexity_lost,
  parity_required,
  invalid_polygon,
  parse_error,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every numerical precondition or solver failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace lpgm
