#pragma once

// Closed-form scalar functions of the isotropic equation
//   h^{1-p} e^{-(h'^2+h^2)/2} (h'' + h) = c
// and the constant-solution queries built on them.

#include "lpgm/errors.hpp"

namespace lpgm {

/// Exponent p and isotropy constant c. p = 1 is admitted for cross-checks.
struct Params {
  double p = 0.0;
  double c = 0.0;

  /// Throws ErrorCode::domain unless 0 <= p <= 1 and c > 0 (both finite).
  static Params checked(double p, double c);
};

/// The two roots of g(t) = c, m1 <= sqrt(2-p) <= m2.
struct RootPair {
  double m1 = 0.0;
  double m2 = 0.0;
  bool tangent = false;  // c == c_p within tangency_rel_tol
};

inline constexpr double tangency_rel_tol = 1e-10;
inline constexpr double root_residual_tol = 1e-12;

/// g(t) = t^{2-p} e^{-t^2/2}.
double g(double t, double p);

/// g'(t) = t^{1-p} e^{-t^2/2} (2 - p - t^2).
double g_prime(double t, double p);

/// Maximum of g; the number c_p separating 2, 1 and 0 constant solutions.
double c_threshold(double p);

/// c_p / (2 pi), the same threshold in the normalization with the 1/(2 pi) prefactor.
double big_c_threshold(double p);

/// phi_p(t) = e^{-t^2/2} + (c/p) t^p, or e^{-t^2/2} + c log t when p = 0.
double phi(double t, const Params& params);

/// phi_p'(t) = t^{p-1} (c - g(t)).
double phi_prime(double t, const Params& params);

/// Roots of g(t) = c. Tangent when |c - c_p| <= 1e-10 c_p; throws no_roots when c > c_p.
RootPair roots_m1_m2(const Params& params);

/// 2 when c < c_p, 1 at tangency, 0 when c > c_p.
int count_constant_solutions(const Params& params);

}  // namespace lpgm
