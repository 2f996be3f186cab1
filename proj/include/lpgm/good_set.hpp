#pragma once

// Good sets (c, h0, p, s): the level-matching data phi_p(h0) = phi_p(h0 s),
// phi_p'(h0) > 0 >= phi_p'(h0 s) of a putative nonconstant solution's extrema.

#include "lpgm/scalar_kernel.hpp"

#include <optional>

namespace lpgm {

struct GoodSet {
  double c = 0.0;
  double h0 = 0.0;
  double p = 0.0;
  double s = 0.0;

  Params params() const { return Params{p, c}; }
  double h1() const { return h0 * s; }
};

/// Supremum S_c of admissible aspect ratios for fixed (c, p). Infinite when
/// phi_p(m2) <= 1; otherwise m2 / y0 with y0 < m1 and phi_p(y0) = phi_p(m2).
struct AspectBound {
  bool infinite = true;
  double log_value = 0.0;  // log S_c; S_c itself may overflow a double
  double y0 = 0.0;         // 0 when infinite (or when y0 underflows)
  double log_y0 = 0.0;
  double m2 = 0.0;

  double value() const;
  /// True when 1 < s < S_c.
  bool admits(double s) const;
};

inline constexpr double good_set_residual_tol = 1e-12;
inline constexpr double good_set_check_tol = 1e-10;

/// phi_p(h0) - phi_p(h0 s), evaluated without cancellation.
double level_mismatch(double c, double h0, double p, double s);

/// Scale of the two phi_p terms, used to make level_mismatch relative.
double level_scale(double c, double h0, double p);

/// Checks the three good-set invariants. Throws domain if s <= 1 or h0 <= 0.
bool is_good_set(double c, double h0, double p, double s);
inline bool is_good_set(const GoodSet& gs) { return is_good_set(gs.c, gs.h0, gs.p, gs.s); }

AspectBound aspect_bound(double c, double p);

/// Unique h0 in (0, m1) making (c, h0, p, s) a good set.
double solve_h0(double c, double p, double s);
GoodSet make_good_set(double c, double p, double s);

/// Given a lower level h0 < m1, the upper partner h1 in (m1, m2] with
/// phi_p(h1) = phi_p(h0), returned as the aspect s = h1 / h0. Empty when
/// phi_p(h0) < phi_p(m2) or h0 >= m1.
std::optional<double> partner_aspect(double c, double p, double h0);

/// A_{p*} = p* e (1 - exp(-e^{-2/p*} / 2)): the small-constant regime in which
/// h0(p) is monotone on [p*, 1].
double small_eps_bound(double p_star);

/// h0 along the exponent path at fixed small constant eps and aspect s, p in [p_star, 1].
double h0_of_p_path(double eps, double p, double s, double p_star);

/// The constant making (c(p), h_star, p, s_star) satisfy the level equation;
/// continuous in p with c(0) = (e^{-h^2/2} - e^{-h^2 s^2/2}) / log s.
double c_of_p_path(double h_star, double s_star, double p);

}  // namespace lpgm
