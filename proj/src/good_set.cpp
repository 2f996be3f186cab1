#include "lpgm/good_set.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace lpgm {

namespace {

// (s^p - 1) / p, with the p -> 0 limit log s.
double pow_minus_one_over_p(double s, double p) {
  const double ls = std::log(s);
  if (p == 0.0) return ls;
  return std::expm1(p * ls) / p;
}

template <class F>
double solve_bracketed(F f, double lo, double hi) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  require((flo < 0.0) != (fhi < 0.0), ErrorCode::no_good_set, "root bracket lost its sign change");
  std::uintmax_t iters = 300;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(53), iters);
  return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

RootPair checked_roots(double c, double p, ErrorCode code) {
  const Params params = Params::checked(p, c);
  const RootPair roots = [&] {
    try {
      return roots_m1_m2(params);
    } catch (const Error&) {
      throw Error(code, "c must be below c_p");
    }
  }();
  require(!roots.tangent, code, "c must be below c_p");
  return roots;
}

}  // namespace

double AspectBound::value() const {
  return infinite ? std::numeric_limits<double>::infinity() : std::exp(log_value);
}

bool AspectBound::admits(double s) const {
  if (!(s > 1.0)) return false;
  return infinite || std::log(s) < log_value;
}

double level_mismatch(double c, double h0, double p, double s) {
  const double a = std::exp(-0.5 * h0 * h0) * -std::expm1(-0.5 * h0 * h0 * (s * s - 1.0));
  const double b = c * std::pow(h0, p) * pow_minus_one_over_p(s, p);
  return a - b;
}

double level_scale(double c, double h0, double p) {
  const double lower = p == 0.0 ? c * std::abs(std::log(h0)) : (c / p) * std::pow(h0, p);
  return std::exp(-0.5 * h0 * h0) + lower;
}

bool is_good_set(double c, double h0, double p, double s) {
  require(std::isfinite(h0) && h0 > 0.0, ErrorCode::domain, "h0 must be positive");
  require(std::isfinite(s) && s > 1.0, ErrorCode::domain, "s must exceed 1");
  const Params params = Params::checked(p, c);
  if (count_constant_solutions(params) != 2) return false;

  const double h1 = h0 * s;
  const double mismatch = level_mismatch(c, h0, p, s);
  if (std::abs(mismatch) > good_set_check_tol * level_scale(c, h0, p)) return false;
  if (!(phi_prime(h0, params) > 0.0)) return false;
  // phi_p'(h1) <= 0 up to rounding of the factor c - g(h1).
  if (phi_prime(h1, params) > good_set_check_tol * c * std::pow(h1, p - 1.0)) return false;

  const RootPair roots = roots_m1_m2(params);
  return h0 < roots.m1 && roots.m1 < h1 && h1 <= roots.m2 * (1.0 + good_set_check_tol);
}

AspectBound aspect_bound(double c, double p) {
  const RootPair roots = checked_roots(c, p, ErrorCode::no_good_set);
  const Params params{p, c};
  AspectBound out;
  out.m2 = roots.m2;
  const double floor_level = phi(roots.m2, params);
  if (p > 0.0 && floor_level <= 1.0) return out;

  // Solve phi(y) = phi(m2) on (0, m1) in u = log y, so y0 may underflow harmlessly.
  const auto f = [&](double u) {
    const double y = std::exp(u);
    const double lower = p == 0.0 ? c * u : (c / p) * std::exp(p * u);
    return std::exp(-0.5 * y * y) + lower - floor_level;
  };
  const double u_hi = std::log(roots.m1);
  double u_lo = u_hi - 1.0;
  for (int i = 0; i < 200 && f(u_lo) >= 0.0; ++i) u_lo = u_hi - 2.0 * (u_hi - u_lo);
  const double u0 = solve_bracketed(f, u_lo, u_hi);

  out.infinite = false;
  out.log_y0 = u0;
  out.y0 = std::exp(u0);
  out.log_value = std::log(roots.m2) - u0;
  return out;
}

double solve_h0(double c, double p, double s) {
  require(std::isfinite(s) && s > 1.0, ErrorCode::domain, "s must exceed 1");
  const RootPair roots = checked_roots(c, p, ErrorCode::no_good_set);
  const AspectBound bound = aspect_bound(c, p);
  require(bound.admits(s), ErrorCode::aspect_too_large,
          "s = " + std::to_string(s) + " is not below S_c = " + std::to_string(bound.value()));

  // On [max(y0, m1/s), min(m1, m2/s)] the upper level h0 s stays in [m1, m2]
  // and the mismatch runs from negative to positive.
  const double lo = std::max(bound.infinite ? 0.0 : bound.y0, roots.m1 / s);
  const double hi = std::min(roots.m1, roots.m2 / s);
  const double h0 = solve_bracketed([&](double h) { return level_mismatch(c, h, p, s); }, lo, hi);
  require(std::abs(level_mismatch(c, h0, p, s)) <= good_set_residual_tol * level_scale(c, h0, p),
          ErrorCode::no_good_set, "level equation residual above tolerance");
  return h0;
}

GoodSet make_good_set(double c, double p, double s) { return GoodSet{c, solve_h0(c, p, s), p, s}; }

std::optional<double> partner_aspect(double c, double p, double h0) {
  const RootPair roots = checked_roots(c, p, ErrorCode::no_good_set);
  if (!(h0 > 0.0) || h0 >= roots.m1) return std::nullopt;
  const auto f = [&](double s) { return level_mismatch(c, h0, p, s); };
  const double s_lo = roots.m1 / h0;
  const double s_hi = roots.m2 / h0;
  if (f(s_hi) < 0.0) return std::nullopt;
  return solve_bracketed(f, s_lo, s_hi);
}

double small_eps_bound(double p_star) {
  require(p_star > 0.0 && p_star <= 1.0, ErrorCode::domain, "p_star must lie in (0, 1]");
  return p_star * std::exp(1.0) * -std::expm1(-0.5 * std::exp(-2.0 / p_star));
}

double h0_of_p_path(double eps, double p, double s, double p_star) {
  const double bound = small_eps_bound(p_star);
  require(eps > 0.0, ErrorCode::domain, "eps must be positive");
  require(eps < bound, ErrorCode::eps_too_large,
          "eps must be below A_{p*} = " + std::to_string(bound));
  require(p >= p_star && p <= 1.0, ErrorCode::domain, "p must lie in [p_star, 1]");
  return solve_h0(eps, p, s);
}

double c_of_p_path(double h_star, double s_star, double p) {
  require(h_star > 0.0, ErrorCode::domain, "h_star must be positive");
  require(s_star > 1.0, ErrorCode::domain, "s_star must exceed 1");
  require(p >= 0.0 && p <= 1.0, ErrorCode::domain, "p must lie in [0, 1]");
  const double gap =
      std::exp(-0.5 * h_star * h_star) * -std::expm1(-0.5 * h_star * h_star * (s_star * s_star - 1.0));
  return gap / (std::pow(h_star, p) * pow_minus_one_over_p(s_star, p));
}

}  // namespace lpgm
