#include "lpgm/scalar_kernel.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>

namespace lpgm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "DomainError";
    case ErrorCode::no_roots: return "NoRoots";
    case ErrorCode::no_good_set: return "NoGoodSet";
    case ErrorCode::aspect_too_large: return "AspectTooLarge";
    case ErrorCode::eps_too_large: return "EpsTooLarge";
    case ErrorCode::not_good_set: return "NotGoodSet";
    case ErrorCode::integrand_negative: return "IntegrandNegative";
    case ErrorCode::h_reached_zero: return "HReachedZero";
    case ErrorCode::step_failure: return "StepFailure";
    case ErrorCode::no_turning_point: return "NoTurningPoint";
    case ErrorCode::non_positive_support: return "NonPositiveSupport";
    case ErrorCode::homotopy_stall: return "HomotopyStall";
    case ErrorCode::convexity_lost: return "ConvexityLost";
    case ErrorCode::parity_required: return "ParityRequired";
    case ErrorCode::invalid_polygon: return "InvalidPolygon";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Error";
}

Params Params::checked(double p, double c) {
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0, ErrorCode::domain,
          "p must lie in [0, 1], got " + std::to_string(p));
  require(std::isfinite(c) && c > 0.0, ErrorCode::domain,
          "c must be positive, got " + std::to_string(c));
  return Params{p, c};
}

double g(double t, double p) {
  require(t >= 0.0, ErrorCode::domain, "g requires t >= 0");
  if (t == 0.0) return 0.0;
  return std::pow(t, 2.0 - p) * std::exp(-0.5 * t * t);
}

double g_prime(double t, double p) {
  require(t >= 0.0, ErrorCode::domain, "g' requires t >= 0");
  if (t == 0.0) return 0.0;
  return std::pow(t, 1.0 - p) * std::exp(-0.5 * t * t) * (2.0 - p - t * t);
}

double c_threshold(double p) {
  const double q = 2.0 - p;
  return std::pow(q, 0.5 * q) * std::exp(-0.5 * q);
}

double big_c_threshold(double p) { return c_threshold(p) / (2.0 * std::numbers::pi); }

double phi(double t, const Params& params) {
  const auto [p, c] = params;
  if (p == 0.0) {
    require(t > 0.0, ErrorCode::domain, "phi_0 requires t > 0");
    return std::exp(-0.5 * t * t) + c * std::log(t);
  }
  require(t >= 0.0, ErrorCode::domain, "phi_p requires t >= 0");
  return std::exp(-0.5 * t * t) + (c / p) * std::pow(t, p);
}

double phi_prime(double t, const Params& params) {
  require(t > 0.0, ErrorCode::domain, "phi' requires t > 0");
  return std::pow(t, params.p - 1.0) * (params.c - g(t, params.p));
}

namespace {

// Root of g - c on [lo, hi] where g - c changes sign; returns the better endpoint
// of the final bracket.
double bracket_root(double c, double p, double lo, double hi) {
  const auto f = [&](double t) { return g(t, p) - c; };
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(53), iters);
  return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

}  // namespace

RootPair roots_m1_m2(const Params& params) {
  const auto [p, c] = params;
  const double cp = c_threshold(p);
  const double peak = std::sqrt(2.0 - p);
  if (std::abs(c - cp) <= tangency_rel_tol * cp) return RootPair{peak, peak, true};
  require(c < cp, ErrorCode::no_roots, "c exceeds c_p; g(t) = c has no solution");

  const double m1 = bracket_root(c, p, 0.0, peak);

  double t_max = peak + 1.0;
  for (int i = 0; i < 60 && g(t_max, p) >= c; ++i) t_max *= 2.0;
  const double m2 = bracket_root(c, p, peak, t_max);
  return RootPair{m1, m2, false};
}

int count_constant_solutions(const Params& params) {
  const double cp = c_threshold(params.p);
  if (std::abs(params.c - cp) <= tangency_rel_tol * cp) return 1;
  return params.c < cp ? 2 : 0;
}

}  // namespace lpgm
