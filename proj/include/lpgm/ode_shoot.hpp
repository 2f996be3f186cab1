#pragma once

// The isotropic equation as an initial-value problem,
//   h'' = c h^{p-1} e^{(h'^2 + h^2)/2} - h,
// with first-integral monitoring, turning-point shooting and a closed-orbit search.

#include "lpgm/good_set.hpp"

#include <string>
#include <vector>

namespace lpgm {

struct Trajectory {
  std::vector<double> thetas;
  std::vector<double> h;
  std::vector<double> hp;
  double E0 = 0.0;
  double max_drift = 0.0;
};

/// e^{-(h'^2+h^2)/2} + (c/p) h^p, or + c log h at p = 0.
double first_integral(const Params& params, double h, double hp);

inline constexpr double h_floor = 1e-8;

/// Adaptive dopri5 integration over [theta_span.first, theta_span.second]
/// (either direction) with absolute local error <= tol per step.
Trajectory integrate_ivp(const Params& params, double h_init, double hp_init,
                         std::pair<double, double> theta_span, double tol);

struct TurningPoint {
  double theta = 0.0;  // elapsed angle from the start
  double h = 0.0;
  double hp = 0.0;
};

/// Integrates from (h_init, hp_init) until h' first changes sign, locating it by
/// bisection to 1e-12. Throws no_turning_point if none within max_span.
TurningPoint next_turning_point(const Params& params, double h_init, double hp_init, double tol,
                                double max_span = 8.0 * 3.14159265358979323846);

/// Angular distance from the minimum h0 to the next maximum.
double half_period(const Params& params, double h0, double tol);

std::string trajectory_csv(const Trajectory& traj, const Params& params);

// ---------------------------------------------------------------- closed orbits

struct ClosedCell {
  double h0 = 0.0;
  double s = 0.0;
  double theta = 0.0;
  double dist = 0.0;  // min_k |theta - pi/k|
  int k = 0;
  bool valid = false;
  std::string status;  // reason when skipped
};

struct ClosedCandidate {
  double h0 = 0.0;
  double s = 0.0;
  double theta = 0.0;
  int k = 0;
};

/// Consecutive valid grid cells where theta - pi/k changes sign for some k:
/// a crossing lies between them even when no cell is within tolerance.
struct ClosedBracket {
  double h0_lo = 0.0;
  double h0_hi = 0.0;
  int k = 0;
};

struct ClosedSearch {
  std::vector<ClosedCell> cells;
  std::vector<ClosedCandidate> candidates;
  std::vector<ClosedBracket> brackets;
};

inline constexpr double default_candidate_tol = 1e-4;

/// `n` interior points spread uniformly over the admissible range (y0 or 0, m1).
std::vector<double> default_h0_grid(const Params& params, int n);

ClosedSearch find_closed_solutions(const Params& params, const std::vector<double>& h0_grid,
                                   double tol = default_candidate_tol,
                                   double quad_tol = 1e-12);

}  // namespace lpgm
