#include "lpgm/ode_shoot.hpp"

#include "lpgm/csv.hpp"
#include "lpgm/theta_quad.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lpgm {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;
using Stepper = odeint::runge_kutta_dopri5<State>;

struct Rhs {
  Params params;
  void operator()(const State& y, State& dydt, double) const {
    const double h = y[0];
    const double hp = y[1];
    dydt[0] = hp;
    dydt[1] = params.c * std::pow(h, params.p - 1.0) * std::exp(0.5 * (hp * hp + h * h)) - h;
  }
};

auto make_controlled(double tol) {
  return odeint::make_controlled(tol, 0.0, Stepper());
}

void check_floor(const State& y, double theta) {
  if (!(y[0] > h_floor))
    throw Error(ErrorCode::h_reached_zero, "h fell to " + std::to_string(y[0]) + " at theta = " +
                                               std::to_string(theta));
}

}  // namespace

double first_integral(const Params& params, double h, double hp) {
  const double lower =
      params.p == 0.0 ? params.c * std::log(h) : params.c / params.p * std::pow(h, params.p);
  return std::exp(-0.5 * (hp * hp + h * h)) + lower;
}

Trajectory integrate_ivp(const Params& params, double h_init, double hp_init,
                         std::pair<double, double> theta_span, double tol) {
  require(h_init > 0.0, ErrorCode::domain, "h_init must be positive");
  require(tol >= 1e-12, ErrorCode::domain, "tolerance below 1e-12");
  const auto [t0, t1] = theta_span;
  const double dir = t1 >= t0 ? 1.0 : -1.0;

  Rhs rhs{params};
  auto stepper = make_controlled(tol);
  State y{h_init, hp_init};
  double t = t0;
  double dt = dir * std::min(1e-3, std::abs(t1 - t0) + 1e-300);

  Trajectory traj;
  traj.E0 = first_integral(params, h_init, hp_init);
  const auto record = [&] {
    traj.thetas.push_back(t);
    traj.h.push_back(y[0]);
    traj.hp.push_back(y[1]);
    const double drift = std::abs(first_integral(params, y[0], y[1]) - traj.E0);
    traj.max_drift = std::max(traj.max_drift, drift);
  };
  record();
  while (dir * (t1 - t) > 0.0) {
    if (dir * (t + dt - t1) > 0.0) dt = t1 - t;
    int attempts = 0;
    while (stepper.try_step(rhs, y, t, dt) == odeint::fail) {
      if (++attempts > 500 || std::abs(dt) < 1e-15)
        throw Error(ErrorCode::step_failure, "step size underflow at theta = " + std::to_string(t));
    }
    check_floor(y, t);
    record();
  }
  return traj;
}

TurningPoint next_turning_point(const Params& params, double h_init, double hp_init, double tol,
                                double max_span) {
  require(h_init > 0.0, ErrorCode::domain, "h_init must be positive");
  Rhs rhs{params};
  auto controlled = make_controlled(tol);
  Stepper single;

  State y{h_init, hp_init};
  double t = 0.0;
  double dt = 1e-3;
  // Direction of motion: the sign of h' just after the start.
  State probe;
  rhs(y, probe, 0.0);
  const double sign = hp_init != 0.0 ? std::copysign(1.0, hp_init) : std::copysign(1.0, probe[1]);

  while (t < max_span) {
    const State y_prev = y;
    const double t_prev = t;
    int attempts = 0;
    while (controlled.try_step(rhs, y, t, dt) == odeint::fail) {
      if (++attempts > 500 || dt < 1e-15)
        throw Error(ErrorCode::step_failure, "step size underflow at theta = " + std::to_string(t));
    }
    check_floor(y, t);
    if (sign * y[1] <= 0.0) {
      // Bisect on the step length from the last state where h' kept its sign.
      double lo = 0.0;
      double hi = t - t_prev;
      State y_hi = y;
      while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        State y_mid = y_prev;
        // dopri5 carries its last derivative between calls (FSAL); every trial starts afresh.
        single.reset();
        single.do_step(rhs, y_mid, t_prev, mid);
        if (sign * y_mid[1] > 0.0) {
          lo = mid;
        } else {
          hi = mid;
          y_hi = y_mid;
        }
      }
      return TurningPoint{t_prev + 0.5 * (lo + hi), y_hi[0], y_hi[1]};
    }
  }
  throw Error(ErrorCode::no_turning_point, "h' kept its sign over the whole span");
}

double half_period(const Params& params, double h0, double tol) {
  return next_turning_point(params, h0, 0.0, tol).theta;
}

std::string trajectory_csv(const Trajectory& traj, const Params& params) {
  std::ostringstream out;
  out << "theta,h,hp,E\n";
  for (std::size_t i = 0; i < traj.thetas.size(); ++i) {
    out << format_double(traj.thetas[i]) << ',' << format_double(traj.h[i]) << ','
        << format_double(traj.hp[i]) << ','
        << format_double(first_integral(params, traj.h[i], traj.hp[i])) << '\n';
  }
  return out.str();
}

std::vector<double> default_h0_grid(const Params& params, int n) {
  const RootPair roots = roots_m1_m2(params);
  const AspectBound bound = aspect_bound(params.c, params.p);
  const double lo = bound.infinite ? 0.0 : bound.y0;
  std::vector<double> grid;
  for (int i = 1; i <= n; ++i) grid.push_back(lo + (roots.m1 - lo) * i / (n + 1));
  return grid;
}

ClosedSearch find_closed_solutions(const Params& params, const std::vector<double>& h0_grid,
                                   double tol, double quad_tol) {
  require(count_constant_solutions(params) == 2, ErrorCode::domain, "requires 0 < c < c_p");
  ClosedSearch out;
  for (double h0 : h0_grid) {
    ClosedCell cell;
    cell.h0 = h0;
    try {
      const auto s = partner_aspect(params.c, params.p, h0);
      if (!s || !is_good_set(params.c, h0, params.p, *s)) {
        cell.status = "not a good set";
      } else {
        cell.s = *s;
        cell.theta = theta(GoodSet{params.c, h0, params.p, *s}, quad_tol).value;
        const PiOverK d = distance_to_pi_over_k(cell.theta);
        cell.dist = d.distance;
        cell.k = d.k;
        cell.valid = true;
        if (d.distance < tol) out.candidates.push_back({h0, *s, cell.theta, d.k});
      }
    } catch (const Error& e) {
      cell.status = e.what();
    }
    out.cells.push_back(cell);
  }

  const ClosedCell* prev = nullptr;
  for (const auto& cell : out.cells) {
    if (!cell.valid) continue;
    if (prev) {
      const double lo = std::min(prev->theta, cell.theta);
      const double hi = std::max(prev->theta, cell.theta);
      for (int k = 1; std::numbers::pi / k >= lo; ++k) {
        if (std::numbers::pi / k <= hi) out.brackets.push_back({prev->h0, cell.h0, k});
      }
    }
    prev = &cell;
  }
  return out;
}

}  // namespace lpgm
