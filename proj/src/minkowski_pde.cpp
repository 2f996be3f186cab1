#include "lpgm/minkowski_pde.hpp"

#include "lpgm/csv.hpp"
#include "lpgm/errors.hpp"
#include "lpgm/scalar_kernel.hpp"
#include "lpgm/spectral.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lpgm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Vec = Eigen::VectorXd;

Eigen::Map<const Vec> as_vec(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// The operators annihilate constants exactly; differentiating the mean-free part
// keeps the O(n^2 eps) rounding proportional to the oscillation of h, not its size.
Vec centered(const Vec& v) { return v.array() - v.mean(); }

std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void project_antipodal(std::vector<double>& h) {
  const std::size_t m = h.size() / 2;
  for (std::size_t j = 0; j < m; ++j) {
    const double avg = 0.5 * (h[j] + h[j + m]);
    h[j] = avg;
    h[j + m] = avg;
  }
}

double sup_norm(const std::vector<double>& v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

// Nonlinear term 2 pi e^{(h'^2+h^2)/2} h^{p-1} f, nodewise.
Vec source_term(const Vec& h, const Vec& hp, const std::vector<double>& f, double p) {
  Vec out(h.size());
  for (Eigen::Index j = 0; j < h.size(); ++j)
    out[j] = kTwoPi * std::exp(0.5 * (hp[j] * hp[j] + h[j] * h[j])) * std::pow(h[j], p - 1.0) *
             f[static_cast<std::size_t>(j)];
  return out;
}

void require_positive(const std::vector<double>& h) {
  for (double v : h)
    require(v > 0.0 && std::isfinite(v), ErrorCode::non_positive_support,
            "support function must be positive");
}

}  // namespace

SupportFn::SupportFn(std::vector<double> values, Symmetry symmetry)
    : values_(std::move(values)), symmetry_(symmetry) {
  require(values_.size() >= 4 && is_power_of_two(n()), ErrorCode::domain,
          "grid size must be a power of two >= 4");
}

std::vector<double> SupportFn::d1() const { return to_std(spectral_diff(n()).d1 * centered(as_vec(values_))); }

std::vector<double> SupportFn::d2() const { return to_std(spectral_diff(n()).d2 * centered(as_vec(values_))); }

std::vector<double> SupportFn::curvature_radius() const {
  std::vector<double> out = d2();
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += values_[j];
  return out;
}

void SupportFn::validate() const {
  require_positive(values_);
  for (double r : curvature_radius())
    require(r > 0.0, ErrorCode::convexity_lost, "h'' + h must be positive");
}

DensityFn DensityFn::certified(std::vector<double> values) {
  require(!values.empty(), ErrorCode::domain, "empty density");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  require(*lo > 0.0 && std::isfinite(*hi), ErrorCode::domain, "density must be positive and finite");
  const double tau = std::max(*hi, 1.0 / *lo) * (1.0 + 1e-9);
  return DensityFn{std::move(values), tau};
}

bool DensityFn::antipodal(double tol) const {
  const std::size_t m = values.size() / 2;
  if (values.size() % 2 != 0) return false;
  const double scale = sup_norm(values);
  for (std::size_t j = 0; j < m; ++j)
    if (std::abs(values[j] - values[j + m]) > tol * scale) return false;
  return true;
}

std::vector<double> forward_density(const std::vector<double>& h, const std::vector<double>& hp,
                                    const std::vector<double>& hpp, double p) {
  require(h.size() == hp.size() && h.size() == hpp.size(), ErrorCode::domain, "size mismatch");
  std::vector<double> out(h.size());
  for (std::size_t j = 0; j < h.size(); ++j) {
    require(h[j] > 0.0, ErrorCode::non_positive_support, "support function must be positive");
    out[j] = std::pow(h[j], 1.0 - p) * std::exp(-0.5 * (hp[j] * hp[j] + h[j] * h[j])) *
             (hpp[j] + h[j]) / kTwoPi;
  }
  return out;
}

DensityFn manufactured_density(const TrigSeries& h_star, int n, double p) {
  std::vector<double> h, hp, hpp;
  for (double th : grid_angles(n)) {
    h.push_back(h_star.value(th));
    hp.push_back(h_star.d1(th));
    hpp.push_back(h_star.d2(th));
  }
  return DensityFn::certified(forward_density(h, hp, hpp, p));
}

std::vector<double> residual(const SupportFn& h, const DensityFn& f, double p) {
  require(h.n() == f.n(), ErrorCode::domain, "grid sizes differ");
  require_positive(h.values());
  const auto& ops = spectral_diff(h.n());
  const auto hv = as_vec(h.values());
  const Vec hc = centered(hv);
  const Vec hp = ops.d1 * hc;
  const Vec hpp = ops.d2 * hc;
  return to_std(hpp + hv - source_term(hv, hp, f.values, p));
}

Eigen::MatrixXd jacobian(const SupportFn& h, const DensityFn& f, double p) {
  require(h.n() == f.n(), ErrorCode::domain, "grid sizes differ");
  require_positive(h.values());
  const auto& ops = spectral_diff(h.n());
  const auto hv = as_vec(h.values());
  const Vec hp = ops.d1 * centered(hv);
  const Vec src = source_term(hv, hp, f.values, p);

  Eigen::MatrixXd jac = ops.d2;
  const Vec diag = Vec::Ones(hv.size()) - src.cwiseProduct(hv + (p - 1.0) * hv.cwiseInverse());
  jac.diagonal() += diag;
  jac -= src.cwiseProduct(hp).asDiagonal() * ops.d1;
  return jac;
}

AprioriBounds measure_bounds(const SupportFn& h) {
  const auto& v = h.values();
  const auto hp = h.d1();
  const auto curv = h.curvature_radius();
  AprioriBounds b;
  b.h_min = *std::min_element(v.begin(), v.end());
  b.h_max = *std::max_element(v.begin(), v.end());
  b.rho_min = std::numeric_limits<double>::infinity();
  b.rho_max = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double rho = std::hypot(v[j], hp[j]);
    b.rho_min = std::min(b.rho_min, rho);
    b.rho_max = std::max(b.rho_max, rho);
  }
  b.curv_min = *std::min_element(curv.begin(), curv.end());
  b.curv_max = *std::max_element(curv.begin(), curv.end());
  return b;
}

double choose_c0(double p, Symmetry symmetry) {
  const int stride = symmetry == Symmetry::origin_symmetric ? 2 : 1;
  double best_c0 = 0.0;
  double best_gap = -1.0;
  double c0 = 0.1 * c_threshold(p) / kTwoPi;
  for (int attempt = 0; attempt < 40; ++attempt, c0 *= 0.5) {
    const double r2 = roots_m1_m2(Params{p, kTwoPi * c0}).m1;
    const double lambda = 2.0 - p - r2 * r2;
    double gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k * k <= lambda + 8; k += stride) gap = std::min(gap, std::abs(lambda - k * k));
    if (gap > best_gap) {
      best_gap = gap;
      best_c0 = c0;
    }
    if (gap >= 0.5) return c0;
  }
  return best_c0;
}

namespace {

struct NewtonOutcome {
  bool converged = false;
  ErrorCode failure = ErrorCode::homotopy_stall;
  std::vector<double> h;
  std::vector<double> residuals;
};

NewtonOutcome newton(std::vector<double> h, const DensityFn& f, double p, Symmetry symmetry,
                     const SolveOptions& opts) {
  NewtonOutcome out;
  const bool sym = symmetry == Symmetry::origin_symmetric;
  const int n = static_cast<int>(h.size());
  const int m = n / 2;
  if (sym) project_antipodal(h);
  for (int it = 0;; ++it) {
    if (std::any_of(h.begin(), h.end(), [](double v) { return !(v > 0.0) || !std::isfinite(v); })) {
      out.failure = ErrorCode::convexity_lost;
      return out;
    }
    const SupportFn iterate(h, symmetry);
    const std::vector<double> res = residual(iterate, f, p);
    const double r = sup_norm(res);
    out.residuals.push_back(r);
    if (!std::isfinite(r)) return out;
    if (r < opts.tol) {
      const auto curv = iterate.curvature_radius();
      if (*std::min_element(curv.begin(), curv.end()) <= 0.0) {
        out.failure = ErrorCode::convexity_lost;
        return out;
      }
      out.converged = true;
      out.h = std::move(h);
      return out;
    }
    if (it >= opts.max_newton) return out;
    if (it > 0 && r > 2.0 * out.residuals[static_cast<std::size_t>(it - 1)]) return out;

    const Eigen::MatrixXd jac = jacobian(iterate, f, p);
    const auto rhs = as_vec(res);
    if (sym) {
      // Unknowns restricted to antipodally symmetric grid functions.
      const Eigen::MatrixXd reduced = jac.topLeftCorner(m, m) + jac.topRightCorner(m, m);
      const Vec step = reduced.partialPivLu().solve(-rhs.head(m));
      for (int j = 0; j < m; ++j) {
        h[static_cast<std::size_t>(j)] += step[j];
        h[static_cast<std::size_t>(j + m)] += step[j];
      }
    } else {
      const Vec step = jac.partialPivLu().solve(-rhs);
      for (int j = 0; j < n; ++j) h[static_cast<std::size_t>(j)] += step[j];
    }
  }
}

}  // namespace

SolveReport solve(const DensityFn& f, double p, const SolveOptions& opts) {
  require(p >= 0.0 && p < 1.0, ErrorCode::domain, "p must lie in [0, 1)");
  require(f.n() >= 4 && is_power_of_two(f.n()), ErrorCode::domain,
          "grid size must be a power of two >= 4");
  for (double v : f.values)
    require(v > 0.0 && std::isfinite(v), ErrorCode::domain, "density must be positive");
  const bool even = f.antipodal();
  require(even || p == 0.0 || opts.unsafe, ErrorCode::parity_required,
          "0 < p < 1 requires an antipodally symmetric density");
  const Symmetry symmetry = even ? Symmetry::origin_symmetric : Symmetry::general;

  SolveReport report;
  report.c0 = choose_c0(p, symmetry);
  report.r2 = roots_m1_m2(Params{p, kTwoPi * report.c0}).m1;

  const auto homotopy_density = [&](double t) {
    DensityFn ft{f.values, f.tau};
    for (double& v : ft.values) v = (1.0 - t) * report.c0 + t * v;
    return ft;
  };

  std::vector<double> h(static_cast<std::size_t>(f.n()), report.r2);
  std::vector<double> h_prev;
  double t = 0.0;
  double t_prev = 0.0;
  double dt = opts.dt0;
  int streak = 0;
  ErrorCode last_failure = ErrorCode::homotopy_stall;

  // t = 0 leg polishes the constant start.
  {
    NewtonOutcome start = newton(h, homotopy_density(0.0), p, symmetry, opts);
    require(start.converged, ErrorCode::homotopy_stall, "isotropic start did not converge");
    h = std::move(start.h);
    report.legs.push_back({0.0, std::move(start.residuals)});
  }

  while (t < 1.0) {
    const double t_new = std::min(1.0, t + dt);
    std::vector<double> guess = h;
    if (!h_prev.empty()) {
      const double ratio = (t_new - t) / (t - t_prev);
      for (std::size_t j = 0; j < guess.size(); ++j) guess[j] += ratio * (h[j] - h_prev[j]);
    }
    NewtonOutcome step = newton(std::move(guess), homotopy_density(t_new), p, symmetry, opts);
    if (!step.converged) {
      last_failure = step.failure;
      dt *= 0.5;
      streak = 0;
      if (dt < opts.dt_min)
        throw Error(last_failure == ErrorCode::convexity_lost ? ErrorCode::convexity_lost
                                                              : ErrorCode::homotopy_stall,
                    "continuation step fell below " + std::to_string(opts.dt_min) +
                        " at t = " + std::to_string(t));
      continue;
    }
    h_prev = std::move(h);
    h = std::move(step.h);
    t_prev = t;
    t = t_new;
    ++report.homotopy_steps;
    report.legs.push_back({t, std::move(step.residuals)});
    if (++streak >= 2) {
      dt *= 2.0;
      streak = 0;
    }
  }

  report.solution = SupportFn(std::move(h), symmetry);
  report.residual_sup = sup_norm(residual(report.solution, f, p));
  report.apriori = measure_bounds(report.solution);
  return report;
}

double abs_cos_power_integral(double p) {
  return 2.0 * std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (p + 1.0)) / std::tgamma(0.5 * p + 1.0);
}

AprioriCheck verify_apriori(const SolveReport& report, double p, double tau) {
  require(tau > 0.0, ErrorCode::domain, "tau must be positive");
  AprioriCheck chk;
  chk.tau = tau;
  chk.measured = report.apriori;
  const auto& b = chk.measured;
  chk.c1 = std::max({b.rho_max, 1.0 / b.rho_min, b.curv_max, 1.0 / b.curv_min});
  chk.symmetric_chain = report.solution.symmetry() == Symmetry::origin_symmetric;

  const auto& h = report.solution.values();
  const auto curv = report.solution.curvature_radius();
  double area = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) area += h[j] * curv[j];
  chk.area = 0.5 * area * kTwoPi / static_cast<double>(h.size());

  // h_max is at most the larger root of (1/2pi) g = 1/tau.
  const double level = kTwoPi / tau;
  if (level < c_threshold(p)) {
    chk.tau1 = roots_m1_m2(Params{p, level}).m2;
  } else {
    chk.tau1 = std::numeric_limits<double>::infinity();
  }
  chk.tau2 = 1.0 / (tau * std::pow(chk.tau1, 1.0 - p));
  chk.tau4 = std::numbers::pi * abs_cos_power_integral(p) * std::pow(chk.tau1, p - 1.0) / (4.0 * tau);
  chk.area_lower = std::numbers::pi / tau * std::pow(b.h_max, p) * abs_cos_power_integral(p);
  chk.area_upper = 4.0 * b.h_max * b.h_min;

  const auto expect = [&](bool ok, const std::string& what) {
    if (!ok) chk.violations.push_back(what);
  };
  expect(b.h_min > 0.0, "h_min > 0");
  expect(b.curv_min > 0.0, "h'' + h > 0");
  expect(std::isfinite(chk.c1), "C1 finite");
  expect(b.h_max < chk.tau1, "h_max < tau1");
  expect(b.h_max > chk.tau2, "h_max > tau2");
  if (chk.symmetric_chain) {
    expect(chk.area > chk.area_lower, "area > (pi/tau) h_max^p int |v.v0|^p");
    expect(chk.area <= chk.area_upper, "area <= 4 h_max h_min");
    expect(b.h_min > chk.tau4, "h_min > tau4");
  }
  return chk;
}

namespace {

struct Quintic {
  double c[6]{};
  double value(double u) const {
    return c[0] + u * (c[1] + u * (c[2] + u * (c[3] + u * (c[4] + u * c[5]))));
  }
  double d1(double u) const {
    return c[1] + u * (2 * c[2] + u * (3 * c[3] + u * (4 * c[4] + u * 5 * c[5])));
  }
  double d2(double u) const { return 2 * c[2] + u * (6 * c[3] + u * (12 * c[4] + u * 20 * c[5])); }
};

// phi(u), u = theta - 1 in [0, pi - 1]: matches value, slope and curvature at u = 0,
// phi'(L) = 0, phi''(L) = kappa, phi'''(L) = 0.
Quintic blend(double v0, double v1, double v2, double kappa) {
  const double L = std::numbers::pi - 1.0;
  Eigen::Matrix3d a;
  a << 3 * L * L, 4 * L * L * L, 5 * L * L * L * L,
       6 * L, 12 * L * L, 20 * L * L * L,
       6, 24 * L, 60 * L * L;
  const Eigen::Vector3d rhs(-v1 - v2 * L, kappa - v2, 0.0);
  const Eigen::Vector3d x = a.partialPivLu().solve(rhs);
  return Quintic{{v0, v1, 0.5 * v2, x[0], x[1], x[2]}};
}

double blend_convexity(const Quintic& q) {
  const double L = std::numbers::pi - 1.0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 400; ++i) {
    const double u = L * i / 400.0;
    worst = std::min(worst, q.value(u) + q.d2(u));
  }
  return worst;
}

// phi''(pi) maximizing min(phi'' + phi) for the eps -> 0 limit of the inner profile.
// The optimum is often pinned at u = 0; ties go to the flattest cap (largest kappa).
double tune_kappa(double a) {
  double best_kappa = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 2000; ++i) {
    const double kappa = -10.0 + 0.01 * i;
    const double v = blend_convexity(blend(1.0, a, a * (a - 1.0), kappa));
    if (v >= best) {
      best = v;
      best_kappa = kappa;
    }
  }
  return best_kappa;
}

}  // namespace

DegenerateFamily degenerate_family(double p, int j, int n) {
  require(p > 0.0 && p < 1.0, ErrorCode::domain, "p must lie in (0, 1)");
  require(j >= 2, ErrorCode::domain, "j must be at least 2");
  require(n >= 8 && is_power_of_two(n), ErrorCode::domain, "grid size must be a power of two");
  const double a = 2.0 / (2.0 - p);
  const double eps = 1.0 / j;
  const double lin = a * std::pow(eps, a - 1.0);

  DegenerateFamily out;
  out.kappa = tune_kappa(a);
  const Quintic q = blend(std::pow(1.0 + eps, a) - lin, a * std::pow(1.0 + eps, a - 1.0) - lin,
                          a * (a - 1.0) * std::pow(1.0 + eps, a - 2.0), out.kappa);

  std::vector<double> h(static_cast<std::size_t>(n)), hp(h.size()), hpp(h.size());
  for (int i = 0; i < n; ++i) {
    const int mirrored = std::min(i, n - i);
    const double th = kTwoPi * mirrored / n;
    const double sign = i <= n / 2 ? 1.0 : -1.0;
    double v, d1, d2;
    if (th <= 1.0) {
      v = std::pow(th + eps, a) - lin * th;
      d1 = a * std::pow(th + eps, a - 1.0) - lin;
      d2 = a * (a - 1.0) * std::pow(th + eps, a - 2.0);
    } else {
      const double u = th - 1.0;
      v = q.value(u);
      d1 = q.d1(u);
      d2 = q.d2(u);
    }
    const auto k = static_cast<std::size_t>(i);
    h[k] = v;
    hp[k] = sign * d1;
    hpp[k] = d2;
  }
  out.curv_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < h.size(); ++k) out.curv_min = std::min(out.curv_min, h[k] + hpp[k]);
  require(out.curv_min > 0.0, ErrorCode::convexity_lost, "blend produced h'' + h <= 0");

  out.f = DensityFn::certified(forward_density(h, hp, hpp, p));
  out.f_inf = *std::min_element(out.f.values.begin(), out.f.values.end());
  out.f_sup = *std::max_element(out.f.values.begin(), out.f.values.end());
  out.min_h = *std::min_element(h.begin(), h.end());
  out.h = SupportFn(std::move(h), Symmetry::general);
  return out;
}

std::string solution_csv(const SolveReport& report, const DensityFn& f, double p) {
  const auto& h = report.solution.values();
  const auto hp = report.solution.d1();
  const auto hpp = report.solution.d2();
  const auto res = residual(report.solution, f, p);
  const auto theta = grid_angles(report.solution.n());
  std::ostringstream out;
  out << "theta,h,hp,hpp,residual\n";
  for (std::size_t j = 0; j < h.size(); ++j) {
    out << format_double(theta[j]) << ',' << format_double(h[j]) << ',' << format_double(hp[j])
        << ',' << format_double(hpp[j]) << ',' << format_double(res[j]) << '\n';
  }
  return out.str();
}

std::string solve_report_json(const SolveReport& report) {
  const auto& b = report.apriori;
  nlohmann::json legs = nlohmann::json::array();
  for (const auto& leg : report.legs) legs.push_back({{"t", leg.t}, {"residuals", leg.residuals}});
  nlohmann::json doc{
      {"n", report.solution.n()},
      {"symmetry", report.solution.symmetry() == Symmetry::origin_symmetric ? "origin_symmetric"
                                                                              : "general"},
      {"residual_sup", report.residual_sup},
      {"homotopy_steps", report.homotopy_steps},
      {"c0", report.c0},
      {"r2", report.r2},
      {"apriori",
       {{"h_min", b.h_min},
        {"h_max", b.h_max},
        {"rho_min", b.rho_min},
        {"rho_max", b.rho_max},
        {"curv_min", b.curv_min},
        {"curv_max", b.curv_max}}},
      {"legs", legs}};
  return doc.dump(2) + "\n";
}

}  // namespace lpgm
