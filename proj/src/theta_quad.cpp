#include "lpgm/theta_quad.hpp"

#include "lpgm/csv.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

namespace lpgm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// x^p - 1 for x = 1 + d, d >= 0 (log x at p = 0).
double pow_m1_right_of_one(double d, double p) {
  const double l = std::log1p(d);
  return p == 0.0 ? l : std::expm1(p * l);
}

// s^p - x^p for x = s - d (log(s/x) at p = 0).
double pow_gap_left_of_s(double s, double d, double p) {
  const double l = -std::log1p(-d / s);
  return p == 0.0 ? l : std::pow(s, p) * -std::expm1(-p * l);
}

double s_pow_m1(double s, double p) {
  const double l = std::log(s);
  return p == 0.0 ? l : std::expm1(p * l);
}

// Radicands evaluated from the nearer endpoint so that they vanish there exactly.
double raw_radicand_impl(const GoodSet& gs, double offset) {
  const auto [c, h0, p, s] = gs;
  const double inv = 2.0 / (h0 * h0);
  const double k = (p == 0.0 ? c : c / p * std::pow(h0, p));
  if (offset <= 0.0) {
    const double d = -offset;
    const double arg = -k * std::exp(0.5 * h0 * h0) * pow_m1_right_of_one(d, p);
    return -d * (2.0 + d) - inv * std::log1p(arg);
  }
  const double d = offset;
  const double b_s = std::exp(-0.5 * h0 * h0) - k * s_pow_m1(s, p);
  return d * (2.0 * s - d) - inv * std::log1p(k * pow_gap_left_of_s(s, d, p) / b_s);
}

double normalized_radicand_impl(const GoodSet& gs, double offset) {
  const auto [c, h0, p, s] = gs;
  (void)c;
  const double inv = 2.0 / (h0 * h0);
  const double half_y_w = 0.5 * h0 * h0 * (s - 1.0) * (s + 1.0);
  const double denom = s_pow_m1(s, p);
  if (offset <= 0.0) {
    const double d = -offset;
    const double t = pow_m1_right_of_one(d, p) / denom;
    const double q = -std::expm1(-half_y_w);
    return -d * (2.0 + d) - inv * std::log1p(-t * q);
  }
  const double d = offset;
  const double one_minus_t = pow_gap_left_of_s(s, d, p) / denom;
  return d * (2.0 * s - d) - inv * std::log1p(one_minus_t * std::expm1(half_y_w));
}

template <class Radicand>
ThetaResult integrate_theta(const GoodSet& gs, double tol, ThetaForm form, Radicand radicand) {
  require(is_good_set(gs), ErrorCode::not_good_set, "(c, h0, p, s) is not a good set");
  require(tol >= 1e-14, ErrorCode::domain, "tolerance below 1e-14");
  const double scale = 2.0 * gs.s * gs.s;
  const auto integrand = [&](double, double offset) {
    const double r = radicand(gs, offset);
    if (r > 0.0) return 1.0 / std::sqrt(r);
    if (r > -10.0 * kEps * scale) return 0.0;  // rounding dust at a turning point
    throw Error(ErrorCode::integrand_negative,
                "radicand " + std::to_string(r) + " at offset " + std::to_string(offset));
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(integrand, 1.0, gs.s, tol, &error, &l1);
  return ThetaResult{value, error, form};
}

}  // namespace

double raw_radicand(const GoodSet& gs, double offset) { return raw_radicand_impl(gs, offset); }

double normalized_radicand(const GoodSet& gs, double offset) {
  return normalized_radicand_impl(gs, offset);
}

ThetaResult theta(const GoodSet& gs, double tol) {
  return integrate_theta(gs, tol, ThetaForm::raw, raw_radicand_impl);
}

ThetaResult theta_normalized(const GoodSet& gs, double tol) {
  return integrate_theta(gs, tol, ThetaForm::normalized, normalized_radicand_impl);
}

PiOverK distance_to_pi_over_k(double theta) {
  require(theta > 0.0, ErrorCode::domain, "theta must be positive");
  const int k_max = static_cast<int>(std::ceil(std::numbers::pi / theta)) + 2;
  PiOverK best{std::numeric_limits<double>::infinity(), 1};
  for (int k = 1; k <= k_max; ++k) {
    const double d = std::abs(theta - std::numbers::pi / k);
    if (d < best.distance) best = PiOverK{d, k};
  }
  return best;
}

// ---------------------------------------------------------------- scans

std::size_t ScanReport::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const ScanCell& c) { return !c.error.empty(); }));
}

std::vector<double> scan_c_values(const ScanGrid& grid, double p) {
  const double cp = c_threshold(p);
  std::vector<double> out;
  if (grid.n_c <= 0) return out;
  if (grid.n_c == 1) return {grid.c_frac_min * cp};
  const double a = std::log(grid.c_frac_min);
  const double b = std::log(grid.c_frac_max);
  for (int i = 0; i < grid.n_c; ++i) out.push_back(cp * std::exp(a + (b - a) * i / (grid.n_c - 1)));
  return out;
}

namespace {

std::optional<double> theta_at(double c, double p, double s, double tol) {
  try {
    return theta(make_good_set(c, p, s), tol).value;
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Central difference where both sides are admissible, one-sided otherwise.
template <class Eval>
std::optional<double> difference(Eval eval, double x, double step, double lo, double hi,
                                 double centre) {
  std::optional<double> up, down;
  if (x + step <= hi) up = eval(x + step);
  if (x - step >= lo) down = eval(x - step);
  if (up && down) return (*up - *down) / (2.0 * step);
  if (up) return (*up - centre) / step;
  if (down) return (centre - *down) / step;
  return std::nullopt;
}

}  // namespace

ScanCell scan_cell(double c, double p, double s, double tol) {
  ScanCell cell;
  cell.c = c;
  cell.p = p;
  cell.s = s;
  try {
    const GoodSet gs = make_good_set(c, p, s);
    const ThetaResult th = theta(gs, tol);
    cell.h0 = gs.h0;
    cell.theta = th.value;
    cell.err = th.est_error;
    cell.gt_pi = th.value > std::numbers::pi;
    cell.dist_pi_over_k = distance_to_pi_over_k(th.value).distance;

    const double dc = 1e-4 * c;
    cell.dtheta_dc = difference([&](double x) { return theta_at(x, p, s, tol); }, c, dc, 0.0,
                                std::numeric_limits<double>::infinity(), th.value);
    if (cell.dtheta_dc) cell.dc_flag = *cell.dtheta_dc >= -monotone_slack;

    const double dp = 1e-4;
    cell.dtheta_dp = difference([&](double x) { return theta_at(c, x, s, tol); }, p, dp, 0.0, 1.0,
                                th.value);
    if (cell.dtheta_dp) cell.dp_flag = *cell.dtheta_dp <= monotone_slack;
  } catch (const Error& e) {
    cell.error = e.what();
  }
  return cell;
}

ScanReport theta_scan(const ScanGrid& grid, double tol, int jobs) {
  struct Spec {
    double c, p, s;
  };
  std::vector<Spec> specs;
  for (double p : grid.ps)
    for (double s : grid.ss)
      for (double c : scan_c_values(grid, p)) specs.push_back({c, p, s});

  ScanReport report;
  report.cells.resize(specs.size());
  const std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1) {
    for (std::size_t i = 0; i < specs.size(); ++i)
      report.cells[i] = scan_cell(specs[i].c, specs[i].p, specs[i].s, tol);
    return report;
  }
  std::vector<std::future<void>> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < specs.size(); i += workers)
        report.cells[i] = scan_cell(specs[i].c, specs[i].p, specs[i].s, tol);
    }));
  }
  for (auto& f : pool) f.get();
  return report;
}

namespace {

std::string opt_num(const std::optional<double>& v) { return v ? format_double(*v) : "nan"; }
std::string opt_bool(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : "na"; }

template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string scan_report_csv(const ScanReport& report) {
  std::ostringstream out;
  out << "c,p,s,h0,theta,err,gt_pi,dist_pi_over_k,dc_flag,dp_flag\n";
  for (const auto& cell : report.cells) {
    out << format_double(cell.c) << ',' << format_double(cell.p) << ',' << format_double(cell.s)
        << ',' << opt_num(cell.h0) << ',' << opt_num(cell.theta) << ',' << opt_num(cell.err) << ','
        << opt_bool(cell.gt_pi) << ',' << opt_num(cell.dist_pi_over_k) << ','
        << opt_bool(cell.dc_flag) << ',' << opt_bool(cell.dp_flag) << '\n';
  }
  return out.str();
}

std::string scan_report_json(const ScanReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& cell : report.cells) {
    rows.push_back({{"c", cell.c},
                    {"p", cell.p},
                    {"s", cell.s},
                    {"h0", opt_json(cell.h0)},
                    {"theta", opt_json(cell.theta)},
                    {"err", opt_json(cell.err)},
                    {"gt_pi", opt_json(cell.gt_pi)},
                    {"dist_pi_over_k", opt_json(cell.dist_pi_over_k)},
                    {"dtheta_dc", opt_json(cell.dtheta_dc)},
                    {"dtheta_dp", opt_json(cell.dtheta_dp)},
                    {"dc_flag", opt_json(cell.dc_flag)},
                    {"dp_flag", opt_json(cell.dp_flag)},
                    {"error", cell.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(cell.error)}});
  }
  nlohmann::json doc{{"cells", rows}, {"error_count", report.error_count()}};
  return doc.dump(2) + "\n";
}

}  // namespace lpgm
