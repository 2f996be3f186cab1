// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "lpgm/gauss_measure.hpp"
#include "lpgm/good_set.hpp"
#include "lpgm/minkowski_pde.hpp"
#include "lpgm/ode_shoot.hpp"
#include "lpgm/scalar_kernel.hpp"
#include "lpgm/spectral.hpp"
#include "lpgm/theta_quad.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace lpgm;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;  // diagnostics printed under the verdict
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

Outcome constant_counts() {
  Outcome o{true, {}, {}};
  double worst = 0.0;
  for (double p : {0.0, 0.25, 0.5, 0.75}) {
    const double cp = c_threshold(p);
    const int expected[3] = {2, 1, 0};
    const double fracs[3] = {0.9, 1.0, 1.1};
    for (int i = 0; i < 3; ++i) {
      const Params params{p, fracs[i] * cp};
      if (count_constant_solutions(params) != expected[i]) {
        o.pass = false;
        o.notes.push_back(fmt("p=%g c=%g c_p: count %d", p, fracs[i], count_constant_solutions(params)));
      }
      if (expected[i] == 2) {
        const RootPair r = roots_m1_m2(params);
        worst = std::max({worst, std::abs(g(r.m1, p) - params.c), std::abs(g(r.m2, p) - params.c)});
      }
    }
  }
  o.pass = o.pass && worst < 1e-12;
  o.detail = fmt("counts 2/1/0 at 0.9/1/1.1 c_p, max root residual %.2e", worst);
  return o;
}

Outcome quadrature_vs_shooting() {
  int count = 0;
  double worst = 0.0;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0})
    for (double s : {1.01, 1.2, 1.5, 2.0, 3.0, 5.0, 10.0})
      for (double frac : {1e-3, 0.02, 0.1, 0.3, 0.6, 0.9}) {
        const double c = frac * c_threshold(p);
        if (!aspect_bound(c, p).admits(s)) continue;
        const GoodSet gs = make_good_set(c, p, s);
        worst = std::max(worst, std::abs(half_period(gs.params(), gs.h0, 1e-12) - theta(gs).value));
        ++count;
      }
  return {count >= 100 && worst < 1e-6, fmt("%d good sets, max |theta - half_period| %.2e", count, worst), {}};
}

Outcome first_integral_drift() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int done = 0, resampled = 0;
  double worst = 0.0;
  while (done < 100) {
    const double p = unit(rng);
    const Params params{p, (0.05 + 0.9 * unit(rng)) * c_threshold(p)};
    const double h_init = roots_m1_m2(params).m1 * (0.3 + 0.7 * unit(rng));
    const double hp_init = 0.2 * (unit(rng) - 0.5);
    try {
      worst = std::max(worst, integrate_ivp(params, h_init, hp_init, {0.0, 2 * kPi}, 1e-10).max_drift);
      ++done;
    } catch (const Error&) {
      ++resampled;
    }
  }
  return {worst < 1e-8, fmt("100 trajectories over 2 pi, max drift %.2e (%d escaping starts resampled)", worst, resampled),
          {}};
}

Outcome scan_monotone_in_c(const ScanReport& scan) {
  Outcome o;
  int bad = 0, computed = 0, dp_true = 0, dp_total = 0;
  double min_dc = 1e300;
  for (const ScanCell& cell : scan.cells) {
    if (!cell.error.empty() || !cell.dc_flag) {
      ++bad;
      continue;
    }
    ++computed;
    if (!*cell.dc_flag) ++bad;
    min_dc = std::min(min_dc, *cell.dtheta_dc);
    if (cell.dp_flag) {
      ++dp_total;
      if (*cell.dp_flag) ++dp_true;
    }
  }
  o.pass = bad == 0 && scan.cells.size() == 150;
  o.detail = fmt("%d of %zu cells computed, min dTheta/dc %.3e", computed, scan.cells.size(), min_dc);
  o.notes.push_back(fmt("dTheta/dp <= 0 holds on %d of %d cells (reported only)", dp_true, dp_total));
  return o;
}

Outcome p_one_anchor(const ScanReport& scan) {
  Outcome o;
  int cells = 0, above = 0;
  for (const ScanCell& cell : scan.cells) {
    if (cell.p != 1.0 || !cell.gt_pi) continue;
    ++cells;
    if (*cell.gt_pi) ++above;
  }
  double last_gap = 0.0;
  bool decreasing = true;
  for (double s : {1.1, 2.0, 5.0}) {
    double prev = 1e300;
    for (double h0 : {1e-2, 1e-3, 1e-4, 1e-5}) {
      const GoodSet gs{c_of_p_path(h0, s, 1.0), h0, 1.0, s};
      const double gap = theta(gs).value - kPi;
      if (gap <= 0.0 || gap >= prev) decreasing = false;
      prev = gap;
    }
    last_gap = std::max(last_gap, prev);
  }
  o.pass = cells > 0 && above == cells && decreasing && last_gap < 5e-6;
  o.detail = fmt("theta > pi on %d/%d p=1 cells, theta - pi at h0=1e-5: %.2e", above, cells, last_gap);
  return o;
}

// Refines a sign change of theta - pi/k by bisection and checks that the orbit
// closes after 2 pi, which makes it a nonconstant solution with k maxima.
bool verify_closed_orbit(const Params& params, const ClosedBracket& b, double& h0_out) {
  auto excess = [&](double h0) {
    return theta(GoodSet{params.c, h0, params.p, *partner_aspect(params.c, params.p, h0)}).value - kPi / b.k;
  };
  try {
    auto [lo, hi] = boost::math::tools::bisect(excess, b.h0_lo, b.h0_hi,
                                               [](double l, double r) { return r - l < 1e-15 * r; });
    h0_out = 0.5 * (lo + hi);
    const Trajectory orbit = integrate_ivp(params, h0_out, 0.0, {0.0, 2 * kPi}, 1e-12);
    return std::abs(orbit.h.back() - h0_out) < 1e-8 * std::max(1.0, h0_out) + 1e-9 && std::abs(orbit.hp.back()) < 1e-6;
  } catch (const Error&) {
    return false;
  }
}

Outcome uniqueness_scan() {
  Outcome o;
  std::mt19937_64 rng(1234567);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int with_candidates = 0, with_brackets = 0, verified = 0;
  std::size_t gt_pi_cells = 0, valid_cells = 0;
  std::string example;
  for (int draw = 0; draw < 50; ++draw) {
    const double p = unit(rng);
    const double c = (0.05 + 0.9 * unit(rng)) * c_threshold(p);
    const Params params{p, c};
    const ClosedSearch search = find_closed_solutions(params, default_h0_grid(params, 200), 1e-4);
    if (!search.candidates.empty()) ++with_candidates;
    for (const ClosedCell& cell : search.cells) {
      if (!cell.valid) continue;
      ++valid_cells;
      if (cell.theta > kPi) ++gt_pi_cells;
    }
    if (search.brackets.empty()) continue;
    ++with_brackets;
    double h0 = 0.0;
    if (verify_closed_orbit(params, search.brackets.front(), h0)) {
      ++verified;
      if (example.empty()) example = fmt("p=%.4f c=%.4f c_p h0=%.6g k=%d", p, c / c_threshold(p), h0, search.brackets.front().k);
    }
  }
  o.pass = with_candidates == 0;
  o.detail = fmt("%d of 50 draws have candidates within 1e-4 of pi/k on the 200-point grid", with_candidates);
  o.notes.push_back(fmt("theta > pi on %zu of %zu valid cells (reported only)", gt_pi_cells, valid_cells));
  o.notes.push_back(fmt("theta - pi/k changes sign between adjacent grid cells in %d of 50 draws; "
                        "%d refine to orbits that close after 2 pi",
                        with_brackets, verified));
  if (!example.empty()) o.notes.push_back("first closed nonconstant orbit: " + example);
  return o;
}

Outcome small_amplitude() {
  double worst = 0.0;
  for (double p : {0.0, 0.5, 1.0})
    for (double frac : {0.1, 0.4, 0.8}) {
      const double c = frac * c_threshold(p);
      const double m1 = roots_m1_m2(Params{p, c}).m1;
      const GoodSet gs = make_good_set(c, p, 1.001);
      worst = std::max(worst, std::abs(theta(gs).value - kPi / std::sqrt(2 - p - m1 * m1)));
    }
  return {worst < 1e-3, fmt("s = 1.001, max |theta - pi/sqrt(2-p-m1^2)| %.2e", worst), {}};
}

// h = 1 + 0.05 e^{cos 2 theta}, smooth without being a trigonometric polynomial.
DensityFn exp_profile_density(int n, double p, std::vector<double>& exact) {
  std::vector<double> hp, hpp;
  exact.clear();
  for (double t : grid_angles(n)) {
    const double e = 0.05 * std::exp(std::cos(2 * t));
    const double u1 = -2 * std::sin(2 * t), u2 = -4 * std::cos(2 * t);
    exact.push_back(1 + e);
    hp.push_back(e * u1);
    hpp.push_back(e * (u1 * u1 + u2));
  }
  return DensityFn::certified(forward_density(exact, hp, hpp, p));
}

Outcome manufactured_pde() {
  Outcome o;
  const double p = 0.5;
  const TrigSeries hs = parse_trig_series("const:1,cos:2:0.1");
  const DensityFn f = manufactured_density(hs, 512, p);
  const SolveReport r = solve(f, p);
  const double err = sup_diff(r.solution.values(), hs.sample(512));
  const auto& v = r.solution.values();
  double parity = 0.0;
  for (int j = 0; j < 512; ++j) parity = std::max({parity, std::abs(v[j] - v[(j + 256) % 512]), std::abs(v[j] - v[(512 - j) % 512])});
  const AprioriCheck chk = verify_apriori(r, p, f.tau);

  // Ratios are taken while the previous error is above the rounding floor.
  auto ratios = [&](auto&& err_at, const std::vector<int>& ns, std::string label) {
    double prev = -1.0, worst = 0.0;
    std::ostringstream line;
    line << label << " errors:";
    for (int n : ns) {
      const double e = err_at(n);
      line << fmt(" n=%d %.1e", n, e);
      if (prev > 1e-11) worst = std::max(worst, e / prev);
      prev = e;
    }
    o.notes.push_back(line.str());
    return worst;
  };
  const double band_ratio = ratios(
      [&](int n) { return sup_diff(solve(manufactured_density(hs, n, p), p).solution.values(), hs.sample(n)); },
      {8, 16, 32, 64, 128, 256, 512}, "h*");
  const double smooth_ratio = ratios(
      [&](int n) {
        std::vector<double> exact;
        const DensityFn fe = exp_profile_density(n, p, exact);
        return sup_diff(solve(fe, p).solution.values(), exact);
      },
      {8, 16, 32, 64, 128}, "1+0.05exp(cos2t)");
  for (const auto& msg : chk.violations) o.notes.push_back("a priori: " + msg);
  o.pass = err < 1e-6 && parity < 1e-10 && chk.ok() && band_ratio < 0.2 && smooth_ratio < 0.2;
  o.detail = fmt("n=512 sup error %.2e, parity %.1e, worst ratio %.3f, a priori %s", err, parity,
                 std::max(band_ratio, smooth_ratio), chk.ok() ? "ok" : "violated");
  return o;
}

Outcome isotropic_pde() {
  const double p = 0.5;
  const double big_c = 0.5 * big_c_threshold(p);
  const SolveReport r = solve(DensityFn::certified(std::vector<double>(64, big_c)), p);
  const double r2 = roots_m1_m2(Params{p, 2 * kPi * big_c}).m1;
  const double err = sup_diff(r.solution.values(), std::vector<double>(64, r2));
  return {err < 1e-8, fmt("2 pi C = 0.5 c_p, |h - r2| %.2e (r2 = %.12f)", err, r2), {}};
}

Outcome counterexample() {
  Outcome o{true, {}, {}};
  const double p = 0.5;
  const DegenerateFamily first = degenerate_family(p, 2);
  const double tight = std::max(first.f_sup, 1 / first.f_inf);
  // The f_j floor keeps sinking slowly as j grows, so the interval measured at
  // j = 2 is widened by a factor 2 before reuse.
  const double tau = 2 * tight;
  int tight_fail = 0;
  double worst_min_h = 0.0, min_curv = 1e300, lo = 1e300, hi = 0.0;
  for (int j : {2, 4, 8, 16, 32, 64}) {
    const DegenerateFamily fam = degenerate_family(p, j);
    worst_min_h = std::max(worst_min_h, std::abs(fam.min_h / std::pow(j, -4.0 / 3.0) - 1));
    min_curv = std::min(min_curv, fam.curv_min);
    lo = std::min(lo, fam.f_inf);
    hi = std::max(hi, fam.f_sup);
    if (fam.f_inf < 1 / tau || fam.f_sup > tau || fam.curv_min <= 0.0) o.pass = false;
    if (fam.f_inf < 1 / tight || fam.f_sup > tight) ++tight_fail;
  }
  o.pass = o.pass && worst_min_h < 1e-14;
  o.detail = fmt("min h_j rel error %.1e, f_j in [%.4f, %.4f] inside [1/tau, tau] with tau = 2 x %.3f, min h''+h %.3f",
                 worst_min_h, lo, hi, tight, min_curv);
  o.notes.push_back(fmt("with tau measured at j=2 and no margin, %d of 6 j fall outside", tight_fail));
  return o;
}

double edge_quadrature(const Point& a, const Point& b, double p) {
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  const double nx = (b.y - a.y) / len, ny = -(b.x - a.x) / len;
  auto f = [&](double t) {
    const double x = a.x + t * (b.x - a.x), y = a.y + t * (b.y - a.y);
    return std::exp(-(x * x + y * y) / 2) * std::pow(x * nx + y * ny, 1 - p) * len / (2 * kPi);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14);
}

Outcome measure_module() {
  const Polygon sq({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}});
  const double side = std::exp(-0.5) * std::sqrt(2 * kPi) * std::erf(1 / std::sqrt(2.0)) / (2 * kPi);
  double sq_err = 0.0;
  for (double p : {0.0, 0.5, 1.0})
    for (const Atom& a : polygon_measure(sq, p).atoms) sq_err = std::max(sq_err, std::abs(a.weight - side));

  double disk_gap = 0.0;
  for (auto [r, p] : std::vector<std::pair<double, double>>{{1, 0}, {1, 0.5}, {2, 0.5}})
    for (bool inscribed : {true, false})
      disk_gap = std::max(disk_gap, measure_convergence_check({256}, r, p, inscribed).front().gap);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(5, 12);
  double quad_err = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = count(rng);
    const double phase = 2 * kPi * unit(rng);
    std::vector<Point> pts;
    // Radii around 1 with equal angular gaps keep every vertex extreme.
    for (int i = 0; i < n; ++i) {
      const double a = phase + 2 * kPi * (i + 0.3 * unit(rng)) / n;
      const double r = 1 + 0.3 * std::cos(kPi / n) * (unit(rng) - 0.5) * (1 - std::cos(2 * kPi / n));
      pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    const Polygon poly(pts);
    for (double p : {0.0, 0.5, 1.0}) {
      const DiscreteMeasure m = polygon_measure(poly, p);
      for (std::size_t i = 0; i < pts.size(); ++i)
        quad_err = std::max(quad_err, std::abs(m.atoms[i].weight - edge_quadrature(pts[i], pts[(i + 1) % pts.size()], p)));
    }
  }
  return {sq_err < 1e-10 && disk_gap < 1e-4 && quad_err < 1e-8,
          fmt("square side error %.1e, 256-gon disk gap %.2e, quadrature oracle error %.1e", sq_err, disk_gap, quad_err),
          {}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> known;
  app.add_option("--known-fail", known, "criteria expected to fail; exit 0 iff exactly these fail")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  const std::set<int> expected(known.begin(), known.end());
  std::set<int> failed;

  using clock = std::chrono::steady_clock;
  ScanReport scan;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"constant-solution counts", constant_counts},
      {"quadrature vs shooting", quadrature_vs_shooting},
      {"first-integral conservation", first_integral_drift},
      {"monotone in c on the 10x5x3 scan",
       [&] {
         scan = theta_scan(ScanGrid{}, default_theta_tol, 4);
         return scan_monotone_in_c(scan);
       }},
      {"p = 1 anchor", [&] { return p_one_anchor(scan); }},
      {"uniqueness scan", uniqueness_scan},
      {"small-amplitude limit", small_amplitude},
      {"PDE manufactured solution", manufactured_pde},
      {"isotropic PDE solve", isotropic_pde},
      {"degenerating support functions", counterexample},
      {"measure module", measure_module},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), {}};
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    if (!o.pass) {
      ++failures;
      failed.insert(static_cast<int>(i + 1));
    }
    std::printf("[%s] %2zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    for (const auto& note : o.notes) std::printf("          note: %s\n", note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  if (!expected.empty()) {
    std::printf("expected failures:");
    for (int k : expected) std::printf(" %d", k);
    std::printf(" -> %s\n", failed == expected ? "as recorded" : "MISMATCH");
    return failed == expected ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
