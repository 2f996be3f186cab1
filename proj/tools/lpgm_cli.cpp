// lpgm: command-line front end for the planar L_p Gaussian Minkowski toolkit.
//
// Exit codes: 0 success, 2 usage or rejected input, 3 scan with errored cells,
// 4 solver failure, 5 I/O.

#include "lpgm/csv.hpp"
#include "lpgm/density_spec.hpp"
#include "lpgm/errors.hpp"
#include "lpgm/gauss_measure.hpp"
#include "lpgm/good_set.hpp"
#include "lpgm/minkowski_pde.hpp"
#include "lpgm/ode_shoot.hpp"
#include "lpgm/scalar_kernel.hpp"
#include "lpgm/spectral.hpp"
#include "lpgm/theta_quad.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

using namespace lpgm;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kScanPartial = 3;
constexpr int kSolverFailure = 4;
constexpr int kIo = 5;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

// Writes to `path`, or to stdout when no path was given.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::homotopy_stall:
    case ErrorCode::convexity_lost:
    case ErrorCode::step_failure:
    case ErrorCode::h_reached_zero:
    case ErrorCode::no_turning_point:
    case ErrorCode::integrand_negative:
      return kSolverFailure;
    default:
      return kUsage;
  }
}

// Shared constant selection: --c is the equation constant, --C = c / (2 pi).
struct ConstantFlags {
  std::optional<double> c;
  std::optional<double> big_c;

  void attach(CLI::App* cmd) {
    auto* oc = cmd->add_option("--c", c, "constant c of the isotropic equation");
    auto* oC = cmd->add_option("--C", big_c, "measure constant C = c / (2 pi)");
    oc->excludes(oC);
  }
  double value() const {
    if (c) return *c;
    if (big_c) return 2.0 * std::numbers::pi * *big_c;
    throw CLI::ValidationError("--c/--C", "one of --c or --C is required");
  }
};

void print_kv(const json& doc, bool as_json) {
  if (as_json) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  for (const auto& [key, v] : doc.items()) {
    std::cout << key << " = ";
    if (v.is_number_float()) {
      std::cout << format_double(v.get<double>());
    } else if (v.is_string()) {
      std::cout << v.get<std::string>();
    } else {
      std::cout << v.dump();
    }
    std::cout << '\n';
  }
}

std::vector<double> density_from_csv(const std::string& path, int& n) {
  std::vector<double> values;
  for (const auto& row : parse_numeric_csv(read_file(path))) {
    require(!row.empty(), ErrorCode::parse_error, "empty density row");
    values.push_back(row.back());  // (theta, f) or a bare column of f
  }
  n = static_cast<int>(values.size());
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar L_p Gaussian Minkowski toolkit"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "print results as JSON");
  app.fallthrough();

  double p = 0.0;
  ConstantFlags cflags;

  auto* constants = app.add_subcommand("constants", "c_p, C_p = c_p/(2 pi) and sqrt(2-p)");
  constants->add_option("--p", p, "exponent in [0, 1]")->required();

  auto* roots = app.add_subcommand("roots", "constant solutions m1 < m2 of g = c");
  roots->add_option("--p", p)->required();
  cflags.attach(roots);

  double s = 0.0;
  auto* goodset = app.add_subcommand("goodset", "solve for h0 given (c, p, s)");
  goodset->add_option("--p", p)->required();
  goodset->add_option("--s", s, "aspect ratio h1/h0 > 1")->required();
  cflags.attach(goodset);

  std::string form = "raw";
  double tol = default_theta_tol;
  auto* theta_cmd = app.add_subcommand("theta", "half-period integral for (c, p, s)");
  theta_cmd->add_option("--p", p)->required();
  theta_cmd->add_option("--s", s)->required();
  theta_cmd->add_option("--form", form)->check(CLI::IsMember({"raw", "normalized"}));
  theta_cmd->add_option("--tol", tol);
  cflags.attach(theta_cmd);

  ScanGrid grid;
  int jobs = 1;
  std::string out;
  auto* scan = app.add_subcommand("theta-scan", "grid scan of the half-period");
  scan->add_option("--ps", grid.ps)->delimiter(',');
  scan->add_option("--ss", grid.ss)->delimiter(',');
  scan->add_option("--nc", grid.n_c)->check(CLI::PositiveNumber);
  scan->add_option("--c-min", grid.c_frac_min, "smallest c / c_p");
  scan->add_option("--c-max", grid.c_frac_max, "largest c / c_p");
  scan->add_option("--tol", tol);
  scan->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  scan->add_option("--out", out, "output prefix (writes <out>.csv and <out>.json)");

  double h0 = 0.0;
  double hp0 = 0.0;
  double span = 2.0 * std::numbers::pi;
  double ode_tol = 1e-10;
  auto* shoot = app.add_subcommand("shoot", "integrate the isotropic ODE from (h0, h0')");
  shoot->add_option("--p", p)->required();
  shoot->add_option("--h0", h0)->required();
  shoot->add_option("--hp0", hp0);
  shoot->add_option("--span", span, "angular length of the trajectory");
  shoot->add_option("--tol", ode_tol);
  shoot->add_option("--out", out, "trajectory CSV (default stdout)");
  cflags.attach(shoot);

  int n_grid = 200;
  double cand_tol = default_candidate_tol;
  auto* closed = app.add_subcommand("find-closed", "search an h0 grid for Theta = pi/k");
  closed->add_option("--p", p)->required();
  closed->add_option("--n", n_grid)->check(CLI::PositiveNumber);
  closed->add_option("--tol", cand_tol);
  closed->add_option("--out", out, "per-cell CSV");
  cflags.attach(closed);

  std::string f_spec;
  std::string f_csv;
  int n = 512;
  bool manufactured = false;
  SolveOptions opts;
  auto* solve_cmd = app.add_subcommand("solve", "solve h^{1-p} e^{-(h'^2+h^2)/2} (h''+h) = 2 pi f");
  solve_cmd->add_option("--p", p)->required();
  auto* o_spec = solve_cmd->add_option("--f", f_spec, "density spec, e.g. const:1,cos:2:0.1");
  auto* o_csv = solve_cmd->add_option("--f-csv", f_csv, "density CSV (theta, f)");
  o_spec->excludes(o_csv);
  solve_cmd->add_option("--n", n, "grid size (power of two)");
  solve_cmd->add_flag("--manufactured", manufactured, "treat --f as the exact solution h*");
  solve_cmd->add_flag("--unsafe", opts.unsafe, "admit non-antipodal f for 0 < p < 1");
  solve_cmd->add_option("--tol", opts.tol);
  solve_cmd->add_option("--out", out, "output prefix (writes <out>.csv and <out>.json)");

  std::vector<int> js{2, 4, 8, 16, 32, 64};
  auto* counter = app.add_subcommand("counterexample", "support functions with min h -> 0 and bounded f");
  counter->add_option("--p", p)->required();
  counter->add_option("--j", js)->delimiter(',');
  int family_n = 1024;
  counter->add_option("--n", family_n, "grid size (power of two)");
  counter->add_option("--out", out, "output prefix (writes <out>_j<j>.csv)");

  std::string polygon_csv;
  std::string h_spec;
  int regular_n = 0;
  double radius = 1.0;
  bool circumscribed = false;
  auto* measure = app.add_subcommand("measure", "L_p Gaussian surface area measure");
  measure->add_option("--p", p)->required();
  auto* o_poly = measure->add_option("--polygon", polygon_csv, "vertex CSV (x, y), counterclockwise");
  auto* o_h = measure->add_option("--support", h_spec, "support function spec for a smooth body");
  auto* o_reg = measure->add_option("--regular", regular_n, "regular n-gon around a disk");
  o_poly->excludes(o_h)->excludes(o_reg);
  o_h->excludes(o_reg);
  measure->add_option("--r", radius);
  measure->add_flag("--circumscribed", circumscribed);
  measure->add_option("--n", n, "grid size for --h");
  measure->add_option("--out", out, "measure CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*constants) {
      require(p >= 0.0 && p <= 1.0, ErrorCode::domain, "p must lie in [0, 1]");
      print_kv({{"p", p},
                {"c_p", c_threshold(p)},
                {"C_p", big_c_threshold(p)},
                {"sqrt_2_minus_p", std::sqrt(2.0 - p)}},
               as_json);
      return kOk;
    }

    if (*roots) {
      const Params params = Params::checked(p, cflags.value());
      json doc{{"p", p}, {"c", params.c}, {"count", count_constant_solutions(params)}};
      if (params.c <= c_threshold(p) * (1.0 + tangency_rel_tol)) {
        const RootPair r = roots_m1_m2(params);
        doc["m1"] = r.m1;
        doc["m2"] = r.m2;
        doc["tangent"] = r.tangent;
      }
      print_kv(doc, as_json);
      return kOk;
    }

    if (*goodset) {
      const double c = cflags.value();
      const GoodSet gs = make_good_set(c, p, s);
      const AspectBound bound = aspect_bound(c, p);
      json doc{{"c", gs.c}, {"p", gs.p}, {"s", gs.s}, {"h0", gs.h0}, {"h1", gs.h1()},
               {"good", is_good_set(gs)}};
      doc["S_c"] = bound.infinite ? json("inf") : json(bound.value());
      print_kv(doc, as_json);
      return kOk;
    }

    if (*theta_cmd) {
      const GoodSet gs = make_good_set(cflags.value(), p, s);
      const ThetaResult r = form == "raw" ? theta(gs, tol) : theta_normalized(gs, tol);
      const PiOverK d = distance_to_pi_over_k(r.value);
      print_kv({{"h0", gs.h0},
                {"theta", r.value},
                {"est_error", r.est_error},
                {"gt_pi", r.value > std::numbers::pi},
                {"dist_pi_over_k", d.distance},
                {"k", d.k}},
               as_json);
      return kOk;
    }

    if (*scan) {
      const ScanReport report = theta_scan(grid, tol, jobs);
      if (out.empty()) {
        std::cout << scan_report_csv(report);
      } else {
        write_file(out + ".csv", scan_report_csv(report));
        write_file(out + ".json", scan_report_json(report));
      }
      if (report.error_count() > 0) {
        std::cerr << report.error_count() << " of " << report.cells.size() << " cells errored\n";
        return kScanPartial;
      }
      return kOk;
    }

    if (*shoot) {
      const Params params = Params::checked(p, cflags.value());
      const Trajectory traj = integrate_ivp(params, h0, hp0, {0.0, span}, ode_tol);
      emit(out, trajectory_csv(traj, params));
      if (!out.empty()) {
        json doc{{"E0", traj.E0}, {"max_drift", traj.max_drift}, {"samples", traj.thetas.size()}};
        if (hp0 == 0.0) doc["half_period"] = half_period(params, h0, ode_tol);
        print_kv(doc, as_json);
      }
      return kOk;
    }

    if (*closed) {
      const Params params = Params::checked(p, cflags.value());
      const ClosedSearch search = find_closed_solutions(params, default_h0_grid(params, n_grid), cand_tol);
      if (!out.empty()) {
        std::ostringstream csv;
        csv << "h0,s,theta,dist_pi_over_k,k,valid\n";
        for (const auto& cell : search.cells) {
          csv << format_double(cell.h0) << ',' << format_double(cell.s) << ','
              << format_double(cell.theta) << ',' << format_double(cell.dist) << ',' << cell.k << ','
              << (cell.valid ? "true" : "false") << '\n';
        }
        write_file(out, csv.str());
      }
      json cands = json::array();
      for (const auto& c : search.candidates)
        cands.push_back({{"h0", c.h0}, {"s", c.s}, {"theta", c.theta}, {"k", c.k}});
      json brackets = json::array();
      for (const auto& b : search.brackets)
        brackets.push_back({{"h0_lo", b.h0_lo}, {"h0_hi", b.h0_hi}, {"k", b.k}});
      std::size_t valid = 0;
      for (const auto& cell : search.cells) valid += cell.valid ? 1 : 0;
      print_kv({{"cells", search.cells.size()},
                {"valid_cells", valid},
                {"candidates", cands},
                {"sign_change_brackets", brackets}},
               as_json);
      return kOk;
    }

    if (*solve_cmd) {
      if (f_spec.empty() && f_csv.empty()) throw CLI::ValidationError("--f", "one of --f or --f-csv is required");
      std::optional<TrigSeries> h_star;
      DensityFn f;
      if (!f_csv.empty()) {
        require(!manufactured, ErrorCode::domain, "--manufactured needs an analytic --f");
        f = DensityFn::certified(density_from_csv(f_csv, n));
      } else if (manufactured) {
        h_star = parse_trig_series(f_spec);
        f = manufactured_density(*h_star, n, p);
      } else {
        f = DensityFn::certified(parse_trig_series(f_spec).sample(n));
      }
      const SolveReport report = solve(f, p, opts);
      if (!out.empty()) {
        write_file(out + ".csv", solution_csv(report, f, p));
        write_file(out + ".json", solve_report_json(report));
      } else {
        std::cout << solution_csv(report, f, p);
      }
      if (h_star) {
        const auto exact = h_star->sample(report.solution.n());
        double err = 0.0;
        for (std::size_t j = 0; j < exact.size(); ++j)
          err = std::max(err, std::abs(exact[j] - report.solution.values()[j]));
        std::cerr << "sup_error = " << format_double(err) << '\n';
      }
      std::cerr << "residual_sup = " << format_double(report.residual_sup)
                << "\nhomotopy_steps = " << report.homotopy_steps << '\n';
      return kOk;
    }

    if (*counter) {
      json rows = json::array();
      for (int j : js) {
        const DegenerateFamily fam = degenerate_family(p, j, family_n);
        rows.push_back({{"j", j},
                        {"min_h", fam.min_h},
                        {"f_inf", fam.f_inf},
                        {"f_sup", fam.f_sup},
                        {"curv_min", fam.curv_min},
                        {"tau", fam.f.tau}});
        if (!out.empty()) {
          std::ostringstream csv;
          csv << "theta,h,f\n";
          const auto theta = grid_angles(fam.h.n());
          for (int i = 0; i < fam.h.n(); ++i) {
            const auto k = static_cast<std::size_t>(i);
            csv << format_double(theta[k]) << ',' << format_double(fam.h.values()[k]) << ','
                << format_double(fam.f.values[k]) << '\n';
          }
          write_file(out + "_j" + std::to_string(j) + ".csv", csv.str());
        }
      }
      if (as_json) {
        std::cout << rows.dump(2) << '\n';
      } else {
        std::cout << "j,min_h,f_inf,f_sup,curv_min,tau\n";
        for (const auto& r : rows) {
          std::cout << r["j"].get<int>() << ',' << format_double(r["min_h"].get<double>()) << ','
                    << format_double(r["f_inf"].get<double>()) << ','
                    << format_double(r["f_sup"].get<double>()) << ','
                    << format_double(r["curv_min"].get<double>()) << ','
                    << format_double(r["tau"].get<double>()) << '\n';
        }
      }
      return kOk;
    }

    if (*measure) {
      if (!h_spec.empty()) {
        const auto series = parse_trig_series(h_spec);
        const SupportFn h(series.sample(n), series.antipodal() ? Symmetry::origin_symmetric : Symmetry::general);
        const auto density = smooth_measure_density(h, p);
        emit(out, density_csv(density));
        std::cerr << "total = " << format_double(density_total(density)) << '\n';
        return kOk;
      }
      if (polygon_csv.empty() && regular_n == 0)
        throw CLI::ValidationError("--polygon", "one of --polygon, --support or --regular is required");
      const Polygon poly = polygon_csv.empty() ? regular_polygon(regular_n, radius, !circumscribed)
                                               : parse_polygon_csv(read_file(polygon_csv));
      const DiscreteMeasure m = polygon_measure(poly, p);
      emit(out, measure_csv(m));
      std::cerr << "total = " << format_double(m.total()) << '\n';
      return kOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kUsage;
}
