#pragma once

// The planar L_p Gaussian Minkowski equation on the circle,
//   (1/2pi) h^{1-p} e^{-(h'^2+h^2)/2} (h'' + h) = f,
// solved by continuation from the isotropic problem with Newton corrections.

#include "lpgm/density_spec.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace lpgm {

/// Antipodal symmetry h(theta + pi) = h(theta), i.e. an origin-symmetric body.
enum class Symmetry { origin_symmetric, general };

/// Support function sampled at theta_j = 2 pi j / n, n a power of two.
class SupportFn {
 public:
  SupportFn() = default;
  SupportFn(std::vector<double> values, Symmetry symmetry);

  int n() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  Symmetry symmetry() const { return symmetry_; }

  std::vector<double> d1() const;
  std::vector<double> d2() const;
  /// h'' + h.
  std::vector<double> curvature_radius() const;

  /// Throws non_positive_support or convexity_lost.
  void validate() const;

 private:
  std::vector<double> values_;
  Symmetry symmetry_ = Symmetry::general;
};

/// Density f on the same grid with a declared bound 1/tau < f < tau.
struct DensityFn {
  std::vector<double> values;
  double tau = 0.0;

  /// Declares the tightest tau (inflated by 1e-9 so the bounds are strict).
  static DensityFn certified(std::vector<double> values);
  int n() const { return static_cast<int>(values.size()); }
  bool antipodal(double tol = 1e-12) const;
};

/// Nodewise (1/2pi) h^{1-p} e^{-(h'^2+h^2)/2} (h'' + h).
std::vector<double> forward_density(const std::vector<double>& h, const std::vector<double>& hp,
                                    const std::vector<double>& hpp, double p);

/// f evaluated from an analytic support function (the manufactured-solution oracle).
DensityFn manufactured_density(const TrigSeries& h_star, int n, double p);

/// F(h) = h'' + h - 2 pi e^{(h'^2+h^2)/2} h^{p-1} f with spectral derivatives.
std::vector<double> residual(const SupportFn& h, const DensityFn& f, double p);

/// dF/dh assembled from the spectral differentiation matrices.
Eigen::MatrixXd jacobian(const SupportFn& h, const DensityFn& f, double p);

struct SolveOptions {
  double tol = 1e-10;
  int max_newton = 25;
  double dt0 = 0.1;
  double dt_min = 1e-6;
  bool unsafe = false;  // admit non-antipodal f when 0 < p < 1
};

struct NewtonLeg {
  double t = 0.0;
  std::vector<double> residuals;  // sup-norm before the first and after each Newton step
};

struct AprioriBounds {
  double h_min = 0.0, h_max = 0.0;
  double rho_min = 0.0, rho_max = 0.0;    // sqrt(h'^2 + h^2)
  double curv_min = 0.0, curv_max = 0.0;  // h'' + h
};

AprioriBounds measure_bounds(const SupportFn& h);

struct SolveReport {
  SupportFn solution;
  double residual_sup = 0.0;
  int homotopy_steps = 0;
  double c0 = 0.0;  // isotropic starting density
  double r2 = 0.0;  // smaller constant solution for c0
  std::vector<NewtonLeg> legs;
  AprioriBounds apriori;
};

/// Starting constant density: 0.1 c_p / (2 pi), halved until 2 - p - r2^2 is at
/// least 0.5 away from every k^2 the symmetry class admits (even k when antipodal).
double choose_c0(double p, Symmetry symmetry);

SolveReport solve(const DensityFn& f, double p, const SolveOptions& opts = {});

struct AprioriCheck {
  AprioriBounds measured;
  double c1 = 0.0;  // smallest C with 1/C < rho, h''+h < C
  double tau = 0.0;
  // Replay of the C^0 chain for the declared tau.
  double tau1 = 0.0;  // upper bound on h_max
  double tau2 = 0.0;  // lower bound on h_max
  double tau4 = 0.0;  // lower bound on h_min (origin-symmetric case)
  double area = 0.0;
  double area_lower = 0.0;
  double area_upper = 0.0;
  bool symmetric_chain = false;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// int_0^{2 pi} |cos theta|^p d theta.
double abs_cos_power_integral(double p);

AprioriCheck verify_apriori(const SolveReport& report, double p, double tau);

struct DegenerateFamily {
  SupportFn h;
  DensityFn f;
  double min_h = 0.0;
  double f_inf = 0.0;
  double f_sup = 0.0;
  double curv_min = 0.0;
  double kappa = 0.0;  // phi''(pi) of the blend
};

/// h_j = (theta + eps)^{a} - a eps^{a-1} theta on [0, 1], a = 2/(2-p), eps = 1/j,
/// a quintic C^2 blend on [1, pi] with phi'(pi) = phi'''(pi) = 0, mirrored to (pi, 2pi).
DegenerateFamily degenerate_family(double p, int j, int n = 1024);

std::string solution_csv(const SolveReport& report, const DensityFn& f, double p);
std::string solve_report_json(const SolveReport& report);

}  // namespace lpgm
