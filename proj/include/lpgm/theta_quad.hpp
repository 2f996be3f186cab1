#pragma once

// Half-period integral
//   Theta(c, h0, p, s) = int_1^s dx / sqrt(R(x))
// between a minimum h0 and the next maximum h0 s of a solution of the
// isotropic equation, in two algebraically equivalent forms.

#include "lpgm/good_set.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lpgm {

enum class ThetaForm { raw, normalized };

struct ThetaResult {
  double value = 0.0;
  double est_error = 0.0;
  ThetaForm form = ThetaForm::raw;
};

inline constexpr double default_theta_tol = 1e-12;

/// Raw integrand: R(x) = -x^2 - (2/h0^2) log(e^{-h0^2/2} - (c/p) h0^p (x^p - 1)).
ThetaResult theta(const GoodSet& gs, double tol = default_theta_tol);

/// Normalized integrand with t = (1 - x^p)/(1 - s^p) (t = log x / log s at p = 0):
/// R(x) = 1 - x^2 - (2/h0^2) log(1 - t + t e^{-h0^2 (s^2 - 1)/2}). Independent of c.
ThetaResult theta_normalized(const GoodSet& gs, double tol = default_theta_tol);

/// Radicands, exposed for tests. `offset` is the signed distance to the nearer
/// endpoint (negative: distance from 1, positive: distance from s).
double raw_radicand(const GoodSet& gs, double offset);
double normalized_radicand(const GoodSet& gs, double offset);

/// min_k |theta - pi/k| over k = 1..ceil(pi/theta)+2, and the minimizing k.
struct PiOverK {
  double distance = 0.0;
  int k = 1;
};
PiOverK distance_to_pi_over_k(double theta);

// ---------------------------------------------------------------- scans

struct ScanGrid {
  std::vector<double> ps{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> ss{1.1, 2.0, 5.0};
  /// c values as fractions of c_p(p), log-spaced.
  int n_c = 10;
  double c_frac_min = 1e-3;
  double c_frac_max = 0.5;
};

struct ScanCell {
  double c = 0.0;
  double p = 0.0;
  double s = 0.0;
  std::optional<double> h0;
  std::optional<double> theta;
  std::optional<double> err;
  std::optional<bool> gt_pi;
  std::optional<double> dist_pi_over_k;
  std::optional<double> dtheta_dc;
  std::optional<double> dtheta_dp;
  std::optional<bool> dc_flag;  // dTheta/dc >= -1e-8 along h0(c)
  std::optional<bool> dp_flag;  // dTheta/dp <= 1e-8 along h0(p) at fixed c
  std::string error;            // empty when the cell computed
};

struct ScanReport {
  std::vector<ScanCell> cells;
  std::size_t error_count() const;
};

inline constexpr double monotone_slack = 1e-8;

std::vector<double> scan_c_values(const ScanGrid& grid, double p);

ScanCell scan_cell(double c, double p, double s, double tol = default_theta_tol);

/// Cells ordered p-major, then s, then c. `jobs` > 1 evaluates cells on a
/// worker pool; output order does not depend on it.
ScanReport theta_scan(const ScanGrid& grid, double tol = default_theta_tol, int jobs = 1);

std::string scan_report_csv(const ScanReport& report);
std::string scan_report_json(const ScanReport& report);

}  // namespace lpgm
