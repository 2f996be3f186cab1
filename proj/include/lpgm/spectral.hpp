#pragma once

// Trigonometric differentiation on the uniform grid theta_j = 2 pi j / n.

#include <Eigen/Dense>

#include <vector>

namespace lpgm {

struct SpectralDiff {
  int n = 0;
  Eigen::MatrixXd d1;  // first derivative of the periodic interpolant
  Eigen::MatrixXd d2;  // second derivative of the periodic interpolant

  explicit SpectralDiff(int n);
};

/// Shared, lazily built operators for even n >= 4. Thread-safe.
const SpectralDiff& spectral_diff(int n);

bool is_power_of_two(int n);

std::vector<double> grid_angles(int n);

}  // namespace lpgm
