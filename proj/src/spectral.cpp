#include "lpgm/spectral.hpp"

#include "lpgm/errors.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace lpgm {

SpectralDiff::SpectralDiff(int n_) : n(n_), d1(n_, n_), d2(n_, n_) {
  require(n >= 4 && n % 2 == 0, ErrorCode::domain, "spectral grid size must be even and >= 4");
  const double step = 2.0 * std::numbers::pi / n;
  const double diag2 = -std::numbers::pi * std::numbers::pi / (3.0 * step * step) - 1.0 / 6.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) {
        d1(j, k) = 0.0;
        d2(j, k) = diag2;
        continue;
      }
      // Entries depend on j - k mod n; reducing to (-n/2, n/2] keeps sin() away from pi.
      int m = j - k;
      if (m > n / 2) m -= n;
      if (m <= -n / 2) m += n;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      const double half = 0.5 * m * step;
      d1(j, k) = 0.5 * sign / std::tan(half);
      const double sh = std::sin(half);
      d2(j, k) = -0.5 * sign / (sh * sh);
    }
  }
}

const SpectralDiff& spectral_diff(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<SpectralDiff>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<SpectralDiff>(n);
  return *slot;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> grid_angles(int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * j / n;
  return out;
}

}  // namespace lpgm
