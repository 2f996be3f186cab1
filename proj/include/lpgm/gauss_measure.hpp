#pragma once

// Planar L_p Gaussian surface area measure
//   dS = (1/2pi) e^{-|x|^2/2} (x . nu)^{1-p} dH^1
// for polygons (atoms) and smooth bodies given by a support function (densities).

#include "lpgm/minkowski_pde.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace lpgm {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Counterclockwise, strictly convex, origin strictly inside.
class Polygon {
 public:
  explicit Polygon(std::vector<Point> vertices);  // throws invalid_polygon

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

 private:
  std::vector<Point> vertices_;
};

struct Atom {
  double angle = 0.0;  // outer normal angle in [0, 2 pi)
  double weight = 0.0;
};

struct DiscreteMeasure {
  std::vector<Atom> atoms;  // one per edge, in edge order
  double total() const;
};

/// Edge i runs from vertex i to vertex i+1.
DiscreteMeasure polygon_measure(const Polygon& poly, double p);

/// int_{t0}^{t1} e^{-t^2/2} dt without cancellation in the tails.
double gaussian_segment_integral(double t0, double t1);

/// Nodewise (1/2pi) h^{1-p} e^{-(h'^2+h^2)/2} (h''+h); throws convexity_lost.
std::vector<double> smooth_measure_density(const SupportFn& h, double p);

/// Trapezoid total of a gridded density on the circle.
double density_total(const std::vector<double>& density);

/// Regular n-gon with vertices on (inscribed) or edges tangent to (circumscribed)
/// the circle of radius r; vertex 0 sits at angle `phase`.
Polygon regular_polygon(int n, double r, bool inscribed, double phase = 0.0);

/// Disk total r^{2-p} e^{-r^2/2}.
double disk_total(double r, double p);

struct ConvergencePoint {
  int n = 0;
  double total = 0.0;
  double gap = 0.0;
};

std::vector<ConvergencePoint> measure_convergence_check(const std::vector<int>& ns, double r, double p,
                                                        bool inscribed);

/// Vertex CSV: rows of x,y (optional header).
Polygon parse_polygon_csv(std::string_view text);
std::string measure_csv(const DiscreteMeasure& m);
std::string density_csv(const std::vector<double>& density);

}  // namespace lpgm
