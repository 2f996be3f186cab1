#include "lpgm/gauss_measure.hpp"

#include "lpgm/csv.hpp"
#include "lpgm/errors.hpp"
#include "lpgm/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace lpgm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
}

}  // namespace

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  require(n >= 3, ErrorCode::invalid_polygon, "polygon needs at least three vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices_[i];
    const Point& b = vertices_[(i + 1) % n];
    const Point& c = vertices_[(i + 2) % n];
    require(std::isfinite(a.x) && std::isfinite(a.y), ErrorCode::invalid_polygon, "non-finite vertex");
    require(cross(a, b, c) > 0.0, ErrorCode::invalid_polygon,
            "vertices must be strictly convex and counterclockwise (vertex " + std::to_string(i + 1) + ")");
    // The origin lies left of every edge.
    require(a.x * b.y - a.y * b.x > 0.0, ErrorCode::invalid_polygon, "origin must be strictly inside");
  }
  // Winding number one: the turning angles add to 2 pi.
  double turn = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices_[i];
    const Point& b = vertices_[(i + 1) % n];
    const Point& c = vertices_[(i + 2) % n];
    const double e1 = std::atan2(b.y - a.y, b.x - a.x);
    const double e2 = std::atan2(c.y - b.y, c.x - b.x);
    double d = e2 - e1;
    while (d <= -std::numbers::pi) d += kTwoPi;
    while (d > std::numbers::pi) d -= kTwoPi;
    turn += d;
  }
  require(std::abs(turn - kTwoPi) < 1e-6, ErrorCode::invalid_polygon, "polygon winds more than once");
}

double DiscreteMeasure::total() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

double gaussian_segment_integral(double t0, double t1) {
  const double scale = std::sqrt(std::numbers::pi / 2.0);
  const double r = std::numbers::sqrt2;
  if (t0 >= 0.0) return scale * (std::erfc(t0 / r) - std::erfc(t1 / r));
  if (t1 <= 0.0) return scale * (std::erfc(-t1 / r) - std::erfc(-t0 / r));
  return scale * (std::erf(t1 / r) - std::erf(t0 / r));
}

DiscreteMeasure polygon_measure(const Polygon& poly, double p) {
  require(p >= 0.0 && p <= 1.0, ErrorCode::domain, "p must lie in [0, 1]");
  const auto& v = poly.vertices();
  DiscreteMeasure m;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const double ux = (b.x - a.x) / len;
    const double uy = (b.y - a.y) / len;
    // Outer normal of a counterclockwise edge, support value, and tangential offsets.
    const double nx = uy;
    const double ny = -ux;
    const double h = a.x * nx + a.y * ny;
    const double t0 = a.x * ux + a.y * uy;
    const double t1 = b.x * ux + b.y * uy;
    const double w = std::pow(h, 1.0 - p) * std::exp(-0.5 * h * h) * gaussian_segment_integral(t0, t1) / kTwoPi;
    double angle = std::atan2(ny, nx);
    if (angle < 0.0) angle += kTwoPi;
    m.atoms.push_back({angle, w});
  }
  return m;
}

std::vector<double> smooth_measure_density(const SupportFn& h, double p) {
  h.validate();
  return forward_density(h.values(), h.d1(), h.d2(), p);
}

double density_total(const std::vector<double>& density) {
  double s = 0.0;
  for (double d : density) s += d;
  return s * kTwoPi / static_cast<double>(density.size());
}

Polygon regular_polygon(int n, double r, bool inscribed, double phase) {
  require(n >= 3 && r > 0.0, ErrorCode::domain, "regular polygon needs n >= 3 and r > 0");
  const double radius = inscribed ? r : r / std::cos(std::numbers::pi / n);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    const double a = phase + kTwoPi * i / n;
    pts.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return Polygon(std::move(pts));
}

double disk_total(double r, double p) { return std::pow(r, 2.0 - p) * std::exp(-0.5 * r * r); }

std::vector<ConvergencePoint> measure_convergence_check(const std::vector<int>& ns, double r, double p,
                                                        bool inscribed) {
  std::vector<ConvergencePoint> out;
  const double target = disk_total(r, p);
  for (int n : ns) {
    const double total = polygon_measure(regular_polygon(n, r, inscribed), p).total();
    out.push_back({n, total, std::abs(total - target)});
  }
  return out;
}

Polygon parse_polygon_csv(std::string_view text) {
  std::vector<Point> pts;
  for (const auto& row : parse_numeric_csv(text)) {
    require(row.size() == 2, ErrorCode::parse_error, "polygon rows must be x,y");
    pts.push_back({row[0], row[1]});
  }
  return Polygon(std::move(pts));
}

std::string measure_csv(const DiscreteMeasure& m) {
  std::ostringstream out;
  out << "angle,weight\n";
  for (const auto& a : m.atoms) out << format_double(a.angle) << ',' << format_double(a.weight) << '\n';
  return out.str();
}

std::string density_csv(const std::vector<double>& density) {
  std::ostringstream out;
  out << "theta,density\n";
  const auto theta = grid_angles(static_cast<int>(density.size()));
  for (std::size_t j = 0; j < density.size(); ++j)
    out << format_double(theta[j]) << ',' << format_double(density[j]) << '\n';
  return out.str();
}

}  // namespace lpgm
