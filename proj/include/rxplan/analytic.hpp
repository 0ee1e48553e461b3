#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rxplan/errors.hpp"
#include "rxplan/gdop.hpp"

namespace rxplan {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

/// Zero, one (tangency) or two intersection points of two circles.
template <typename Scalar>
std::vector<Vector2<Scalar>> circle_intersections(const Vector2<Scalar>& c1, Scalar r1,
                                                  const Vector2<Scalar>& c2, Scalar r2,
                                                  Scalar tangency_tol = Scalar(1e-9)) {
  if (!(r1 > Scalar(0)) || !(r2 > Scalar(0))) throw DomainError("circle radii must be positive");
  const Scalar dist = (c2 - c1).norm();
  if (dist == Scalar(0)) {
    if (r1 == r2) throw InfiniteIntersectionError("coincident circles intersect everywhere");
    return {};
  }
  // Heron-style product; 16 x (area of the triangle with sides dist, r1, r2)^2
  Scalar product = (dist + r1 + r2) * (dist + r1 - r2) * (dist - r1 + r2) * (-dist + r1 + r2);
  const Scalar scale = std::max({dist, r1, r2});
  const Scalar tol = tangency_tol * scale * scale * scale * scale;
  if (product < -tol) return {};
  const Scalar l2 = dist * dist;
  const Vector2<Scalar> mid = (c1 + c2) / Scalar(2) + (c2 - c1) * (r1 * r1 - r2 * r2) / (Scalar(2) * l2);
  if (product <= tol) return {mid};
  const Scalar d = Scalar(0.25) * std::sqrt(product);
  const Vector2<Scalar> offset(Scalar(2) * (c1.y() - c2.y()) / l2 * d,
                               Scalar(-2) * (c1.x() - c2.x()) / l2 * d);
  return {mid + offset, mid - offset};
}

/// Triple-overlap area of three radius-R discs on an equilateral triangle of
/// side l (0 <= l <= sqrt(3) R). Same units as R^2.
template <typename Scalar>
Scalar equilateral_coverage_area(Scalar radius, Scalar spacing) {
  using std::sqrt;
  if (!(radius > Scalar(0))) throw DomainError("receiving radius must be positive");
  const Scalar limit = sqrt(Scalar(3)) * radius;
  if (spacing < Scalar(0) || spacing > limit * (Scalar(1) + Scalar(1e-12)))
    throw DomainError("spacing must lie in [0, sqrt(3) R]");
  spacing = std::min(spacing, limit);
  const Scalar r2 = radius * radius;
  // chord between neighbouring intersection points
  const Scalar chord = std::max(Scalar(0), Scalar(0.5) * (sqrt(Scalar(3) * (Scalar(4) * r2 - spacing * spacing)) - spacing));
  const Scalar triangle = Scalar(0.25) * sqrt(Scalar(3)) * chord * chord;
  const Scalar ratio = std::clamp(chord / (Scalar(2) * radius), Scalar(-1), Scalar(1));
  const Scalar segment = r2 * std::asin(ratio) - Scalar(0.25) * chord * sqrt(std::max(Scalar(0), Scalar(4) * r2 - chord * chord));
  return triangle + Scalar(3) * segment;
}

struct ScanPoint {
  double l_over_r = 0.0;
  double coverage_over_r2 = 0.0;
};

struct ScanCurve {
  double alpha = 0.0;
  std::vector<ScanPoint> points;
  ScanPoint best;  // argmax (first one on ties)
};

struct ScanOptions {
  GdopOptions gdop{};
  double absorption = 18.0;  // dB/km; only shapes the TL curve, not the radius
  double seabed_depth = 20.0;
  double receiver_height = 2.0;
  double tag_offset = 1.0;   // tag sits this far below the receivers
  unsigned threads = 1;
};

/// Coverage / R^2 of three receivers on an equilateral triangle of the given
/// side, one value per GDOP threshold (use +inf for no limit).
std::vector<double> equilateral_grid_coverage(double radius, double spacing, const std::vector<double>& alphas,
                                              double cell_size, const ScanOptions& options = {});

/// Coverage of three equilateral receivers on a flat isotropic seabed as a
/// function of spacing, for spacing in [0, sqrt(3) R] split into l_steps
/// intervals. Each point runs the full detection/coverage pipeline on a grid of
/// the given cell size.
ScanCurve spacing_scan(double radius, double alpha, std::size_t l_steps, double cell_size,
                       const ScanOptions& options = {});

/// Several thresholds from one pass over the spacings.
std::vector<ScanCurve> spacing_scan(double radius, const std::vector<double>& alphas, std::size_t l_steps,
                                    double cell_size, const ScanOptions& options = {});

/// Closed-form curve (no GDOP limit) on the same spacing lattice.
ScanCurve analytic_curve(std::size_t l_steps);

}  // namespace rxplan
