#include "rxplan/analytic.hpp"

#include <cmath>
#include <limits>

#include "rxplan/coverage.hpp"
#include "rxplan/parallel.hpp"
#include "rxplan/propagation.hpp"

namespace rxplan {

namespace {

double spacing_at(std::size_t i, std::size_t l_steps) {
  return std::sqrt(3.0) * static_cast<double>(i) / static_cast<double>(l_steps);
}

ScanCurve finish(double alpha, std::vector<ScanPoint> points) {
  ScanCurve c{alpha, std::move(points), {}};
  for (const auto& p : c.points)
    if (p.coverage_over_r2 > c.best.coverage_over_r2) c.best = p;
  return c;
}

}  // namespace

std::vector<double> equilateral_grid_coverage(double radius, double spacing, const std::vector<double>& alphas,
                                              double cell_size, const ScanOptions& options) {
  if (!(radius > 0.0) || !(cell_size > 0.0)) throw ValidationError("radius and cell size must be positive");
  if (!(spacing >= 0.0)) throw ValidationError("spacing must be non-negative");
  for (double a : alphas)
    if (!(a > 0.0)) throw ValidationError("GDOP thresholds must be positive");
  const double receiver_z = -(options.seabed_depth - options.receiver_height);
  const double tag_depth = -receiver_z + options.tag_offset;
  if (tag_depth > options.seabed_depth) throw ValidationError("tag offset puts the tag below the seabed");

  AcousticParams acoustic;
  acoustic.absorption = options.absorption;
  acoustic.noise_level = noise_level_for_range(acoustic, std::hypot(radius, options.tag_offset));
  const DepthRule tag_rule = FixedDepth{tag_depth};
  CoverageConfig config;
  config.alpha = std::numeric_limits<double>::infinity();
  config.gdop = options.gdop;

  // centroid at the origin; cell centers symmetric about it
  const double half = radius + spacing / std::sqrt(3.0) + 2.0 * cell_size;
  const auto n = static_cast<Eigen::Index>(std::ceil(2.0 * half / cell_size));
  const double origin = -0.5 * static_cast<double>(n) * cell_size;
  BathymetryGrid grid(RealGrid::Constant(n, n, options.seabed_depth), cell_size, origin, origin, -9999.0);
  const double circum = spacing / std::sqrt(3.0);
  std::vector<Position> receivers;
  std::vector<BitGrid> masks;
  for (int v = 0; v < 3; ++v) {
    double theta = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * v / 3.0;
    receivers.emplace_back(circum * std::cos(theta), circum * std::sin(theta), receiver_z);
    masks.push_back(detection_mask(IsotropicModel{}, grid, receivers.back(), tag_rule, acoustic,
                                   static_cast<std::size_t>(v)).bits);
  }
  AoiMask everything{BitGrid::Constant(n, n, true), static_cast<std::size_t>(n * n)};
  CoverageReport r = coverage_report(grid, masks, receivers, tag_rule, everything, config);
  const double scale = cell_size * cell_size / (radius * radius);
  std::vector<double> out;
  for (double alpha : alphas)
    out.push_back(static_cast<double>((r.localization && (r.gdop <= alpha)).count()) * scale);
  return out;
}

std::vector<ScanCurve> spacing_scan(double radius, const std::vector<double>& alphas, std::size_t l_steps,
                                    double cell_size, const ScanOptions& options) {
  if (l_steps < 10) throw ValidationError("spacing scan needs at least 10 steps");
  std::vector<std::vector<ScanPoint>> per_alpha(alphas.size(), std::vector<ScanPoint>(l_steps + 1));
  parallel_for(l_steps + 1, options.threads, [&](std::size_t i) {
    const double lr = spacing_at(i, l_steps);
    auto values = equilateral_grid_coverage(radius, lr * radius, alphas, cell_size, options);
    for (std::size_t a = 0; a < alphas.size(); ++a) per_alpha[a][i] = {lr, values[a]};
  });
  std::vector<ScanCurve> out;
  for (std::size_t a = 0; a < alphas.size(); ++a) out.push_back(finish(alphas[a], std::move(per_alpha[a])));
  return out;
}

ScanCurve spacing_scan(double radius, double alpha, std::size_t l_steps, double cell_size,
                       const ScanOptions& options) {
  return spacing_scan(radius, std::vector<double>{alpha}, l_steps, cell_size, options).front();
}

ScanCurve analytic_curve(std::size_t l_steps) {
  if (l_steps < 10) throw ValidationError("spacing scan needs at least 10 steps");
  std::vector<ScanPoint> points;
  for (std::size_t i = 0; i <= l_steps; ++i) {
    double lr = spacing_at(i, l_steps);
    points.push_back({lr, equilateral_coverage_area(1.0, lr)});
  }
  return finish(std::numeric_limits<double>::infinity(), std::move(points));
}

}  // namespace rxplan
