#include "rxplan/coverage.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace rxplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_shapes(const BathymetryGrid& grid, std::span<const BitGrid* const> masks) {
  for (const BitGrid* m : masks)
    if (static_cast<std::size_t>(m->rows()) != grid.n_cols() ||
        static_cast<std::size_t>(m->cols()) != grid.n_rows())
      throw ShapeError(fmt::format("mask is {}x{}, grid is {}x{}", m->rows(), m->cols(),
                                   grid.n_cols(), grid.n_rows()));
}

std::vector<const BitGrid*> pointers(std::span<const BitGrid> masks) {
  std::vector<const BitGrid*> out;
  out.reserve(masks.size());
  for (const auto& m : masks) out.push_back(&m);
  return out;
}

double cell_gdop(const Position& tag, std::span<const Position> heard, const GdopOptions& options) {
  if (heard.size() < kMinGdopReceivers) return kInf;
  try {
    return gdop_value<double>(tag, heard, options).value;
  } catch (const DegenerateGeometryError&) {
    return kInf;
  }
}

// Visits every valid cell with its detecting receivers; f(k, l, count, gdop).
template <typename F>
void scan_cells(const BathymetryGrid& grid, std::span<const BitGrid* const> masks,
                std::span<const Position> receivers, std::span<const Position> tags,
                const CoverageConfig& config, F&& f) {
  if (masks.size() != receivers.size())
    throw ShapeError("one detection mask per receiver is required");
  check_shapes(grid, masks);
  std::vector<Position> heard;
  heard.reserve(receivers.size());
  for (std::size_t l = 0; l < grid.n_rows(); ++l)
    for (std::size_t k = 0; k < grid.n_cols(); ++k) {
      heard.clear();
      for (std::size_t i = 0; i < masks.size(); ++i)
        if ((*masks[i])(k, l)) heard.push_back(receivers[i]);
      double g = kInf;
      if (heard.size() >= config.beta && !grid.is_nodata(k, l))
        g = cell_gdop(tags[grid.linear_id(k, l)], heard, config.gdop);
      f(k, l, heard.size(), g);
    }
}

}  // namespace

void CoverageConfig::validate() const {
  if (beta < 2) throw ValidationError("beta must be at least 2");
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ValidationError("rho must lie in [0, 1]");
}

std::vector<Position> tag_positions(const BathymetryGrid& grid, const DepthRule& tag_rule) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<Position> out(grid.cell_count(), Position::Constant(nan));
  for (std::size_t l = 0; l < grid.n_rows(); ++l)
    for (std::size_t k = 0; k < grid.n_cols(); ++k)
      if (!grid.is_nodata(k, l))
        out[grid.linear_id(k, l)] = index_to_position(grid, k, l, tag_rule).position;
  return out;
}

CountGrid detection_count(std::span<const BitGrid> masks) {
  if (masks.empty()) throw ShapeError("no detection masks");
  CountGrid count = CountGrid::Zero(masks[0].rows(), masks[0].cols());
  for (const auto& m : masks) {
    if (m.rows() != count.rows() || m.cols() != count.cols())
      throw ShapeError("detection masks differ in shape");
    count += m.cast<int>();
  }
  return count;
}

BitGrid localization_mask(std::span<const BitGrid> masks, std::size_t beta) {
  if (beta == 0) throw ValidationError("beta must be at least 1");
  return detection_count(masks) >= static_cast<int>(beta);
}

UsableMask usable_mask(const BathymetryGrid& grid, std::span<const BitGrid> masks,
                       std::span<const Position> receivers, const DepthRule& tag_rule,
                       const CoverageConfig& config) {
  auto ptrs = pointers(masks);
  auto tags = tag_positions(grid, tag_rule);
  UsableMask out{BitGrid::Constant(grid.n_cols(), grid.n_rows(), false),
                 RealGrid::Constant(grid.n_cols(), grid.n_rows(), kInf)};
  scan_cells(grid, ptrs, receivers, tags, config, [&](std::size_t k, std::size_t l, std::size_t, double g) {
    out.gdop(k, l) = g;
    out.usable(k, l) = g <= config.alpha;
  });
  return out;
}

CoverageReport coverage_report(const BathymetryGrid& grid, std::span<const BitGrid* const> masks,
                               std::span<const Position> receivers, std::span<const Position> tags,
                               const AoiMask& aoi, const CoverageConfig& config) {
  if (static_cast<std::size_t>(aoi.mask.rows()) != grid.n_cols() ||
      static_cast<std::size_t>(aoi.mask.cols()) != grid.n_rows())
    throw ShapeError("area-of-interest mask does not match the grid");
  CoverageReport r;
  const auto nc = static_cast<Eigen::Index>(grid.n_cols());
  const auto nr = static_cast<Eigen::Index>(grid.n_rows());
  r.coverage = BitGrid::Constant(nc, nr, false);
  r.localization = BitGrid::Constant(nc, nr, false);
  r.detect_count = CountGrid::Zero(nc, nr);
  r.gdop = RealGrid::Constant(nc, nr, kInf);
  scan_cells(grid, masks, receivers, tags, config,
             [&](std::size_t k, std::size_t l, std::size_t count, double g) {
               r.detect_count(k, l) = static_cast<int>(count);
               r.localization(k, l) = count >= config.beta;
               r.gdop(k, l) = g;
               r.coverage(k, l) = r.localization(k, l) && g <= config.alpha;
             });
  r.coverage_cells = static_cast<std::size_t>(r.coverage.count());
  r.localization_cells = static_cast<std::size_t>(r.localization.count());
  r.aoi_cells = aoi.count;
  r.covered_aoi_cells = static_cast<std::size_t>((r.coverage && aoi.mask).count());
  r.cell_area = grid.cell_area();
  r.rho = config.rho;
  r.constraint_met = static_cast<double>(r.covered_aoi_cells) >= config.rho * static_cast<double>(aoi.count);
  return r;
}

CoverageReport coverage_report(const BathymetryGrid& grid, std::span<const BitGrid> masks,
                               std::span<const Position> receivers, const DepthRule& tag_rule,
                               const AoiMask& aoi, const CoverageConfig& config) {
  auto ptrs = pointers(masks);
  auto tags = tag_positions(grid, tag_rule);
  return coverage_report(grid, ptrs, receivers, tags, aoi, config);
}

CoverageCounts coverage_counts(const BathymetryGrid& grid, std::span<const BitGrid* const> masks,
                               std::span<const Position> receivers, std::span<const Position> tags,
                               const AoiMask& aoi, const CoverageConfig& config) {
  CoverageCounts c;
  scan_cells(grid, masks, receivers, tags, config,
             [&](std::size_t k, std::size_t l, std::size_t count, double g) {
               if (count < config.beta) return;
               ++c.localization_cells;
               if (g <= config.alpha) {
                 ++c.coverage_cells;
                 if (aoi.mask(k, l)) ++c.covered_aoi_cells;
               }
             });
  return c;
}

}  // namespace rxplan
