#pragma once

#include <span>
#include <vector>

#include "rxplan/envgrid.hpp"
#include "rxplan/gdop.hpp"
#include "rxplan/propagation.hpp"

namespace rxplan {

/// beta: receivers that must hear a cell; alpha: GDOP ceiling; rho: fraction of
/// the area of interest that must end up covered.
struct CoverageConfig {
  std::size_t beta = 3;
  double alpha = 5.0;
  double rho = 0.0;
  GdopOptions gdop{};

  void validate() const;
};

struct UsableMask {
  BitGrid usable;
  RealGrid gdop;  // +inf outside the localization area
};

struct CoverageReport {
  BitGrid coverage;       // C
  BitGrid localization;   // cells heard by >= beta receivers
  CountGrid detect_count;
  RealGrid gdop;
  std::size_t coverage_cells = 0;
  std::size_t localization_cells = 0;
  std::size_t aoi_cells = 0;
  std::size_t covered_aoi_cells = 0;  // |C ∩ I|
  double cell_area = 0.0;
  double rho = 0.0;
  bool constraint_met = false;

  double coverage_area() const { return static_cast<double>(coverage_cells) * cell_area; }
  double localization_area() const { return static_cast<double>(localization_cells) * cell_area; }
  double aoi_fraction() const {
    return aoi_cells ? static_cast<double>(covered_aoi_cells) / static_cast<double>(aoi_cells) : 0.0;
  }
};

/// Tag position of every cell, indexed by grid.linear_id(k, l). Nodata cells
/// hold NaN.
std::vector<Position> tag_positions(const BathymetryGrid& grid, const DepthRule& tag_rule);

CountGrid detection_count(std::span<const BitGrid> masks);
BitGrid localization_mask(std::span<const BitGrid> masks, std::size_t beta);

/// GDOP is evaluated per cell over every receiver that hears it. Because the
/// normal matrix only grows as rows are added, this is never worse than any
/// beta-sized subset, so no subset enumeration is needed.
UsableMask usable_mask(const BathymetryGrid& grid, std::span<const BitGrid> masks,
                       std::span<const Position> receivers, const DepthRule& tag_rule,
                       const CoverageConfig& config);

CoverageReport coverage_report(const BathymetryGrid& grid, std::span<const BitGrid> masks,
                               std::span<const Position> receivers, const DepthRule& tag_rule,
                               const AoiMask& aoi, const CoverageConfig& config);

/// Same as coverage_report, for callers that already hold precomputed tag
/// positions and mask pointers (the solvers).
CoverageReport coverage_report(const BathymetryGrid& grid, std::span<const BitGrid* const> masks,
                               std::span<const Position> receivers, std::span<const Position> tags,
                               const AoiMask& aoi, const CoverageConfig& config);

/// Only the counts; skips building the per-cell maps.
struct CoverageCounts {
  std::size_t coverage_cells = 0;
  std::size_t covered_aoi_cells = 0;
  std::size_t localization_cells = 0;
};

CoverageCounts coverage_counts(const BathymetryGrid& grid, std::span<const BitGrid* const> masks,
                               std::span<const Position> receivers, std::span<const Position> tags,
                               const AoiMask& aoi, const CoverageConfig& config);

}  // namespace rxplan
