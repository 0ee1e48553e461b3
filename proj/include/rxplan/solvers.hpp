#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "rxplan/coverage.hpp"
#include "rxplan/propagation.hpp"

namespace rxplan {

/// Receiver (x, y) positions; z follows the receiver depth rule of the problem.
struct Deployment {
  std::vector<Point2> positions;

  std::size_t size() const { return positions.size(); }
};

/// Everything that defines one placement problem.
struct PlanningProblem {
  std::shared_ptr<const BathymetryGrid> grid;
  PropagationModel model = IsotropicModel{};
  AcousticParams acoustic{};
  DepthRule receiver_rule = SeabedOffset{0.5};
  DepthRule tag_rule = FixedDepth{3.0};
  AoiMask aoi;
  CoverageConfig coverage{};
  std::size_t receivers = 3;
  double penalty_weight = 10.0;  // per uncovered AOI cell below rho
};

/// Evaluates deployments on the problem lattice. Detection masks are computed
/// once per receiver cell and shared between threads.
class CoverageEvaluator {
 public:
  explicit CoverageEvaluator(PlanningProblem problem);

  const PlanningProblem& problem() const { return problem_; }
  const BathymetryGrid& grid() const { return *problem_.grid; }

  const BitGrid& mask_for_cell(std::size_t cell_id) const;
  Position receiver_position(std::size_t cell_id) const;
  std::span<const Position> tags() const { return tags_; }

  /// Valid (non-nodata) cells in (k, l) lexicographic order.
  const std::vector<std::size_t>& valid_cells() const { return valid_cells_; }
  /// Nearest valid cell to a point (clipped to the grid first).
  std::size_t nearest_valid_cell(const Point2& p) const;
  /// Containing cell; throws ValidationError outside the grid or on nodata.
  std::size_t cell_of(const Point2& p) const;

  double fitness_of_cells(std::span<const std::size_t> cells) const;
  CoverageReport report_of_cells(std::span<const std::size_t> cells) const;

  std::vector<std::size_t> cells_of(const Deployment& d) const;
  Deployment deployment_of(std::span<const std::size_t> cells) const;
  std::vector<Position> receiver_positions(const Deployment& d) const;

 private:
  PlanningProblem problem_;
  std::vector<Position> tags_;
  std::vector<std::size_t> valid_cells_;
  mutable std::vector<std::unique_ptr<BitGrid>> masks_;
  mutable std::unique_ptr<std::once_flag[]> mask_once_;
};

/// Equilateral-triangle lattice centered on the area-of-interest centroid; the
/// n vertices nearest the centroid, snapped to valid cell centers.
Deployment cp_layout(const BathymetryGrid& grid, const AoiMask& aoi, std::size_t n, double spacing);

/// |C| - penalty_weight * max(0, rho |I| - |C ∩ I|), all in cells.
double fitness(const CoverageEvaluator& evaluator, const Deployment& deployment);
CoverageReport evaluate_deployment(const CoverageEvaluator& evaluator, const Deployment& deployment);

struct GaParams {
  std::size_t population = 64;
  std::size_t generations = 1000;
  double crossover_rate = 0.9;
  double mutation_rate = 0.2;
  double mutation_sigma = 0.0;  // meters; <= 0 means two cell sizes
  std::size_t tournament_size = 3;
  std::size_t elitism = 2;
  std::uint64_t seed = 1;
  double cp_spacing = 500.0;  // seed the population with a CP layout; <= 0 disables
  unsigned threads = 1;

  void validate() const;
};

struct GenerationStats {
  std::size_t generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
};

struct GaResult {
  Deployment best;
  double best_fitness = 0.0;
  double initial_best_fitness = 0.0;
  std::vector<GenerationStats> trace;
};

GaResult ga_optimize(const CoverageEvaluator& evaluator, const GaParams& params);

struct BruteForceResult {
  Deployment best;
  double best_fitness = 0.0;
  std::uint64_t evaluated = 0;
};

inline constexpr std::uint64_t kBruteForceBudget = 10'000'000;

BruteForceResult brute_force_optimize(const CoverageEvaluator& evaluator, std::size_t stride,
                                      unsigned threads = 1);

/// Exact binomial coefficient, saturating at UINT64_MAX.
std::uint64_t combinations(std::uint64_t n, std::uint64_t k);

}  // namespace rxplan
