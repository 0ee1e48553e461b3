#include "rxplan/solvers.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "rxplan/parallel.hpp"

namespace rxplan {

namespace {

std::vector<std::size_t> unique_sorted(std::span<const std::size_t> cells) {
  std::vector<std::size_t> out(cells.begin(), cells.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Point2 clip_to_grid(const BathymetryGrid& g, Point2 p) {
  double eps = 1e-9 * g.cell_size();
  p.x() = std::clamp(p.x(), g.origin_x(), g.origin_x() + g.width() - eps);
  p.y() = std::clamp(p.y(), g.origin_y(), g.origin_y() + g.height() - eps);
  return p;
}

}  // namespace

CoverageEvaluator::CoverageEvaluator(PlanningProblem problem) : problem_(std::move(problem)) {
  if (!problem_.grid) throw ValidationError("planning problem has no bathymetry");
  problem_.acoustic.validate();
  problem_.coverage.validate();
  if (problem_.receivers < problem_.coverage.beta)
    throw ValidationError(fmt::format("{} receivers cannot reach beta = {}", problem_.receivers,
                                      problem_.coverage.beta));
  if (!(problem_.penalty_weight >= 0.0)) throw ValidationError("penalty weight must be non-negative");
  const auto& g = *problem_.grid;
  if (static_cast<std::size_t>(problem_.aoi.mask.rows()) != g.n_cols() ||
      static_cast<std::size_t>(problem_.aoi.mask.cols()) != g.n_rows())
    throw ShapeError("area-of-interest mask does not match the grid");
  tags_ = tag_positions(g, problem_.tag_rule);
  for (std::size_t k = 0; k < g.n_cols(); ++k)
    for (std::size_t l = 0; l < g.n_rows(); ++l)
      if (!g.is_nodata(k, l)) valid_cells_.push_back(g.linear_id(k, l));
  if (valid_cells_.empty()) throw ValidationError("grid has no valid cells");
  masks_.resize(g.cell_count());
  mask_once_ = std::make_unique<std::once_flag[]>(g.cell_count());
}

const BitGrid& CoverageEvaluator::mask_for_cell(std::size_t cell_id) const {
  std::call_once(mask_once_[cell_id], [&] {
    masks_[cell_id] = std::make_unique<BitGrid>(
        detection_mask(problem_.model, grid(), receiver_position(cell_id), problem_.tag_rule,
                       problem_.acoustic, cell_id)
            .bits);
  });
  return *masks_[cell_id];
}

Position CoverageEvaluator::receiver_position(std::size_t cell_id) const {
  CellIndex c = grid().from_linear_id(cell_id);
  return index_to_position(grid(), c.k, c.l, problem_.receiver_rule).position;
}

std::size_t CoverageEvaluator::nearest_valid_cell(const Point2& p) const {
  const auto& g = grid();
  Point2 q = clip_to_grid(g, p);
  CellIndex c0 = *g.position_to_index(q.x(), q.y());
  if (!g.is_nodata(c0.k, c0.l)) return g.linear_id(c0.k, c0.l);
  // expanding square rings around the containing cell
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_id = 0;
  const auto nc = static_cast<long>(g.n_cols());
  const auto nr = static_cast<long>(g.n_rows());
  const long max_ring = std::max(nc, nr);
  for (long r = 1; r <= max_ring; ++r) {
    if (static_cast<double>(r) * g.cell_size() - g.cell_size() * std::numbers::sqrt2 / 2 > best) break;
    for (long dl = -r; dl <= r; ++dl)
      for (long dk = -r; dk <= r; ++dk) {
        if (std::max(std::labs(dk), std::labs(dl)) != r) continue;
        long k = static_cast<long>(c0.k) + dk;
        long l = static_cast<long>(c0.l) + dl;
        if (k < 0 || l < 0 || k >= nc || l >= nr) continue;
        auto ku = static_cast<std::size_t>(k);
        auto lu = static_cast<std::size_t>(l);
        if (g.is_nodata(ku, lu)) continue;
        double d = (g.cell_center(ku, lu) - q).norm();
        std::size_t id = g.linear_id(ku, lu);
        if (d < best || (d == best && id < best_id)) {
          best = d;
          best_id = id;
        }
      }
  }
  if (!std::isfinite(best)) throw InitError("no valid cell to snap to");
  return best_id;
}

std::size_t CoverageEvaluator::cell_of(const Point2& p) const {
  auto idx = grid().position_to_index(p.x(), p.y());
  if (!idx) throw ValidationError(fmt::format("receiver ({}, {}) outside the grid", p.x(), p.y()));
  if (grid().is_nodata(idx->k, idx->l))
    throw ValidationError(fmt::format("receiver ({}, {}) on a nodata cell", p.x(), p.y()));
  return grid().linear_id(idx->k, idx->l);
}

double CoverageEvaluator::fitness_of_cells(std::span<const std::size_t> cells) const {
  auto ids = unique_sorted(cells);
  std::vector<const BitGrid*> masks;
  std::vector<Position> receivers;
  masks.reserve(ids.size());
  receivers.reserve(ids.size());
  for (std::size_t id : ids) {
    masks.push_back(&mask_for_cell(id));
    receivers.push_back(receiver_position(id));
  }
  CoverageCounts c = coverage_counts(grid(), masks, receivers, tags_, problem_.aoi, problem_.coverage);
  double required = problem_.coverage.rho * static_cast<double>(problem_.aoi.count);
  double deficit = std::max(0.0, required - static_cast<double>(c.covered_aoi_cells));
  return static_cast<double>(c.coverage_cells) - problem_.penalty_weight * deficit;
}

CoverageReport CoverageEvaluator::report_of_cells(std::span<const std::size_t> cells) const {
  auto ids = unique_sorted(cells);
  std::vector<const BitGrid*> masks;
  std::vector<Position> receivers;
  for (std::size_t id : ids) {
    masks.push_back(&mask_for_cell(id));
    receivers.push_back(receiver_position(id));
  }
  return coverage_report(grid(), masks, receivers, tags_, problem_.aoi, problem_.coverage);
}

std::vector<std::size_t> CoverageEvaluator::cells_of(const Deployment& d) const {
  std::vector<std::size_t> out;
  out.reserve(d.size());
  for (const auto& p : d.positions) out.push_back(cell_of(p));
  return out;
}

Deployment CoverageEvaluator::deployment_of(std::span<const std::size_t> cells) const {
  Deployment d;
  for (std::size_t id : cells) {
    CellIndex c = grid().from_linear_id(id);
    d.positions.push_back(grid().cell_center(c.k, c.l));
  }
  return d;
}

std::vector<Position> CoverageEvaluator::receiver_positions(const Deployment& d) const {
  std::vector<Position> out;
  for (std::size_t id : cells_of(d)) out.push_back(receiver_position(id));
  return out;
}

double fitness(const CoverageEvaluator& evaluator, const Deployment& deployment) {
  return evaluator.fitness_of_cells(evaluator.cells_of(deployment));
}

CoverageReport evaluate_deployment(const CoverageEvaluator& evaluator, const Deployment& deployment) {
  return evaluator.report_of_cells(evaluator.cells_of(deployment));
}

// ---------------------------------------------------------------------------
// Common-practice layout

Deployment cp_layout(const BathymetryGrid& grid, const AoiMask& aoi, std::size_t n, double spacing) {
  if (n < 3) throw ValidationError("CP layout needs at least three receivers");
  if (!(spacing > 0.0)) throw ValidationError("CP spacing must be positive");
  const Point2 center = aoi_centroid(grid, aoi);
  const Point2 e1(spacing, 0.0);
  const Point2 e2(spacing / 2.0, spacing * std::sqrt(3.0) / 2.0);
  const double span = std::hypot(grid.width(), grid.height());
  const long reach = static_cast<long>(std::ceil(span / (spacing * std::sqrt(3.0) / 2.0))) + 1;

  struct Candidate {
    double distance;
    double angle;
    std::size_t order;
    std::size_t cell;
  };
  std::vector<Candidate> candidates;
  std::size_t order = 0;
  for (long j = -reach; j <= reach; ++j)
    for (long i = -reach; i <= reach; ++i) {
      Point2 offset = static_cast<double>(i) * e1 + static_cast<double>(j) * e2;
      Point2 p = center + offset;
      std::size_t this_order = order++;
      auto idx = grid.position_to_index(p.x(), p.y());
      if (!idx || grid.is_nodata(idx->k, idx->l)) continue;
      double angle = std::atan2(offset.y(), offset.x());
      if (angle < 0.0) angle += 2.0 * std::numbers::pi;
      candidates.push_back({offset.norm(), angle, this_order, grid.linear_id(idx->k, idx->l)});
    }
  const double tol = 1e-9 * spacing;
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    if (std::abs(a.distance - b.distance) > tol) return a.distance < b.distance;
    if (std::abs(a.angle - b.angle) > 1e-12) return a.angle < b.angle;
    return a.order < b.order;
  });
  Deployment out;
  std::vector<std::size_t> used;
  for (const auto& c : candidates) {
    if (out.size() == n) break;
    if (std::find(used.begin(), used.end(), c.cell) != used.end()) continue;
    used.push_back(c.cell);
    CellIndex ci = grid.from_linear_id(c.cell);
    out.positions.push_back(grid.cell_center(ci.k, ci.l));
  }
  if (out.size() < n)
    throw LayoutError(fmt::format("only {} valid lattice points for {} receivers at {} m spacing",
                                  out.size(), n, spacing));
  return out;
}

// ---------------------------------------------------------------------------
// Genetic algorithm

void GaParams::validate() const {
  if (population < 2) throw ValidationError("GA population must be at least 2");
  if (generations < 1) throw ValidationError("GA needs at least one generation");
  auto rate = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!rate(crossover_rate) || !rate(mutation_rate))
    throw ValidationError("GA rates must lie in [0, 1]");
  if (tournament_size < 1) throw ValidationError("tournament size must be at least 1");
  if (elitism > population) throw ValidationError("elitism exceeds the population");
}

namespace {

using Genome = std::vector<Point2>;

class FitnessCache {
 public:
  FitnessCache(const CoverageEvaluator& ev, unsigned threads) : ev_(ev), threads_(threads) {}

  std::vector<std::size_t> key(const Genome& g) const {
    std::vector<std::size_t> cells;
    cells.reserve(g.size());
    for (const auto& p : g) cells.push_back(ev_.nearest_valid_cell(p));
    return cells;
  }

  /// Fitness of every genome; new keys are evaluated in parallel.
  std::vector<double> evaluate(const std::vector<Genome>& pop) {
    std::vector<std::vector<std::size_t>> keys;
    keys.reserve(pop.size());
    std::vector<std::vector<std::size_t>> pending;
    for (const auto& g : pop) {
      auto k = unique_sorted(key(g));
      if (!cache_.count(k) && std::find(pending.begin(), pending.end(), k) == pending.end())
        pending.push_back(k);
      keys.push_back(std::move(k));
    }
    std::vector<double> values(pending.size());
    parallel_for(pending.size(), threads_, [&](std::size_t i) { values[i] = ev_.fitness_of_cells(pending[i]); });
    for (std::size_t i = 0; i < pending.size(); ++i) cache_.emplace(pending[i], values[i]);
    std::vector<double> out;
    out.reserve(pop.size());
    for (const auto& k : keys) out.push_back(cache_.at(k));
    return out;
  }

 private:
  const CoverageEvaluator& ev_;
  unsigned threads_;
  std::map<std::vector<std::size_t>, double> cache_;
};

std::size_t tournament(const std::vector<double>& fit, std::size_t size, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, fit.size() - 1);
  std::size_t best = pick(rng);
  for (std::size_t i = 1; i < size; ++i) {
    std::size_t c = pick(rng);
    if (fit[c] > fit[best] || (fit[c] == fit[best] && c < best)) best = c;
  }
  return best;
}

}  // namespace

GaResult ga_optimize(const CoverageEvaluator& evaluator, const GaParams& params) {
  params.validate();
  const auto& problem = evaluator.problem();
  const auto& grid = evaluator.grid();
  const std::size_t n = problem.receivers;
  const double sigma = params.mutation_sigma > 0.0 ? params.mutation_sigma : 2.0 * grid.cell_size();

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> jitter(0.0, sigma);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Centroid individual, snapped to a valid cell.
  std::size_t center_cell = evaluator.nearest_valid_cell(aoi_centroid(grid, problem.aoi));
  CellIndex cc = grid.from_linear_id(center_cell);
  const Point2 center = grid.cell_center(cc.k, cc.l);

  std::vector<Genome> pop;
  pop.reserve(params.population);
  pop.emplace_back(n, center);
  if (params.cp_spacing > 0.0 && pop.size() < params.population) {
    try {
      pop.push_back(cp_layout(grid, problem.aoi, n, params.cp_spacing).positions);
    } catch (const LayoutError&) {
      // CP does not fit on this grid; the population is filled with jitter instead
    }
  }
  while (pop.size() < params.population) {
    Genome g(n);
    for (auto& p : g) p = clip_to_grid(grid, center + Point2(jitter(rng), jitter(rng)));
    pop.push_back(std::move(g));
  }

  FitnessCache cache(evaluator, params.threads);
  std::vector<double> fit = cache.evaluate(pop);

  GaResult result;
  auto best_it = std::max_element(fit.begin(), fit.end());
  std::size_t best_idx = static_cast<std::size_t>(best_it - fit.begin());
  Genome best = pop[best_idx];
  double best_fit = *best_it;
  result.initial_best_fitness = best_fit;

  auto record = [&](std::size_t gen) {
    double mean = 0.0;
    for (double f : fit) mean += f;
    result.trace.push_back({gen, best_fit, mean / static_cast<double>(fit.size())});
  };
  record(0);

  std::vector<std::size_t> order(pop.size());
  for (std::size_t gen = 1; gen <= params.generations; ++gen) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });

    std::vector<Genome> next;
    next.reserve(params.population);
    for (std::size_t e = 0; e < params.elitism; ++e) next.push_back(pop[order[e]]);
    while (next.size() < params.population) {
      const Genome& a = pop[tournament(fit, params.tournament_size, rng)];
      const Genome& b = pop[tournament(fit, params.tournament_size, rng)];
      Genome child = a;
      if (unit(rng) < params.crossover_rate)
        for (std::size_t j = 0; j < n; ++j)
          if (unit(rng) < 0.5) child[j] = b[j];
      for (auto& p : child)
        if (unit(rng) < params.mutation_rate) p = clip_to_grid(grid, p + Point2(jitter(rng), jitter(rng)));
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    fit = cache.evaluate(pop);
    for (std::size_t i = 0; i < fit.size(); ++i)
      if (fit[i] > best_fit) {
        best_fit = fit[i];
        best = pop[i];
      }
    record(gen);
  }

  std::vector<std::size_t> cells = cache.key(best);
  result.best = evaluator.deployment_of(cells);
  result.best_fitness = best_fit;
  return result;
}

// ---------------------------------------------------------------------------
// Exhaustive search

std::uint64_t combinations(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

namespace {

std::vector<std::size_t> strided_candidates(const CoverageEvaluator& ev, std::size_t stride) {
  std::vector<std::size_t> out;
  for (std::size_t id : ev.valid_cells()) {
    CellIndex c = ev.grid().from_linear_id(id);
    if (c.k % stride == 0 && c.l % stride == 0) out.push_back(id);
  }
  return out;
}

// Advances idx to the next k-combination of [0, n) in lexicographic order,
// keeping idx[0] fixed; returns false when exhausted.
bool next_tail(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t pos = k; pos-- > 1;) {
    if (idx[pos] < n - (k - pos)) {
      ++idx[pos];
      for (std::size_t q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

BruteForceResult brute_force_optimize(const CoverageEvaluator& evaluator, std::size_t stride,
                                      unsigned threads) {
  if (stride < 1) throw ValidationError("stride must be at least 1");
  const std::size_t n_rx = evaluator.problem().receivers;
  auto candidates = strided_candidates(evaluator, stride);
  if (n_rx > candidates.size())
    throw ValidationError(fmt::format("{} receivers but only {} candidate cells", n_rx, candidates.size()));
  std::uint64_t total = combinations(candidates.size(), n_rx);
  if (total > kBruteForceBudget) {
    std::size_t s = stride;
    while (combinations(strided_candidates(evaluator, s).size(), n_rx) > kBruteForceBudget) ++s;
    throw BudgetError(fmt::format("{} combinations exceed the budget of {}; use stride >= {}", total,
                                  kBruteForceBudget, s));
  }

  struct Best {
    double fitness = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> combo;  // candidate indices
    bool set = false;
  };
  const std::size_t n_first = candidates.size() - n_rx + 1;
  std::vector<Best> per_first(n_first);
  parallel_for(n_first, threads, [&](std::size_t first) {
    std::vector<std::size_t> idx(n_rx);
    for (std::size_t q = 0; q < n_rx; ++q) idx[q] = first + q;
    std::vector<std::size_t> cells(n_rx);
    Best& b = per_first[first];
    do {
      for (std::size_t q = 0; q < n_rx; ++q) cells[q] = candidates[idx[q]];
      double f = evaluator.fitness_of_cells(cells);
      if (!b.set || f > b.fitness) {
        b = {f, idx, true};
      }
    } while (next_tail(idx, candidates.size()));
  });

  // lexicographic order of first indices keeps the earliest maximiser
  Best best;
  for (const auto& b : per_first)
    if (b.set && (!best.set || b.fitness > best.fitness)) best = b;
  BruteForceResult out;
  std::vector<std::size_t> cells;
  for (std::size_t q : best.combo) cells.push_back(candidates[q]);
  out.best = evaluator.deployment_of(cells);
  out.best_fitness = best.fitness;
  out.evaluated = total;
  return out;
}

}  // namespace rxplan
