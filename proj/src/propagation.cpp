#include "rxplan/propagation.hpp"

#include <fmt/format.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace rxplan {

void AcousticParams::validate() const {
  if (!(absorption >= 0.0)) throw ValidationError("absorption must be non-negative");
  if (std::isnan(detection_threshold)) throw ValidationError("detection threshold must be a number");
  if (!std::isfinite(source_level) || !std::isfinite(noise_level))
    throw ValidationError("source and noise levels must be finite");
}

double isotropic_loss(double range_m, double absorption_db_per_km) {
  return 10.0 * std::log10(range_m) + absorption_db_per_km * range_m / 1000.0;
}

namespace {

bool path_blocked(const BathymetryGrid& grid, const Position& a, const Position& b) {
  Eigen::Vector2d horizontal = (b - a).head<2>();
  double len = horizontal.norm();
  double step = grid.cell_size() / 2.0;
  auto samples = static_cast<int>(std::floor(len / step));
  for (int i = 1; i <= samples; ++i) {
    double t = static_cast<double>(i) * step / len;
    if (t >= 1.0) break;
    Position p = a + t * (b - a);
    if (p.z() < -grid.seabed_depth_at(p.x(), p.y()) - 1e-9) return true;
  }
  return false;
}

struct LossVisitor {
  const Position& src;
  const Position& rcv;
  const AcousticParams& params;
  double range;

  double operator()(const IsotropicModel&) const { return isotropic_loss(range, params.absorption); }

  double operator()(const TerrainOccludedModel& m) const {
    if (!m.grid) throw ValidationError("terrain-occluded model has no bathymetry");
    if (path_blocked(*m.grid, src, rcv)) return kInfiniteLoss;
    return isotropic_loss(range, params.absorption);
  }

  double operator()(const ImportedFieldModel& m) const {
    if (!m.grid) throw ValidationError("imported TL field has no bathymetry");
    auto rc = m.grid->position_to_index(rcv.x(), rcv.y());
    auto sc = m.grid->position_to_index(src.x(), src.y());
    if (!rc || !sc) throw OutOfBoundsError("imported TL lookup outside the grid");
    auto table = m.tables.find(m.grid->linear_id(rc->k, rc->l));
    if (table == m.tables.end())
      throw MissingTlError(fmt::format("no TL table for receiver cell ({}, {})", rc->k, rc->l));
    auto hit = table->second.find(m.grid->linear_id(sc->k, sc->l));
    return hit == table->second.end() ? kInfiniteLoss : hit->second;
  }
};

}  // namespace

double transmission_loss(const PropagationModel& model, const Position& src, const Position& rcv,
                         const AcousticParams& params) {
  double range = (src - rcv).norm();
  if (!(range > 0.0)) throw DegenerateRangeError("source and receiver coincide");
  return std::visit(LossVisitor{src, rcv, params, range}, model);
}

double received_snr(const AcousticParams& params, double tl) {
  if (tl == kInfiniteLoss) return -std::numeric_limits<double>::infinity();
  return params.source_level - tl - params.noise_level;
}

bool is_detected(const PropagationModel& model, const Position& tag, const Position& rcv,
                 const AcousticParams& params) {
  if ((tag - rcv).norm() == 0.0) return true;  // co-located: zero range
  return received_snr(params, transmission_loss(model, tag, rcv, params)) >= params.detection_threshold;
}

DetectionMask detection_mask(const PropagationModel& model, const BathymetryGrid& grid,
                             const Position& rcv, const DepthRule& tag_rule,
                             const AcousticParams& params, std::size_t receiver_id) {
  if (!grid.in_bounds(rcv.x(), rcv.y()))
    throw OutOfBoundsError(fmt::format("receiver ({}, {}) outside the grid", rcv.x(), rcv.y()));
  DetectionMask out{BitGrid::Constant(grid.n_cols(), grid.n_rows(), false), receiver_id};
  for (std::size_t l = 0; l < grid.n_rows(); ++l)
    for (std::size_t k = 0; k < grid.n_cols(); ++k) {
      if (grid.is_nodata(k, l)) continue;
      Position tag = index_to_position(grid, k, l, tag_rule).position;
      out.bits(k, l) = is_detected(model, tag, rcv, params);
    }
  return out;
}

double noise_level_for_range(const AcousticParams& params, double range_m) {
  return params.source_level - params.detection_threshold - isotropic_loss(range_m, params.absorption);
}

ImportedFieldModel load_tl_field(std::string_view csv, std::shared_ptr<const BathymetryGrid> grid) {
  if (!grid) throw ValidationError("imported TL field needs a bathymetry grid");
  ImportedFieldModel model{grid, {}};
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    if (fields.size() != 4) throw ParseError(fmt::format("TL field line {}: expected 4 columns", line_no));
    try {
      auto rid = static_cast<std::size_t>(std::stoull(fields[0]));
      auto k = static_cast<std::size_t>(std::stoull(fields[1]));
      auto l = static_cast<std::size_t>(std::stoull(fields[2]));
      double tl = std::stod(fields[3]);
      if (k >= grid->n_cols() || l >= grid->n_rows() || rid >= grid->cell_count())
        throw OutOfBoundsError(fmt::format("TL field line {}: cell outside the grid", line_no));
      model.tables[rid][grid->linear_id(k, l)] = tl;
    } catch (const std::invalid_argument&) {
      if (line_no == 1) continue;  // header
      throw ParseError(fmt::format("TL field line {}: non-numeric value", line_no));
    } catch (const std::out_of_range&) {
      throw ParseError(fmt::format("TL field line {}: value out of range", line_no));
    }
  }
  return model;
}

}  // namespace rxplan
