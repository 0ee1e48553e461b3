#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <variant>

#include "rxplan/envgrid.hpp"

namespace rxplan {

/// Levels in dB. source_level is dB re 1 uPa @ 1 m; the detection threshold is
/// the SNR floor a receiver needs to decode an emission.
struct AcousticParams {
  double source_level = 158.0;
  double noise_level = 100.0;
  double detection_threshold = 10.0;
  double absorption = 18.0;  // dB/km
  double frequency = 69.0;   // kHz, informational

  void validate() const;
};

/// Spherical spreading plus linear absorption: 10 log10(R) + a R / 1000.
struct IsotropicModel {};

/// Isotropic loss, but any path that dips under the seabed is blocked. This is a
/// crude stand-in for ray tracing: the straight segment is sampled every half
/// cell and compared with the bilinear seabed.
struct TerrainOccludedModel {
  std::shared_ptr<const BathymetryGrid> grid;
};

/// Externally computed loss, one table per receiver cell. Keys are the
/// receiver's cell linear id; each table maps source cell linear id -> TL.
/// Source cells absent from a receiver's table are not detectable.
struct ImportedFieldModel {
  std::shared_ptr<const BathymetryGrid> grid;
  std::unordered_map<std::size_t, std::unordered_map<std::size_t, double>> tables;
};

using PropagationModel = std::variant<IsotropicModel, TerrainOccludedModel, ImportedFieldModel>;

/// Parses `receiver_id,k,l,tl_db` rows (header optional). receiver_id is the
/// receiver cell's linear id (l * n_cols + k).
ImportedFieldModel load_tl_field(std::string_view csv, std::shared_ptr<const BathymetryGrid> grid);

constexpr double kInfiniteLoss = std::numeric_limits<double>::infinity();

double isotropic_loss(double range_m, double absorption_db_per_km);

/// Transmission loss in dB between src and rcv; +inf when the path is blocked
/// or (imported field) not listed.
double transmission_loss(const PropagationModel& model, const Position& src, const Position& rcv,
                         const AcousticParams& params);

/// SL - TL - NL, -inf for a blocked path.
double received_snr(const AcousticParams& params, double tl);

bool is_detected(const PropagationModel& model, const Position& tag, const Position& rcv,
                 const AcousticParams& params);

struct DetectionMask {
  BitGrid bits;
  std::size_t receiver_id = 0;
};

/// Cells whose tag position (per tag_rule) is heard by a receiver at rcv.
DetectionMask detection_mask(const PropagationModel& model, const BathymetryGrid& grid,
                             const Position& rcv, const DepthRule& tag_rule,
                             const AcousticParams& params, std::size_t receiver_id = 0);

/// Noise level that puts the detection edge of the isotropic model at range_m.
double noise_level_for_range(const AcousticParams& params, double range_m);

}  // namespace rxplan
