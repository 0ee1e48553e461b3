#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rxplan/propagation.hpp"

namespace rxplan {

/// C_PDAD / C_CP. Throws DivisionError when the baseline covers nothing.
double eta_ratio(double optimized_cells, double baseline_cells);
/// Coverage over usable (no GDOP limit) area.
double theta_ratio(double coverage_cells, double usable_cells);

struct Emission {
  double time = 0.0;  // seconds
  std::uint32_t tag_id = 0;
  Position position;
};

struct EmissionLog {
  std::vector<Emission> records;
};

struct TrackSpec {
  std::vector<Point2> waypoints;
  double speed = 1.0;  // m/s
  double interval_min = 30.0;
  double interval_max = 45.0;
  std::uint32_t tag_id = 1;
  std::uint64_t seed = 1;
};

/// Walks the polyline at constant speed, emitting at t = 0 and then after
/// intervals drawn uniformly from [interval_min, interval_max]. The grid is only
/// needed for seabed-relative tag depths; pass nullptr for fixed depths.
EmissionLog synth_track(const TrackSpec& spec, const DepthRule& depth_rule,
                        const BathymetryGrid* grid = nullptr);

struct ThroughputBin {
  double range = 0.0;  // bin center, meters from the receiver centroid
  double xi2 = 0.0;    // heard by one or two receivers
  double xi3 = 0.0;    // heard by three or more
  std::size_t emissions = 0;
};

struct ThroughputProfile {
  double bin_width = 0.0;
  std::vector<ThroughputBin> bins;
};

ThroughputProfile throughput_profile(const EmissionLog& log, std::span<const Position> receivers,
                                     const PropagationModel& model, const AcousticParams& params,
                                     double bin_width);

std::string emission_log_csv(const EmissionLog& log);
EmissionLog load_emission_log(std::string_view csv);
std::string throughput_csv(const ThroughputProfile& profile);

}  // namespace rxplan
