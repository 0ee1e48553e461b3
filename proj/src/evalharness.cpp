#include "rxplan/evalharness.hpp"

#include <fmt/format.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace rxplan {

double eta_ratio(double optimized_cells, double baseline_cells) {
  if (!(baseline_cells > 0.0)) throw DivisionError("CP coverage empty");
  return optimized_cells / baseline_cells;
}

double theta_ratio(double coverage_cells, double usable_cells) {
  if (!(usable_cells > 0.0)) throw DivisionError("usable area empty");
  return coverage_cells / usable_cells;
}

EmissionLog synth_track(const TrackSpec& spec, const DepthRule& depth_rule, const BathymetryGrid* grid) {
  if (spec.waypoints.size() < 2) throw ValidationError("a track needs at least two waypoints");
  if (!(spec.speed > 0.0)) throw ValidationError("track speed must be positive");
  if (!(spec.interval_min > 0.0) || spec.interval_min > spec.interval_max)
    throw ValidationError("emission interval must satisfy 0 < min <= max");
  if (!grid && std::holds_alternative<SeabedOffset>(depth_rule))
    throw ValidationError("seabed-relative tag depth needs a bathymetry grid");

  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < spec.waypoints.size(); ++i)
    cumulative.push_back(cumulative.back() + (spec.waypoints[i] - spec.waypoints[i - 1]).norm());
  const double length = cumulative.back();
  if (!(length > 0.0)) throw ValidationError("track has zero length");
  const double duration = length / spec.speed;

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> interval(spec.interval_min, spec.interval_max);
  EmissionLog log;
  std::size_t segment = 1;
  // accumulated step sum; tolerance keeps exact-multiple endpoints
  for (double t = 0.0; t <= duration * (1.0 + 1e-12);) {
    double s = std::min(t * spec.speed, length);
    while (segment + 1 < cumulative.size() && s > cumulative[segment]) ++segment;
    const Point2& a = spec.waypoints[segment - 1];
    const Point2& b = spec.waypoints[segment];
    double seg_len = cumulative[segment] - cumulative[segment - 1];
    double u = seg_len > 0.0 ? (s - cumulative[segment - 1]) / seg_len : 0.0;
    Point2 xy = a + u * (b - a);
    double z = 0.0;
    if (grid) {
      z = place_at(*grid, xy.x(), xy.y(), depth_rule).position.z();
    } else {
      z = -std::get<FixedDepth>(depth_rule).depth;
    }
    log.records.push_back({t, spec.tag_id, Position(xy.x(), xy.y(), z)});
    t += spec.interval_min == spec.interval_max ? spec.interval_min : interval(rng);
  }
  return log;
}

ThroughputProfile throughput_profile(const EmissionLog& log, std::span<const Position> receivers,
                                     const PropagationModel& model, const AcousticParams& params,
                                     double bin_width) {
  if (log.records.empty()) throw EmptyLogError("emission log is empty");
  if (receivers.empty()) throw ValidationError("no receivers");
  if (!(bin_width > 0.0)) throw ValidationError("bin width must be positive");
  Point2 centroid = Point2::Zero();
  for (const auto& r : receivers) centroid += r.head<2>();
  centroid /= static_cast<double>(receivers.size());

  struct Tally {
    std::size_t total = 0, low = 0, high = 0;
  };
  std::map<std::size_t, Tally> tallies;
  for (const auto& e : log.records) {
    std::size_t heard = 0;
    for (const auto& r : receivers)
      if (is_detected(model, e.position, r, params)) ++heard;
    auto bin = static_cast<std::size_t>(std::floor((e.position.head<2>() - centroid).norm() / bin_width));
    Tally& t = tallies[bin];
    ++t.total;
    if (heard >= 3)
      ++t.high;
    else if (heard >= 1)
      ++t.low;
  }
  ThroughputProfile out{bin_width, {}};
  const std::size_t last = tallies.rbegin()->first;
  for (std::size_t b = 0; b <= last; ++b) {
    ThroughputBin bin{(static_cast<double>(b) + 0.5) * bin_width, 0.0, 0.0, 0};
    if (auto it = tallies.find(b); it != tallies.end()) {
      bin.emissions = it->second.total;
      bin.xi2 = static_cast<double>(it->second.low) / static_cast<double>(it->second.total);
      bin.xi3 = static_cast<double>(it->second.high) / static_cast<double>(it->second.total);
    }
    out.bins.push_back(bin);
  }
  return out;
}

std::string emission_log_csv(const EmissionLog& log) {
  std::string out = "time_s,tag_id,x,y,z\n";
  for (const auto& e : log.records)
    out += fmt::format("{},{},{},{},{}\n", e.time, e.tag_id, e.position.x(), e.position.y(), e.position.z());
  return out;
}

EmissionLog load_emission_log(std::string_view csv) {
  EmissionLog log;
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string s; std::getline(ls, s, ',');) f.push_back(s);
    if (f.size() != 5) throw ParseError(fmt::format("emission log line {}: expected 5 columns", line_no));
    try {
      Emission e{std::stod(f[0]), static_cast<std::uint32_t>(std::stoul(f[1])),
                 Position(std::stod(f[2]), std::stod(f[3]), std::stod(f[4]))};
      log.records.push_back(e);
    } catch (const std::exception&) {
      if (line_no == 1) continue;
      throw ParseError(fmt::format("emission log line {}: non-numeric value", line_no));
    }
  }
  return log;
}

std::string throughput_csv(const ThroughputProfile& profile) {
  std::string out = "range_m,xi2,xi3,count\n";
  for (const auto& b : profile.bins) out += fmt::format("{},{},{},{}\n", b.range, b.xi2, b.xi3, b.emissions);
  return out;
}

}  // namespace rxplan
