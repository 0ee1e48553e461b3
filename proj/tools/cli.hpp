#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rxplan/analytic.hpp"
#include "rxplan/evalharness.hpp"
#include "rxplan/solvers.hpp"

namespace rxplan::cli {

enum class SolverKind { Ga, BruteForce };

struct ScanSettings {
  double radius = 1000.0;
  std::vector<double> alphas{2.0, 5.0, 8.0};
  std::size_t steps = 100;
  double cell_size = 10.0;
};

struct ThroughputSettings {
  TrackSpec track;
  DepthRule tag_rule = FixedDepth{3.0};
  double bin_width = 100.0;
  std::optional<std::filesystem::path> emissions;  // replay a log instead of synthesizing one
};

/// Parsed scenario file. Relative paths are resolved against the file's own
/// directory.
struct Scenario {
  PlanningProblem problem;
  std::optional<SoundVelocityProfile> svp;
  SolverKind solver = SolverKind::Ga;
  GaParams ga;
  std::size_t brute_force_stride = 1;
  std::optional<Deployment> deployment;
  ScanSettings scan;
  ThroughputSettings throughput;
  std::filesystem::path out = "out";
};

Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<GdopFormula> formula;
  std::optional<unsigned> threads;
};

void apply_overrides(Scenario& scenario, const Overrides& o);

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kConstraintUnmet = 2;

int cmd_plan(const Scenario& scenario);
int cmd_compare(const Scenario& scenario);
int cmd_scan(const ScanSettings& scan, const ScanOptions& options, const std::filesystem::path& out);
int cmd_coverage(const Scenario& scenario);
int cmd_throughput(const Scenario& scenario);

/// Full command line entry point; never throws.
int run(int argc, char** argv);

}  // namespace rxplan::cli
