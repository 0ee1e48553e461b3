#include "cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "rxplan/export.hpp"

namespace rxplan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->get<T>();
}

Point2 point_of(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("points are written as [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

DepthRule depth_rule_of(const json& j) {
  if (j.contains("seabed_offset")) return SeabedOffset{j["seabed_offset"].get<double>()};
  if (j.contains("fixed_depth")) return FixedDepth{j["fixed_depth"].get<double>()};
  throw ParseError("depth rule needs seabed_offset or fixed_depth");
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::shared_ptr<const BathymetryGrid> bathymetry_of(const json& j, const fs::path& base) {
  if (j.contains("bathymetry")) {
    fs::path p = resolve(base, j["bathymetry"].get<std::string>());
    if (!fs::exists(p)) throw ValidationError("bathymetry file not found: " + p.string());
    return std::make_shared<const BathymetryGrid>(load_bathymetry_file(p.string()));
  }
  if (j.contains("flat_seabed")) {
    const json& f = j["flat_seabed"];
    auto cols = f.at("n_cols").get<Eigen::Index>();
    auto rows = f.at("n_rows").get<Eigen::Index>();
    if (cols < 2 || rows < 2) throw ValidationError("flat seabed needs at least 2 x 2 cells");
    double cell = f.at("cell_size").get<double>();
    return std::make_shared<const BathymetryGrid>(
        RealGrid::Constant(cols, rows, f.at("depth").get<double>()), cell, get_or(f, "x_origin", 0.0),
        get_or(f, "y_origin", 0.0), -9999.0);
  }
  throw ParseError("scenario needs bathymetry or flat_seabed");
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const fs::path& base_dir) {
  Scenario s;
  try {
    json j = json::parse(json_text);
    PlanningProblem& p = s.problem;
    p.grid = bathymetry_of(j, base_dir);

    if (j.contains("svp")) {
      fs::path svp = resolve(base_dir, j["svp"].get<std::string>());
      if (!fs::exists(svp)) throw ValidationError("SVP file not found: " + svp.string());
      s.svp = load_svp_file(svp.string());
    }

    std::string model = get_or<std::string>(j, "propagation", "isotropic");
    if (model == "isotropic") {
      p.model = IsotropicModel{};
    } else if (model == "terrain") {
      p.model = TerrainOccludedModel{p.grid};
    } else if (model == "imported") {
      if (!j.contains("tl_field")) throw ParseError("imported propagation needs tl_field");
      fs::path tl = resolve(base_dir, j["tl_field"].get<std::string>());
      if (!fs::exists(tl)) throw ValidationError("TL field not found: " + tl.string());
      p.model = load_tl_field(read_text_file(tl.string()), p.grid);
    } else {
      throw ParseError("unknown propagation model: " + model);
    }

    if (j.contains("acoustic")) {
      const json& a = j["acoustic"];
      p.acoustic.source_level = get_or(a, "source_level", p.acoustic.source_level);
      p.acoustic.noise_level = get_or(a, "noise_level", p.acoustic.noise_level);
      p.acoustic.detection_threshold = get_or(a, "detection_threshold", p.acoustic.detection_threshold);
      p.acoustic.absorption = get_or(a, "absorption", p.acoustic.absorption);
      p.acoustic.frequency = get_or(a, "frequency", p.acoustic.frequency);
      if (a.contains("detection_radius"))
        p.acoustic.noise_level = noise_level_for_range(p.acoustic, a["detection_radius"].get<double>());
    }

    if (j.contains("coverage")) {
      const json& c = j["coverage"];
      p.coverage.beta = get_or(c, "beta", p.coverage.beta);
      p.coverage.alpha = get_or(c, "alpha", p.coverage.alpha);
      p.coverage.rho = get_or(c, "rho", p.coverage.rho);
      if (c.contains("gdop_formula")) p.coverage.gdop.formula = parse_gdop_formula(c["gdop_formula"].get<std::string>());
      if (c.contains("gdop_geometry"))
        p.coverage.gdop.geometry = parse_gdop_geometry(c["gdop_geometry"].get<std::string>());
    }
    if (j.contains("receiver_depth")) p.receiver_rule = depth_rule_of(j["receiver_depth"]);
    if (j.contains("tag_depth")) p.tag_rule = depth_rule_of(j["tag_depth"]);

    if (j.contains("aoi")) {
      const json& a = j["aoi"];
      p.aoi = build_aoi_mask(*p.grid, Rect{a.at("x_min").get<double>(), a.at("y_min").get<double>(),
                                           a.at("x_max").get<double>(), a.at("y_max").get<double>()});
    } else {
      p.aoi = build_aoi_mask(*p.grid, Rect{p.grid->origin_x(), p.grid->origin_y(),
                                           p.grid->origin_x() + p.grid->width(),
                                           p.grid->origin_y() + p.grid->height()});
    }
    p.receivers = get_or(j, "receivers", p.receivers);
    p.penalty_weight = get_or(j, "penalty_weight", p.penalty_weight);

    std::string solver = get_or<std::string>(j, "solver", "ga");
    if (solver == "ga")
      s.solver = SolverKind::Ga;
    else if (solver == "brute_force")
      s.solver = SolverKind::BruteForce;
    else
      throw ParseError("unknown solver: " + solver);
    s.brute_force_stride = get_or(j, "brute_force_stride", s.brute_force_stride);

    if (j.contains("ga")) {
      const json& g = j["ga"];
      s.ga.population = get_or(g, "population", s.ga.population);
      s.ga.generations = get_or(g, "generations", s.ga.generations);
      s.ga.crossover_rate = get_or(g, "crossover_rate", s.ga.crossover_rate);
      s.ga.mutation_rate = get_or(g, "mutation_rate", s.ga.mutation_rate);
      s.ga.mutation_sigma = get_or(g, "mutation_sigma", s.ga.mutation_sigma);
      s.ga.tournament_size = get_or(g, "tournament_size", s.ga.tournament_size);
      s.ga.elitism = get_or(g, "elitism", s.ga.elitism);
      s.ga.seed = get_or(g, "seed", s.ga.seed);
      s.ga.cp_spacing = get_or(g, "cp_spacing", s.ga.cp_spacing);
      s.ga.threads = get_or(g, "threads", s.ga.threads);
    }

    if (j.contains("deployment")) {
      Deployment d;
      for (const auto& pt : j["deployment"]) d.positions.push_back(point_of(pt));
      s.deployment = std::move(d);
    }

    if (j.contains("scan")) {
      const json& sc = j["scan"];
      s.scan.radius = get_or(sc, "radius", s.scan.radius);
      if (sc.contains("alphas")) s.scan.alphas = sc["alphas"].get<std::vector<double>>();
      s.scan.steps = get_or(sc, "steps", s.scan.steps);
      s.scan.cell_size = get_or(sc, "cell_size", s.scan.cell_size);
    }

    if (j.contains("throughput")) {
      const json& t = j["throughput"];
      ThroughputSettings& ts = s.throughput;
      if (t.contains("waypoints"))
        for (const auto& pt : t["waypoints"]) ts.track.waypoints.push_back(point_of(pt));
      ts.track.speed = get_or(t, "speed", ts.track.speed);
      if (t.contains("interval")) {
        auto iv = t["interval"].get<std::vector<double>>();
        if (iv.size() != 2) throw ParseError("interval is written as [min, max]");
        ts.track.interval_min = iv[0];
        ts.track.interval_max = iv[1];
      }
      ts.track.tag_id = get_or(t, "tag_id", ts.track.tag_id);
      ts.track.seed = get_or(t, "seed", ts.track.seed);
      ts.tag_rule = t.contains("tag_depth") ? depth_rule_of(t["tag_depth"]) : p.tag_rule;
      ts.bin_width = get_or(t, "bin_width", ts.bin_width);
      if (t.contains("emissions")) ts.emissions = resolve(base_dir, t["emissions"].get<std::string>());
    }

    if (j.contains("out")) s.out = resolve(base_dir, j["out"].get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  s.problem.acoustic.validate();
  s.problem.coverage.validate();
  s.ga.validate();
  return s;
}

Scenario load_scenario(const fs::path& path) {
  if (!fs::exists(path)) throw ValidationError("scenario not found: " + path.string());
  return parse_scenario(read_text_file(path.string()), path.parent_path());
}

void apply_overrides(Scenario& s, const Overrides& o) {
  if (o.seed) {
    s.ga.seed = *o.seed;
    s.throughput.track.seed = *o.seed;
  }
  if (o.out) s.out = *o.out;
  if (o.formula) s.problem.coverage.gdop.formula = *o.formula;
  if (o.threads) s.ga.threads = *o.threads;
}

namespace {

void prepare(const fs::path& out) { fs::create_directories(out); }

void write(const fs::path& out, const char* name, const std::string& content) {
  write_text_file((out / name).string(), content);
}

std::string report_lines(const CoverageReport& r) {
  return fmt::format(
      "coverage_cells {}\ncoverage_area_m2 {}\nlocalization_cells {}\nlocalization_area_m2 {}\n"
      "aoi_cells {}\ncovered_aoi_cells {}\naoi_fraction {}\nrho {}\nconstraint {}\n",
      r.coverage_cells, r.coverage_area(), r.localization_cells, r.localization_area(), r.aoi_cells,
      r.covered_aoi_cells, r.aoi_fraction(), r.rho, r.constraint_met ? "met" : "unmet");
}

void write_maps(const fs::path& out, const std::string& suffix, const CoverageEvaluator& ev,
                const CoverageReport& r) {
  write_text_file((out / ("coverage_map" + suffix + ".csv")).string(), coverage_map_csv(ev.grid(), r));
  write_text_file((out / ("gdop_map" + suffix + ".csv")).string(), gdop_map_csv(r.gdop));
  write_text_file((out / ("coverage" + suffix + ".pgm")).string(), coverage_pgm(r));
}

struct Solved {
  Deployment best;
  double fitness = 0.0;
  std::vector<GenerationStats> trace;
};

Solved solve(const Scenario& s, const CoverageEvaluator& ev) {
  if (s.solver == SolverKind::BruteForce) {
    auto r = brute_force_optimize(ev, s.brute_force_stride, s.ga.threads);
    return {r.best, r.best_fitness, {}};
  }
  auto r = ga_optimize(ev, s.ga);
  return {r.best, r.best_fitness, r.trace};
}

}  // namespace

int cmd_plan(const Scenario& s) {
  CoverageEvaluator ev(s.problem);
  Solved solved = solve(s, ev);
  CoverageReport report = evaluate_deployment(ev, solved.best);
  prepare(s.out);
  auto receivers = ev.receiver_positions(solved.best);
  write(s.out, "deployment.csv", deployment_csv(receivers));
  write_maps(s.out, "", ev, report);
  write(s.out, "fitness_trace.csv", fitness_trace_csv(solved.trace));
  std::string summary = fmt::format("solver {}\nreceivers {}\nseed {}\ngdop_formula {}\nfitness {}\n",
                                    s.solver == SolverKind::Ga ? "ga" : "brute_force", receivers.size(),
                                    s.ga.seed, to_string(s.problem.coverage.gdop.formula), solved.fitness);
  summary += report_lines(report);
  if (!solved.trace.empty()) summary += "\n" + fitness_trace_csv(solved.trace);
  write(s.out, "summary.txt", summary);
  return report.constraint_met ? kOk : kConstraintUnmet;
}

int cmd_compare(const Scenario& s) {
  const PlanningProblem& p = s.problem;
  if (p.receivers < 3) throw ValidationError("comparison needs at least three receivers");
  if (!(s.ga.cp_spacing > 0.0)) throw ValidationError("comparison needs a positive cp_spacing");
  CoverageEvaluator ev(p);
  Deployment cp = cp_layout(*p.grid, p.aoi, p.receivers, s.ga.cp_spacing);
  CoverageReport cp_report = evaluate_deployment(ev, cp);
  Solved solved = solve(s, ev);
  CoverageReport best_report = evaluate_deployment(ev, solved.best);

  prepare(s.out);
  write_maps(s.out, "_cp", ev, cp_report);
  write_maps(s.out, "_optimized", ev, best_report);
  write(s.out, "deployment_cp.csv", deployment_csv(ev.receiver_positions(cp)));
  write(s.out, "deployment_optimized.csv", deployment_csv(ev.receiver_positions(solved.best)));

  auto c_cp = static_cast<double>(cp_report.coverage_cells);
  auto c_opt = static_cast<double>(best_report.coverage_cells);
  std::string text = fmt::format("cp_spacing_m {}\ncp_coverage_cells {}\ncp_coverage_m2 {}\n"
                                 "optimized_coverage_cells {}\noptimized_coverage_m2 {}\n",
                                 s.ga.cp_spacing, cp_report.coverage_cells, cp_report.coverage_area(),
                                 best_report.coverage_cells, best_report.coverage_area());
  text += c_cp > 0.0 ? fmt::format("eta {}\n", eta_ratio(c_opt, c_cp)) : "eta undefined (CP coverage empty)\n";
  auto theta_of = [](const CoverageReport& r) {
    return r.localization_cells ? fmt::format("{}", theta_ratio(static_cast<double>(r.coverage_cells),
                                                                static_cast<double>(r.localization_cells)))
                                : std::string("undefined");
  };
  text += fmt::format("theta_cp {}\ntheta_optimized {}\n", theta_of(cp_report), theta_of(best_report));
  text += fmt::format("optimized_constraint {}\n", best_report.constraint_met ? "met" : "unmet");
  write(s.out, "comparison.txt", text);
  return best_report.constraint_met ? kOk : kConstraintUnmet;
}

int cmd_scan(const ScanSettings& scan, const ScanOptions& options, const fs::path& out) {
  prepare(out);
  std::string summary;
  if (!scan.alphas.empty()) {
    auto curves = spacing_scan(scan.radius, scan.alphas, scan.steps, scan.cell_size, options);
    for (const auto& c : curves) {
      write_text_file((out / fmt::format("scan_alpha_{}.csv", c.alpha)).string(), scan_csv(c));
      summary += fmt::format("alpha {} best_l_over_R {} best_coverage_over_R2 {}\n", c.alpha, c.best.l_over_r,
                             c.best.coverage_over_r2);
    }
  }
  ScanCurve analytic = analytic_curve(scan.steps);
  write(out, "scan_analytic.csv", scan_csv(analytic));
  summary += fmt::format("alpha inf best_l_over_R {} best_coverage_over_R2 {}\n", analytic.best.l_over_r,
                         analytic.best.coverage_over_r2);
  write(out, "scan_summary.txt", summary);
  return kOk;
}

int cmd_coverage(const Scenario& s) {
  if (!s.deployment) throw ValidationError("coverage needs a deployment in the scenario");
  CoverageEvaluator ev(s.problem);
  CoverageReport report = evaluate_deployment(ev, *s.deployment);
  prepare(s.out);
  write(s.out, "deployment.csv", deployment_csv(ev.receiver_positions(*s.deployment)));
  write_maps(s.out, "", ev, report);
  write(s.out, "summary.txt", fmt::format("fitness {}\n", fitness(ev, *s.deployment)) + report_lines(report));
  return report.constraint_met ? kOk : kConstraintUnmet;
}

int cmd_throughput(const Scenario& s) {
  if (!s.deployment) throw ValidationError("throughput needs a deployment in the scenario");
  const PlanningProblem& p = s.problem;
  std::vector<Position> receivers;
  for (const auto& xy : s.deployment->positions)
    receivers.push_back(place_at(*p.grid, xy.x(), xy.y(), p.receiver_rule).position);
  const ThroughputSettings& t = s.throughput;
  EmissionLog log = t.emissions ? load_emission_log(read_text_file(t.emissions->string()))
                                : synth_track(t.track, t.tag_rule, p.grid.get());
  ThroughputProfile profile = throughput_profile(log, receivers, p.model, p.acoustic, t.bin_width);
  prepare(s.out);
  write(s.out, "emissions.csv", emission_log_csv(log));
  write(s.out, "throughput.csv", throughput_csv(profile));
  std::size_t heard_low = 0, heard_high = 0;
  for (const auto& b : profile.bins) {
    heard_low += static_cast<std::size_t>(std::llround(b.xi2 * static_cast<double>(b.emissions)));
    heard_high += static_cast<std::size_t>(std::llround(b.xi3 * static_cast<double>(b.emissions)));
  }
  write(s.out, "throughput_summary.txt",
        fmt::format("emissions {}\nheard_by_1_or_2 {}\nheard_by_3_or_more {}\n", log.records.size(), heard_low,
                    heard_high));
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Receiver placement planner for acoustic telemetry arrays"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, formula;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double scan_radius = 0.0, scan_cell = 0.0;
  std::size_t scan_steps = 0;
  std::vector<double> scan_alphas;
  bool no_alphas = false;

  auto common = [&](CLI::App* sub, bool scenario_required) {
    auto* opt = sub->add_option("--scenario", scenario_path, "Scenario file (JSON)");
    if (scenario_required) opt->required();
    sub->add_option("--seed", seed, "Random seed override");
    sub->add_option("--out", out_dir, "Output directory override");
    sub->add_option("--formula", formula, "GDOP formula: trace or paper")
        ->check(CLI::IsMember({"trace", "paper"}));
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto* plan = app.add_subcommand("plan", "Optimize a deployment");
  auto* compare = app.add_subcommand("compare", "CP layout versus optimized deployment");
  auto* scan_cmd = app.add_subcommand("scan", "Coverage versus spacing for three equilateral receivers");
  auto* coverage = app.add_subcommand("coverage", "Evaluate the scenario's fixed deployment");
  auto* throughput = app.add_subcommand("throughput", "Reception ratios along a tag track");
  for (auto* sub : {plan, compare, coverage, throughput}) common(sub, true);
  common(scan_cmd, false);
  scan_cmd->add_option("--radius", scan_radius, "Detection radius in meters");
  scan_cmd->add_option("--alpha", scan_alphas, "GDOP thresholds");
  scan_cmd->add_flag("--no-alpha", no_alphas, "Only the closed-form curve");
  scan_cmd->add_option("--steps", scan_steps, "Spacing steps over [0, sqrt(3) R]");
  scan_cmd->add_option("--cell-size", scan_cell, "Grid cell size in meters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }

  Overrides o;
  if (app.got_subcommand(plan) || app.got_subcommand(compare) || app.got_subcommand(coverage) ||
      app.got_subcommand(throughput) || app.got_subcommand(scan_cmd)) {
    auto* sub = app.get_subcommands().front();
    if (sub->count("--seed")) o.seed = seed;
    if (sub->count("--threads")) o.threads = threads;
    if (!out_dir.empty()) o.out = out_dir;
    if (!formula.empty()) o.formula = parse_gdop_formula(formula);
  }

  try {
    if (app.got_subcommand(scan_cmd)) {
      ScanSettings scan;
      ScanOptions options;
      fs::path out = "out";
      if (!scenario_path.empty()) {
        Scenario s = load_scenario(scenario_path);
        scan = s.scan;
        options.gdop = s.problem.coverage.gdop;
        out = s.out;
      }
      if (!scan_alphas.empty()) scan.alphas = scan_alphas;
      if (no_alphas) scan.alphas.clear();
      if (scan_cmd->count("--radius")) scan.radius = scan_radius;
      if (scan_cmd->count("--steps")) scan.steps = scan_steps;
      if (scan_cmd->count("--cell-size")) scan.cell_size = scan_cell;
      if (o.formula) options.gdop.formula = *o.formula;
      if (o.threads) options.threads = *o.threads;
      if (o.out) out = *o.out;
      return cmd_scan(scan, options, out);
    }
    Scenario s = load_scenario(scenario_path);
    apply_overrides(s, o);
    if (app.got_subcommand(plan)) return cmd_plan(s);
    if (app.got_subcommand(compare)) return cmd_compare(s);
    if (app.got_subcommand(coverage)) return cmd_coverage(s);
    return cmd_throughput(s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
}

}  // namespace rxplan::cli
