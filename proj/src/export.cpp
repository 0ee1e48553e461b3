#include "rxplan/export.hpp"

#include <fmt/format.h>

#include <fstream>

namespace rxplan {

std::string coverage_map_csv(const BathymetryGrid& grid, const CoverageReport& report) {
  std::string out = "k,l,x,y,detect_count,gdop,usable\n";
  for (std::size_t l = 0; l < grid.n_rows(); ++l) {
    for (std::size_t k = 0; k < grid.n_cols(); ++k) {
      Point2 c = grid.cell_center(k, l);
      const auto ki = static_cast<Eigen::Index>(k), li = static_cast<Eigen::Index>(l);
      out += fmt::format("{},{},{},{},{},{},{}\n", k, l, c.x(), c.y(), report.detect_count(ki, li),
                         report.gdop(ki, li), report.coverage(ki, li) ? 1 : 0);
    }
  }
  return out;
}

std::string gdop_map_csv(const RealGrid& gdop) {
  std::string out;
  for (Eigen::Index l = gdop.cols() - 1; l >= 0; --l) {
    for (Eigen::Index k = 0; k < gdop.rows(); ++k) {
      if (k) out += ',';
      out += fmt::format("{}", gdop(k, l));
    }
    out += '\n';
  }
  return out;
}

std::string coverage_pgm(const CoverageReport& report) {
  const auto w = report.coverage.rows();
  const auto h = report.coverage.cols();
  std::string out = fmt::format("P5\n{} {}\n255\n", w, h);
  for (Eigen::Index l = h - 1; l >= 0; --l)
    for (Eigen::Index k = 0; k < w; ++k)
      out += static_cast<char>(report.coverage(k, l) ? 255 : report.localization(k, l) ? 128 : 0);
  return out;
}

std::string deployment_csv(std::span<const Position> receivers) {
  std::string out = "id,x,y,z\n";
  for (std::size_t i = 0; i < receivers.size(); ++i)
    out += fmt::format("{},{},{},{}\n", i, receivers[i].x(), receivers[i].y(), receivers[i].z());
  return out;
}

std::string fitness_trace_csv(std::span<const GenerationStats> trace) {
  std::string out = "generation,best_fitness,mean_fitness\n";
  for (const auto& g : trace) out += fmt::format("{},{},{}\n", g.generation, g.best_fitness, g.mean_fitness);
  return out;
}

std::string scan_csv(const ScanCurve& curve) {
  std::string out = "l_over_R,coverage_over_R2\n";
  for (const auto& p : curve.points) out += fmt::format("{},{}\n", p.l_over_r, p.coverage_over_r2);
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw Error("failed writing " + path);
}

}  // namespace rxplan
