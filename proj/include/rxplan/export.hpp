#pragma once

#include <span>
#include <string>
#include <vector>

#include "rxplan/analytic.hpp"
#include "rxplan/coverage.hpp"
#include "rxplan/solvers.hpp"

namespace rxplan {

// All writers use shortest round-trip number formatting so artifacts are
// byte-stable across runs.

/// One row per cell: k,l,x,y,detect_count,gdop,usable.
std::string coverage_map_csv(const BathymetryGrid& grid, const CoverageReport& report);
/// GDOP as a matrix, north row first; unevaluated cells are "inf".
std::string gdop_map_csv(const RealGrid& gdop);
/// Binary PGM: 255 covered, 128 localization only, 0 otherwise. North up.
std::string coverage_pgm(const CoverageReport& report);
std::string deployment_csv(std::span<const Position> receivers);
std::string fitness_trace_csv(std::span<const GenerationStats> trace);
std::string scan_csv(const ScanCurve& curve);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace rxplan
