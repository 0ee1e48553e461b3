#include "rxplan/gdop.hpp"

#include <string>

namespace rxplan {

std::string_view to_string(GdopRating rating) {
  switch (rating) {
    case GdopRating::Ideal: return "Ideal";
    case GdopRating::Excellent: return "Excellent";
    case GdopRating::Good: return "Good";
    case GdopRating::Moderate: return "Moderate";
    case GdopRating::Fair: return "Fair";
    case GdopRating::Poor: return "Poor";
  }
  return "?";
}

GdopFormula parse_gdop_formula(std::string_view name) {
  if (name == "trace") return GdopFormula::Trace;
  if (name == "paper" || name == "paper_literal") return GdopFormula::SquaredDiagonal;
  throw ValidationError("unknown GDOP formula '" + std::string(name) + "' (trace|paper)");
}

GdopGeometry parse_gdop_geometry(std::string_view name) {
  if (name == "planar") return GdopGeometry::Planar;
  if (name == "planar_clock") return GdopGeometry::PlanarClock;
  if (name == "spatial") return GdopGeometry::Spatial;
  throw ValidationError("unknown GDOP geometry '" + std::string(name) +
                        "' (planar|planar_clock|spatial)");
}

std::string_view to_string(GdopFormula formula) {
  return formula == GdopFormula::Trace ? "trace" : "paper";
}

std::string_view to_string(GdopGeometry geometry) {
  switch (geometry) {
    case GdopGeometry::Planar: return "planar";
    case GdopGeometry::PlanarClock: return "planar_clock";
    case GdopGeometry::Spatial: return "spatial";
  }
  return "?";
}

}  // namespace rxplan
