#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <variant>

namespace rxplan {

/// World position in meters; z is up (negative below the sea surface).
using Position = Eigen::Vector3d;
using Point2 = Eigen::Vector2d;

/// Boolean mask over the bathymetry lattice, indexed (k, l) = (column, row)
/// with l = 0 the southernmost row.
using BitGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using RealGrid = Eigen::ArrayXXd;
using CountGrid = Eigen::ArrayXXi;

struct CellIndex {
  std::size_t k = 0;  // column (x)
  std::size_t l = 0;  // row (y), 0 = south

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Height above the local seabed (receivers are anchored this way).
struct SeabedOffset {
  double height = 0.0;
};

/// Depth below the surface (tags swim at a configured depth).
struct FixedDepth {
  double depth = 0.0;
};

using DepthRule = std::variant<SeabedOffset, FixedDepth>;

}  // namespace rxplan
