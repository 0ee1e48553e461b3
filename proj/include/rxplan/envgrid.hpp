#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rxplan/errors.hpp"
#include "rxplan/types.hpp"

namespace rxplan {

/// Quantized seabed depths on a regular planar lattice.
///
/// Depths are stored positive-down in meters and indexed (k, l) where k is the
/// column (x) and l is the row counted from the south edge. Sampling happens at
/// cell centers. Instances are immutable once built.
class BathymetryGrid {
 public:
  BathymetryGrid(RealGrid depth, double cell_size, double origin_x, double origin_y,
                 double nodata);

  std::size_t n_cols() const { return static_cast<std::size_t>(depth_.rows()); }
  std::size_t n_rows() const { return static_cast<std::size_t>(depth_.cols()); }
  std::size_t cell_count() const { return n_cols() * n_rows(); }
  double cell_size() const { return cell_size_; }
  double cell_area() const { return cell_size_ * cell_size_; }
  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }
  double nodata() const { return nodata_; }
  double width() const { return cell_size_ * static_cast<double>(n_cols()); }
  double height() const { return cell_size_ * static_cast<double>(n_rows()); }

  const RealGrid& depths() const { return depth_; }
  double depth(std::size_t k, std::size_t l) const { return depth_(k, l); }
  bool is_nodata(std::size_t k, std::size_t l) const { return depth_(k, l) == nodata_; }
  bool in_bounds(double x, double y) const;

  Point2 cell_center(std::size_t k, std::size_t l) const;
  /// Cell containing (x, y); nullopt outside the extent.
  std::optional<CellIndex> position_to_index(double x, double y) const;

  /// Seabed depth at (x, y) by bilinear interpolation between cell centers.
  /// Nodata neighbours are treated as dry land (depth 0).
  double seabed_depth_at(double x, double y) const;

  /// Row-major linear id (l * n_cols + k), used to key per-cell tables.
  std::size_t linear_id(std::size_t k, std::size_t l) const { return l * n_cols() + k; }
  CellIndex from_linear_id(std::size_t id) const { return {id % n_cols(), id / n_cols()}; }

  friend bool operator==(const BathymetryGrid& a, const BathymetryGrid& b);

 private:
  RealGrid depth_;
  double cell_size_;
  double origin_x_;
  double origin_y_;
  double nodata_;
};

struct SoundSpeedSample {
  double depth = 0.0;
  double speed = 0.0;
};

struct SoundVelocityProfile {
  std::vector<SoundSpeedSample> samples;
};

/// Cells that must be covered; same lattice as the bathymetry.
struct AoiMask {
  BitGrid mask;
  std::size_t count = 0;
};

struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
};

/// Resolved 3-D position of a cell; clamped is set when a fixed depth had to be
/// raised to the seabed.
struct Placement {
  Position position;
  bool clamped = false;
};

/// Parses an ESRI-style ASCII grid (north row first).
BathymetryGrid load_bathymetry(std::string_view text);
BathymetryGrid load_bathymetry_file(const std::string& path);
/// Inverse of load_bathymetry; values written with round-trip precision.
std::string to_ascii_grid(const BathymetryGrid& grid);

Placement index_to_position(const BathymetryGrid& grid, std::size_t k, std::size_t l,
                            const DepthRule& rule);
/// z for a world (x, y) under a depth rule, using the containing cell's depth.
Placement place_at(const BathymetryGrid& grid, double x, double y, const DepthRule& rule);

AoiMask build_aoi_mask(const BathymetryGrid& grid, const Rect& region);
Point2 aoi_centroid(const BathymetryGrid& grid, const AoiMask& aoi);

SoundVelocityProfile load_svp(std::string_view text);
SoundVelocityProfile load_svp_file(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace rxplan
