#include "rxplan/envgrid.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rxplan {

namespace {

constexpr double kMinSoundSpeed = 1400.0;
constexpr double kMaxSoundSpeed = 1600.0;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_number(const std::string& token, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ParseError(fmt::format("invalid {} value '{}'", what, token));
  }
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

BathymetryGrid::BathymetryGrid(RealGrid depth, double cell_size, double origin_x,
                               double origin_y, double nodata)
    : depth_(std::move(depth)),
      cell_size_(cell_size),
      origin_x_(origin_x),
      origin_y_(origin_y),
      nodata_(nodata) {
  if (depth_.rows() < 2 || depth_.cols() < 2)
    throw ValidationError("bathymetry grid needs at least 2x2 cells");
  if (!(cell_size_ > 0.0)) throw ValidationError("cell size must be positive");
  for (Eigen::Index l = 0; l < depth_.cols(); ++l)
    for (Eigen::Index k = 0; k < depth_.rows(); ++k) {
      double d = depth_(k, l);
      if (d == nodata_) continue;
      if (!std::isfinite(d) || d < 0.0)
        throw ValidationError(fmt::format("negative or non-finite depth {} at cell ({}, {})", d, k, l));
    }
}

bool BathymetryGrid::in_bounds(double x, double y) const {
  return x >= origin_x_ && y >= origin_y_ && x <= origin_x_ + width() &&
         y <= origin_y_ + height();
}

Point2 BathymetryGrid::cell_center(std::size_t k, std::size_t l) const {
  return {origin_x_ + (static_cast<double>(k) + 0.5) * cell_size_,
          origin_y_ + (static_cast<double>(l) + 0.5) * cell_size_};
}

std::optional<CellIndex> BathymetryGrid::position_to_index(double x, double y) const {
  if (!in_bounds(x, y)) return std::nullopt;
  auto k = static_cast<std::size_t>(std::floor((x - origin_x_) / cell_size_));
  auto l = static_cast<std::size_t>(std::floor((y - origin_y_) / cell_size_));
  // the far edges belong to the last cell
  k = std::min(k, n_cols() - 1);
  l = std::min(l, n_rows() - 1);
  return CellIndex{k, l};
}

double BathymetryGrid::seabed_depth_at(double x, double y) const {
  double fx = (x - origin_x_) / cell_size_ - 0.5;
  double fy = (y - origin_y_) / cell_size_ - 0.5;
  double max_k = static_cast<double>(n_cols() - 1);
  double max_l = static_cast<double>(n_rows() - 1);
  fx = std::clamp(fx, 0.0, max_k);
  fy = std::clamp(fy, 0.0, max_l);
  auto k0 = static_cast<std::size_t>(std::floor(fx));
  auto l0 = static_cast<std::size_t>(std::floor(fy));
  std::size_t k1 = std::min(k0 + 1, n_cols() - 1);
  std::size_t l1 = std::min(l0 + 1, n_rows() - 1);
  double tx = fx - static_cast<double>(k0);
  double ty = fy - static_cast<double>(l0);
  auto at = [&](std::size_t k, std::size_t l) { return is_nodata(k, l) ? 0.0 : depth_(k, l); };
  double south = at(k0, l0) * (1.0 - tx) + at(k1, l0) * tx;
  double north = at(k0, l1) * (1.0 - tx) + at(k1, l1) * tx;
  return south * (1.0 - ty) + north * ty;
}

bool operator==(const BathymetryGrid& a, const BathymetryGrid& b) {
  return a.cell_size_ == b.cell_size_ && a.origin_x_ == b.origin_x_ &&
         a.origin_y_ == b.origin_y_ && a.nodata_ == b.nodata_ &&
         a.depth_.rows() == b.depth_.rows() && a.depth_.cols() == b.depth_.cols() &&
         (a.depth_ == b.depth_).all();
}

BathymetryGrid load_bathymetry(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::map<std::string, std::string> header;
  static const char* kKeys[] = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize",
                                "nodata_value"};
  std::string line;
  std::streampos data_start = in.tellg();
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key, value, extra;
    if (!(ls >> key)) {
      data_start = in.tellg();
      continue;
    }
    std::string lk = lower(key);
    bool known = std::find_if(std::begin(kKeys), std::end(kKeys),
                              [&](const char* k) { return lk == k; }) != std::end(kKeys);
    if (!known) break;
    if (!(ls >> value) || (ls >> extra))
      throw ParseError(fmt::format("malformed header line '{}'", trim(line)));
    header[lk] = value;
    data_start = in.tellg();
  }
  for (const char* key : kKeys)
    if (!header.count(key)) throw ParseError(fmt::format("missing header key '{}'", key));

  double ncols_v = parse_number(header["ncols"], "ncols");
  double nrows_v = parse_number(header["nrows"], "nrows");
  if (ncols_v < 1 || nrows_v < 1 || ncols_v != std::floor(ncols_v) || nrows_v != std::floor(nrows_v))
    throw ParseError("ncols/nrows must be positive integers");
  auto ncols = static_cast<std::size_t>(ncols_v);
  auto nrows = static_cast<std::size_t>(nrows_v);
  double xll = parse_number(header["xllcorner"], "xllcorner");
  double yll = parse_number(header["yllcorner"], "yllcorner");
  double cell = parse_number(header["cellsize"], "cellsize");
  double nodata = parse_number(header["nodata_value"], "nodata_value");
  if (!(cell > 0.0)) throw ValidationError("cellsize must be positive");

  in.clear();
  in.seekg(data_start);
  RealGrid depth(ncols, nrows);
  std::size_t file_row = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (file_row >= nrows) throw ParseError("more data rows than nrows");
    if (tokens.size() != ncols)
      throw ParseError(fmt::format("row {} has {} values, expected {}", file_row, tokens.size(), ncols));
    std::size_t l = nrows - 1 - file_row;
    for (std::size_t k = 0; k < ncols; ++k) depth(k, l) = parse_number(tokens[k], "depth");
    ++file_row;
  }
  if (file_row != nrows)
    throw ParseError(fmt::format("found {} data rows, expected {}", file_row, nrows));
  return BathymetryGrid(std::move(depth), cell, xll, yll, nodata);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

BathymetryGrid load_bathymetry_file(const std::string& path) {
  return load_bathymetry(read_text_file(path));
}

std::string to_ascii_grid(const BathymetryGrid& grid) {
  std::string out;
  out += fmt::format("ncols {}\nnrows {}\n", grid.n_cols(), grid.n_rows());
  out += fmt::format("xllcorner {}\nyllcorner {}\ncellsize {}\nnodata_value {}\n", grid.origin_x(),
                     grid.origin_y(), grid.cell_size(), grid.nodata());
  for (std::size_t r = 0; r < grid.n_rows(); ++r) {
    std::size_t l = grid.n_rows() - 1 - r;
    for (std::size_t k = 0; k < grid.n_cols(); ++k) {
      if (k) out += ' ';
      out += fmt::format("{}", grid.depth(k, l));
    }
    out += '\n';
  }
  return out;
}

Placement index_to_position(const BathymetryGrid& grid, std::size_t k, std::size_t l,
                            const DepthRule& rule) {
  if (k >= grid.n_cols() || l >= grid.n_rows())
    throw OutOfBoundsError(fmt::format("cell ({}, {}) outside the grid", k, l));
  if (grid.is_nodata(k, l)) throw NoDataError(fmt::format("cell ({}, {}) has no depth", k, l));
  Point2 c = grid.cell_center(k, l);
  double seabed = -grid.depth(k, l);
  Placement p{Position(c.x(), c.y(), 0.0), false};
  if (const auto* off = std::get_if<SeabedOffset>(&rule)) {
    p.position.z() = std::min(seabed + off->height, 0.0);
  } else {
    double z = -std::get<FixedDepth>(rule).depth;
    if (z < seabed) {
      z = seabed;
      p.clamped = true;
    }
    p.position.z() = z;
  }
  return p;
}

Placement place_at(const BathymetryGrid& grid, double x, double y, const DepthRule& rule) {
  auto idx = grid.position_to_index(x, y);
  if (!idx) throw OutOfBoundsError(fmt::format("point ({}, {}) outside the grid", x, y));
  Placement p = index_to_position(grid, idx->k, idx->l, rule);
  p.position.x() = x;
  p.position.y() = y;
  return p;
}

AoiMask build_aoi_mask(const BathymetryGrid& grid, const Rect& region) {
  AoiMask aoi{BitGrid::Constant(grid.n_cols(), grid.n_rows(), false), 0};
  for (std::size_t l = 0; l < grid.n_rows(); ++l)
    for (std::size_t k = 0; k < grid.n_cols(); ++k) {
      Point2 c = grid.cell_center(k, l);
      bool inside = c.x() >= region.x_min && c.x() <= region.x_max && c.y() >= region.y_min &&
                    c.y() <= region.y_max;
      if (inside && !grid.is_nodata(k, l)) {
        aoi.mask(k, l) = true;
        ++aoi.count;
      }
    }
  if (aoi.count == 0) throw EmptyAoiError("area of interest does not overlap any valid cell");
  return aoi;
}

Point2 aoi_centroid(const BathymetryGrid& grid, const AoiMask& aoi) {
  Point2 sum = Point2::Zero();
  for (std::size_t l = 0; l < grid.n_rows(); ++l)
    for (std::size_t k = 0; k < grid.n_cols(); ++k)
      if (aoi.mask(k, l)) sum += grid.cell_center(k, l);
  if (aoi.count == 0) throw EmptyAoiError("empty area of interest");
  return sum / static_cast<double>(aoi.count);
}

SoundVelocityProfile load_svp(std::string_view text) {
  SoundVelocityProfile svp;
  std::istringstream in{std::string(text)};
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    auto comma = t.find(',');
    if (comma == std::string::npos) throw ParseError(fmt::format("expected 'depth,speed' in '{}'", t));
    std::string a = trim(t.substr(0, comma));
    std::string b = trim(t.substr(comma + 1));
    double depth = 0, speed = 0;
    auto [pa, ea] = std::from_chars(a.data(), a.data() + a.size(), depth);
    auto [pb, eb] = std::from_chars(b.data(), b.data() + b.size(), speed);
    bool numeric = ea == std::errc() && eb == std::errc() && pa == a.data() + a.size() &&
                   pb == b.data() + b.size();
    if (!numeric) {
      if (first) {  // optional header
        first = false;
        continue;
      }
      throw ParseError(fmt::format("non-numeric SVP row '{}'", t));
    }
    first = false;
    if (speed < kMinSoundSpeed || speed > kMaxSoundSpeed)
      throw ValidationError(fmt::format("sound speed {} outside [{}, {}] m/s", speed, kMinSoundSpeed,
                                        kMaxSoundSpeed));
    if (!svp.samples.empty() && depth <= svp.samples.back().depth)
      throw ValidationError("SVP depths must be strictly increasing");
    svp.samples.push_back({depth, speed});
  }
  if (svp.samples.empty()) throw ValidationError("SVP has no samples");
  return svp;
}

SoundVelocityProfile load_svp_file(const std::string& path) { return load_svp(read_text_file(path)); }

}  // namespace rxplan
