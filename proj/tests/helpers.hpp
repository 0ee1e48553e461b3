#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "rxplan/envgrid.hpp"

namespace testutil {

inline std::shared_ptr<const rxplan::BathymetryGrid> flat_grid(Eigen::Index cols, Eigen::Index rows, double cell,
                                                               double depth, double x0 = 0.0, double y0 = 0.0) {
  return std::make_shared<const rxplan::BathymetryGrid>(rxplan::RealGrid::Constant(cols, rows, depth), cell, x0,
                                                        y0, -9999.0);
}

// Plain Gauss-Jordan inverse with partial pivoting on row-major storage.
// Deliberately shares nothing with Eigen.
inline std::vector<double> reference_inverse(std::vector<double> a, int n) {
  std::vector<double> inv(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + i)] = 1.0;
  auto at = [n](std::vector<double>& m, int r, int c) -> double& { return m[static_cast<std::size_t>(r * n + c)]; };
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(at(a, r, col)) > std::fabs(at(a, pivot, col))) pivot = r;
    for (int c = 0; c < n; ++c) {
      std::swap(at(a, col, c), at(a, pivot, c));
      std::swap(at(inv, col, c), at(inv, pivot, c));
    }
    double d = at(a, col, col);
    for (int c = 0; c < n; ++c) {
      at(a, col, c) /= d;
      at(inv, col, c) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = at(a, r, col);
      for (int c = 0; c < n; ++c) {
        at(a, r, c) -= f * at(a, col, c);
        at(inv, r, c) -= f * at(inv, col, c);
      }
    }
  }
  return inv;
}

// GDOP from scratch: rows built by hand, normal matrix summed in a loop,
// inverted with reference_inverse. cols is 2 (x, y), 3 (x, y, clock) or 4.
inline double reference_gdop(const double p[3], const std::vector<std::array<double, 3>>& receivers, int cols,
                             bool trace) {
  std::vector<double> normal(static_cast<std::size_t>(cols * cols), 0.0);
  for (const auto& r : receivers) {
    double d[3] = {p[0] - r[0], p[1] - r[1], p[2] - r[2]};
    double range = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    double row[4];
    int n = 0;
    row[n++] = d[0] / range;
    row[n++] = d[1] / range;
    if (cols == 4) row[n++] = d[2] / range;
    if (cols >= 3) row[n++] = 1.0;
    for (int i = 0; i < cols; ++i)
      for (int j = 0; j < cols; ++j) normal[static_cast<std::size_t>(i * cols + j)] += row[i] * row[j];
  }
  auto inv = reference_inverse(normal, cols);
  double s = 0.0;
  for (int i = 0; i < cols; ++i) {
    double g = inv[static_cast<std::size_t>(i * cols + i)];
    s += trace ? g : g * g;
  }
  return std::sqrt(s);
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("rxplan_" + tag + "_" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
