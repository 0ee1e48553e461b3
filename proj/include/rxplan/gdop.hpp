#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <span>
#include <string_view>

#include "rxplan/errors.hpp"

namespace rxplan {

/// Which columns of the visibility matrix enter the normal matrix.
///  - Planar: (a_x, a_y). Horizontal position only; three receivers give a
///    well-posed 2-D fix. This reproduces the published coverage curves.
///  - PlanarClock: (a_x, a_y, 1), horizontal position plus an unknown
///    emission time.
///  - Spatial: (a_x, a_y, a_z, 1), the full 3-D + clock model. Needs at least
///    four receivers with some depth diversity to be non-singular.
enum class GdopGeometry { Planar, PlanarClock, Spatial };

/// Trace: sqrt(trace(G)), the textbook definition.
/// SquaredDiagonal: sqrt(sum of squared diagonal entries of G), selected as "paper".
enum class GdopFormula { Trace, SquaredDiagonal };

struct GdopOptions {
  GdopGeometry geometry = GdopGeometry::Planar;
  GdopFormula formula = GdopFormula::SquaredDiagonal;
};

enum class GdopCondition { Ok, IllConditioned };

template <typename Scalar>
struct GdopValue {
  Scalar value = std::numeric_limits<Scalar>::infinity();
  GdopCondition condition = GdopCondition::IllConditioned;

  bool finite() const { return condition == GdopCondition::Ok; }
};

enum class GdopRating { Ideal, Excellent, Good, Moderate, Fair, Poor };

inline constexpr double kGdopConditionLimit = 1e12;
inline constexpr std::size_t kMinGdopReceivers = 3;

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using VisibilityMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 4>;

/// Row i holds the unit vector from receiver i toward p, (p - r_i) / R_i, and a
/// trailing 1 for the clock term.
template <typename Scalar>
VisibilityMatrix<Scalar> visibility_matrix(const Vector3<Scalar>& p,
                                           std::span<const Vector3<Scalar>> receivers) {
  VisibilityMatrix<Scalar> h(static_cast<Eigen::Index>(receivers.size()), 4);
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    Vector3<Scalar> d = p - receivers[i];
    Scalar range = d.norm();
    if (!(range > Scalar(0))) throw DegenerateGeometryError("source coincides with a receiver");
    const auto row = static_cast<Eigen::Index>(i);
    h.template block<1, 3>(row, 0) = (d / range).transpose();
    h(row, 3) = Scalar(1);
  }
  return h;
}

namespace detail {

template <int Cols, typename Scalar>
GdopValue<Scalar> gdop_from_normal(const Eigen::Matrix<Scalar, Cols, Cols>& normal, GdopFormula formula) {
  using Normal = Eigen::Matrix<Scalar, Cols, Cols>;
  Eigen::SelfAdjointEigenSolver<Normal> eig;
  if constexpr (Cols == 2)
    eig.computeDirect(normal, Eigen::EigenvaluesOnly);
  else
    eig.compute(normal, Eigen::EigenvaluesOnly);
  const auto& lambda = eig.eigenvalues();  // ascending
  Scalar smallest = lambda(0);
  Scalar largest = lambda(Cols - 1);
  if (!(smallest > Scalar(0)) || largest / smallest > Scalar(kGdopConditionLimit)) return {};
  Normal inverse = normal.ldlt().solve(Normal::Identity());
  Scalar sum = Scalar(0);
  for (int i = 0; i < Cols; ++i)
    sum += formula == GdopFormula::Trace ? inverse(i, i) : inverse(i, i) * inverse(i, i);
  return {std::sqrt(sum), GdopCondition::Ok};
}

template <int Cols, typename Scalar>
GdopValue<Scalar> gdop_fixed(const Vector3<Scalar>& p, std::span<const Vector3<Scalar>> receivers,
                             GdopFormula formula) {
  Eigen::Matrix<Scalar, Cols, Cols> normal = Eigen::Matrix<Scalar, Cols, Cols>::Zero();
  Eigen::Matrix<Scalar, Cols, 1> row;
  for (const auto& r : receivers) {
    Vector3<Scalar> d = p - r;
    Scalar range = d.norm();
    if (!(range > Scalar(0))) throw DegenerateGeometryError("source coincides with a receiver");
    d /= range;
    if constexpr (Cols == 2) {
      row << d.x(), d.y();
    } else if constexpr (Cols == 3) {
      row << d.x(), d.y(), Scalar(1);
    } else {
      row << d.x(), d.y(), d.z(), Scalar(1);
    }
    normal.noalias() += row * row.transpose();
  }
  return gdop_from_normal<Cols, Scalar>(normal, formula);
}

}  // namespace detail

/// GDOP of a source at p seen by the receiver set. Singular or near-singular
/// geometry (condition number of H^T H above 1e12) is reported as +inf.
template <typename Scalar>
GdopValue<Scalar> gdop_value(const Vector3<Scalar>& p, std::span<const Vector3<Scalar>> receivers,
                             const GdopOptions& options = {}) {
  if (receivers.size() < kMinGdopReceivers)
    throw InsufficientReceiversError("GDOP needs at least three receivers");
  switch (options.geometry) {
    case GdopGeometry::Planar:
      return detail::gdop_fixed<2, Scalar>(p, receivers, options.formula);
    case GdopGeometry::PlanarClock:
      return detail::gdop_fixed<3, Scalar>(p, receivers, options.formula);
    case GdopGeometry::Spatial:
      break;
  }
  return detail::gdop_fixed<4, Scalar>(p, receivers, options.formula);
}

/// Qualitative bins; a value on a bin edge gets the better rating.
inline GdopRating gdop_rating(double value) {
  if (std::isnan(value) || value < 0.0) throw ValidationError("GDOP must be non-negative");
  if (value <= 1.0) return GdopRating::Ideal;
  if (value <= 4.0) return GdopRating::Excellent;
  if (value <= 6.0) return GdopRating::Good;
  if (value <= 8.0) return GdopRating::Moderate;
  if (value <= 20.0) return GdopRating::Fair;
  return GdopRating::Poor;
}

std::string_view to_string(GdopRating rating);
GdopFormula parse_gdop_formula(std::string_view name);
GdopGeometry parse_gdop_geometry(std::string_view name);
std::string_view to_string(GdopFormula formula);
std::string_view to_string(GdopGeometry geometry);

}  // namespace rxplan
