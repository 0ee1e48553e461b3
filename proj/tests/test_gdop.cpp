#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "rxplan/gdop.hpp"

using namespace rxplan;

namespace {

using Vec = Eigen::Vector3d;
constexpr GdopOptions kSpatialTrace{GdopGeometry::Spatial, GdopFormula::Trace};

std::vector<std::array<double, 3>> plain(const std::vector<Vec>& v) {
  std::vector<std::array<double, 3>> out;
  for (const auto& r : v) out.push_back({r.x(), r.y(), r.z()});
  return out;
}

double gdop(const Vec& p, const std::vector<Vec>& r, GdopOptions o) {
  return gdop_value<double>(p, std::span<const Vec>(r), o).value;
}

int cols_of(GdopGeometry g) { return g == GdopGeometry::Planar ? 2 : g == GdopGeometry::PlanarClock ? 3 : 4; }

// Receivers scattered at varied depths around a tag so every geometry is well posed.
std::vector<Vec> random_scene(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> xy(-1000.0, 1000.0), z(-60.0, -1.0);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(xy(rng), xy(rng), z(rng));
  return out;
}

}  // namespace

TEST_SUITE("gdop") {
  TEST_CASE("visibility rows") {
    std::vector<Vec> r{Vec(1, 0, 0), Vec(3, 4, 0)};
    auto h = visibility_matrix<double>(Vec(0, 0, 0), r);
    CHECK(h.row(0).isApprox(Eigen::RowVector4d(-1, 0, 0, 1)));
    CHECK(h.row(1).isApprox(Eigen::RowVector4d(-0.6, -0.8, 0, 1)));
    std::vector<Vec> same{Vec(0, 0, 0)};
    CHECK_THROWS_AS(visibility_matrix<double>(Vec(0, 0, 0), same), DegenerateGeometryError);
  }

  TEST_CASE("too few receivers") {
    std::vector<Vec> r{Vec(1, 0, 0), Vec(0, 1, 0)};
    CHECK_THROWS_AS(gdop(Vec(0, 0, 0), r, {}), InsufficientReceiversError);
  }

  TEST_CASE("colinear receivers give infinity in every geometry") {
    std::vector<Vec> r{Vec(-500, 0, -20), Vec(100, 0, -20), Vec(700, 0, -20), Vec(900, 0, -20)};
    for (auto geom : {GdopGeometry::Planar, GdopGeometry::PlanarClock, GdopGeometry::Spatial})
      for (auto f : {GdopFormula::Trace, GdopFormula::SquaredDiagonal}) {
        auto v = gdop_value<double>(Vec(300, 0, -20), std::span<const Vec>(r), GdopOptions{geom, f});
        CHECK(std::isinf(v.value));
        CHECK(v.condition == GdopCondition::IllConditioned);
      }
  }

  TEST_CASE("square of four receivers against the reference inverse") {
    std::vector<Vec> r{Vec(1000, 1000, -20), Vec(-1000, 1000, -20), Vec(1000, -1000, -20), Vec(-1000, -1000, -20)};
    const double p[3] = {0, 0, -3};
    for (auto f : {GdopFormula::Trace, GdopFormula::SquaredDiagonal}) {
      bool trace = f == GdopFormula::Trace;
      double got = gdop(Vec(0, 0, -3), r, {GdopGeometry::Planar, f});
      double want = testutil::reference_gdop(p, plain(r), 2, trace);
      CHECK(std::isfinite(got));
      CHECK(std::fabs(got - want) <= 1e-9 * want);
    }
    // equal depths make the z column a multiple of the clock column
    CHECK(std::isinf(gdop(Vec(0, 0, -3), r, kSpatialTrace)));
  }

  TEST_CASE("duplicating a receiver never raises trace GDOP") {
    std::vector<Vec> r{Vec(1000, 1000, -20), Vec(-1000, 1000, -20), Vec(1000, -1000, -20), Vec(-1000, -1000, -20)};
    double before = gdop(Vec(0, 0, -3), r, {GdopGeometry::Planar, GdopFormula::Trace});
    r.push_back(r.front());
    double after = gdop(Vec(0, 0, -3), r, {GdopGeometry::Planar, GdopFormula::Trace});
    CHECK(after <= before + 1e-12);
  }

  TEST_CASE("matches the reference inverse on random scenes") {
    std::mt19937_64 rng(2024);
    int compared = 0;
    for (int trial = 0; trial < 300; ++trial) {
      auto r = random_scene(rng, 4 + trial % 4);
      Vec p(0.0, 0.0, -30.0);
      const double pp[3] = {p.x(), p.y(), p.z()};
      for (auto geom : {GdopGeometry::Planar, GdopGeometry::PlanarClock, GdopGeometry::Spatial})
        for (auto f : {GdopFormula::Trace, GdopFormula::SquaredDiagonal}) {
          auto v = gdop_value<double>(p, std::span<const Vec>(r), GdopOptions{geom, f});
          if (!v.finite() || v.value > 1e4) continue;
          double want = testutil::reference_gdop(pp, plain(r), cols_of(geom), f == GdopFormula::Trace);
          CHECK(std::fabs(v.value - want) <= 1e-9 * want);
          ++compared;
        }
    }
    CHECK(compared > 1000);
  }

  TEST_CASE("invariant under translation and rotation about z") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> shift(-5000.0, 5000.0), angle(0.0, 6.283185307179586);
    for (int trial = 0; trial < 100; ++trial) {
      auto r = random_scene(rng, 5);
      Vec p(10.0, -20.0, -25.0);
      for (auto geom : {GdopGeometry::Planar, GdopGeometry::PlanarClock, GdopGeometry::Spatial}) {
        GdopOptions o{geom, GdopFormula::Trace};
        double base = gdop(p, r, o);
        if (!std::isfinite(base) || base > 1e4) continue;
        Vec t(shift(rng), shift(rng), 0.0);
        Eigen::Matrix3d rot = Eigen::AngleAxisd(angle(rng), Vec::UnitZ()).toRotationMatrix();
        std::vector<Vec> moved, turned;
        for (const auto& x : r) {
          moved.push_back(x + t);
          turned.push_back(rot * x);
        }
        CHECK(gdop(p + t, moved, o) == doctest::Approx(base).epsilon(1e-9));
        CHECK(gdop(rot * p, turned, o) == doctest::Approx(base).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("float instantiation agrees with double") {
    std::vector<Eigen::Vector3f> rf{{500, 0, -19}, {-250, 433, -19}, {-250, -433, -19}};
    std::vector<Vec> rd;
    for (const auto& x : rf) rd.push_back(x.cast<double>());
    float gf = gdop_value<float>(Eigen::Vector3f(10, 20, -3), std::span<const Eigen::Vector3f>(rf)).value;
    double gd = gdop(Vec(10, 20, -3), rd, {});
    CHECK(gf == doctest::Approx(gd).epsilon(1e-4));
  }

  TEST_CASE("ratings") {
    CHECK(gdop_rating(5) == GdopRating::Good);
    CHECK(gdop_rating(1) == GdopRating::Ideal);
    CHECK(gdop_rating(25) == GdopRating::Poor);
    CHECK(gdop_rating(1.5) == GdopRating::Excellent);
    CHECK(gdop_rating(7) == GdopRating::Moderate);
    CHECK(gdop_rating(20) == GdopRating::Fair);
    CHECK(gdop_rating(std::numeric_limits<double>::infinity()) == GdopRating::Poor);
    CHECK_THROWS_AS(gdop_rating(-0.1), ValidationError);
  }

  TEST_CASE("formula and geometry names") {
    CHECK(parse_gdop_formula("trace") == GdopFormula::Trace);
    CHECK(parse_gdop_formula("paper") == GdopFormula::SquaredDiagonal);
    CHECK(parse_gdop_geometry("spatial") == GdopGeometry::Spatial);
    CHECK_THROWS_AS(parse_gdop_formula("fancy"), ValidationError);
  }
}
