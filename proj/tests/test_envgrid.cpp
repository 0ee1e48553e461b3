#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "rxplan/envgrid.hpp"

using namespace rxplan;

namespace {

const char* kTwoByTwo =
    "ncols 2\n"
    "nrows 2\n"
    "xllcorner 0\n"
    "yllcorner 0\n"
    "cellsize 100\n"
    "nodata_value -9999\n"
    "20 20\n"
    "20 20\n";

}  // namespace

TEST_SUITE("envgrid") {
  TEST_CASE("uniform 2x2 grid loads") {
    BathymetryGrid g = load_bathymetry(kTwoByTwo);
    CHECK(g.n_cols() == 2);
    CHECK(g.n_rows() == 2);
    CHECK((g.depths() == 20.0).all());
    CHECK(g.cell_size() == 100.0);
  }

  TEST_CASE("rows are stored north first") {
    BathymetryGrid g = load_bathymetry(
        "NCOLS 3\nNROWS 2\nXLLCORNER 10\nYLLCORNER 20\nCELLSIZE 5\nNODATA_VALUE -1\n"
        "1 2 3\n4 5 6\n");
    CHECK(g.depth(0, 1) == 1.0);
    CHECK(g.depth(2, 1) == 3.0);
    CHECK(g.depth(0, 0) == 4.0);
    CHECK(g.cell_center(0, 0).isApprox(Point2(12.5, 22.5)));
  }

  TEST_CASE("60x60 grid at 100 m spans 6000 m") {
    std::string text = "ncols 60\nnrows 60\nxllcorner 0\nyllcorner 0\ncellsize 100\nnodata_value -9999\n";
    for (int r = 0; r < 60; ++r) {
      for (int c = 0; c < 60; ++c) text += c ? " 25" : "25";
      text += '\n';
    }
    BathymetryGrid g = load_bathymetry(text);
    CHECK(g.width() == 6000.0);
    CHECK(g.height() == 6000.0);
  }

  TEST_CASE("malformed headers and rows") {
    CHECK_THROWS_AS(load_bathymetry("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\nnodata_value -9999\n1 1\n1 1\n"),
                    ParseError);
    CHECK_THROWS_AS(load_bathymetry("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 100\n"
                                    "nodata_value -9999\n1 1 1\n1 1\n"),
                    ParseError);
    CHECK_THROWS_AS(load_bathymetry("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 0\n"
                                    "nodata_value -9999\n1 1\n1 1\n"),
                    ValidationError);
    CHECK_THROWS_AS(load_bathymetry("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 100\n"
                                    "nodata_value -9999\n1 x\n1 1\n"),
                    ParseError);
  }

  TEST_CASE("index_to_position with seabed offset") {
    auto g = testutil::flat_grid(3, 3, 100.0, 20.0);
    Placement p = index_to_position(*g, 0, 0, SeabedOffset{0.5});
    CHECK(p.position.isApprox(Position(50, 50, -19.5)));
    CHECK_FALSE(p.clamped);
  }

  TEST_CASE("fixed depth and seabed clamp") {
    auto deep = testutil::flat_grid(2, 2, 100.0, 25.0);
    CHECK(index_to_position(*deep, 1, 1, FixedDepth{3.0}).position.z() == -3.0);
    auto shallow = testutil::flat_grid(2, 2, 100.0, 5.0);
    Placement p = index_to_position(*shallow, 1, 1, FixedDepth{10.0});
    CHECK(p.position.z() == -5.0);
    CHECK(p.clamped);
  }

  TEST_CASE("nodata and out-of-range cells") {
    RealGrid d = RealGrid::Constant(2, 2, 10.0);
    d(1, 0) = -9999.0;
    BathymetryGrid g(d, 10.0, 0.0, 0.0, -9999.0);
    CHECK_THROWS_AS(index_to_position(g, 1, 0, FixedDepth{3.0}), NoDataError);
    CHECK_THROWS_AS(index_to_position(g, 2, 0, FixedDepth{3.0}), OutOfBoundsError);
  }

  TEST_CASE("position round trip for every cell") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> depth(1.0, 60.0);
    RealGrid d(7, 5);
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = depth(rng);
    d(3, 2) = -1.0;
    BathymetryGrid g(d, 37.5, -100.0, 250.0, -1.0);
    for (std::size_t l = 0; l < g.n_rows(); ++l)
      for (std::size_t k = 0; k < g.n_cols(); ++k) {
        if (g.is_nodata(k, l)) continue;
        Position p = index_to_position(g, k, l, SeabedOffset{0.5}).position;
        auto back = g.position_to_index(p.x(), p.y());
        REQUIRE(back.has_value());
        CHECK(*back == CellIndex{k, l});
      }
    CHECK_FALSE(g.position_to_index(-100.1, 260.0).has_value());
  }

  TEST_CASE("AOI counts") {
    auto g4 = testutil::flat_grid(4, 4, 10.0, 5.0);
    CHECK(build_aoi_mask(*g4, Rect{0, 0, 40, 40}).count == 16);
    auto g100 = testutil::flat_grid(60, 60, 100.0, 20.0);
    CHECK(build_aoi_mask(*g100, Rect{2000, 2000, 4000, 4000}).count == 400);
    CHECK_THROWS_AS(build_aoi_mask(*g4, Rect{100, 100, 200, 200}), EmptyAoiError);
  }

  TEST_CASE("AOI count matches enumeration on random rectangles") {
    RealGrid d = RealGrid::Constant(12, 9, 15.0);
    d(4, 4) = -9999.0;
    d(0, 8) = -9999.0;
    BathymetryGrid g(d, 25.0, 0.0, 0.0, -9999.0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-20.0, 320.0), uy(-20.0, 245.0);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
      double x0 = ux(rng), x1 = ux(rng), y0 = uy(rng), y1 = uy(rng);
      Rect r{std::min(x0, x1), std::min(y0, y1), std::max(x0, x1), std::max(y0, y1)};
      std::size_t expected = 0;
      for (int k = 0; k < 12; ++k)
        for (int l = 0; l < 9; ++l) {
          double cx = 12.5 + 25.0 * k, cy = 12.5 + 25.0 * l;
          if (d(k, l) != -9999.0 && cx >= r.x_min && cx <= r.x_max && cy >= r.y_min && cy <= r.y_max) ++expected;
        }
      if (expected == 0) {
        CHECK_THROWS_AS(build_aoi_mask(g, r), EmptyAoiError);
      } else {
        CHECK(build_aoi_mask(g, r).count == expected);
        ++checked;
      }
    }
    CHECK(checked > 50);
  }

  TEST_CASE("serialize and reload is lossless") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> depth(0.0, 100.0);
    RealGrid d(6, 4);
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = depth(rng);
    d(2, 3) = -9999.0;
    BathymetryGrid g(d, 12.25, 1234.5, -88.125, -9999.0);
    BathymetryGrid back = load_bathymetry(to_ascii_grid(g));
    CHECK(back == g);
    CHECK(to_ascii_grid(back) == to_ascii_grid(g));
  }

  TEST_CASE("sound velocity profiles") {
    SoundVelocityProfile one = load_svp("0,1520");
    REQUIRE(one.samples.size() == 1);
    CHECK(one.samples[0].speed == 1520.0);
    CHECK(load_svp("depth_m,speed_mps\n0,1520\n10,1518\n20,1515\n").samples.size() == 3);
    CHECK_THROWS_AS(load_svp("10,1520\n5,1515"), ValidationError);
    CHECK_THROWS_AS(load_svp("0,1700"), ValidationError);
  }

  TEST_CASE("bilinear seabed between cell centers") {
    RealGrid d(2, 2);
    d << 10, 30, 20, 40;  // (k,l): (0,0)=10 (0,1)=30 (1,0)=20 (1,1)=40
    BathymetryGrid g(d, 10.0, 0.0, 0.0, -9999.0);
    CHECK(g.seabed_depth_at(5.0, 5.0) == doctest::Approx(10.0));
    CHECK(g.seabed_depth_at(10.0, 10.0) == doctest::Approx(25.0));
    CHECK(g.seabed_depth_at(15.0, 10.0) == doctest::Approx(30.0));
  }
}
