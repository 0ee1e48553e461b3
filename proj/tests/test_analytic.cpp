#include <doctest.h>

#include <numbers>
#include <random>

#include "rxplan/analytic.hpp"

using namespace rxplan;

namespace {

using V2 = Eigen::Vector2d;

// Direct evaluation of the triple-lens construction: intersection chord D,
// central equilateral triangle and three circular segments.
double lens_area(double r, double l) {
  double d = 0.5 * (std::sqrt(3.0 * (4.0 * r * r - l * l)) - l);
  double tri = std::sqrt(3.0) / 4.0 * d * d;
  double half_angle = std::asin(d / (2.0 * r));
  double seg = r * r * half_angle - 0.5 * d * std::sqrt(r * r - d * d / 4.0);
  return tri + 3.0 * seg;
}

}  // namespace

TEST_SUITE("analytic") {
  TEST_CASE("unit circles one apart") {
    auto pts = circle_intersections<double>(V2(0, 0), 1.0, V2(1, 0), 1.0);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].x() == doctest::Approx(0.5));
    CHECK(std::fabs(pts[0].y()) == doctest::Approx(std::sqrt(3.0) / 2.0));
    CHECK(pts[0].y() == doctest::Approx(-pts[1].y()));
  }

  TEST_CASE("disjoint, tangent and coincident circles") {
    CHECK(circle_intersections<double>(V2(0, 0), 1.0, V2(3, 0), 1.0).empty());
    auto t = circle_intersections<double>(V2(0, 0), 1.0, V2(2, 0), 1.0);
    REQUIRE(t.size() == 1);
    CHECK(t[0].isApprox(V2(1, 0)));
    CHECK_THROWS_AS(circle_intersections<double>(V2(1, 1), 2.0, V2(1, 1), 2.0), InfiniteIntersectionError);
    CHECK(circle_intersections<double>(V2(1, 1), 2.0, V2(1, 1), 1.0).empty());
    CHECK_THROWS_AS(circle_intersections<double>(V2(0, 0), 0.0, V2(1, 0), 1.0), DomainError);
  }

  TEST_CASE("intersection points lie on both circles") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> c(-50.0, 50.0), r(1.0, 60.0);
    int found = 0;
    for (int i = 0; i < 2000; ++i) {
      V2 c1(c(rng), c(rng)), c2(c(rng), c(rng));
      double r1 = r(rng), r2 = r(rng);
      for (const auto& p : circle_intersections<double>(c1, r1, c2, r2)) {
        CHECK(std::fabs((p - c1).norm() - r1) <= 1e-9 * std::max(1.0, r1));
        CHECK(std::fabs((p - c2).norm() - r2) <= 1e-9 * std::max(1.0, r2));
        ++found;
      }
    }
    CHECK(found > 1000);
  }

  TEST_CASE("triple-overlap area endpoints and hand value") {
    CHECK(equilateral_coverage_area(1.0, 0.0) == doctest::Approx(std::numbers::pi).epsilon(1e-12));
    CHECK(std::fabs(equilateral_coverage_area(1.0, std::sqrt(3.0))) <= 1e-12);
    CHECK(equilateral_coverage_area(1.0, 1.0) == doctest::Approx(0.7048).epsilon(1e-4));
    CHECK(equilateral_coverage_area(10.0, 10.0) == doctest::Approx(70.48).epsilon(1e-4));
    CHECK_THROWS_AS(equilateral_coverage_area(1.0, -0.1), DomainError);
    CHECK_THROWS_AS(equilateral_coverage_area(1.0, 1.8), DomainError);
  }

  TEST_CASE("area matches the lens construction and decreases") {
    double prev = equilateral_coverage_area(1.0, 0.0);
    for (int i = 1; i <= 1000; ++i) {
      double l = std::sqrt(3.0) * i / 1000.0;
      double s = equilateral_coverage_area(1.0, l);
      CHECK(s <= prev);
      if (i < 1000) CHECK(s == doctest::Approx(lens_area(1.0, l)).epsilon(1e-12));
      prev = s;
    }
  }

  TEST_CASE("grid coverage tracks the closed form") {
    for (double lr : {0.3, 0.8, 1.3}) {
      double numeric = equilateral_grid_coverage(100.0, lr * 100.0, {std::numeric_limits<double>::infinity()}, 1.0)[0];
      double exact = equilateral_coverage_area(1.0, lr);
      CHECK(numeric == doctest::Approx(exact).epsilon(0.02));
    }
  }

  TEST_CASE("scan shape") {
    ScanCurve c = spacing_scan(100.0, 5.0, 20, 2.0);
    CHECK(c.points.size() == 21);
    CHECK(c.points.front().l_over_r == 0.0);
    CHECK(c.points.back().l_over_r == doctest::Approx(std::sqrt(3.0)));
    // all three receivers coincide at l = 0, so nothing is localizable
    CHECK(c.points.front().coverage_over_r2 == 0.0);
    CHECK(c.best.coverage_over_r2 > 1.0);
    CHECK_THROWS_AS(spacing_scan(100.0, 5.0, 9, 2.0), ValidationError);
    ScanCurve a = analytic_curve(20);
    CHECK(a.best.l_over_r == 0.0);
    CHECK(a.best.coverage_over_r2 == doctest::Approx(std::numbers::pi));
  }

  TEST_CASE("scan refinement moves the argmax by at most one coarse step") {
    ScanCurve coarse = spacing_scan(100.0, 5.0, 10, 1.0);
    ScanCurve fine = spacing_scan(100.0, 5.0, 100, 1.0);
    CHECK(std::fabs(coarse.best.l_over_r - fine.best.l_over_r) <= std::sqrt(3.0) / 10.0 + 1e-12);
  }

  TEST_CASE("threads do not change the scan") {
    ScanOptions one, four;
    four.threads = 4;
    ScanCurve a = spacing_scan(50.0, 8.0, 12, 1.0, one);
    ScanCurve b = spacing_scan(50.0, 8.0, 12, 1.0, four);
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].coverage_over_r2 == b.points[i].coverage_over_r2);
  }
}
