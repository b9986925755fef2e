#include <catch2/catch_amalgamated.hpp>

#include "eigenwidth/geometry.hpp"
#include "support.hpp"

using namespace eigenwidth;
using testsupport::Rng;

TEST_CASE("construction merges collinear vertices and rejects degenerates") {
    // square with a redundant midpoint on the bottom edge
    auto p = make_convex_polygon({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(p.size() == 4);

    CHECK_THROWS_AS(make_convex_polygon({{0, 0}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_convex_polygon({{0, 0}, {1, 0}, {2, 0}}), std::invalid_argument);
    // clockwise input is not a valid counterclockwise convex polygon
    CHECK_THROWS_AS(make_convex_polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), std::invalid_argument);
    // repeated vertex collapses
    CHECK_THROWS_AS(make_convex_polygon({{0, 0}, {0, 0}, {1e-15, 1e-15}}), std::invalid_argument);
}

TEST_CASE("diameter: regular 64-gon matches brute force exactly") {
    std::vector<Vec2> v;
    for (int k = 0; k < 64; ++k) {
        const double a = 2.0 * 3.14159265358979323846 * k / 64.0;
        v.push_back({std::cos(a), std::sin(a)});
    }
    auto p = make_convex_polygon(v);
    const auto dia = diameter(p);
    CHECK(dia.value == testsupport::brute_diameter(p));
    CHECK(dia.value == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("calipers agree with brute force on 500 random convex polygons") {
    Rng rng(20240515);
    for (int trial = 0; trial < 500; ++trial) {
        const double sx = rng.uniform(0.3, 2.0);
        const double sy = rng.uniform(0.05, 2.0);
        auto p = testsupport::random_polygon(rng, sx, sy);
        CAPTURE(trial, p.size());
        CHECK(diameter(p).value == testsupport::brute_diameter(p));
        const auto pw = projective_width(p);
        CHECK(pw.value == testsupport::brute_projective_width(p));
        // planar equality: longest-perpendicular-chord width equals the
        // projection-extent width for convex sets
        const auto w = width(p);
        CHECK(w.value == Catch::Approx(pw.value).epsilon(1e-9));
        CHECK(w.value <= pw.value * (1.0 + 1e-12));
    }
}

TEST_CASE("w-frame normalization of a rectangle, plain and pre-rotated") {
    auto rect = make_convex_polygon({{0, 0}, {1.98, 0}, {1.98, 0.1}, {0, 0.1}});
    const auto norm = normalize_w_frame(rect);
    const double diag = std::hypot(1.98, 0.1);
    const double scale = 2.0 / diag;
    CHECK(norm.frame.scale == Catch::Approx(scale).epsilon(1e-13));
    CHECK(norm.frame.d == Catch::Approx(1.98 * scale).epsilon(1e-12));
    CHECK(norm.frame.eps == Catch::Approx(0.1 * scale).epsilon(1e-12));
    CHECK(norm.frame.eps == Catch::Approx(0.1009).epsilon(2e-3));
    // output occupies [0,d] x [0,eps]
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& q : norm.poly.v) {
        xmin = std::min(xmin, q.x);
        xmax = std::max(xmax, q.x);
        ymin = std::min(ymin, q.y);
        ymax = std::max(ymax, q.y);
    }
    CHECK(std::abs(xmin) < 1e-12);
    CHECK(std::abs(ymin) < 1e-12);
    CHECK(xmax == Catch::Approx(norm.frame.d));
    CHECK(ymax == Catch::Approx(norm.frame.eps));

    // same rectangle pre-rotated by 37 degrees: congruent output
    const double ang = 37.0 * 3.14159265358979323846 / 180.0;
    const auto norm2 = normalize_w_frame(rotated(rect, ang));
    REQUIRE(norm2.poly.size() == norm.poly.size());
    // vertex sets match as sets (cyclic order may differ by start index)
    for (const auto& q : norm.poly.v) {
        double best = 1e300;
        for (const auto& r : norm2.poly.v) best = std::min(best, eigenwidth::norm(q - r));
        CHECK(best < 1e-9);
    }
}

TEST_CASE("w-frame places diameter 2 and width eps on 200 random polygons") {
    Rng rng(777001);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = testsupport::random_polygon(rng, rng.uniform(0.5, 2.0), rng.uniform(0.1, 2.0));
        const auto nw = normalize_w_frame(p);
        CAPTURE(trial);
        CHECK(diameter(nw.poly).value == Catch::Approx(2.0).epsilon(1e-12));
        CHECK(projective_width(nw.poly).value == Catch::Approx(nw.frame.eps).epsilon(1e-12));
        CHECK(nw.frame.d <= 2.0 + 1e-12);
        CHECK(nw.frame.eps <= nw.frame.d + 1e-12);
        // centroid on or above the slab midline
        CHECK(centroid(nw.poly).y >= 0.5 * nw.frame.eps - 1e-9);
        // the minimizing direction is the x-axis now: projection onto the
        // y-axis has extent eps
        double ymin = 1e300, ymax = -1e300;
        for (const auto& q : nw.poly.v) {
            ymin = std::min(ymin, q.y);
            ymax = std::max(ymax, q.y);
        }
        CHECK(ymax - ymin == Catch::Approx(nw.frame.eps).epsilon(1e-10));
    }
}

TEST_CASE("slice matches the brute-force edge-intersection oracle") {
    Rng rng(98321);
    for (int trial = 0; trial < 60; ++trial) {
        auto p = testsupport::random_polygon(rng, 1.0, rng.uniform(0.2, 1.0));
        const auto nw = normalize_w_frame(p);
        for (int s = 0; s < 8; ++s) {
            const double x = rng.uniform() * nw.frame.d;
            const auto sl = slice(nw.poly, x);
            double lo, hi;
            REQUIRE(testsupport::brute_slice(nw.poly, x, lo, hi));
            CHECK(sl.h_minus == Catch::Approx(lo).margin(1e-10));
            CHECK(sl.h_plus == Catch::Approx(hi).margin(1e-10));
        }
    }
    auto sq = make_convex_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK_THROWS_AS(slice(sq, -0.5), std::out_of_range);
    CHECK_THROWS_AS(slice(sq, 1.5), std::out_of_range);
}

TEST_CASE("area agrees with the fan-triangulation oracle") {
    Rng rng(5150);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = testsupport::random_polygon(rng);
        CHECK(polygon_area(p) == Catch::Approx(testsupport::fan_area(p)).epsilon(1e-12));
        CHECK(polygon_area(p) > 0.0);
    }
}
