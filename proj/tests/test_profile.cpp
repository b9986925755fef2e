#include <catch2/catch_amalgamated.hpp>

#include "eigenwidth/profile.hpp"
#include "support.hpp"

using namespace eigenwidth;
using testsupport::Rng;

namespace {

ConvexPolygon thin_hex(double eps) {
    return make_convex_polygon({{0, 0},
                                {0.5, -eps / 2},
                                {1.5, -eps / 2},
                                {2, 0},
                                {1.5, eps / 2},
                                {0.5, eps / 2}});
}

}  // namespace

TEST_CASE("profile of a square is constant and integrates to the area") {
    auto sq = make_convex_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    auto pr = build_profile(sq, 64);
    for (double hv : pr.h) CHECK(hv == Catch::Approx(1.0).margin(1e-14));
    CHECK(pr.volume() == Catch::Approx(polygon_area(sq)).margin(1e-10));
    CHECK(pr.d == Catch::Approx(1.0));
}

TEST_CASE("profile of the thin triangle is the hat function") {
    auto tri = make_convex_polygon({{0, 0}, {2, 0}, {1, 0.2}});
    auto nw = normalize_w_frame(tri);
    auto pr = build_profile(nw.poly, 128);
    CHECK(pr.d == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(pr.value_at(1.0) == Catch::Approx(0.2).epsilon(1e-12));
    CHECK(pr.value_at(0.5) == Catch::Approx(0.1).epsilon(1e-12));
    CHECK(pr.value_at(0.0) == Catch::Approx(0.0).margin(1e-14));
    CHECK(pr.max_h() == Catch::Approx(nw.frame.eps).epsilon(1e-12));
    CHECK(pr.argmax_h() == Catch::Approx(1.0).epsilon(1e-9));
    CHECK(pr.volume() == Catch::Approx(polygon_area(nw.poly)).margin(1e-12));
}

TEST_CASE("derivative identity holds in the w-frame, fails off-frame") {
    Rng rng(424242);
    for (int trial = 0; trial < 120; ++trial) {
        auto p = testsupport::random_polygon(rng, 1.0, rng.uniform(0.05, 1.0));
        auto nw = normalize_w_frame(p);
        auto pr = build_profile(nw.poly, 100);
        CAPTURE(trial);
        CHECK(derivative_identity_residual(pr) <= 1e-9);
        CHECK(pr.max_h() == Catch::Approx(nw.frame.eps).epsilon(1e-9));
        CHECK(pr.volume() == Catch::Approx(polygon_area(nw.poly)).margin(1e-10));
    }

    // deliberately mis-rotated thin hexagon: the identity is frame dependent
    auto hex = thin_hex(0.12);
    auto rot = rotated(hex, 10.0 * 3.14159265358979323846 / 180.0);
    double xmin = 1e300;
    for (const auto& q : rot.v) xmin = std::min(xmin, q.x);
    auto shifted = translated(rot, {-xmin, 0.0});
    auto pr = build_profile(shifted, 100);
    CHECK(derivative_identity_residual(pr) > 1e-3);
}

TEST_CASE("regularize shifts the profile and drops boundary graphs") {
    auto tri = make_convex_polygon({{0, 0}, {2, 0}, {1, 0.2}});
    auto pr = build_profile(normalize_w_frame(tri).poly, 64);
    auto reg = regularize(pr, 1000.0);
    REQUIRE(reg.h.size() == pr.h.size());
    for (std::size_t i = 0; i < pr.h.size(); ++i)
        CHECK(reg.h[i] - pr.h[i] == Catch::Approx(1e-3).epsilon(1e-12));
    CHECK(reg.boundary_stale);
    CHECK_THROWS_AS(derivative_identity_residual(reg), std::logic_error);
    CHECK_THROWS_AS(regularize(pr, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(regularize(pr, -3.0), std::invalid_argument);
}

TEST_CASE("norm_x distance to the nearer endpoint") {
    auto sq = make_convex_polygon({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    auto pr = build_profile(sq, 16);
    CHECK(norm_x(pr, 0.3) == Catch::Approx(0.3));
    CHECK(norm_x(pr, 1.7) == Catch::Approx(0.3));
    CHECK(norm_x(pr, 1.0) == Catch::Approx(1.0));
    CHECK_THROWS_AS(norm_x(pr, -0.1), std::out_of_range);
    CHECK_THROWS_AS(norm_x(pr, 2.1), std::out_of_range);
}

TEST_CASE("refine_grid is nested under doubling and exact on the profile") {
    auto hex = thin_hex(0.2);
    auto pr = build_profile(normalize_w_frame(hex).poly, 24);
    auto g1 = refine_grid(pr, 256);
    auto g2 = refine_grid(pr, 512);
    // every coarse point appears in the fine grid
    std::size_t j = 0;
    for (double xv : g1.x) {
        while (j < g2.x.size() && g2.x[j] < xv - 1e-13) ++j;
        REQUIRE(j < g2.x.size());
        CHECK(g2.x[j] == Catch::Approx(xv).margin(1e-13));
    }
    for (std::size_t i = 0; i < g1.x.size(); ++i)
        CHECK(g1.h[i] == Catch::Approx(pr.value_at(g1.x[i])).margin(1e-13));
    CHECK(g1.x.size() >= 257);
}
