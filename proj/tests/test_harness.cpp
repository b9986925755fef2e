#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "eigenwidth/families.hpp"
#include "eigenwidth/geometry.hpp"
#include "eigenwidth/io.hpp"
#include "eigenwidth/records.hpp"
#include "support.hpp"

using namespace eigenwidth;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("deterministic families hit diameter 2 and the requested aperture") {
    for (double eps : {0.2, 0.1, 0.05}) {
        for (const char* fam : {"rectangle", "triangle", "hexagon"}) {
            const auto poly = family_domain(fam, eps);
            CHECK(diameter(poly).value == Catch::Approx(2.0).margin(1e-12));
            CHECK(width(poly).value == Catch::Approx(eps).margin(1e-9));
            CHECK(polygon_area(poly) > 0.0);
        }
    }
    CHECK_THROWS_AS(rectangle_domain(0.0), std::invalid_argument);
    CHECK_THROWS_AS(triangle_domain(1.5), std::invalid_argument);
    CHECK_THROWS_AS(family_domain("pentagon", 0.1), std::invalid_argument);
}

TEST_CASE("hull construction matches the brute oracle on random clouds") {
    testsupport::Rng rng(4242);
    for (int rep = 0; rep < 40; ++rep) {
        std::vector<Vec2> pts;
        const int n = rng.uniform_int(3, 40);
        for (int i = 0; i < n; ++i)
            pts.push_back({rng.uniform(-1.0, 3.0), rng.uniform(-2.0, 2.0)});
        ConvexPolygon lib, oracle;
        bool lib_ok = true, oracle_ok = true;
        try {
            lib = convex_hull(pts);
        } catch (const std::invalid_argument&) {
            lib_ok = false;
        }
        try {
            oracle = make_convex_polygon(testsupport::convex_hull(pts));
        } catch (const std::invalid_argument&) {
            oracle_ok = false;
        }
        REQUIRE(lib_ok == oracle_ok);
        if (!lib_ok) continue;
        CHECK(polygon_area(lib) ==
              Catch::Approx(polygon_area(oracle)).epsilon(1e-12));
        CHECK(lib.size() == oracle.size());
        // every input point lies inside (or on) the hull
        for (const Vec2& q : pts) {
            for (std::size_t i = 0; i < lib.size(); ++i) {
                const Vec2 a = lib[i], b = lib[(i + 1) % lib.size()];
                CHECK(cross(b - a, q - a) >= -1e-9);
            }
        }
    }
}

TEST_CASE("random family is seed-deterministic and width-targeted") {
    for (std::uint64_t seed : {1ULL, 7ULL, 1234ULL}) {
        for (double eps : {0.2, 0.05}) {
            const auto p1 = random_domain(seed, eps);
            const auto p2 = random_domain(seed, eps);
            REQUIRE(p1.size() == p2.size());
            for (std::size_t i = 0; i < p1.size(); ++i) {
                CHECK(p1[i].x == p2[i].x);  // bit-for-bit
                CHECK(p1[i].y == p2[i].y);
            }
            CHECK(diameter(p1).value == Catch::Approx(2.0).margin(1e-9));
            CHECK(std::abs(width(p1).value - eps) <= 0.1 * eps);
            CHECK(p1.size() >= 5);
        }
    }
    // different seeds give different hulls
    const auto a = random_domain(1, 0.2);
    const auto b = random_domain(2, 0.2);
    bool same = a.size() == b.size();
    if (same)
        for (std::size_t i = 0; i < a.size(); ++i)
            same = same && a[i].x == b[i].x && a[i].y == b[i].y;
    CHECK_FALSE(same);
}

TEST_CASE("full analysis record is internally coherent on the sharp rectangle") {
    const double eps = 0.2;
    const auto r = analyze_family_member("rectangle", eps);

    const double exact = kPi * kPi / (4.0 - eps * eps);
    // frame extent along x is the rectangle length; the diagonal is the diameter
    CHECK(r.d == Catch::Approx(std::sqrt(4.0 - eps * eps)).margin(1e-12));
    CHECK(r.width == Catch::Approx(eps).margin(1e-9));
    CHECK(r.area == Catch::Approx(eps * std::sqrt(4.0 - eps * eps)).margin(1e-12));

    CHECK(r.mu2 == Catch::Approx(exact).epsilon(1e-3));
    CHECK(r.mu1 == Catch::Approx(exact).epsilon(1e-4));
    CHECK(std::abs(r.mu2 - r.mu1) <= 1e-3 * exact);
    CHECK(r.res2 <= 1e-10);
    CHECK(r.res1 <= 1e-10);
    CHECK(r.mu_bound >= r.mu1 * (1.0 - 1e-6));

    CHECK(r.slack == r.mu2 - kQuarterPiSq);  // definitional, exact
    CHECK(r.c_emp == r.slack / (r.width * r.width));
    CHECK(r.c_emp == Catch::Approx(kPi * kPi / (4.0 * (4.0 - eps * eps)))
                         .epsilon(2e-2));

    CHECK(r.liou_rayleigh >= kQuarterPiSq * (1.0 - 1e-6));
    CHECK(r.liou_residual <= 1e-2);
    CHECK(r.kink_mass >= 0.0);

    CHECK(std::abs(r.c1) <= 1e-6);
    CHECK(r.defect <= 1e-2);
    CHECK(r.gap_sup <= 1e-3);
    CHECK(r.pw_ratio <= 1.05);
    CHECK(r.vef <= 1e-3);
    CHECK(r.dir_y <= 0.2);
    CHECK(r.dir_x >= 0.5);
    CHECK(r.one_minus_k <= 1e-3);
    CHECK(r.szego <= 1.002);
    CHECK(r.szego > 0.0);
    CHECK(std::isnan(r.mu_shoot));  // shooting off by default
}

TEST_CASE("fit selects the weakest empirical constant") {
    std::vector<DomainRecord> rs(3);
    rs[0].family = "a";
    rs[0].eps_target = 0.2;
    rs[0].slack = 0.4;
    rs[0].c_emp = 10.0;
    rs[1].family = "b";
    rs[1].eps_target = 0.1;
    rs[1].slack = 0.006;
    rs[1].c_emp = 0.6;
    rs[2].family = "b";
    rs[2].eps_target = 0.05;
    rs[2].slack = 0.0015;
    rs[2].c_emp = 0.61;
    const auto fit = fit_constant(rs);
    CHECK(fit.c_min == 0.6);
    CHECK(fit.argmin_family == "b");
    CHECK(fit.argmin_eps == 0.1);
    CHECK(fit.slack_min == 0.0015);
    CHECK(fit.per_family.at("a") == 10.0);
    CHECK(fit.per_family.at("b") == 0.6);
    CHECK_THROWS_AS(fit_constant({}), std::invalid_argument);
}

TEST_CASE("records CSV is byte-identical across repeated analysis") {
    auto run_once = [] {
        std::vector<DomainRecord> rs;
        rs.push_back(analyze_family_member("rectangle", 0.2));
        rs.push_back(analyze_family_member("triangle", 0.2));
        rs.push_back(analyze_family_member("random", 0.2, 11));
        sort_records(rs);
        std::ostringstream os;
        write_records_csv(os, rs);
        return os.str();
    };
    const std::string first = run_once();
    const std::string second = run_once();
    CHECK(first == second);
    CHECK(first.find("family,eps_target") != std::string::npos);
    CHECK(first.find("rectangle") != std::string::npos);
    // sorted by family name: "random" precedes "rectangle"
    CHECK(first.find("random") < first.find("rectangle"));
}

TEST_CASE("polygon files round-trip through the text format") {
    testsupport::Rng rng(99);
    const auto poly = testsupport::random_polygon(rng, 2.0, 1.0);
    std::ostringstream os;
    write_polygon(os, poly);
    std::istringstream is(os.str());
    const auto back = read_polygon(is);
    REQUIRE(back.size() == poly.size());
    // %.12g keeps ~12 significant digits; the hull ordering is canonical
    for (std::size_t i = 0; i < poly.size(); ++i) {
        CHECK(back[i].x == Catch::Approx(poly[i].x).margin(1e-9));
        CHECK(back[i].y == Catch::Approx(poly[i].y).margin(1e-9));
    }
    std::istringstream junk("# only comments\n");
    CHECK_THROWS_AS(read_polygon(junk), std::runtime_error);
}

TEST_CASE("profile CSV and mesh VTK emit well-formed text") {
    const auto poly = triangle_domain(0.2);
    const auto prof = build_profile(normalize_w_frame(poly).poly);
    std::ostringstream pcsv;
    write_profile_csv(pcsv, prof);
    const std::string ptext = pcsv.str();
    CHECK(ptext.rfind("x,h,h_minus,h_plus\n", 0) == 0);
    CHECK(std::count(ptext.begin(), ptext.end(), '\n') ==
          static_cast<long>(prof.x.size()) + 1);

    const auto mesh = build_slab_mesh(normalize_w_frame(poly).poly, 0.05);
    std::ostringstream vtk;
    write_vtk(vtk, mesh, std::vector<double>(mesh.nodes.size(), 1.0));
    CHECK(vtk.str().rfind("# vtk DataFile", 0) == 0);
    CHECK(vtk.str().find("CELL_TYPES") != std::string::npos);
    CHECK(vtk.str().find("SCALARS mode double 1") != std::string::npos);
}
