#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "eigenwidth/geometry.hpp"

namespace eigenwidth {

// Test families, all with diameter 2 and aperture eps so that results are
// directly comparable across shapes.

// [0, sqrt(4 - eps^2)] x [0, eps]: the diagonal is the diameter
inline ConvexPolygon rectangle_domain(double eps) {
    if (eps <= 0.0 || eps >= 2.0)
        throw std::invalid_argument("rectangle_domain: eps out of range");
    const double a = std::sqrt(4.0 - eps * eps);
    return make_convex_polygon({{0.0, 0.0}, {a, 0.0}, {a, eps}, {0.0, eps}});
}

// flat isoceles spike: base 2, apex height eps
inline ConvexPolygon triangle_domain(double eps) {
    if (eps <= 0.0 || eps >= 1.0)
        throw std::invalid_argument("triangle_domain: eps out of range");
    return make_convex_polygon({{0.0, 0.0}, {2.0, 0.0}, {1.0, eps}});
}

// lens-like hexagon: flat mid-section of half-length (1 - a) on each side,
// tips drawn in to single points
inline ConvexPolygon hexagon_domain(double eps, double a = 0.5) {
    if (eps <= 0.0 || eps >= 1.0)
        throw std::invalid_argument("hexagon_domain: eps out of range");
    if (a <= 0.0 || a >= 1.0)
        throw std::invalid_argument("hexagon_domain: shoulder out of range");
    return make_convex_polygon({{0.0, eps / 2.0},
                                {a, 0.0},
                                {2.0 - a, 0.0},
                                {2.0, eps / 2.0},
                                {2.0 - a, eps},
                                {a, eps}});
}

namespace detail {

inline std::vector<Vec2> seeded_points(std::uint64_t seed, std::size_t n_points) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vec2> pts;
    pts.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double x = unit(gen);
        const double y = unit(gen);
        pts.push_back({2.0 * x, y});
    }
    return pts;
}

}  // namespace detail

// Seeded random convex domain with the requested aperture: a hull of uniform
// points is w-normalized, squeezed vertically to the target, and
// re-normalized.  The squeeze can rotate the minimal direction slightly, so
// seeds whose final width strays more than 10% from the target are skipped
// deterministically.
inline ConvexPolygon random_domain(std::uint64_t seed, double eps) {
    if (eps <= 0.0 || eps >= 1.0)
        throw std::invalid_argument("random_domain: eps out of range");
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        const std::uint64_t s = seed + attempt * 0x9e3779b97f4a7c15ULL;
        auto pts = detail::seeded_points(s, 14);
        ConvexPolygon hull;
        try {
            hull = convex_hull(pts);
        } catch (const std::invalid_argument&) {
            continue;  // degenerate draw
        }
        if (hull.size() < 5) continue;
        auto norm = normalize_w_frame(hull);
        const double squeeze = eps / norm.frame.eps;
        std::vector<Vec2> squeezed;
        for (std::size_t i = 0; i < norm.poly.size(); ++i)
            squeezed.push_back({norm.poly[i].x, norm.poly[i].y * squeeze});
        auto final_norm = normalize_w_frame(make_convex_polygon(squeezed));
        if (std::abs(final_norm.frame.eps - eps) <= 0.1 * eps)
            return final_norm.poly;
    }
    throw std::runtime_error("random_domain: no admissible hull for seed");
}

inline const std::vector<std::string>& family_names() {
    static const std::vector<std::string> names = {"rectangle", "triangle",
                                                   "hexagon", "random"};
    return names;
}

inline ConvexPolygon family_domain(const std::string& family, double eps,
                                   std::uint64_t seed = 1) {
    if (family == "rectangle") return rectangle_domain(eps);
    if (family == "triangle") return triangle_domain(eps);
    if (family == "hexagon") return hexagon_domain(eps);
    if (family == "random") return random_domain(seed, eps);
    throw std::invalid_argument("family_domain: unknown family " + family);
}

}  // namespace eigenwidth
