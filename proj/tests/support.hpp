#pragma once

// Shared test-side oracles, kept independent of the library implementations:
// brute-force geometry, a deterministic random polygon source, and Bessel
// series utilities for closed-form eigenvalue references.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "eigenwidth/geometry.hpp"

namespace testsupport {

using eigenwidth::ConvexPolygon;
using eigenwidth::Vec2;

// --- deterministic RNG helpers ---------------------------------------------

struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    double uniform() { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    int uniform_int(int a, int b) { return a + static_cast<int>(uniform() * (b - a + 1)); }
};

// --- convex hull (Andrew monotone chain), strict turns ----------------------

inline std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
                  return a.x == b.x && a.y == b.y;
              }),
              pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Vec2> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && eigenwidth::cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 1e-12) --k;
        h[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && eigenwidth::cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 1e-12) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

// Random strictly convex polygon with roughly the requested aspect.
inline ConvexPolygon random_polygon(Rng& rng, double sx = 1.0, double sy = 1.0) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        const int m = rng.uniform_int(5, 28);
        std::vector<Vec2> pts;
        for (int i = 0; i < m; ++i) {
            const double a = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
            const double r = std::sqrt(rng.uniform());
            pts.push_back({sx * r * std::cos(a), sy * r * std::sin(a)});
        }
        std::vector<Vec2> hull = testsupport::convex_hull(pts);
        if (hull.size() < 3) continue;
        try {
            return eigenwidth::make_convex_polygon(hull);
        } catch (const std::exception&) {
            continue;
        }
    }
    throw std::runtime_error("random_polygon: generation failed");
}

// --- brute-force geometry oracles -------------------------------------------

inline double brute_diameter(const ConvexPolygon& p) {
    double best2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            const Vec2 d = p[j] - p[i];
            best2 = std::max(best2, d.x * d.x + d.y * d.y);
        }
    return std::sqrt(best2);
}

inline double brute_projective_width(const ConvexPolygon& p) {
    const std::size_t n = p.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = p[i], b = p[(i + 1) % n];
        double far = 0.0;
        for (std::size_t q = 0; q < n; ++q)
            far = std::max(far, eigenwidth::cross(b - a, p[q] - a) / eigenwidth::norm(b - a));
        best = std::min(best, far);
    }
    return best;
}

// Vertical slice by direct segment intersection (independent of the chains).
inline bool brute_slice(const ConvexPolygon& p, double x, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -std::numeric_limits<double>::infinity();
    const std::size_t n = p.size();
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = p[i], b = p[(i + 1) % n];
        if ((a.x - x) * (b.x - x) > 0.0) continue;
        if (a.x == b.x) {
            if (a.x == x) {
                lo = std::min({lo, a.y, b.y});
                hi = std::max({hi, a.y, b.y});
                any = true;
            }
            continue;
        }
        const double t = (x - a.x) / (b.x - a.x);
        if (t < -1e-12 || t > 1.0 + 1e-12) continue;
        const double y = a.y + t * (b.y - a.y);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
        any = true;
    }
    return any;
}

inline double fan_area(const ConvexPolygon& p) {
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i)
        s += 0.5 * eigenwidth::cross(p[i] - p[0], p[i + 1] - p[0]);
    return s;
}

// --- Bessel utilities (series; adequate for arguments below ~12) ------------

inline double bessel_j0(double x) {
    double term = 1.0, sum = 1.0;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 60; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

inline double bessel_j1(double x) {
    double term = 0.5 * x, sum = term;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 60; ++k) {
        term *= -q / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

inline double bisect(double (*f)(double), double a, double b, double tol = 1e-13) {
    double fa = f(a);
    for (int i = 0; i < 200 && b - a > tol; ++i) {
        const double m = 0.5 * (a + b), fm = f(m);
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// first positive zero of J1: the Neumann condition for the weight h(x) = x
inline double bessel_j1_zero1() {
    return bisect(&bessel_j1, 3.5, 4.2);
}

// first positive zero of J0: odd modes of the symmetric hat weight
inline double bessel_j0_zero1() {
    return bisect(&bessel_j0, 2.0, 3.0);
}

// first positive zero of J1' (dipole mode of the unit disk)
inline double bessel_j1p_zero1() {
    auto f = [](double x) { return bessel_j0(x) - bessel_j1(x) / x; };
    double a = 1.5, b = 2.2, fa = f(a);
    for (int i = 0; i < 200 && b - a > 1e-13; ++i) {
        const double m = 0.5 * (a + b), fm = f(m);
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace testsupport
