#pragma once

// Cross-sectional height profiles h(x) = h_plus(x) - h_minus(x) of w-framed
// convex polygons: construction, the derivative identity diagnostic,
// endpoint regularization, and grid utilities shared by the 1-D solvers.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "eigenwidth/geometry.hpp"

namespace eigenwidth {

struct HeightProfile {
    double d = 0.0;
    int n = 2;  // ambient dimension used by the regularization exponent
    std::vector<double> x;        // grid, x.front() = 0, x.back() = d
    std::vector<double> h;        // piecewise-linear chord lengths
    std::vector<double> h_minus;  // lower boundary graph (empty once stale)
    std::vector<double> h_plus;   // upper boundary graph
    bool boundary_stale = false;

    double value_at(double xq) const {
        if (xq < -1e-12 || xq > d + 1e-12) throw std::out_of_range("profile abscissa out of range [0,d]");
        xq = std::clamp(xq, 0.0, d);
        auto it = std::upper_bound(x.begin(), x.end(), xq);
        std::size_t hi = static_cast<std::size_t>(it - x.begin());
        if (hi == 0) hi = 1;
        if (hi >= x.size()) hi = x.size() - 1;
        const std::size_t lo = hi - 1;
        const double t = (xq - x[lo]) / (x[hi] - x[lo]);
        return h[lo] + t * (h[hi] - h[lo]);
    }

    // exact integral of the piecewise-linear h (the domain volume/area)
    double volume() const {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
            s += 0.5 * (h[i] + h[i + 1]) * (x[i + 1] - x[i]);
        return s;
    }

    double max_h() const { return *std::max_element(h.begin(), h.end()); }

    double argmax_h() const {  // leftmost maximizer
        std::size_t best = 0;
        for (std::size_t i = 1; i < h.size(); ++i)
            if (h[i] > h[best]) best = i;
        return x[best];
    }
};

inline double norm_x(const HeightProfile& p, double xq) {
    if (xq < -1e-12 || xq > p.d + 1e-12) throw std::out_of_range("norm_x abscissa out of range [0,d]");
    xq = std::clamp(xq, 0.0, p.d);
    return std::min(xq, p.d - xq);
}

// Profile of a w-framed (x-normalized) polygon. The grid is the union of the
// boundary-chain vertex abscissas with a uniform grid of at least
// extra_samples points; h is exact at every grid point.
inline HeightProfile build_profile(const ConvexPolygon& poly, std::size_t extra_samples = 512) {
    const BoundaryChains ch = build_chains(poly);
    const double d = ch.d;
    std::vector<double> xs;
    xs.insert(xs.end(), ch.lo_x.begin(), ch.lo_x.end());
    xs.insert(xs.end(), ch.hi_x.begin(), ch.hi_x.end());
    if (extra_samples < 2) extra_samples = 2;
    for (std::size_t i = 0; i < extra_samples; ++i)
        xs.push_back(d * static_cast<double>(i) / static_cast<double>(extra_samples - 1));
    std::sort(xs.begin(), xs.end());
    // merge near-duplicates so interval slopes stay well conditioned
    const double mergetol = 1e-10 * std::max(1.0, d);
    std::vector<double> grid;
    for (double v : xs)
        if (grid.empty() || v - grid.back() > mergetol) grid.push_back(v);
    grid.front() = 0.0;
    grid.back() = d;

    HeightProfile pr;
    pr.d = d;
    pr.x = std::move(grid);
    pr.h_minus.reserve(pr.x.size());
    pr.h_plus.reserve(pr.x.size());
    pr.h.reserve(pr.x.size());
    for (double xv : pr.x) {
        const SliceResult s = slice_chains(ch, xv);
        pr.h_minus.push_back(s.h_minus);
        pr.h_plus.push_back(s.h_plus);
        pr.h.push_back(std::max(0.0, s.h_plus - s.h_minus));
    }
    return pr;
}

// Max over grid intervals of | |h'| - (|h_plus'| + |h_minus'|) | / (1 + |h'|),
// with one-sided interval slopes. Zero (to rounding) exactly in the w-frame.
inline double derivative_identity_residual(const HeightProfile& p) {
    if (p.boundary_stale || p.h_minus.empty())
        throw std::logic_error("boundary graphs unavailable (profile was regularized)");
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < p.x.size(); ++i) {
        const double dx = p.x[i + 1] - p.x[i];
        const double sh = (p.h[i + 1] - p.h[i]) / dx;
        const double sp = (p.h_plus[i + 1] - p.h_plus[i]) / dx;
        const double sm = (p.h_minus[i + 1] - p.h_minus[i]) / dx;
        const double r = std::abs(std::abs(sh) - (std::abs(sp) + std::abs(sm))) / (1.0 + std::abs(sh));
        worst = std::max(worst, r);
    }
    return worst;
}

// Endpoint regularization h_k = (h^{1/(n-1)} + 1/k)^{n-1}; for n = 2 this is
// h + 1/k. Boundary graphs are dropped (they no longer bound a domain).
inline HeightProfile regularize(const HeightProfile& p, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("regularize: k must be positive");
    HeightProfile out;
    out.d = p.d;
    out.n = p.n;
    out.x = p.x;
    out.h.reserve(p.h.size());
    const double e = 1.0 / static_cast<double>(p.n - 1);
    for (double hv : p.h) {
        if (p.n == 2) out.h.push_back(hv + 1.0 / k);
        else out.h.push_back(std::pow(std::pow(hv, e) + 1.0 / k, static_cast<double>(p.n - 1)));
    }
    out.boundary_stale = true;
    return out;
}

// Nested refinement of the profile grid: every interval is split into 2^L
// pieces with L chosen so the step is at most d/n_elements. Doubling
// n_elements refines the previous grid, which keeps Galerkin eigenvalues
// monotone under refinement.
struct Grid1D {
    std::vector<double> x;
    std::vector<double> h;
};

inline Grid1D refine_grid(const HeightProfile& p, std::size_t n_elements) {
    if (n_elements < 1) n_elements = 1;
    const double target = p.d / static_cast<double>(n_elements);
    Grid1D g;
    for (std::size_t i = 0; i + 1 < p.x.size(); ++i) {
        const double len = p.x[i + 1] - p.x[i];
        int L = 0;
        while (len / std::pow(2.0, L) > target && L < 30) ++L;
        const std::size_t m = static_cast<std::size_t>(1) << L;
        for (std::size_t j = 0; j < m; ++j) {
            const double t = static_cast<double>(j) / static_cast<double>(m);
            g.x.push_back(p.x[i] + t * len);
            g.h.push_back(p.h[i] + t * (p.h[i + 1] - p.h[i]));
        }
    }
    g.x.push_back(p.x.back());
    g.h.push_back(p.h.back());
    return g;
}

}  // namespace eigenwidth
