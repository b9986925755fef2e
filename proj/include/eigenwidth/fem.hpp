#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "eigenwidth/geometry.hpp"
#include "eigenwidth/ode.hpp"

namespace eigenwidth {

struct SlabMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<std::size_t, 3>> tris;  // counterclockwise
};

inline double mesh_area(const SlabMesh& m) {
    double a = 0.0;
    for (const auto& t : m.tris)
        a += 0.5 * cross(m.nodes[t[1]] - m.nodes[t[0]],
                         m.nodes[t[2]] - m.nodes[t[0]]);
    return a;
}

struct MeshQuality {
    double min_angle_deg = 180.0;
    double max_angle_deg = 0.0;
    double min_edge = 0.0;
    std::size_t bad_orientation = 0;  // triangles with nonpositive signed area
};

inline MeshQuality mesh_quality(const SlabMesh& m) {
    MeshQuality q;
    q.min_edge = std::numeric_limits<double>::infinity();
    for (const auto& t : m.tris) {
        const Vec2 p[3] = {m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]]};
        if (cross(p[1] - p[0], p[2] - p[0]) <= 0.0) ++q.bad_orientation;
        for (int i = 0; i < 3; ++i) {
            const Vec2 u = p[(i + 1) % 3] - p[i];
            const Vec2 v = p[(i + 2) % 3] - p[i];
            const double ang =
                std::atan2(std::abs(cross(u, v)), dot(u, v)) * 180.0 /
                3.14159265358979323846;
            q.min_angle_deg = std::min(q.min_angle_deg, ang);
            q.max_angle_deg = std::max(q.max_angle_deg, ang);
            q.min_edge = std::min(q.min_edge, norm(u));
        }
    }
    return q;
}

inline long euler_characteristic(const SlabMesh& m) {
    std::unordered_set<unsigned long long> edges;
    edges.reserve(3 * m.tris.size());
    for (const auto& t : m.tris)
        for (int i = 0; i < 3; ++i) {
            unsigned long long a = t[i], b = t[(i + 1) % 3];
            if (a > b) std::swap(a, b);
            edges.insert((a << 32) | b);
        }
    return static_cast<long>(m.nodes.size()) - static_cast<long>(edges.size()) +
           static_cast<long>(m.tris.size());
}

// Structured mesh of a w-framed convex polygon: vertical node columns at
// every boundary-vertex abscissa (subdivided so that both the column spacing
// and the boundary rise per strip stay below the target), nodes laid
// uniformly between the exact lower and upper chain values, and each strip
// triangulated by the shorter-diagonal ladder rule.  Boundary nodes sit
// exactly on the polygon, so the triangles tile it exactly.
//
// Where a chain is steeper than tan(60 deg) (e.g. next to a pinched tip)
// near-degenerate angles against the vertical columns are unavoidable; those
// slivers carry negligible measure.  On gently sloped input the mesh keeps
// every angle at or below 150 degrees.
inline SlabMesh build_slab_mesh(const ConvexPolygon& poly, double target) {
    if (!(target > 0.0)) throw std::invalid_argument("mesh target must be positive");
    const BoundaryChains ch = build_chains(poly);
    const double tol = 1e-12 * std::max(1.0, ch.d);

    std::vector<double> vcols;
    vcols.reserve(ch.lo_x.size() + ch.hi_x.size());
    vcols.insert(vcols.end(), ch.lo_x.begin(), ch.lo_x.end());
    vcols.insert(vcols.end(), ch.hi_x.begin(), ch.hi_x.end());
    std::sort(vcols.begin(), vcols.end());
    std::vector<double> base;
    for (double x : vcols)
        if (base.empty() || x - base.back() > tol) base.push_back(x);
    base.front() = 0.0;
    base.back() = ch.d;

    std::vector<double> cols;
    cols.push_back(0.0);
    for (std::size_t i = 0; i + 1 < base.size(); ++i) {
        const double a = base[i], b = base[i + 1];
        const auto sa = slice_chains(ch, a), sb = slice_chains(ch, b);
        const double need = std::max({b - a, std::abs(sb.h_minus - sa.h_minus),
                                      std::abs(sb.h_plus - sa.h_plus)});
        const int m = std::max(1, static_cast<int>(std::ceil(need / target)));
        for (int j = 1; j <= m; ++j) cols.push_back(a + (b - a) * j / m);
        cols.back() = b;
    }

    SlabMesh mesh;
    std::vector<std::vector<std::size_t>> column_nodes(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto s = slice_chains(ch, cols[c]);
        const double h = s.h_plus - s.h_minus;
        if (h <= tol) {
            column_nodes[c].push_back(mesh.nodes.size());
            mesh.nodes.push_back({cols[c], 0.5 * (s.h_minus + s.h_plus)});
            continue;
        }
        const int rows = std::max(1, static_cast<int>(std::ceil(h / target)));
        for (int j = 0; j <= rows; ++j) {
            column_nodes[c].push_back(mesh.nodes.size());
            const double y = (j == rows) ? s.h_plus : s.h_minus + h * j / rows;
            mesh.nodes.push_back({cols[c], y});
        }
    }

    for (std::size_t c = 0; c + 1 < cols.size(); ++c) {
        const auto& A = column_nodes[c];
        const auto& B = column_nodes[c + 1];
        std::size_t i = 0, j = 0;
        while (i + 1 < A.size() || j + 1 < B.size()) {
            bool advance_right;
            if (i + 1 == A.size()) {
                advance_right = true;
            } else if (j + 1 == B.size()) {
                advance_right = false;
            } else {
                advance_right = norm(mesh.nodes[B[j + 1]] - mesh.nodes[A[i]]) <=
                                norm(mesh.nodes[A[i + 1]] - mesh.nodes[B[j]]);
            }
            if (advance_right) {
                mesh.tris.push_back({A[i], B[j], B[j + 1]});
                ++j;
            } else {
                mesh.tris.push_back({A[i], B[j], A[i + 1]});
                ++i;
            }
        }
    }
    return mesh;
}

struct RefinedMesh {
    SlabMesh mesh;
    // each new node is the midpoint of two parent nodes; originals map to
    // themselves
    std::vector<std::array<std::size_t, 2>> parents;
};

inline RefinedMesh refine_with_parents(const SlabMesh& m) {
    RefinedMesh out;
    out.mesh.nodes = m.nodes;
    out.parents.reserve(m.nodes.size() + 3 * m.tris.size() / 2);
    for (std::size_t i = 0; i < m.nodes.size(); ++i) out.parents.push_back({i, i});
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> midpoint;
    auto mid = [&](std::size_t a, std::size_t b) {
        auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const std::size_t id = out.mesh.nodes.size();
        out.mesh.nodes.push_back(0.5 * (m.nodes[a] + m.nodes[b]));
        out.parents.push_back({a, b});
        midpoint.emplace(key, id);
        return id;
    };
    out.mesh.tris.reserve(4 * m.tris.size());
    for (const auto& t : m.tris) {
        const std::size_t ab = mid(t[0], t[1]);
        const std::size_t bc = mid(t[1], t[2]);
        const std::size_t ca = mid(t[2], t[0]);
        out.mesh.tris.push_back({t[0], ab, ca});
        out.mesh.tris.push_back({t[1], bc, ab});
        out.mesh.tris.push_back({t[2], ca, bc});
        out.mesh.tris.push_back({ab, bc, ca});
    }
    return out;
}

inline SlabMesh uniform_refine(const SlabMesh& m) {
    return refine_with_parents(m).mesh;
}

namespace detail {

inline void assemble_planar_p1(const SlabMesh& m, Eigen::SparseMatrix<double>& K,
                               Eigen::SparseMatrix<double>& M) {
    const auto n = static_cast<Eigen::Index>(m.nodes.size());
    std::vector<Eigen::Triplet<double>> tk, tm;
    tk.reserve(9 * m.tris.size());
    tm.reserve(9 * m.tris.size());
    for (const auto& t : m.tris) {
        const Vec2 p0 = m.nodes[t[0]], p1 = m.nodes[t[1]], p2 = m.nodes[t[2]];
        const double a2 = cross(p1 - p0, p2 - p0);
        if (!(a2 > 0.0)) throw std::runtime_error("mesh has a degenerate triangle");
        const double area = 0.5 * a2;
        const Vec2 g[3] = {{(p1.y - p2.y) / a2, (p2.x - p1.x) / a2},
                           {(p2.y - p0.y) / a2, (p0.x - p2.x) / a2},
                           {(p0.y - p1.y) / a2, (p1.x - p0.x) / a2}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                tk.emplace_back(t[i], t[j], area * dot(g[i], g[j]));
                tm.emplace_back(t[i], t[j], area / 12.0 * (i == j ? 2.0 : 1.0));
            }
    }
    K.resize(n, n);
    M.resize(n, n);
    K.setFromTriplets(tk.begin(), tk.end());
    M.setFromTriplets(tm.begin(), tm.end());
}

}  // namespace detail

struct PdeOptions {
    double target = 0.05;  // mesh pitch; additionally capped at aperture/8
    int refinements = 1;   // uniform refinements past the base mesh
    bool extrapolate = true;
    IterationOptions iter{};
};

struct PlanarEigenSolution {
    double mu = 0.0;         // extrapolated when a refinement pair exists
    double mu_raw = 0.0;     // eigenvalue on the finest mesh
    double mu_coarse = 0.0;  // previous level (0 when refinements == 0)
    double rel_change = 0.0;
    SlabMesh mesh;  // finest level
    std::vector<double> u;  // scaled: max +1, weighted mean zero
    double residual = 0.0;
    int iterations = 0;
};

// First nonzero Neumann eigenpair of the Laplacian on a w-framed convex
// polygon.  Conforming P1 on nested meshes, so the raw eigenvalues decrease
// toward the true value and the pairwise extrapolation cancels the leading
// h^2 error term.
inline PlanarEigenSolution solve_planar_neumann(const ConvexPolygon& poly,
                                                const PdeOptions& opt = {}) {
    double eps = 0.0;
    for (const Vec2& q : poly.v) eps = std::max(eps, q.y);
    const double target = std::min(opt.target, eps / 8.0);

    PlanarEigenSolution out;
    SlabMesh mesh = build_slab_mesh(poly, target);
    Eigen::VectorXd start(static_cast<Eigen::Index>(mesh.nodes.size()));
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        start[static_cast<Eigen::Index>(i)] = mesh.nodes[i].x;

    detail::PencilEigenResult r;
    for (int level = 0; level <= opt.refinements; ++level) {
        if (level > 0) {
            auto ref = refine_with_parents(mesh);
            Eigen::VectorXd lifted(
                static_cast<Eigen::Index>(ref.mesh.nodes.size()));
            for (std::size_t i = 0; i < ref.mesh.nodes.size(); ++i)
                lifted[static_cast<Eigen::Index>(i)] =
                    0.5 * (r.u[static_cast<Eigen::Index>(ref.parents[i][0])] +
                           r.u[static_cast<Eigen::Index>(ref.parents[i][1])]);
            mesh = std::move(ref.mesh);
            start = std::move(lifted);
            out.mu_coarse = r.mu;
        }
        Eigen::SparseMatrix<double> K, M;
        detail::assemble_planar_p1(mesh, K, M);
        r = detail::lowest_nonconstant_mode(K, M, std::move(start), opt.iter);
    }

    out.mu_raw = r.mu;
    out.mu = (opt.refinements > 0 && opt.extrapolate)
                 ? r.mu + (r.mu - out.mu_coarse) / 3.0
                 : r.mu;
    out.rel_change =
        out.mu_coarse > 0.0 ? std::abs(out.mu_raw - out.mu_coarse) / out.mu_raw
                            : 0.0;
    out.residual = r.residual;
    out.iterations = r.iterations;

    // orient along increasing x, then scale the maximum to one
    double xbar = 0.0;
    for (const Vec2& q : mesh.nodes) xbar += q.x;
    xbar /= static_cast<double>(mesh.nodes.size());
    double corr = 0.0;
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        corr += r.u[static_cast<Eigen::Index>(i)] * (mesh.nodes[i].x - xbar);
    double top = -std::numeric_limits<double>::infinity();
    const double sign = corr >= 0.0 ? 1.0 : -1.0;
    for (Eigen::Index i = 0; i < r.u.size(); ++i)
        top = std::max(top, sign * r.u[i]);
    if (!(top > 0.0)) throw std::runtime_error("planar mode is degenerate");
    out.u.resize(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        out.u[i] = sign * r.u[static_cast<Eigen::Index>(i)] / top;
    out.mesh = std::move(mesh);
    return out;
}

struct DirectionalProfile {
    double ratio_x = 0.0;  // sup |du/dx| / (sqrt(mu) sup|u|)
    double ratio_y = 0.0;
};

inline DirectionalProfile directional_profile(const PlanarEigenSolution& s) {
    DirectionalProfile d;
    double sup = 0.0;
    for (double v : s.u) sup = std::max(sup, std::abs(v));
    const double scale = std::sqrt(s.mu_raw) * sup;
    for (const auto& t : s.mesh.tris) {
        const Vec2 p0 = s.mesh.nodes[t[0]], p1 = s.mesh.nodes[t[1]],
                   p2 = s.mesh.nodes[t[2]];
        const double a2 = cross(p1 - p0, p2 - p0);
        double gx = 0.0, gy = 0.0;
        const Vec2 pv[3] = {p0, p1, p2};
        for (int i = 0; i < 3; ++i) {
            const Vec2 b = pv[(i + 1) % 3], c = pv[(i + 2) % 3];
            gx += s.u[t[i]] * (b.y - c.y) / a2;
            gy += s.u[t[i]] * (c.x - b.x) / a2;
        }
        d.ratio_x = std::max(d.ratio_x, std::abs(gx) / scale);
        d.ratio_y = std::max(d.ratio_y, std::abs(gy) / scale);
    }
    return d;
}

// Share of the Dirichlet energy carried by the vertical derivative; small for
// modes that are essentially one-dimensional along the long axis.
inline double vertical_energy_fraction(const PlanarEigenSolution& s) {
    double ey = 0.0, etot = 0.0;
    for (const auto& t : s.mesh.tris) {
        const Vec2 p0 = s.mesh.nodes[t[0]], p1 = s.mesh.nodes[t[1]],
                   p2 = s.mesh.nodes[t[2]];
        const double a2 = cross(p1 - p0, p2 - p0);
        double gx = 0.0, gy = 0.0;
        const Vec2 pv[3] = {p0, p1, p2};
        for (int i = 0; i < 3; ++i) {
            const Vec2 b = pv[(i + 1) % 3], c = pv[(i + 2) % 3];
            gx += s.u[t[i]] * (b.y - c.y) / a2;
            gy += s.u[t[i]] * (c.x - b.x) / a2;
        }
        ey += 0.5 * a2 * gy * gy;
        etot += 0.5 * a2 * (gx * gx + gy * gy);
    }
    return etot > 0.0 ? ey / etot : 0.0;
}

// |int u dA| relative to area * sup|u|; the discrete mode is mass-orthogonal
// to constants so this is a pure rounding check.
inline double mass_mean_defect(const PlanarEigenSolution& s) {
    double mean = 0.0, area = 0.0, sup = 0.0;
    for (double v : s.u) sup = std::max(sup, std::abs(v));
    for (const auto& t : s.mesh.tris) {
        const double a = 0.5 * cross(s.mesh.nodes[t[1]] - s.mesh.nodes[t[0]],
                                     s.mesh.nodes[t[2]] - s.mesh.nodes[t[0]]);
        mean += a / 3.0 * (s.u[t[0]] + s.u[t[1]] + s.u[t[2]]);
        area += a;
    }
    return std::abs(mean) / (area * sup);
}

}  // namespace eigenwidth
