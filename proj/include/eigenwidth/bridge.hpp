#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "eigenwidth/fem.hpp"
#include "eigenwidth/geometry.hpp"
#include "eigenwidth/ode.hpp"

namespace eigenwidth {

// Chord averages of the planar mode: ubar(x) is the mean of u over the
// vertical chord at x, computed exactly from the P1 mesh by attributing each
// sample to the triangles whose x-extent contains it (half-open on the
// right, so samples sitting on a mesh column are counted exactly once).
// utilde is ubar recentered so that the weighted mean vanishes under the
// same piecewise-linear quadrature used by every later integral, and F is
// the exact running integral of h * utilde.
struct BridgeData {
    std::vector<double> x;       // sample grid on [0, d]
    std::vector<double> h;       // measured chord lengths
    std::vector<double> ubar;    // chord averages
    std::vector<double> utilde;  // recentered chord averages
    std::vector<double> F;       // running integral of h * utilde
    std::vector<double> du;      // nodal derivative of utilde (ends clamped)
    std::vector<double> eta;     // flux defect h*du + mu*F
    double d = 0.0;
    double mu = 0.0;       // planar eigenvalue the data was built with
    double c1 = 0.0;       // removed weighted mean
    double volume = 0.0;   // int h
    double sup_u = 0.0;    // sup |utilde|
    double n1 = 0.0;       // int h utilde'^2   (exact for P1 data)
    double dd = 0.0;       // int h utilde^2    (exact for P1 data)
    double mu_bound = 0.0; // n1 / dd, an upper bound certificate
};

inline BridgeData build_bridge(const PlanarEigenSolution& sol,
                               std::size_t n_samples = 1024) {
    const SlabMesh& mesh = sol.mesh;
    if (mesh.nodes.empty()) throw std::invalid_argument("build_bridge: empty mesh");
    double d = 0.0, eps = 0.0;
    for (const Vec2& q : mesh.nodes) {
        d = std::max(d, q.x);
        eps = std::max(eps, q.y);
    }

    BridgeData b;
    b.d = d;
    b.mu = sol.mu;
    if (n_samples < 8) n_samples = 8;
    b.x.reserve(n_samples + 3);
    for (std::size_t i = 0; i <= n_samples; ++i)
        b.x.push_back(d * static_cast<double>(i) / static_cast<double>(n_samples));
    for (double extra : {eps, d - eps}) {
        if (extra > 0.0 && extra < d) b.x.push_back(extra);
    }
    std::sort(b.x.begin(), b.x.end());
    const double mergetol = 1e-9 * std::max(1.0, d);
    std::vector<double> xs;
    for (double v : b.x)
        if (xs.empty() || v - xs.back() > mergetol) xs.push_back(v);
    xs.front() = 0.0;
    xs.back() = d;
    b.x = std::move(xs);

    // evaluation abscissas: endpoints nudged inside so a pinched tip still
    // produces a (tiny) chord
    const double nudge = 1e-9 * std::max(1.0, d);
    std::vector<double> xe = b.x;
    xe.front() = nudge;
    xe.back() = d - nudge;

    const std::size_t m = b.x.size();
    std::vector<double> len(m, 0.0), integ(m, 0.0);
    for (const auto& t : mesh.tris) {
        const Vec2 p[3] = {mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]};
        const double u[3] = {sol.u[t[0]], sol.u[t[1]], sol.u[t[2]]};
        const double xmin = std::min({p[0].x, p[1].x, p[2].x});
        const double xmax = std::max({p[0].x, p[1].x, p[2].x});
        const auto first =
            std::lower_bound(xe.begin(), xe.end(), xmin) - xe.begin();
        const auto last =
            std::lower_bound(xe.begin(), xe.end(), xmax) - xe.begin();
        for (auto s = first; s < last; ++s) {
            const double xq = xe[static_cast<std::size_t>(s)];
            double ys[2], us[2];
            int found = 0;
            for (int e = 0; e < 3 && found < 2; ++e) {
                const Vec2 &a = p[e], &bb = p[(e + 1) % 3];
                const double lo = std::min(a.x, bb.x), hi = std::max(a.x, bb.x);
                if (!(xq >= lo && xq < hi)) continue;
                const double tt = (xq - a.x) / (bb.x - a.x);
                ys[found] = a.y + tt * (bb.y - a.y);
                us[found] = u[e] + tt * (u[(e + 1) % 3] - u[e]);
                ++found;
            }
            if (found == 2) {
                const double seg = std::abs(ys[1] - ys[0]);
                len[static_cast<std::size_t>(s)] += seg;
                integ[static_cast<std::size_t>(s)] += 0.5 * (us[0] + us[1]) * seg;
            }
        }
    }

    b.h = len;
    b.ubar.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(len[i] > 0.0))
            throw std::runtime_error("build_bridge: sample chord missed the mesh");
        b.ubar[i] = integ[i] / len[i];
    }

    const std::vector<double> ones(m, 1.0);
    b.volume = weighted_inner(b.x, b.h, ones, ones);
    b.c1 = weighted_inner(b.x, b.h, b.ubar, ones) / b.volume;
    b.utilde.resize(m);
    for (std::size_t i = 0; i < m; ++i) b.utilde[i] = b.ubar[i] - b.c1;
    for (double v : b.utilde) b.sup_u = std::max(b.sup_u, std::abs(v));

    b.F.assign(m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double L = b.x[i + 1] - b.x[i];
        b.F[i + 1] = b.F[i] +
                     L * (b.utilde[i] * (b.h[i] / 3.0 + b.h[i + 1] / 6.0) +
                          b.utilde[i + 1] * (b.h[i] / 6.0 + b.h[i + 1] / 3.0));
    }

    b.du.assign(m, 0.0);  // the true end fluxes vanish, so the ends stay clamped
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double dl = b.x[i] - b.x[i - 1];
        const double dr = b.x[i + 1] - b.x[i];
        const double sl = (b.utilde[i] - b.utilde[i - 1]) / dl;
        const double sr = (b.utilde[i + 1] - b.utilde[i]) / dr;
        b.du[i] = (sl * dr + sr * dl) / (dl + dr);
    }

    b.eta.resize(m);
    for (std::size_t i = 0; i < m; ++i) b.eta[i] = b.h[i] * b.du[i] + b.mu * b.F[i];

    b.n1 = weighted_dirichlet_energy(b.x, b.h, b.utilde);
    b.dd = weighted_inner(b.x, b.h, b.utilde, b.utilde);
    b.mu_bound = b.n1 / b.dd;
    return b;
}

// Residual of the weak eigen-identity at a given eigenvalue; zero to rounding
// at mu_bound by construction, and the genuine averaging gap at the planar mu.
inline double weak_identity_residual(const BridgeData& b, double mu) {
    return std::abs(b.n1 - mu * b.dd) / (mu * b.dd);
}

// Production diagnostic: the flux defect eta = h utilde' + mu F vanishes
// identically when (utilde, mu) solves the averaged problem exactly, so its
// normalized sup measures how far the chord-averaged planar mode is from a
// one-dimensional eigenpair (discretization plus genuine aperture effects).
inline double flux_defect(const BridgeData& b) {
    double top = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < b.x.size(); ++i) {
        top = std::max(top, std::abs(b.eta[i]));
        scale = std::max(scale,
                         std::max(std::abs(b.h[i] * b.du[i]), b.mu * std::abs(b.F[i])));
    }
    return scale > 0.0 ? top / scale : 0.0;
}

// eta can equivalently be accumulated from the right end; the two versions
// differ by mu * F(d), which is zero to rounding.
inline double eta_two_sided_gap(const BridgeData& b) {
    const double fd = b.F.back();
    double scale = 0.0;
    for (std::size_t i = 0; i < b.x.size(); ++i)
        scale = std::max(scale, std::abs(b.eta[i]));
    scale = std::max(scale, b.mu * std::abs(fd));
    if (scale == 0.0) return 0.0;
    return b.mu * std::abs(fd) / (std::max(scale, b.mu * b.volume * b.sup_u));
}

// relative weighted-mean defect of utilde (pure rounding by construction)
inline double mean_defect(const BridgeData& b) {
    const std::vector<double> ones(b.x.size(), 1.0);
    const double v = weighted_inner(b.x, b.h, b.utilde, ones);
    return std::abs(v) / (b.volume * std::max(b.sup_u, 1e-300));
}

struct AveragedGapReport {
    double sup_gap = 0.0;   // sup |utilde - zeta| on the margin interior
    double sup_dgap = 0.0;  // same for the derivatives
};

// Compare the chord average against the one-dimensional mode phi of the
// weighted problem, matched at the left end (zeta = -utilde(0) * phi).
inline AveragedGapReport averaged_gap_report(const BridgeData& b,
                                             const WeightedEigenSolution& one_d,
                                             double margin = -1.0) {
    if (margin < 0.0) {
        double eps_guess = 0.0;
        for (double hv : b.h) eps_guess = std::max(eps_guess, hv);
        margin = eps_guess;
    }
    const std::size_t m = b.x.size();
    std::vector<double> zeta(m);
    const double scale = -b.utilde.front();
    for (std::size_t i = 0; i < m; ++i) {
        const double xq = std::clamp(b.x[i], one_d.x.front(), one_d.x.back());
        auto it = std::upper_bound(one_d.x.begin(), one_d.x.end(), xq);
        std::size_t j = static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(it - one_d.x.begin() - 1, 0,
                                       static_cast<std::ptrdiff_t>(one_d.x.size()) - 2));
        const double t = (xq - one_d.x[j]) / (one_d.x[j + 1] - one_d.x[j]);
        zeta[i] = scale * (one_d.phi[j] + t * (one_d.phi[j + 1] - one_d.phi[j]));
    }
    AveragedGapReport rep;
    for (std::size_t i = 0; i < m; ++i) {
        if (b.x[i] < margin || b.x[i] > b.d - margin) continue;
        rep.sup_gap = std::max(rep.sup_gap, std::abs(b.utilde[i] - zeta[i]));
        if (i > 0 && i + 1 < m) {
            const double dl = b.x[i] - b.x[i - 1], dr = b.x[i + 1] - b.x[i];
            const double zl = (zeta[i] - zeta[i - 1]) / dl;
            const double zr = (zeta[i + 1] - zeta[i]) / dr;
            const double dz = (zl * dr + zr * dl) / (dl + dr);
            rep.sup_dgap = std::max(rep.sup_dgap, std::abs(b.du[i] - dz));
        }
    }
    return rep;
}

struct CollarEtaReport {
    double eta_frac_5 = 0.0;   // share of int eta^2 in the 5% end collars
    double eta_frac_10 = 0.0;  // same for 10% collars
    double cross_frac_10 = 0.0;  // |int_collar10 eta utilde'| / n1
};

inline CollarEtaReport collar_eta_report(const BridgeData& b) {
    const std::size_t m = b.x.size();
    auto overlap = [&](double lo, double hi, double w) {
        double c = std::max(0.0, std::min(hi, b.d * w) - lo);
        c += std::max(0.0, hi - std::max(lo, b.d * (1.0 - w)));
        return std::min(c, hi - lo);
    };
    double tot = 0.0, c5 = 0.0, c10 = 0.0, cross10 = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double lo = b.x[i], hi = b.x[i + 1];
        const double L = hi - lo;
        const double e2 = 0.5 * (b.eta[i] * b.eta[i] + b.eta[i + 1] * b.eta[i + 1]);
        const double s = (b.utilde[i + 1] - b.utilde[i]) / L;
        const double avg_eta = 0.5 * (b.eta[i] + b.eta[i + 1]);
        tot += e2 * L;
        c5 += e2 * overlap(lo, hi, 0.05);
        c10 += e2 * overlap(lo, hi, 0.10);
        cross10 += s * avg_eta * overlap(lo, hi, 0.10);
    }
    CollarEtaReport rep;
    if (tot > 0.0) {
        rep.eta_frac_5 = c5 / tot;
        rep.eta_frac_10 = c10 / tot;
    }
    if (b.n1 > 0.0) rep.cross_frac_10 = std::abs(cross10) / b.n1;
    return rep;
}

struct SlicePoincareReport {
    double max_ratio = 0.0;    // worst bin: int (u-ubar)^2 over (h_max/pi)^2 int u_y^2
    std::size_t bins_checked = 0;
};

// Per-slice transversal control: on every vertical chord the deviation of u
// from its chord mean obeys the one-dimensional free Poincare inequality
// with constant (chord/pi)^2.  Checked bin by bin with the mode's vertical
// energy on the right-hand side.
inline SlicePoincareReport slice_poincare_report(const PlanarEigenSolution& sol,
                                                 const BridgeData& b,
                                                 std::size_t nbins = 32) {
    const double d = b.d;
    auto ub_eval = [&](double xq) {
        auto it = std::upper_bound(b.x.begin(), b.x.end(), xq);
        std::size_t j = static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(it - b.x.begin() - 1, 0,
                                       static_cast<std::ptrdiff_t>(b.x.size()) - 2));
        const double t = (xq - b.x[j]) / (b.x[j + 1] - b.x[j]);
        return b.ubar[j] + t * (b.ubar[j + 1] - b.ubar[j]);
    };

    std::vector<double> lhs(nbins, 0.0), rhs(nbins, 0.0);
    double max_extent = 0.0, energy_total = 0.0;
    for (const auto& t : sol.mesh.tris) {
        const Vec2 p0 = sol.mesh.nodes[t[0]], p1 = sol.mesh.nodes[t[1]],
                   p2 = sol.mesh.nodes[t[2]];
        const double a2 = cross(p1 - p0, p2 - p0);
        const double area = 0.5 * a2;
        const double cx = (p0.x + p1.x + p2.x) / 3.0;
        max_extent = std::max(max_extent, std::max({p0.x, p1.x, p2.x}) -
                                              std::min({p0.x, p1.x, p2.x}));
        const auto bin = static_cast<std::size_t>(std::clamp(
            static_cast<long>(cx / d * static_cast<double>(nbins)), 0L,
            static_cast<long>(nbins) - 1L));
        double gx = 0.0, gy = 0.0;
        const Vec2 pv[3] = {p0, p1, p2};
        const double uv[3] = {sol.u[t[0]], sol.u[t[1]], sol.u[t[2]]};
        for (int i = 0; i < 3; ++i) {
            const Vec2 bb = pv[(i + 1) % 3], cc = pv[(i + 2) % 3];
            gx += uv[i] * (bb.y - cc.y) / a2;
            gy += uv[i] * (cc.x - bb.x) / a2;
        }
        energy_total += area * (gx * gx + gy * gy);
        rhs[bin] += area * gy * gy;
        // edge-midpoint rule, exact for quadratics in the P1 deviation
        for (int i = 0; i < 3; ++i) {
            const Vec2 mid = 0.5 * (pv[i] + pv[(i + 1) % 3]);
            const double um = 0.5 * (uv[i] + uv[(i + 1) % 3]);
            const double dev = um - ub_eval(mid.x);
            lhs[bin] += area / 3.0 * dev * dev;
        }
    }

    SlicePoincareReport rep;
    // the control concerns genuinely two-dimensional behaviour: bins whose
    // vertical energy is a vanishing fraction of the mode energy carry only
    // interpolation noise and are out of scope
    const double floor =
        1e-8 * energy_total / static_cast<double>(nbins) + 1e-300;
    constexpr double kPi = 3.14159265358979323846;
    for (std::size_t k = 0; k < nbins; ++k) {
        if (rhs[k] <= floor) continue;
        const double lo = d * static_cast<double>(k) / static_cast<double>(nbins) -
                          max_extent;
        const double hi =
            d * static_cast<double>(k + 1) / static_cast<double>(nbins) +
            max_extent;
        double hmax = 0.0;
        for (std::size_t i = 0; i < b.x.size(); ++i)
            if (b.x[i] >= lo && b.x[i] <= hi) hmax = std::max(hmax, b.h[i]);
        if (hmax <= 0.0) continue;
        rep.max_ratio =
            std::max(rep.max_ratio, lhs[k] / ((hmax / kPi) * (hmax / kPi) * rhs[k]));
        ++rep.bins_checked;
    }
    return rep;
}

// Exact split of the discrete Dirichlet energy; together with the algebraic
// eigen-identity u'Ku = mu u'Mu this closes the planar energy bookkeeping.
struct EnergySplit {
    double ex = 0.0;  // int |u_x|^2
    double ey = 0.0;  // int |u_y|^2
    double l2 = 0.0;  // int u^2
};

inline EnergySplit energy_split(const PlanarEigenSolution& s) {
    EnergySplit es;
    for (const auto& t : s.mesh.tris) {
        const Vec2 p0 = s.mesh.nodes[t[0]], p1 = s.mesh.nodes[t[1]],
                   p2 = s.mesh.nodes[t[2]];
        const double a2 = cross(p1 - p0, p2 - p0);
        const double area = 0.5 * a2;
        double gx = 0.0, gy = 0.0;
        const Vec2 pv[3] = {p0, p1, p2};
        for (int i = 0; i < 3; ++i) {
            const Vec2 bb = pv[(i + 1) % 3], cc = pv[(i + 2) % 3];
            gx += s.u[t[i]] * (bb.y - cc.y) / a2;
            gy += s.u[t[i]] * (cc.x - bb.x) / a2;
        }
        es.ex += area * gx * gx;
        es.ey += area * gy * gy;
        const double u0 = s.u[t[0]], u1 = s.u[t[1]], u2 = s.u[t[2]];
        es.l2 += area / 6.0 * (u0 * u0 + u1 * u1 + u2 * u2 + u0 * u1 +
                               u1 * u2 + u2 * u0);
    }
    return es;
}

}  // namespace eigenwidth
