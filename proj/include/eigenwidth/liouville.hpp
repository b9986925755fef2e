#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "eigenwidth/ode.hpp"

namespace eigenwidth {

// Substituting w = sqrt(h) * phi' turns the weighted Neumann pencil into a
// Dirichlet Schroedinger problem -w'' + V w = mu w on (0, d) with
// V = (3/4)(h'/h)^2 - h''/(2h).  For a piecewise-linear weight the h'' part
// vanishes inside every interval and contributes nonnegative point masses at
// the (concave) kinks; dropping those masses only lowers the quotient, which
// is the mechanism behind the lower bound mu >= pi^2/d^2.

// Midpoint values of the smooth part (3/4)(h'/h)^2, one per grid interval.
inline std::vector<double> smooth_potential_midpoints(
    const std::vector<double>& x, const std::vector<double>& h) {
    if (x.size() != h.size() || x.size() < 2)
        throw std::invalid_argument("smooth_potential_midpoints: bad grid");
    for (double hv : h)
        if (hv <= 0.0)
            throw std::invalid_argument("liouville transform requires a positive weight");
    std::vector<double> v(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double len = x[i + 1] - x[i];
        const double s = (h[i + 1] - h[i]) / len;
        const double hm = 0.5 * (h[i] + h[i + 1]);
        v[i] = 0.75 * s * s / (hm * hm);
    }
    return v;
}

// Point masses -h''/(2h) carried by the interior grid nodes; entries for the
// two endpoints are zero.  Nonnegative whenever h is concave.
inline std::vector<double> kink_masses(const std::vector<double>& x,
                                       const std::vector<double>& h) {
    if (x.size() != h.size() || x.size() < 2)
        throw std::invalid_argument("kink_masses: bad grid");
    for (double hv : h)
        if (hv <= 0.0)
            throw std::invalid_argument("liouville transform requires a positive weight");
    std::vector<double> m(x.size(), 0.0);
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double s_prev = (h[i] - h[i - 1]) / (x[i] - x[i - 1]);
        const double s_next = (h[i + 1] - h[i]) / (x[i + 1] - x[i]);
        m[i] = (s_prev - s_next) / (2.0 * h[i]);
    }
    return m;
}

struct LiouvilleReport {
    double d = 0.0;
    double mu = 0.0;
    double t_full = 0.0;       // int w'^2 over (0, d)
    double t_collar = 0.0;     // int w'^2 over the endpoint collars
    double t_weight = 0.0;     // int w^2  (= int h phi'^2)
    double v_smooth = 0.0;     // int V w^2, smooth part only
    double kink_mass = 0.0;    // sum of the potential point masses
    double kink_energy = 0.0;  // sum m_i w(x_i)^2
    double residual = 0.0;     // defect of the transformed eigen-identity
    double rayleigh = 0.0;     // t_full / t_weight (all potential terms dropped)
    std::vector<double> wx, w;  // the transformed mode, Dirichlet at both ends
};

// Build w from a computed mode and check the transformed problem.  The mode's
// derivative lives at interval midpoints, so w is assembled on the midpoint
// grid with Dirichlet values pinned at the ends (the flux h phi' vanishes
// there).  The weight must be positive, i.e. pass the lifted solve for a
// profile that pinches off at an endpoint.
inline LiouvilleReport liouville_report(const WeightedEigenSolution& s,
                                        double collar = 1e-2) {
    const std::size_t n = s.x.size();
    if (n < 3) throw std::invalid_argument("liouville_report: grid too small");
    for (double hv : s.h)
        if (hv <= 0.0)
            throw std::invalid_argument("liouville transform requires a positive weight");

    LiouvilleReport rep;
    rep.d = s.x.back() - s.x.front();
    rep.mu = s.mu_raw;

    rep.wx.resize(n + 1);
    rep.w.assign(n + 1, 0.0);
    rep.wx.front() = s.x.front();
    rep.wx.back() = s.x.back();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double len = s.x[i + 1] - s.x[i];
        rep.wx[i + 1] = s.x[i] + 0.5 * len;
        const double hm = 0.5 * (s.h[i] + s.h[i + 1]);
        rep.w[i + 1] = std::sqrt(hm) * (s.phi[i + 1] - s.phi[i]) / len;
    }

    auto w_eval = [&](double xq) {
        auto it = std::upper_bound(rep.wx.begin(), rep.wx.end(), xq);
        std::size_t j = static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(it - rep.wx.begin() - 1, 0,
                                       static_cast<std::ptrdiff_t>(n) - 1));
        const double t = (xq - rep.wx[j]) / (rep.wx[j + 1] - rep.wx[j]);
        return rep.w[j] + t * (rep.w[j + 1] - rep.w[j]);
    };

    // exact P1 quadratures on the w grid
    const std::vector<double> ones(rep.wx.size(), 1.0);
    rep.t_weight = weighted_inner(rep.wx, ones, rep.w, rep.w);
    rep.t_full = weighted_dirichlet_energy(rep.wx, ones, rep.w);

    const double a1 = s.x.front() + collar;
    const double a0 = s.x.back() - collar;
    for (std::size_t j = 0; j + 1 < rep.wx.size(); ++j) {
        const double len = rep.wx[j + 1] - rep.wx[j];
        const double slope = (rep.w[j + 1] - rep.w[j]) / len;
        double cover = std::max(0.0, std::min(rep.wx[j + 1], a1) - rep.wx[j]);
        cover += std::max(0.0, rep.wx[j + 1] - std::max(rep.wx[j], a0));
        cover = std::min(cover, len);
        rep.t_collar += slope * slope * cover;
    }

    // the smooth potential integral via midpoint rule on the half-interval
    // refinement (the integrand is already a discrete approximation)
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double len = s.x[i + 1] - s.x[i];
        const double sl = (s.h[i + 1] - s.h[i]) / len;
        for (double c : {s.x[i] + 0.25 * len, s.x[i] + 0.75 * len}) {
            const double hv = s.h[i] + sl * (c - s.x[i]);
            const double vv = 0.75 * sl * sl / (hv * hv);
            const double wv = w_eval(c);
            rep.v_smooth += vv * wv * wv * (0.5 * len);
        }
    }

    const auto masses = kink_masses(s.x, s.h);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        rep.kink_mass += masses[i];
        const double wv = w_eval(s.x[i]);
        rep.kink_energy += masses[i] * wv * wv;
    }

    rep.rayleigh = rep.t_full / rep.t_weight;
    rep.residual = std::abs(rep.t_full + rep.v_smooth + rep.kink_energy -
                            rep.mu * rep.t_weight) /
                   (rep.mu * rep.t_weight);
    return rep;
}

}  // namespace eigenwidth
