#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "eigenwidth/profile.hpp"

namespace eigenwidth {

// Exact piecewise-linear quadratures for a P1 function pair (f, g) against a
// piecewise-linear weight h on the grid x.  These are the work-horses shared
// by the eigensolvers and the diagnostic integrals.
inline double weighted_inner(const std::vector<double>& x,
                             const std::vector<double>& h,
                             const std::vector<double>& f,
                             const std::vector<double>& g) {
    if (x.size() != h.size() || x.size() != f.size() || x.size() != g.size())
        throw std::invalid_argument("weighted_inner: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double len = x[i + 1] - x[i];
        const double h0 = h[i], h1 = h[i + 1];
        const double m00 = len * (h0 / 4.0 + h1 / 12.0);
        const double m01 = len * (h0 + h1) / 12.0;
        const double m11 = len * (h0 / 12.0 + h1 / 4.0);
        acc += f[i] * (m00 * g[i] + m01 * g[i + 1]) +
               f[i + 1] * (m01 * g[i] + m11 * g[i + 1]);
    }
    return acc;
}

inline double weighted_dirichlet_energy(const std::vector<double>& x,
                                        const std::vector<double>& h,
                                        const std::vector<double>& f) {
    if (x.size() != h.size() || x.size() != f.size())
        throw std::invalid_argument("weighted_dirichlet_energy: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double len = x[i + 1] - x[i];
        const double slope = (f[i + 1] - f[i]) / len;
        acc += 0.5 * (h[i] + h[i + 1]) * len * slope * slope;
    }
    return acc;
}

inline double weighted_volume(const std::vector<double>& x,
                              const std::vector<double>& h) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        acc += 0.5 * (h[i] + h[i + 1]) * (x[i + 1] - x[i]);
    return acc;
}

// Rayleigh quotient of a nodal function against the weighted pencil.  With
// project_mean the weighted mean is removed first, which is the admissible
// class for the first nonzero Neumann eigenvalue.
inline double rayleigh_quotient(const std::vector<double>& x,
                                const std::vector<double>& h,
                                std::vector<double> f,
                                bool project_mean = true) {
    if (project_mean) {
        std::vector<double> ones(f.size(), 1.0);
        const double vol = weighted_inner(x, h, ones, ones);
        const double mean = weighted_inner(x, h, f, ones) / vol;
        for (double& v : f) v -= mean;
    }
    const double denom = weighted_inner(x, h, f, f);
    if (denom <= 0.0)
        throw std::invalid_argument("rayleigh_quotient: zero test function");
    return weighted_dirichlet_energy(x, h, f) / denom;
}

struct IterationOptions {
    double tol = 1e-12;       // relative algebraic residual target
    int max_iterations = 400;
};

struct SolveOptions {
    int n_elements = 1024;
    IterationOptions iter{};
    std::vector<double> reg_levels{1e3, 1e4};  // used when h vanishes at an end
    bool force_regularization = false;
};

struct WeightedEigenSolution {
    double mu = 0.0;      // best estimate (extrapolated when regularized)
    double mu_raw = 0.0;  // finest un-extrapolated value
    std::vector<double> x, h, phi;
    double residual = 0.0;
    int iterations = 0;
    bool regularized = false;
};

namespace detail {

// P1 stiffness/mass pencil with piecewise-linear weight; both integrals are
// evaluated in closed form so they are exact for this data.
inline void assemble_weighted_p1(const std::vector<double>& x,
                                 const std::vector<double>& h,
                                 Eigen::SparseMatrix<double>& K,
                                 Eigen::SparseMatrix<double>& M) {
    const auto n = static_cast<Eigen::Index>(x.size());
    std::vector<Eigen::Triplet<double>> tk, tm;
    tk.reserve(3 * x.size());
    tm.reserve(3 * x.size());
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double len = x[i + 1] - x[i];
        if (!(len > 0.0)) throw std::invalid_argument("grid not increasing");
        const double h0 = h[i], h1 = h[i + 1];
        const double k = 0.5 * (h0 + h1) / len;
        const double m00 = len * (h0 / 4.0 + h1 / 12.0);
        const double m01 = len * (h0 + h1) / 12.0;
        const double m11 = len * (h0 / 12.0 + h1 / 4.0);
        tk.emplace_back(i, i, k);
        tk.emplace_back(i + 1, i + 1, k);
        tk.emplace_back(i, i + 1, -k);
        tk.emplace_back(i + 1, i, -k);
        tm.emplace_back(i, i, m00);
        tm.emplace_back(i + 1, i + 1, m11);
        tm.emplace_back(i, i + 1, m01);
        tm.emplace_back(i + 1, i, m01);
    }
    K.resize(n, n);
    M.resize(n, n);
    K.setFromTriplets(tk.begin(), tk.end());
    M.setFromTriplets(tm.begin(), tm.end());
}

// Smallest nonzero eigenpair of K u = mu M u where K has the constant vector
// in its kernel.  Inverse iteration on (K + M)^{-1} M with the weighted mean
// projected out each sweep; the constant mode is thereby deflated and the
// iteration converges to the first nontrivial mode.
struct PencilEigenResult {
    double mu = 0.0;
    Eigen::VectorXd u;
    double residual = 0.0;
    int iterations = 0;
};

inline PencilEigenResult lowest_nonconstant_mode(
    const Eigen::SparseMatrix<double>& K, const Eigen::SparseMatrix<double>& M,
    Eigen::VectorXd start, const IterationOptions& opt) {
    const Eigen::Index n = K.rows();
    Eigen::SparseMatrix<double> A = K;
    A += M;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigensolver: factorization failed");

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd m_ones = M * ones;
    const double m_total = ones.dot(m_ones);
    auto deflate = [&](Eigen::VectorXd& v) {
        v -= (m_ones.dot(v) / m_total) * ones;
    };

    Eigen::VectorXd u = std::move(start);
    deflate(u);
    double unorm = std::sqrt(u.dot(M * u));
    if (!(unorm > 0.0))
        throw std::runtime_error("eigensolver: degenerate start vector");
    u /= unorm;

    PencilEigenResult out;
    double best_res = std::numeric_limits<double>::infinity();
    int since_best = 0;
    for (int it = 1; it <= opt.max_iterations; ++it) {
        Eigen::VectorXd y = solver.solve(M * u);
        deflate(y);
        const double ynorm = std::sqrt(y.dot(M * y));
        if (!(ynorm > 0.0))
            throw std::runtime_error("eigensolver: iteration collapsed");
        y /= ynorm;
        const Eigen::VectorXd ky = K * y;
        const Eigen::VectorXd my = M * y;
        const double mu = y.dot(ky);
        const double res =
            (ky - mu * my).norm() / (ky.norm() + std::abs(mu) * my.norm());
        u = y;
        out.mu = mu;
        out.iterations = it;
        out.residual = res;
        if (res <= opt.tol) break;
        if (res < 0.99 * best_res) {
            best_res = res;
            since_best = 0;
        } else if (++since_best >= 10) {
            break;  // rounding floor reached
        }
    }
    if (out.residual > 1e-6)
        throw std::runtime_error("eigensolver: failed to converge");
    out.u = std::move(u);
    return out;
}

inline WeightedEigenSolution solve_on_grid(const Grid1D& g,
                                           const IterationOptions& opt) {
    Eigen::SparseMatrix<double> K, M;
    assemble_weighted_p1(g.x, g.h, K, M);
    const auto n = static_cast<Eigen::Index>(g.x.size());
    Eigen::VectorXd start(n);
    for (Eigen::Index i = 0; i < n; ++i) start[i] = g.x[i];
    auto r = lowest_nonconstant_mode(K, M, std::move(start), opt);

    WeightedEigenSolution s;
    s.mu = s.mu_raw = r.mu;
    s.residual = r.residual;
    s.iterations = r.iterations;
    s.x = g.x;
    s.h = g.h;
    s.phi.resize(g.x.size());
    // scale so the left endpoint value is -1 (the first mode never vanishes
    // at an endpoint, so this is well defined)
    const double p0 = r.u[0];
    const double scale = std::abs(p0) > 1e-12 * r.u.cwiseAbs().maxCoeff()
                             ? -1.0 / p0
                             : 1.0 / r.u.cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < s.phi.size(); ++i)
        s.phi[i] = scale * r.u[static_cast<Eigen::Index>(i)];
    return s;
}

inline bool endpoint_degenerate(const HeightProfile& p) {
    const double scale = p.max_h();
    return p.h.front() <= 1e-12 * scale || p.h.back() <= 1e-12 * scale;
}

// Extrapolate values f(k) with error expansion C/k using the last two levels.
inline double extrapolate_in_reciprocal(const std::vector<double>& ks,
                                        const std::vector<double>& vals) {
    const std::size_t m = vals.size();
    if (m == 1) return vals[0];
    const double r = ks[m - 1] / ks[m - 2];
    return vals[m - 1] + (vals[m - 1] - vals[m - 2]) / (r - 1.0);
}

}  // namespace detail

inline WeightedEigenSolution solve_weighted_neumann(const Grid1D& g,
                                                    const IterationOptions& opt = {}) {
    return detail::solve_on_grid(g, opt);
}

// Solve the weighted Neumann problem -(h u')' = mu h u on [0, d].  When the
// weight vanishes at an endpoint the pencil is solved on lifted weights
// h + 1/k for increasing k and the eigenvalue is extrapolated in 1/k, which
// cancels the first-order lift error.
inline WeightedEigenSolution solve_weighted_neumann(const HeightProfile& p,
                                                    const SolveOptions& opt = {}) {
    const bool lift = opt.force_regularization || detail::endpoint_degenerate(p);
    if (!lift)
        return detail::solve_on_grid(refine_grid(p, opt.n_elements), opt.iter);

    if (opt.reg_levels.empty())
        throw std::invalid_argument("solve_weighted_neumann: no lift levels");
    // the eigenvalue is invariant under scaling the weight, so normalize to
    // unit maximum first; the lift error is then independent of the aperture
    const double hmax = p.max_h();
    HeightProfile scaled = p;
    for (double& v : scaled.h) v /= hmax;
    std::vector<double> mus;
    WeightedEigenSolution finest;
    for (double k : opt.reg_levels) {
        auto reg = regularize(scaled, k);
        finest = detail::solve_on_grid(refine_grid(reg, opt.n_elements), opt.iter);
        mus.push_back(finest.mu_raw);
    }
    for (double& v : finest.h) v *= hmax;  // report in the caller's scale
    finest.mu = detail::extrapolate_in_reciprocal(opt.reg_levels, mus);
    finest.regularized = true;
    return finest;
}

struct ShootingOptions {
    double mu_lo = 1.2337;  // strictly above the trivial root, below pi^2/4
    double mu_hi = 50.0;
    int n_scan = 400;
    int n_steps = 4096;  // target RK4 steps across the domain
    std::vector<double> reg_levels{1e3, 1e4};
};

namespace detail {

// Right-end flux p(d) of the initial value problem phi' = p/h, p' = -mu h phi
// with phi(0) = 1, p(0) = 0; zeros in mu are the Neumann eigenvalues.
inline double shooting_flux(const HeightProfile& prof, double mu, int n_steps) {
    double phi = 1.0, p = 0.0;
    const double target = prof.d / n_steps;
    for (std::size_t i = 0; i + 1 < prof.x.size(); ++i) {
        const double x0 = prof.x[i], x1 = prof.x[i + 1];
        const double len = x1 - x0;
        if (len <= 0.0) continue;
        const double h0 = prof.h[i];
        const double slope = (prof.h[i + 1] - h0) / len;
        const int m = std::max(1, static_cast<int>(std::ceil(len / target)));
        const double dt = len / m;
        for (int s = 0; s < m; ++s) {
            const double t0 = s * dt;
            auto f = [&](double t, double fc, double pc, double& dphi,
                         double& dp) {
                const double hv = h0 + slope * t;
                dphi = pc / hv;
                dp = -mu * hv * fc;
            };
            double k1f, k1p, k2f, k2p, k3f, k3p, k4f, k4p;
            f(t0, phi, p, k1f, k1p);
            f(t0 + dt / 2, phi + dt / 2 * k1f, p + dt / 2 * k1p, k2f, k2p);
            f(t0 + dt / 2, phi + dt / 2 * k2f, p + dt / 2 * k2p, k3f, k3p);
            f(t0 + dt, phi + dt * k3f, p + dt * k3p, k4f, k4p);
            phi += dt / 6 * (k1f + 2 * k2f + 2 * k3f + k4f);
            p += dt / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
        }
    }
    return p;
}

inline double shooting_mu_positive_weight(const HeightProfile& prof,
                                          const ShootingOptions& opt) {
    const double lo = opt.mu_lo, hi = opt.mu_hi;
    const double step = (hi - lo) / opt.n_scan;
    double a = lo;
    double fa = shooting_flux(prof, a, opt.n_steps);
    double b = a, fb = fa;
    bool bracketed = false;
    for (int i = 1; i <= opt.n_scan; ++i) {
        b = lo + i * step;
        fb = shooting_flux(prof, b, opt.n_steps);
        if (fa == 0.0) return a;
        if (fa * fb < 0.0) {
            bracketed = true;
            break;
        }
        a = b;
        fa = fb;
    }
    if (!bracketed)
        throw std::runtime_error("shooting: no eigenvalue bracket in scan range");
    for (int it = 0; it < 200 && (b - a) > 1e-13 * b; ++it) {
        const double c = 0.5 * (a + b);
        const double fc = shooting_flux(prof, c, opt.n_steps);
        if (fc == 0.0) return c;
        if (fa * fc < 0.0) {
            b = c;
        } else {
            a = c;
            fa = fc;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

// Independent route to the first nontrivial eigenvalue: RK4 shooting with a
// scan-and-bisect search for the flux zero.  Vanishing end weights use the
// same lift-and-extrapolate scheme as the Galerkin path.
inline double shooting_cross_check(const HeightProfile& p,
                                   const ShootingOptions& opt = {}) {
    if (!detail::endpoint_degenerate(p))
        return detail::shooting_mu_positive_weight(p, opt);
    const double hmax = p.max_h();
    HeightProfile scaled = p;
    for (double& v : scaled.h) v /= hmax;
    std::vector<double> mus;
    for (double k : opt.reg_levels)
        mus.push_back(
            detail::shooting_mu_positive_weight(regularize(scaled, k), opt));
    return detail::extrapolate_in_reciprocal(opt.reg_levels, mus);
}

struct GradientBoundReport {
    double sup_phi = 0.0;
    bool monotone = false;
    // sup over interior interval midpoints of |h phi'| divided by the flux
    // bound mu * sup|phi| * min(int_0^x h, int_x^d h); at most 1 for the
    // continuum solution
    double max_flux_ratio = 0.0;
};

inline GradientBoundReport verify_gradient_bounds(const WeightedEigenSolution& s,
                                                  double margin = 1e-2) {
    const std::size_t n = s.x.size();
    if (n < 2) throw std::invalid_argument("verify_gradient_bounds: empty grid");
    GradientBoundReport rep;
    for (double v : s.phi) rep.sup_phi = std::max(rep.sup_phi, std::abs(v));
    rep.monotone = true;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (s.phi[i + 1] < s.phi[i] - 1e-10 * rep.sup_phi) rep.monotone = false;

    const double d = s.x.back() - s.x.front();
    const double vol = weighted_volume(s.x, s.h);
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double len = s.x[i + 1] - s.x[i];
        const double hm = 0.5 * (s.h[i] + s.h[i + 1]);
        const double xm = s.x[i] + 0.5 * len;
        const double cum_mid = cum + 0.25 * (s.h[i] + hm) * len;
        cum += 0.5 * (s.h[i] + s.h[i + 1]) * len;
        if (xm < s.x.front() + margin || xm > s.x.back() - margin) continue;
        (void)d;
        const double flux = hm * (s.phi[i + 1] - s.phi[i]) / len;
        const double bound =
            s.mu_raw * rep.sup_phi * std::min(cum_mid, vol - cum_mid);
        if (bound > 0.0)
            rep.max_flux_ratio = std::max(rep.max_flux_ratio, std::abs(flux) / bound);
    }
    return rep;
}

// Mean-square of the eigenfunction against the weight, relative to the
// weighted volume; a loose two-sided sanity band for the normalization.
inline double l2_ratio(const WeightedEigenSolution& s) {
    return weighted_inner(s.x, s.h, s.phi, s.phi) / weighted_volume(s.x, s.h);
}

}  // namespace eigenwidth
