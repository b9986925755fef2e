#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "eigenwidth/bridge.hpp"
#include "eigenwidth/families.hpp"
#include "eigenwidth/fem.hpp"
#include "eigenwidth/geometry.hpp"
#include "eigenwidth/liouville.hpp"
#include "eigenwidth/ode.hpp"
#include "eigenwidth/profile.hpp"

namespace eigenwidth {

// first positive zero of J1', squared below for the round-domain benchmark
constexpr double kBesselJ1PrimeZero = 1.8411837813086846;
constexpr double kQuarterPiSq = 2.4674011002723395;  // pi^2 / 4

// Everything the toolkit can say about one domain, flat for serialization.
struct DomainRecord {
    std::string family;
    double eps_target = 0.0;
    std::uint64_t seed = 0;

    double d = 0.0;       // normalized diameter (2 by construction)
    double width = 0.0;   // measured aperture after normalization
    double area = 0.0;

    double mu2 = 0.0;      // planar eigenvalue (extrapolated)
    double mu2_raw = 0.0;  // finest-mesh value
    double res2 = 0.0;     // planar algebraic residual

    double mu1 = 0.0;      // weighted one-dimensional eigenvalue
    double mu1_raw = 0.0;
    double res1 = 0.0;
    double mu_shoot = std::numeric_limits<double>::quiet_NaN();
    double mu_bound = 0.0;  // Rayleigh certificate from the chord average

    double slack = 0.0;  // mu2 - pi^2/4
    double c_emp = 0.0;  // slack / width^2

    double liou_rayleigh = 0.0;
    double liou_residual = 0.0;
    double kink_mass = 0.0;

    double c1 = 0.0;
    double defect = 0.0;
    double gap_sup = 0.0;
    double gap_dsup = 0.0;
    double eta5 = 0.0;
    double eta10 = 0.0;
    double cross10 = 0.0;
    double pw_ratio = 0.0;

    double vef = 0.0;
    double dir_x = 0.0;
    double dir_y = 0.0;
    double one_minus_k = 0.0;
    double szego = 0.0;
};

struct AnalyzeOptions {
    PdeOptions pde;
    SolveOptions ode;
    std::size_t n_samples = 1024;
    std::size_t poincare_bins = 32;
    bool with_shooting = false;
    ShootingOptions shooting;
};

inline DomainRecord analyze_polygon(const ConvexPolygon& poly,
                                    const AnalyzeOptions& opt = {}) {
    DomainRecord r;
    const auto norm = normalize_w_frame(poly);
    r.d = norm.frame.d;
    r.width = norm.frame.eps;
    r.area = polygon_area(norm.poly);

    const auto sol2 = solve_planar_neumann(norm.poly, opt.pde);
    r.mu2 = sol2.mu;
    r.mu2_raw = sol2.mu_raw;
    r.res2 = sol2.residual;

    const auto prof = build_profile(norm.poly);
    const auto one_d = solve_weighted_neumann(prof, opt.ode);
    r.mu1 = one_d.mu;
    r.mu1_raw = one_d.mu_raw;
    r.res1 = one_d.residual;
    if (opt.with_shooting) r.mu_shoot = shooting_cross_check(prof, opt.shooting);

    const auto b = build_bridge(sol2, opt.n_samples);
    r.mu_bound = b.mu_bound;
    r.c1 = b.c1;
    r.defect = flux_defect(b);
    const auto gaps = averaged_gap_report(b, one_d, r.width);
    r.gap_sup = gaps.sup_gap;
    r.gap_dsup = gaps.sup_dgap;
    const auto collar = collar_eta_report(b);
    r.eta5 = collar.eta_frac_5;
    r.eta10 = collar.eta_frac_10;
    r.cross10 = collar.cross_frac_10;
    r.pw_ratio = slice_poincare_report(sol2, b, opt.poincare_bins).max_ratio;

    const auto liou = liouville_report(one_d);
    r.liou_rayleigh = liou.rayleigh;
    r.liou_residual = liou.residual;
    r.kink_mass = liou.kink_mass;

    r.slack = r.mu2 - kQuarterPiSq;
    r.c_emp = r.slack / (r.width * r.width);

    r.vef = vertical_energy_fraction(sol2);
    const auto dir = directional_profile(sol2);
    r.dir_x = dir.ratio_x;
    r.dir_y = dir.ratio_y;
    double umin = 0.0;
    for (double v : sol2.u) umin = std::min(umin, v);
    r.one_minus_k = std::abs(1.0 + umin);
    r.szego =
        r.mu2 * r.area /
        (3.14159265358979323846 * kBesselJ1PrimeZero * kBesselJ1PrimeZero);
    return r;
}

inline DomainRecord analyze_family_member(const std::string& family, double eps,
                                          std::uint64_t seed = 1,
                                          const AnalyzeOptions& opt = {}) {
    DomainRecord r = analyze_polygon(family_domain(family, eps, seed), opt);
    r.family = family;
    r.eps_target = eps;
    r.seed = seed;
    return r;
}

// stable presentation order: family name, widest aperture first, then seed
inline void sort_records(std::vector<DomainRecord>& rs) {
    std::sort(rs.begin(), rs.end(),
              [](const DomainRecord& a, const DomainRecord& b) {
                  if (a.family != b.family) return a.family < b.family;
                  if (a.eps_target != b.eps_target)
                      return a.eps_target > b.eps_target;
                  return a.seed < b.seed;
              });
}

struct SweepFit {
    double c_min = std::numeric_limits<double>::infinity();
    double slack_min = std::numeric_limits<double>::infinity();
    std::string argmin_family;
    double argmin_eps = 0.0;
    std::map<std::string, double> per_family;
};

inline SweepFit fit_constant(const std::vector<DomainRecord>& rs) {
    if (rs.empty()) throw std::invalid_argument("fit_constant: no records");
    SweepFit fit;
    for (const auto& r : rs) {
        fit.slack_min = std::min(fit.slack_min, r.slack);
        auto it = fit.per_family.find(r.family);
        if (it == fit.per_family.end())
            fit.per_family[r.family] = r.c_emp;
        else
            it->second = std::min(it->second, r.c_emp);
        if (r.c_emp < fit.c_min) {
            fit.c_min = r.c_emp;
            fit.argmin_family = r.family;
            fit.argmin_eps = r.eps_target;
        }
    }
    return fit;
}

}  // namespace eigenwidth
