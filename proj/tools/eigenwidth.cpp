// Command-line front end: geometry probes, 1-D/2-D eigensolves, cross-checks,
// family sweeps, and cap calibration.  Exit codes: 0 ok, 1 usage, 2 solver
// failure, 3 --check violation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eigenwidth/bridge.hpp"
#include "eigenwidth/families.hpp"
#include "eigenwidth/fem.hpp"
#include "eigenwidth/geometry.hpp"
#include "eigenwidth/io.hpp"
#include "eigenwidth/liouville.hpp"
#include "eigenwidth/ode.hpp"
#include "eigenwidth/profile.hpp"
#include "eigenwidth/records.hpp"

using namespace eigenwidth;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainArgs {
    std::string input;
    std::string family;
    double eps = 0.2;
    std::uint64_t seed = 1;
};

void add_domain_options(CLI::App* cmd, DomainArgs& a) {
    auto* in = cmd->add_option("-i,--input", a.input,
                               "polygon file: one 'x y' per line, '#' comments");
    auto* fam =
        cmd->add_option("-f,--family", a.family, "rectangle|triangle|hexagon|random")
            ->check(CLI::IsMember(family_names()));
    cmd->add_option("-e,--eps", a.eps, "aperture for --family (default 0.2)");
    cmd->add_option("-s,--seed", a.seed, "seed for the random family");
    in->excludes(fam);
}

ConvexPolygon resolve_domain(const DomainArgs& a) {
    if (!a.input.empty()) return read_polygon_file(a.input);
    if (!a.family.empty()) return family_domain(a.family, a.eps, a.seed);
    throw UsageError("need --input FILE or --family NAME");
}

void kv(const std::string& key, double value) {
    std::cout << key << ' ' << fmt_g(value) << '\n';
}

void kv(const std::string& key, const std::string& value) {
    std::cout << key << ' ' << value << '\n';
}

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open " + path);
    return file;
}

nlohmann::ordered_json record_json(const DomainRecord& r) {
    nlohmann::ordered_json j;
    j["family"] = r.family;
    j["eps_target"] = r.eps_target;
    j["seed"] = r.seed;
    j["d"] = r.d;
    j["width"] = r.width;
    j["area"] = r.area;
    j["mu2"] = r.mu2;
    j["mu2_raw"] = r.mu2_raw;
    j["res2"] = r.res2;
    j["mu1"] = r.mu1;
    j["mu1_raw"] = r.mu1_raw;
    j["res1"] = r.res1;
    if (std::isfinite(r.mu_shoot)) j["mu_shoot"] = r.mu_shoot;
    j["mu_bound"] = r.mu_bound;
    j["slack"] = r.slack;
    j["c_emp"] = r.c_emp;
    j["liou_rayleigh"] = r.liou_rayleigh;
    j["liou_residual"] = r.liou_residual;
    j["kink_mass"] = r.kink_mass;
    j["c1"] = r.c1;
    j["defect"] = r.defect;
    j["gap_sup"] = r.gap_sup;
    j["gap_dsup"] = r.gap_dsup;
    j["eta5"] = r.eta5;
    j["eta10"] = r.eta10;
    j["cross10"] = r.cross10;
    j["pw_ratio"] = r.pw_ratio;
    j["vef"] = r.vef;
    j["dir_x"] = r.dir_x;
    j["dir_y"] = r.dir_y;
    j["one_minus_k"] = r.one_minus_k;
    j["szego"] = r.szego;
    return j;
}

void print_record(const DomainRecord& r) {
    if (!r.family.empty()) kv("family", r.family);
    kv("d", r.d);
    kv("width", r.width);
    kv("area", r.area);
    kv("mu2", r.mu2);
    kv("mu2_raw", r.mu2_raw);
    kv("res2", r.res2);
    kv("mu1", r.mu1);
    kv("res1", r.res1);
    if (std::isfinite(r.mu_shoot)) kv("mu_shoot", r.mu_shoot);
    kv("mu_bound", r.mu_bound);
    kv("slack", r.slack);
    kv("c_emp", r.c_emp);
    kv("liou_rayleigh", r.liou_rayleigh);
    kv("liou_residual", r.liou_residual);
    kv("kink_mass", r.kink_mass);
    kv("c1", r.c1);
    kv("defect", r.defect);
    kv("gap_sup", r.gap_sup);
    kv("gap_dsup", r.gap_dsup);
    kv("eta5", r.eta5);
    kv("eta10", r.eta10);
    kv("cross10", r.cross10);
    kv("pw_ratio", r.pw_ratio);
    kv("vef", r.vef);
    kv("dir_x", r.dir_x);
    kv("dir_y", r.dir_y);
    kv("one_minus_k", r.one_minus_k);
    kv("szego", r.szego);
}

// Hard invariants every record must satisfy; violations exit with code 3.
void check_record(const DomainRecord& r) {
    std::vector<std::string> bad;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) bad.push_back(what);
    };
    expect(r.res2 <= 1e-6, "planar residual above 1e-6");
    expect(r.res1 <= 1e-6, "weighted residual above 1e-6");
    expect(r.mu_bound >= r.mu1 * (1.0 - 1e-6),
           "chord-average Rayleigh quotient undercuts the 1-D eigenvalue");
    expect(r.slack >= -1e-3, "planar eigenvalue below pi^2/4");
    expect(r.liou_rayleigh >= kPi * kPi / (r.d * r.d) * (1.0 - 1e-6),
           "transformed Rayleigh quotient below pi^2/d^2");
    expect(r.liou_residual <= 5e-2, "transform residual above 5e-2");
    expect(r.pw_ratio <= 1.05, "slice control ratio above 1.05");
    expect(r.szego <= 1.002, "round-domain bound violated");
    expect(r.defect <= 5e-2, "flux defect above 5e-2");
    expect(r.kink_mass >= 0.0, "negative concavity mass");
    if (!bad.empty()) {
        std::ostringstream os;
        os << "check failed for " << (r.family.empty() ? "domain" : r.family)
           << " eps " << fmt_g(r.eps_target) << ":";
        for (const auto& s : bad) os << "\n  " << s;
        throw CheckFailure(os.str());
    }
}

std::vector<DomainRecord> run_sweep(const std::vector<std::string>& families,
                                    const std::vector<double>& eps_list,
                                    const std::vector<std::uint64_t>& seeds,
                                    const AnalyzeOptions& opt, bool check) {
    std::vector<DomainRecord> rs;
    for (const auto& fam : families) {
        for (double eps : eps_list) {
            if (fam == "random") {
                for (std::uint64_t s : seeds)
                    rs.push_back(analyze_family_member(fam, eps, s, opt));
            } else {
                rs.push_back(analyze_family_member(fam, eps, 1, opt));
            }
        }
    }
    sort_records(rs);
    if (check)
        for (const auto& r : rs) check_record(r);
    return rs;
}

int run_width(const DomainArgs& da) {
    const auto poly = resolve_domain(da);
    const auto norm = normalize_w_frame(poly);
    kv("vertices", static_cast<double>(poly.size()));
    kv("diameter", diameter(poly).value);
    kv("width", width(poly).value);
    kv("pwidth", projective_width(poly).value);
    kv("area", polygon_area(poly));
    kv("norm_d", norm.frame.d);
    kv("norm_eps", norm.frame.eps);
    return 0;
}

int run_profile(const DomainArgs& da, const std::string& out,
                std::size_t extra_samples) {
    const auto norm = normalize_w_frame(resolve_domain(da));
    const auto prof = build_profile(norm.poly, extra_samples);
    std::ofstream file;
    write_profile_csv(open_or_stdout(out, file), prof);
    return 0;
}

int run_ode(const DomainArgs& da, std::size_t elements, bool shooting) {
    const auto norm = normalize_w_frame(resolve_domain(da));
    const auto prof = build_profile(norm.poly);
    SolveOptions opt;
    opt.n_elements = elements;
    const auto sol = solve_weighted_neumann(prof, opt);
    kv("d", prof.d);
    kv("mu1", sol.mu);
    kv("mu1_raw", sol.mu_raw);
    kv("residual", sol.residual);
    kv("iterations", static_cast<double>(sol.iterations));
    kv("regularized", sol.regularized ? "1" : "0");
    if (shooting) {
        const double ms = shooting_cross_check(prof);
        kv("mu_shoot", ms);
        kv("route_gap", std::abs(ms - sol.mu));
    }
    return 0;
}

int run_pde(const DomainArgs& da, const PdeOptions& opt, const std::string& vtk) {
    const auto norm = normalize_w_frame(resolve_domain(da));
    const auto sol = solve_planar_neumann(norm.poly, opt);
    kv("mu2", sol.mu);
    kv("mu2_raw", sol.mu_raw);
    kv("mu_coarse", sol.mu_coarse);
    kv("residual", sol.residual);
    kv("nodes", static_cast<double>(sol.mesh.nodes.size()));
    kv("tris", static_cast<double>(sol.mesh.tris.size()));
    kv("vef", vertical_energy_fraction(sol));
    const auto dir = directional_profile(sol);
    kv("dir_x", dir.ratio_x);
    kv("dir_y", dir.ratio_y);
    if (!vtk.empty()) write_vtk_file(vtk, sol.mesh, sol.u);
    return 0;
}

int run_liouville(const DomainArgs& da, std::size_t elements) {
    const auto norm = normalize_w_frame(resolve_domain(da));
    const auto prof = build_profile(norm.poly);
    SolveOptions opt;
    opt.n_elements = elements;
    const auto sol = solve_weighted_neumann(prof, opt);
    const auto rep = liouville_report(sol);
    kv("d", rep.d);
    kv("mu", rep.mu);
    kv("t_full", rep.t_full);
    kv("t_collar", rep.t_collar);
    kv("t_weight", rep.t_weight);
    kv("v_smooth", rep.v_smooth);
    kv("kink_mass", rep.kink_mass);
    kv("kink_energy", rep.kink_energy);
    kv("residual", rep.residual);
    kv("rayleigh", rep.rayleigh);
    kv("dirichlet_floor", kPi * kPi / (rep.d * rep.d));
    return 0;
}

int run_compare(const DomainArgs& da, bool shooting, bool as_json, bool check) {
    AnalyzeOptions opt;
    opt.with_shooting = shooting;
    DomainRecord r;
    if (!da.family.empty()) {
        r = analyze_family_member(da.family, da.eps, da.seed, opt);
    } else {
        r = analyze_polygon(resolve_domain(da), opt);
        r.eps_target = r.width;
    }
    if (as_json)
        std::cout << record_json(r).dump(2) << '\n';
    else
        print_record(r);
    if (check) check_record(r);
    return 0;
}

int run_sweep_cmd(const std::vector<std::string>& families,
                  const std::vector<double>& eps_list,
                  const std::vector<std::uint64_t>& seeds, const std::string& out,
                  bool check, bool shooting) {
    AnalyzeOptions opt;
    opt.with_shooting = shooting;
    const auto rs = run_sweep(families, eps_list, seeds, opt, check);
    std::ofstream file;
    write_records_csv(open_or_stdout(out, file), rs);
    return 0;
}

int run_sharpness(const std::vector<double>& eps_list) {
    std::cout << "eps,mu2,closed_form,rel_err,c_emp,c_limit,ratio\n";
    for (double eps : eps_list) {
        const auto r = analyze_family_member("rectangle", eps);
        const double exact = kPi * kPi / (4.0 - eps * eps);
        const double climit = kPi * kPi / (4.0 * (4.0 - eps * eps));
        std::cout << fmt_g(eps) << ',' << fmt_g(r.mu2) << ',' << fmt_g(exact)
                  << ',' << fmt_g(std::abs(r.mu2 - exact) / exact) << ','
                  << fmt_g(r.c_emp) << ',' << fmt_g(climit) << ','
                  << fmt_g(r.c_emp / climit) << '\n';
    }
    return 0;
}

int run_fit(const std::vector<std::string>& families,
            const std::vector<double>& eps_list,
            const std::vector<std::uint64_t>& seeds, bool as_json) {
    AnalyzeOptions opt;
    const auto rs = run_sweep(families, eps_list, seeds, opt, false);
    const auto fit = fit_constant(rs);
    if (as_json) {
        nlohmann::ordered_json j;
        j["c_min"] = fit.c_min;
        j["slack_min"] = fit.slack_min;
        j["argmin_family"] = fit.argmin_family;
        j["argmin_eps"] = fit.argmin_eps;
        for (const auto& [fam, c] : fit.per_family) j["per_family"][fam] = c;
        j["records"] = rs.size();
        std::cout << j.dump(2) << '\n';
    } else {
        kv("c_min", fit.c_min);
        kv("slack_min", fit.slack_min);
        kv("argmin_family", fit.argmin_family);
        kv("argmin_eps", fit.argmin_eps);
        for (const auto& [fam, c] : fit.per_family) kv("c_min_" + fam, c);
        kv("records", static_cast<double>(rs.size()));
    }
    return 0;
}

// Measure every calibrated diagnostic across the deterministic families at
// the standard and doubled resolutions; suggested caps carry 2x headroom.
int run_calibrate(bool fast) {
    const std::vector<std::string> fams = {"rectangle", "triangle", "hexagon"};
    const std::vector<double> eps_list = {0.2, 0.1, 0.05, 0.025};

    std::map<std::string, double> hi;
    double c_min = std::numeric_limits<double>::infinity();
    double slack_min = std::numeric_limits<double>::infinity();
    auto note = [&](const std::string& k, double v) {
        auto it = hi.find(k);
        if (it == hi.end() || v > it->second) hi[k] = v;
    };

    for (int pass = 0; pass < (fast ? 1 : 2); ++pass) {
        for (const auto& fam : fams) {
            for (double eps : eps_list) {
                AnalyzeOptions opt;
                if (pass == 1) {
                    opt.pde.target = eps / 16.0;
                    opt.n_samples = 2048;
                }
                const auto r = analyze_family_member(fam, eps, 1, opt);
                note("cap_c1", std::abs(r.c1));
                note("cap_defect", r.defect);
                note("cap_gap_sup", r.gap_sup);
                note("cap_gap_dsup", r.gap_dsup);
                note("cap_eta5", r.eta5);
                note("cap_eta10", r.eta10);
                note("cap_cross10", r.cross10);
                note("cap_pw_ratio", r.pw_ratio);
                note("cap_vert", r.vef);
                note("cap_dir_y", r.dir_y);
                note("cap_one_minus_k", r.one_minus_k);
                note("cap_liou_residual", r.liou_residual);
                note("cap_route_gap", std::abs(r.mu2 - r.mu1) / r.mu2);
                c_min = std::min(c_min, r.c_emp);
                slack_min = std::min(slack_min, r.slack);
                std::cerr << "calibrate pass " << pass << ' ' << fam << " eps "
                          << fmt_g(eps) << " done\n";
            }
        }
    }
    for (const auto& [k, v] : hi)
        std::cout << k << " measured " << fmt_g(v) << " suggest " << fmt_g(2.0 * v)
                  << '\n';
    std::cout << "c_emp_min measured " << fmt_g(c_min) << " floor_suggest "
              << fmt_g(0.68 * c_min) << '\n';
    std::cout << "slack_min measured " << fmt_g(slack_min) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eigenwidth: first nonzero free-membrane eigenvalues of convex "
                 "plane domains, their one-dimensional reductions, and the "
                 "aperture-squared improvement over the diameter bound"};
    app.require_subcommand(1);
    app.set_config("--config");

    DomainArgs da_width, da_profile, da_ode, da_pde, da_liou, da_cmp;
    std::string profile_out, pde_vtk, sweep_out = "-";
    std::size_t profile_samples = 512, ode_elements = 1024, liou_elements = 1024;
    bool ode_shoot = false, cmp_shoot = false, cmp_json = false, cmp_check = false;
    bool sweep_check = false, sweep_shoot = false, fit_json = false,
         cal_fast = false;
    PdeOptions pde_opt;
    std::vector<std::string> sweep_families = family_names();
    std::vector<double> sweep_eps = {0.2, 0.1, 0.05, 0.025};
    std::vector<std::uint64_t> sweep_seeds = {1, 2, 3};
    std::vector<double> sharp_eps = {0.2, 0.1, 0.05};

    auto* cw = app.add_subcommand("width", "caliper data for one domain");
    add_domain_options(cw, da_width);

    auto* cp = app.add_subcommand("profile", "cross-section profile as CSV");
    add_domain_options(cp, da_profile);
    cp->add_option("-o,--out", profile_out, "output file (default stdout)");
    cp->add_option("--samples", profile_samples, "extra profile samples");

    auto* co = app.add_subcommand("ode", "weighted 1-D eigensolve");
    add_domain_options(co, da_ode);
    co->add_option("--elements", ode_elements, "grid elements");
    co->add_flag("--shooting", ode_shoot, "independent shooting cross-check");

    auto* cd = app.add_subcommand("pde", "planar eigensolve");
    add_domain_options(cd, da_pde);
    cd->add_option("--target", pde_opt.target, "mesh edge target");
    cd->add_option("--refinements", pde_opt.refinements, "nested refinements");
    cd->add_option("--vtk", pde_vtk, "write mesh + mode as VTK");

    auto* cl = app.add_subcommand("liouville", "transformed-problem report");
    add_domain_options(cl, da_liou);
    cl->add_option("--elements", liou_elements, "grid elements");

    auto* cc = app.add_subcommand("compare", "full record for one domain");
    add_domain_options(cc, da_cmp);
    cc->add_flag("--shooting", cmp_shoot, "include shooting cross-check");
    cc->add_flag("--json", cmp_json, "JSON output");
    cc->add_flag("--check", cmp_check, "enforce hard invariants (exit 3)");

    auto* cs = app.add_subcommand("sweep", "family sweep to records CSV");
    cs->add_option("--families", sweep_families, "families to run");
    cs->add_option("--eps", sweep_eps, "aperture list");
    cs->add_option("--seeds", sweep_seeds, "seeds for the random family");
    cs->add_option("-o,--out", sweep_out, "output file (default stdout)");
    cs->add_flag("--check", sweep_check, "enforce hard invariants (exit 3)");
    cs->add_flag("--shooting", sweep_shoot, "include shooting cross-check");

    auto* ch = app.add_subcommand("sharpness", "slab family against the closed form");
    ch->add_option("--eps", sharp_eps, "aperture list");

    auto* cf = app.add_subcommand("fit", "empirical improvement constant");
    cf->add_option("--families", sweep_families, "families to run");
    cf->add_option("--eps", sweep_eps, "aperture list");
    cf->add_option("--seeds", sweep_seeds, "seeds for the random family");
    cf->add_flag("--json", fit_json, "JSON output");

    auto* cb = app.add_subcommand("calibrate", "measure diagnostic caps");
    cb->add_flag("--fast", cal_fast, "single resolution pass");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (cw->parsed()) return run_width(da_width);
        if (cp->parsed()) return run_profile(da_profile, profile_out, profile_samples);
        if (co->parsed()) return run_ode(da_ode, ode_elements, ode_shoot);
        if (cd->parsed()) return run_pde(da_pde, pde_opt, pde_vtk);
        if (cl->parsed()) return run_liouville(da_liou, liou_elements);
        if (cc->parsed()) return run_compare(da_cmp, cmp_shoot, cmp_json, cmp_check);
        if (cs->parsed())
            return run_sweep_cmd(sweep_families, sweep_eps, sweep_seeds, sweep_out,
                                 sweep_check, sweep_shoot);
        if (ch->parsed()) return run_sharpness(sharp_eps);
        if (cf->parsed()) return run_fit(sweep_families, sweep_eps, sweep_seeds, fit_json);
        if (cb->parsed()) return run_calibrate(cal_fast);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const CheckFailure& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
