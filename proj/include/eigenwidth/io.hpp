#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eigenwidth/fem.hpp"
#include "eigenwidth/geometry.hpp"
#include "eigenwidth/profile.hpp"
#include "eigenwidth/records.hpp"

namespace eigenwidth {

// shortest round-trippable decimal that is still byte-stable across runs
inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// ---- polygon text format: one "x y" pair per line, '#' starts a comment ----

inline void write_polygon(std::ostream& os, const ConvexPolygon& poly) {
    os << "# convex polygon, " << poly.size() << " vertices, ccw\n";
    for (std::size_t i = 0; i < poly.size(); ++i)
        os << fmt_g(poly[i].x) << ' ' << fmt_g(poly[i].y) << '\n';
}

inline ConvexPolygon read_polygon(std::istream& is) {
    std::vector<Vec2> pts;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double x, y;
        if (ls >> x >> y) pts.push_back({x, y});
    }
    if (pts.size() < 3) throw std::runtime_error("read_polygon: fewer than 3 vertices");
    return make_convex_polygon(pts);
}

inline void write_polygon_file(const std::string& path, const ConvexPolygon& poly) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_polygon(os, poly);
}

inline ConvexPolygon read_polygon_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_polygon(is);
}

// ---- height profile CSV ----

inline void write_profile_csv(std::ostream& os, const HeightProfile& p) {
    os << "x,h,h_minus,h_plus\n";
    for (std::size_t i = 0; i < p.x.size(); ++i)
        os << fmt_g(p.x[i]) << ',' << fmt_g(p.h[i]) << ',' << fmt_g(p.h_minus[i])
           << ',' << fmt_g(p.h_plus[i]) << '\n';
}

// ---- domain records CSV ----

inline const char* records_csv_header() {
    return "family,eps_target,seed,d,width,area,"
           "mu2,mu2_raw,res2,mu1,mu1_raw,res1,mu_shoot,mu_bound,"
           "slack,c_emp,liou_rayleigh,liou_residual,kink_mass,"
           "c1,defect,gap_sup,gap_dsup,eta5,eta10,cross10,pw_ratio,"
           "vef,dir_x,dir_y,one_minus_k,szego";
}

inline void write_records_csv(std::ostream& os,
                              const std::vector<DomainRecord>& rs) {
    os << "# eigenwidth records, schema 1\n" << records_csv_header() << '\n';
    for (const auto& r : rs) {
        os << r.family << ',' << fmt_g(r.eps_target) << ',' << r.seed << ','
           << fmt_g(r.d) << ',' << fmt_g(r.width) << ',' << fmt_g(r.area) << ','
           << fmt_g(r.mu2) << ',' << fmt_g(r.mu2_raw) << ',' << fmt_g(r.res2)
           << ',' << fmt_g(r.mu1) << ',' << fmt_g(r.mu1_raw) << ','
           << fmt_g(r.res1) << ',' << fmt_g(r.mu_shoot) << ','
           << fmt_g(r.mu_bound) << ',' << fmt_g(r.slack) << ','
           << fmt_g(r.c_emp) << ',' << fmt_g(r.liou_rayleigh) << ','
           << fmt_g(r.liou_residual) << ',' << fmt_g(r.kink_mass) << ','
           << fmt_g(r.c1) << ',' << fmt_g(r.defect) << ',' << fmt_g(r.gap_sup)
           << ',' << fmt_g(r.gap_dsup) << ',' << fmt_g(r.eta5) << ','
           << fmt_g(r.eta10) << ',' << fmt_g(r.cross10) << ','
           << fmt_g(r.pw_ratio) << ',' << fmt_g(r.vef) << ',' << fmt_g(r.dir_x)
           << ',' << fmt_g(r.dir_y) << ',' << fmt_g(r.one_minus_k) << ','
           << fmt_g(r.szego) << '\n';
    }
}

inline void write_records_csv_file(const std::string& path,
                                   const std::vector<DomainRecord>& rs) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_records_csv(os, rs);
}

// ---- legacy ASCII VTK, for eyeballing meshes and modes ----

inline void write_vtk(std::ostream& os, const SlabMesh& mesh,
                      const std::vector<double>& u) {
    os << "# vtk DataFile Version 3.0\neigenwidth mode\nASCII\n"
       << "DATASET UNSTRUCTURED_GRID\nPOINTS " << mesh.nodes.size()
       << " double\n";
    for (const auto& p : mesh.nodes)
        os << fmt_g(p.x) << ' ' << fmt_g(p.y) << " 0\n";
    os << "CELLS " << mesh.tris.size() << ' ' << 4 * mesh.tris.size() << '\n';
    for (const auto& t : mesh.tris)
        os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    os << "CELL_TYPES " << mesh.tris.size() << '\n';
    for (std::size_t i = 0; i < mesh.tris.size(); ++i) os << "5\n";
    if (u.size() == mesh.nodes.size()) {
        os << "POINT_DATA " << mesh.nodes.size()
           << "\nSCALARS mode double 1\nLOOKUP_TABLE default\n";
        for (double v : u) os << fmt_g(v) << '\n';
    }
}

inline void write_vtk_file(const std::string& path, const SlabMesh& mesh,
                           const std::vector<double>& u) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_vtk(os, mesh, u);
}

}  // namespace eigenwidth
