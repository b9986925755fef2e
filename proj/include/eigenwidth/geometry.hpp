#pragma once

// Convex polygon primitives: validation, rotating-calipers diameter,
// width (min over directions of the longest perpendicular chord),
// projective width (min over directions of the projection extent),
// w-frame normalization and vertical slicing.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigenwidth {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Direction of an unoriented line, angle in [0, pi).
struct Direction {
    double theta = 0.0;
    double vx = 1.0;
    double vy = 0.0;
};

inline Direction direction_from_vector(Vec2 v) {
    double t = std::atan2(v.y, v.x);
    const double pi = 3.14159265358979323846;
    if (t < 0.0) t += pi;
    if (t >= pi) t -= pi;
    return {t, std::cos(t), std::sin(t)};
}

struct ConvexPolygon {
    std::vector<Vec2> v;  // counterclockwise, strictly convex

    std::size_t size() const { return v.size(); }
    const Vec2& operator[](std::size_t i) const { return v[i]; }
};

inline constexpr double kCollinearTol = 1e-12;

// Merge collinear/duplicate vertices and validate strict convexity (CCW).
inline ConvexPolygon make_convex_polygon(std::vector<Vec2> pts) {
    if (pts.size() < 3) throw std::invalid_argument("degenerate polygon: fewer than 3 vertices");
    // drop consecutive duplicates first
    std::vector<Vec2> q;
    for (const Vec2& p : pts) {
        if (q.empty() || norm(p - q.back()) > kCollinearTol) q.push_back(p);
    }
    while (q.size() > 1 && norm(q.front() - q.back()) <= kCollinearTol) q.pop_back();
    // iteratively remove vertices whose turn is collinear within tolerance
    bool changed = true;
    while (changed && q.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < q.size() && q.size() >= 3;) {
            const std::size_t n = q.size();
            Vec2 a = q[(i + n - 1) % n], b = q[i], c = q[(i + 1) % n];
            if (std::abs(cross(b - a, c - b)) <= kCollinearTol) {
                q.erase(q.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
            } else {
                ++i;
            }
        }
    }
    if (q.size() < 3) throw std::invalid_argument("degenerate polygon: collapses under collinear merge");
    const std::size_t n = q.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = q[i], b = q[(i + 1) % n], c = q[(i + 2) % n];
        if (cross(b - a, c - b) <= kCollinearTol)
            throw std::invalid_argument("degenerate polygon: not strictly convex counterclockwise");
    }
    return ConvexPolygon{std::move(q)};
}

// Monotone-chain hull of an arbitrary point set (interior points dropped,
// collinear runs merged by the validator).
inline ConvexPolygon convex_hull(std::vector<Vec2> pts) {
    if (pts.size() < 3)
        throw std::invalid_argument("convex_hull: fewer than 3 points");
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const std::size_t n = pts.size();
    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 &&
               cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper chain
        while (k >= t &&
               cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 0 ? k - 1 : 0);  // last point repeats the first
    return make_convex_polygon(std::move(hull));
}

inline double polygon_area(const ConvexPolygon& p) {
    double s = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) s += cross(p[i], p[(i + 1) % n]);
    return 0.5 * s;
}

inline Vec2 centroid(const ConvexPolygon& p) {
    double a = 0.0, cx = 0.0, cy = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 &u = p[i], &w = p[(i + 1) % n];
        const double c = cross(u, w);
        a += c;
        cx += (u.x + w.x) * c;
        cy += (u.y + w.y) * c;
    }
    a *= 0.5;
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

struct DiameterResult {
    double value = 0.0;
    std::size_t i = 0;  // achieving vertex pair
    std::size_t j = 0;
};

// Rotating calipers over antipodal vertex pairs.
inline DiameterResult diameter(const ConvexPolygon& p) {
    const std::size_t n = p.size();
    DiameterResult best;
    double best2 = -1.0;
    auto consider = [&](std::size_t a, std::size_t b) {
        const Vec2 d = p[b] - p[a];
        const double d2 = d.x * d.x + d.y * d.y;
        if (d2 > best2) {
            best2 = d2;
            best.i = a;
            best.j = b;
        }
    };
    std::size_t j = 1, guard = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e = p[(i + 1) % n] - p[i];
        while (cross(e, p[(j + 1) % n] - p[j]) > 0.0) {
            j = (j + 1) % n;
            if (++guard > 4 * n) throw std::runtime_error("diameter: caliper failed to terminate");
        }
        consider(i, j);
        consider((i + 1) % n, j);
    }
    {
        const Vec2 d = p[best.j] - p[best.i];
        best.value = std::sqrt(d.x * d.x + d.y * d.y);
    }
    return best;
}

struct WidthResult {
    double value = 0.0;
    Direction dir;  // minimizing direction v: slices/projection are taken across v
};

namespace detail {

// Distance from the line through edge (a,b) to vertex q, for CCW polygons.
inline double edge_support_distance(Vec2 a, Vec2 b, Vec2 q) {
    return cross(b - a, q - a) / norm(b - a);
}

// Length of the chord of p through point q with unit direction u (half-plane clipping).
inline double chord_length_through(const ConvexPolygon& p, Vec2 q, Vec2 u) {
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = p[i], b = p[(i + 1) % n];
        const Vec2 e = b - a;
        const double denom = cross(e, u);
        const double num = cross(e, q - a);  // constraint: num + t*denom >= 0
        if (std::abs(denom) < 1e-15) {
            if (num < -1e-12) return 0.0;  // line outside this half-plane
            continue;
        }
        const double t = -num / denom;
        if (denom > 0.0) tmin = std::max(tmin, t);
        else tmax = std::min(tmax, t);
    }
    return std::max(0.0, tmax - tmin);
}

}  // namespace detail

// Projective width: min over edge-aligned directions v of the extent of the
// projection across v (i.e. the caliper support distance over each edge).
inline WidthResult projective_width(const ConvexPolygon& p) {
    const std::size_t n = p.size();
    // antipodal vertex tracked by rotating calipers
    std::size_t k = 1;
    {
        const Vec2 a = p[0], b = p[1];
        while (cross(b - a, p[(k + 1) % n] - a) > cross(b - a, p[k] - a)) k = (k + 1) % n;
    }
    WidthResult best;
    best.value = std::numeric_limits<double>::infinity();
    std::size_t guard = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = p[i], b = p[(i + 1) % n];
        while (cross(b - a, p[(k + 1) % n] - a) > cross(b - a, p[k] - a)) {
            k = (k + 1) % n;
            if (++guard > 4 * n) throw std::runtime_error("projective_width: caliper failed to terminate");
        }
        const double w = detail::edge_support_distance(a, b, p[k]);
        const Direction d = direction_from_vector(b - a);
        if (w < best.value || (w == best.value && d.theta < best.dir.theta)) {
            best.value = w;
            best.dir = d;
        }
    }
    return best;
}

// Width: min over edge-aligned directions v of the longest chord perpendicular
// to that edge. Independent route from projective_width; the two agree for
// convex polygons at the minimizing direction.
inline WidthResult width(const ConvexPolygon& p) {
    const std::size_t n = p.size();
    WidthResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = p[i], b = p[(i + 1) % n];
        const Direction d = direction_from_vector(b - a);
        const Vec2 u{-d.vy, d.vx};  // chord direction: perpendicular to the edge
        double m = 0.0;
        for (std::size_t q = 0; q < n; ++q)
            m = std::max(m, detail::chord_length_through(p, p[q], u));
        if (m < best.value || (m == best.value && d.theta < best.dir.theta)) {
            best.value = m;
            best.dir = d;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// w-frame: rotate the projective-width direction onto the x-axis, scale the
// diameter to 2, translate to x in [0,d], y in [0,eps]; reflect in y if the
// centroid would otherwise sit below the slab midline.

struct WFrame {
    double theta = 0.0;      // rotation applied (clockwise by theta)
    bool reflected = false;  // y-reflection applied after rotation
    double scale = 1.0;
    double tx = 0.0;
    double ty = 0.0;
    double d = 0.0;    // x-extent after normalization
    double eps = 0.0;  // width after normalization
};

inline Vec2 apply_wframe(const WFrame& f, Vec2 p) {
    const double c = std::cos(f.theta), s = std::sin(f.theta);
    Vec2 r{c * p.x + s * p.y, -s * p.x + c * p.y};
    if (f.reflected) r.y = -r.y;
    return {f.scale * r.x + f.tx, f.scale * r.y + f.ty};
}

struct NormalizedPolygon {
    ConvexPolygon poly;
    WFrame frame;
};

inline NormalizedPolygon normalize_w_frame(const ConvexPolygon& p) {
    const DiameterResult dia = diameter(p);
    if (dia.value <= 0.0) throw std::invalid_argument("degenerate polygon: zero diameter");
    const WidthResult pw = projective_width(p);

    WFrame f;
    f.theta = pw.dir.theta;
    f.scale = 2.0 / dia.value;

    auto pass = [&](bool reflected) {
        std::vector<Vec2> out;
        out.reserve(p.size());
        const double c = std::cos(f.theta), s = std::sin(f.theta);
        for (const Vec2& q : p.v) {
            Vec2 r{c * q.x + s * q.y, -s * q.x + c * q.y};
            if (reflected) r.y = -r.y;
            out.push_back({f.scale * r.x, f.scale * r.y});
        }
        return out;
    };

    std::vector<Vec2> rot = pass(false);
    double ymin = rot[0].y, ymax = rot[0].y;
    for (const Vec2& q : rot) {
        ymin = std::min(ymin, q.y);
        ymax = std::max(ymax, q.y);
    }
    ConvexPolygon tmp{rot};
    const double cy = centroid(tmp).y;
    f.reflected = cy < 0.5 * (ymin + ymax) - 1e-14 * std::max(1.0, std::abs(ymax));
    if (f.reflected) {
        rot = pass(true);
        ymin = rot[0].y;
        for (const Vec2& q : rot) ymin = std::min(ymin, q.y);
    }
    double xmin = rot[0].x, xmax = rot[0].x;
    for (const Vec2& q : rot) {
        xmin = std::min(xmin, q.x);
        xmax = std::max(xmax, q.x);
    }
    f.tx = -xmin;
    f.ty = -ymin;
    for (Vec2& q : rot) {
        q.x += f.tx;
        q.y += f.ty;
    }
    f.d = xmax - xmin;
    f.eps = f.scale * pw.value;
    if (f.reflected) {
        // keep counterclockwise orientation after the reflection
        std::reverse(rot.begin(), rot.end());
    }
    return {make_convex_polygon(std::move(rot)), f};
}

// ---------------------------------------------------------------------------
// Monotone boundary chains of a w-framed polygon, and vertical slices.

struct BoundaryChains {
    std::vector<double> lo_x, lo_y;  // lower boundary, x increasing
    std::vector<double> hi_x, hi_y;  // upper boundary, x increasing
    double d = 0.0;
};

inline BoundaryChains build_chains(const ConvexPolygon& p) {
    const std::size_t n = p.size();
    double xmin = p[0].x, xmax = p[0].x;
    for (const Vec2& q : p.v) {
        xmin = std::min(xmin, q.x);
        xmax = std::max(xmax, q.x);
    }
    if (std::abs(xmin) > 1e-9)
        throw std::invalid_argument("polygon is not x-normalized (min x must be 0)");
    // bottom-left start: among min-x vertices pick the lowest
    std::size_t ibl = 0, itl = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 q = p[i];
        const Vec2 bl = p[ibl], tl = p[itl];
        if (q.x < bl.x || (q.x == bl.x && q.y < bl.y)) ibl = i;
        if (q.x < tl.x || (q.x == tl.x && q.y > tl.y)) itl = i;
    }
    BoundaryChains ch;
    ch.d = xmax - xmin;
    // lower chain: walk counterclockwise while x strictly increases
    for (std::size_t i = ibl;;) {
        ch.lo_x.push_back(p[i].x);
        ch.lo_y.push_back(p[i].y);
        const std::size_t nx = (i + 1) % n;
        if (p[nx].x <= p[i].x) break;
        i = nx;
    }
    // upper chain: walk clockwise while x strictly increases
    for (std::size_t i = itl;;) {
        ch.hi_x.push_back(p[i].x);
        ch.hi_y.push_back(p[i].y);
        const std::size_t pv = (i + n - 1) % n;
        if (p[pv].x <= p[i].x) break;
        i = pv;
    }
    return ch;
}

namespace detail {

inline double chain_eval(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (xs.size() == 1) return ys[0];
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    if (hi == 0) hi = 1;
    if (hi >= xs.size()) hi = xs.size() - 1;
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + t * (ys[hi] - ys[lo]);
}

}  // namespace detail

struct SliceResult {
    double h_minus = 0.0;
    double h_plus = 0.0;
};

inline SliceResult slice_chains(const BoundaryChains& ch, double x) {
    if (x < -1e-12 || x > ch.d + 1e-12)
        throw std::out_of_range("slice abscissa out of range [0,d]");
    x = std::clamp(x, 0.0, ch.d);
    return {detail::chain_eval(ch.lo_x, ch.lo_y, x), detail::chain_eval(ch.hi_x, ch.hi_y, x)};
}

// Vertical slice of a w-framed polygon at abscissa x.
inline SliceResult slice(const ConvexPolygon& p, double x) {
    return slice_chains(build_chains(p), x);
}

// Rigid-motion helpers (used by tests and generators).
inline ConvexPolygon rotated(const ConvexPolygon& p, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    std::vector<Vec2> out;
    out.reserve(p.size());
    for (const Vec2& q : p.v) out.push_back({c * q.x - s * q.y, s * q.x + c * q.y});
    return ConvexPolygon{std::move(out)};
}

inline ConvexPolygon translated(const ConvexPolygon& p, Vec2 t) {
    std::vector<Vec2> out;
    out.reserve(p.size());
    for (const Vec2& q : p.v) out.push_back(q + t);
    return ConvexPolygon{std::move(out)};
}

}  // namespace eigenwidth
