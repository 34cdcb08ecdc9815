#include "csf/curve.hpp"

#include "csf/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace csf {

PlanarCurve::PlanarCurve(std::vector<Vec2> points, Topology topology, bool embedded)
    : points_(std::move(points)), topology_(topology), embedded_(embedded)
{
    require(points_.size() >= 8, ErrorKind::InvalidInput, "curve needs at least 8 points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        require(std::isfinite(points_[i].x) && std::isfinite(points_[i].y), ErrorKind::InvalidInput,
                "curve has non-finite point");
        if (i > 0) require(points_[i] != points_[i - 1], ErrorKind::InvalidInput, "consecutive points coincide");
    }
    if (closed()) require(points_.front() != points_.back(), ErrorKind::InvalidInput, "closed curve repeats first point");
}

namespace {

double wrap_angle(double a)
{
    constexpr double tau = 2.0 * std::numbers::pi;
    a = std::fmod(a, tau);
    if (a > std::numbers::pi) a -= tau;
    if (a <= -std::numbers::pi) a += tau;
    return a;
}

double menger(Vec2 a, Vec2 b, Vec2 c)
{
    const double den = distance(a, b) * distance(b, c) * distance(a, c);
    if (den == 0.0) return 0.0;
    return 2.0 * cross(b - a, c - b) / den;
}

double turning_weight(double kappa, double h)
{
    const double x = kappa * h / 2.0;
    if (std::abs(x) < 1e-8) return h / 2.0;
    return std::asin(std::clamp(x, -1.0, 1.0)) / kappa;
}

} // namespace

CurveGeometry geometry(const PlanarCurve& curve)
{
    const auto& p = curve.points();
    const std::size_t n = p.size();
    require(n >= 3, ErrorKind::InvalidInput, "geometry needs 3 samples");
    const bool closed = curve.closed();
    CurveGeometry g;
    g.s.assign(n, 0.0);
    g.tangent.resize(n);
    g.normal.resize(n);
    g.kappa.assign(n, 0.0);
    g.theta.assign(n, 0.0);
    g.weight.assign(n, 0.0);

    std::vector<double> h(curve.segment_count());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = distance(p[i], p[(i + 1) % n]);
    for (std::size_t i = 1; i < n; ++i) g.s[i] = g.s[i - 1] + h[i - 1];
    g.length = 0;
    for (double v : h) g.length += v;

    auto interior = [&](std::size_t im, std::size_t i, std::size_t ip, double hm, double hp) {
        const Vec2 d = (-hp / (hm * (hm + hp))) * p[im] + ((hp - hm) / (hm * hp)) * p[i] + (hm / (hp * (hm + hp))) * p[ip];
        g.tangent[i] = normalized(d);
        g.kappa[i] = menger(p[im], p[i], p[ip]);
        g.weight[i] = turning_weight(g.kappa[i], hm) + turning_weight(g.kappa[i], hp);
    };

    if (closed) {
        for (std::size_t i = 0; i < n; ++i) interior((i + n - 1) % n, i, (i + 1) % n, h[(i + n - 1) % n], h[i]);
    } else {
        for (std::size_t i = 1; i + 1 < n; ++i) interior(i - 1, i, i + 1, h[i - 1], h[i]);
        {
            const double h1 = h[0], h2 = h[1];
            const Vec2 d = (-(2 * h1 + h2) / (h1 * (h1 + h2))) * p[0] + ((h1 + h2) / (h1 * h2)) * p[1] - (h1 / (h2 * (h1 + h2))) * p[2];
            g.tangent[0] = normalized(d);
            g.kappa[0] = 2 * g.kappa[1] - g.kappa[2];
            g.weight[0] = turning_weight(g.kappa[0], h1);
        }
        {
            const double h1 = h[n - 2], h2 = h[n - 3];
            const Vec2 d = ((2 * h1 + h2) / (h1 * (h1 + h2))) * p[n - 1] - ((h1 + h2) / (h1 * h2)) * p[n - 2] + (h1 / (h2 * (h1 + h2))) * p[n - 3];
            g.tangent[n - 1] = normalized(d);
            g.kappa[n - 1] = 2 * g.kappa[n - 2] - g.kappa[n - 3];
            g.weight[n - 1] = turning_weight(g.kappa[n - 1], h1);
        }
    }
    for (std::size_t i = 0; i < n; ++i) g.normal[i] = perp(g.tangent[i]);
    g.theta[0] = std::atan2(g.tangent[0].y, g.tangent[0].x);
    for (std::size_t i = 1; i < n; ++i) {
        const double a = std::atan2(g.tangent[i].y, g.tangent[i].x);
        g.theta[i] = g.theta[i - 1] + wrap_angle(a - g.theta[i - 1]);
    }
    return g;
}

CurveSpline::CurveSpline(const PlanarCurve& curve) : closed_(curve.closed())
{
    const auto& p = curve.points();
    std::vector<double> xs, ys;
    xs.reserve(p.size() + 1);
    ys.reserve(p.size() + 1);
    u_.push_back(0.0);
    for (const auto& q : p) { xs.push_back(q.x); ys.push_back(q.y); }
    for (std::size_t i = 1; i < p.size(); ++i) u_.push_back(u_.back() + distance(p[i - 1], p[i]));
    if (closed_) {
        u_.push_back(u_.back() + distance(p.back(), p.front()));
        xs.push_back(p.front().x);
        ys.push_back(p.front().y);
    }
    const SplineEnd end = closed_ ? SplineEnd::Periodic : SplineEnd::Natural;
    x_ = CubicSpline(u_, xs, end);
    y_ = CubicSpline(u_, ys, end);
    s_.assign(u_.size(), 0.0);
    for (std::size_t i = 1; i < u_.size(); ++i) s_[i] = s_[i - 1] + segment_length(i - 1, u_[i - 1], u_[i]);
}

double CurveSpline::segment_length(std::size_t i, double ua, double ub) const
{
    static const QuadratureRule gl = gauss_legendre(8);
    (void)i;
    const double c = 0.5 * (ua + ub), r = 0.5 * (ub - ua);
    double sum = 0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) sum += gl.weights[q] * norm(derivative(c + r * gl.nodes[q]));
    return sum * r;
}

double CurveSpline::arclength_at(double u) const
{
    u = std::clamp(u, 0.0, u_.back());
    auto it = std::upper_bound(u_.begin(), u_.end(), u);
    std::size_t i = it == u_.begin() ? 0 : static_cast<std::size_t>(it - u_.begin()) - 1;
    i = std::min(i, u_.size() - 2);
    return s_[i] + segment_length(i, u_[i], u);
}

double CurveSpline::param_at_arclength(double s) const
{
    if (s <= 0) return 0;
    if (s >= s_.back()) return u_.back();
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t i = static_cast<std::size_t>(it - s_.begin()) - 1;
    i = std::min(i, s_.size() - 2);
    const double ua = u_[i], ub = u_[i + 1];
    double u = ua + (ub - ua) * (s - s_[i]) / (s_[i + 1] - s_[i]);
    for (int iter = 0; iter < 30; ++iter) {
        const double f = s_[i] + segment_length(i, ua, u) - s;
        const double du = -f / norm(derivative(u));
        u = std::clamp(u + du, ua, ub);
        if (std::abs(du) < 1e-15 * std::max(1.0, std::abs(u))) break;
    }
    return u;
}

PlanarCurve resample_arclength(const PlanarCurve& curve, std::size_t n)
{
    require(n >= 8, ErrorKind::InvalidInput, "resample needs n >= 8");
    const CurveSpline sp(curve);
    const double L = sp.length();
    require(L > 0, ErrorKind::InvalidInput, "degenerate curve of zero length");
    std::vector<Vec2> out(n);
    const double step = curve.closed() ? L / n : L / (n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = sp.position(sp.param_at_arclength(step * i));
    if (!curve.closed()) {
        out.front() = curve.points().front();
        out.back() = curve.points().back();
    }
    return PlanarCurve(std::move(out), curve.topology(), curve.embedded());
}

PlanarCurve resample_spacing(const PlanarCurve& curve, double h)
{
    require(h > 0, ErrorKind::InvalidInput, "resample spacing must be positive");
    const double L = CurveSpline(curve).length();
    std::size_t n = static_cast<std::size_t>(std::llround(L / h)) + (curve.closed() ? 0 : 1);
    return resample_arclength(curve, std::max<std::size_t>(n, 8));
}

double polyline_length(const PlanarCurve& curve)
{
    const auto& p = curve.points();
    double L = 0;
    for (std::size_t i = 0; i < curve.segment_count(); ++i) L += distance(p[i], p[(i + 1) % p.size()]);
    return L;
}

double smooth_length(const PlanarCurve& curve) { return CurveSpline(curve).length(); }

double signed_area(const PlanarCurve& curve)
{
    const auto& p = curve.points();
    double a = 0;
    for (std::size_t i = 0; i < p.size(); ++i) a += cross(p[i], p[(i + 1) % p.size()]);
    return 0.5 * a;
}

double min_spacing(const PlanarCurve& curve)
{
    const auto& p = curve.points();
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.segment_count(); ++i) m = std::min(m, distance(p[i], p[(i + 1) % p.size()]));
    return m;
}

double max_spacing(const PlanarCurve& curve)
{
    const auto& p = curve.points();
    double m = 0;
    for (std::size_t i = 0; i < curve.segment_count(); ++i) m = std::max(m, distance(p[i], p[(i + 1) % p.size()]));
    return m;
}

PlanarCurve reversed(const PlanarCurve& curve)
{
    std::vector<Vec2> p(curve.points().rbegin(), curve.points().rend());
    return PlanarCurve(std::move(p), curve.topology(), curve.embedded());
}

namespace {

struct Seg {
    Vec2 a, b;
    double xmin, xmax;
    std::size_t index;
    int owner;
};

bool segments_touch(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2, Vec2& at)
{
    constexpr double eps = 1e-12;
    const Vec2 r = p2 - p1, s = q2 - q1;
    const double den = cross(r, s);
    const double scale = std::max({norm(r), norm(s), 1e-300});
    if (std::abs(den) > eps * scale * scale) {
        const double t = cross(q1 - p1, s) / den;
        const double u = cross(q1 - p1, r) / den;
        const double tt = eps / norm(r), ut = eps / norm(s);
        if (t >= -tt && t <= 1 + tt && u >= -ut && u <= 1 + ut) {
            at = p1 + std::clamp(t, 0.0, 1.0) * r;
            return true;
        }
        return false;
    }
    // parallel: touching only if collinear and overlapping
    if (point_segment_distance(q1, p1, p2) <= eps) { at = q1; return true; }
    if (point_segment_distance(q2, p1, p2) <= eps) { at = q2; return true; }
    if (point_segment_distance(p1, q1, q2) <= eps) { at = p1; return true; }
    return false;
}

template <class Skip>
Intersection sweep(std::vector<Seg> segs, Skip skip)
{
    std::sort(segs.begin(), segs.end(), [](const Seg& l, const Seg& r) { return l.xmin < r.xmin; });
    std::vector<const Seg*> active;
    Intersection best;
    for (const auto& s : segs) {
        std::erase_if(active, [&](const Seg* a) { return a->xmax < s.xmin - 1e-12; });
        for (const Seg* a : active) {
            if (skip(*a, s)) continue;
            const double ylo = std::min(s.a.y, s.b.y), yhi = std::max(s.a.y, s.b.y);
            if (std::max(a->a.y, a->b.y) < ylo - 1e-12 || std::min(a->a.y, a->b.y) > yhi + 1e-12) continue;
            Vec2 at;
            if (segments_touch(a->a, a->b, s.a, s.b, at)) {
                std::size_t i = std::min(a->index, s.index), j = std::max(a->index, s.index);
                if (!best.found || i < best.seg_a || (i == best.seg_a && j < best.seg_b)) best = {true, i, j, at};
            }
        }
        active.push_back(&s);
    }
    return best;
}

std::vector<Seg> segments_of(const PlanarCurve& c, int owner)
{
    const auto& p = c.points();
    std::vector<Seg> out;
    out.reserve(c.segment_count());
    for (std::size_t i = 0; i < c.segment_count(); ++i) {
        const Vec2 a = p[i], b = p[(i + 1) % p.size()];
        out.push_back({a, b, std::min(a.x, b.x), std::max(a.x, b.x), i, owner});
    }
    return out;
}

} // namespace

Intersection self_intersects(const PlanarCurve& curve)
{
    const std::size_t m = curve.segment_count();
    const bool closed = curve.closed();
    return sweep(segments_of(curve, 0), [&](const Seg& a, const Seg& b) {
        const std::size_t i = std::min(a.index, b.index), j = std::max(a.index, b.index);
        return j - i <= 1 || (closed && i == 0 && j == m - 1);
    });
}

bool curves_intersect(const PlanarCurve& a, const PlanarCurve& b)
{
    auto segs = segments_of(a, 0);
    auto sb = segments_of(b, 1);
    segs.insert(segs.end(), sb.begin(), sb.end());
    return sweep(std::move(segs), [](const Seg& l, const Seg& r) { return l.owner == r.owner; }).found;
}

SegmentIndex::SegmentIndex(const PlanarCurve& curve) : pts_(curve.points())
{
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300, total = 0;
    for (std::size_t i = 0; i < curve.segment_count(); ++i) {
        segs_.emplace_back(i, (i + 1) % pts_.size());
        total += csf::distance(pts_[i], pts_[(i + 1) % pts_.size()]);
    }
    for (const auto& p : pts_) {
        xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
    const double extent = std::max(xmax - xmin, ymax - ymin);
    cell_ = std::max({2.0 * total / segs_.size(), extent / 4096.0, 1e-12});
    x0_ = xmin;
    y0_ = ymin;
    nx_ = static_cast<int>((xmax - xmin) / cell_) + 1;
    ny_ = static_cast<int>((ymax - ymin) / cell_) + 1;
    cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    for (std::size_t k = 0; k < segs_.size(); ++k) {
        const Vec2 a = pts_[segs_[k].first], b = pts_[segs_[k].second];
        const int i0 = static_cast<int>((std::min(a.x, b.x) - x0_) / cell_), i1 = static_cast<int>((std::max(a.x, b.x) - x0_) / cell_);
        const int j0 = static_cast<int>((std::min(a.y, b.y) - y0_) / cell_), j1 = static_cast<int>((std::max(a.y, b.y) - y0_) / cell_);
        for (int i = std::max(i0, 0); i <= std::min(i1, nx_ - 1); ++i)
            for (int j = std::max(j0, 0); j <= std::min(j1, ny_ - 1); ++j) cells_[static_cast<std::size_t>(i) * ny_ + j].push_back(k);
    }
}

double SegmentIndex::distance(Vec2 p) const
{
    const int ci = std::clamp(static_cast<int>(std::floor((p.x - x0_) / cell_)), 0, nx_ - 1);
    const int cj = std::clamp(static_cast<int>(std::floor((p.y - y0_) / cell_)), 0, ny_ - 1);
    // distance from p to the clamped cell box, to bound rings
    const double ox = std::max({x0_ - p.x, p.x - (x0_ + nx_ * cell_), 0.0});
    const double oy = std::max({y0_ - p.y, p.y - (y0_ + ny_ * cell_), 0.0});
    const double outside = std::hypot(ox, oy);
    double best = std::numeric_limits<double>::infinity();
    const int rmax = std::max(nx_, ny_);
    for (int r = 0; r <= rmax; ++r) {
        for (int i = ci - r; i <= ci + r; ++i) {
            if (i < 0 || i >= nx_) continue;
            for (int j = cj - r; j <= cj + r; ++j) {
                if (j < 0 || j >= ny_) continue;
                if (std::abs(i - ci) != r && std::abs(j - cj) != r) continue;
                for (std::size_t k : cells_[static_cast<std::size_t>(i) * ny_ + j])
                    best = std::min(best, point_segment_distance(p, pts_[segs_[k].first], pts_[segs_[k].second]));
            }
        }
        if (best <= std::hypot(outside, r * cell_)) break;
    }
    return best;
}

double hausdorff_distance(const PlanarCurve& a, const PlanarCurve& b)
{
    const SegmentIndex ia(a), ib(b);
    double h = 0;
    for (const auto& p : a.points()) h = std::max(h, ib.distance(p));
    for (const auto& p : b.points()) h = std::max(h, ia.distance(p));
    return h;
}

double min_distance(const PlanarCurve& a, const PlanarCurve& b)
{
    if (curves_intersect(a, b)) return 0.0;
    const SegmentIndex ia(a), ib(b);
    double h = std::numeric_limits<double>::infinity();
    for (const auto& p : a.points()) h = std::min(h, ib.distance(p));
    for (const auto& p : b.points()) h = std::min(h, ia.distance(p));
    return h;
}

} // namespace csf
