#include "csf/functionals.hpp"

#include "csf/error.hpp"
#include "csf/numeric.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace csf {

namespace {

constexpr double kPi = std::numbers::pi;

const QuadratureRule& hermite_rule(int n)
{
    static thread_local int cached_n = -1;
    static thread_local QuadratureRule rule;
    if (cached_n != n) {
        rule = gauss_hermite(n);
        cached_n = n;
    }
    return rule;
}

} // namespace

double gaussian_weight(double y) { return std::exp(-0.25 * y * y) / std::sqrt(4.0 * kPi); }

double gaussian_inner(const std::function<double(double)>& f, const std::function<double(double)>& g, int nodes)
{
    require(nodes >= 2, ErrorKind::InvalidInput, "gaussian_inner: need at least two nodes");
    const auto& rule = hermite_rule(nodes);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double y = 2.0 * rule.nodes[i];
        const double fv = f(y), gv = g(y);
        require(std::isfinite(fv) && std::isfinite(gv), ErrorKind::InvalidInput, "gaussian_inner: non-finite sample");
        sum += rule.weights[i] * fv * gv;
    }
    return sum / std::sqrt(kPi);
}

double gaussian_inner(const std::vector<double>& y, const std::vector<double>& f, const std::vector<double>& g)
{
    require(y.size() == f.size() && y.size() == g.size() && y.size() >= 2, ErrorKind::InvalidInput,
            "gaussian_inner: grid and samples differ in size");
    double sum = 0.0;
    double prev = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
        require(std::isfinite(y[j]) && std::isfinite(f[j]) && std::isfinite(g[j]), ErrorKind::InvalidInput,
                "gaussian_inner: non-finite sample");
        const double v = f[j] * g[j] * gaussian_weight(y[j]);
        if (j > 0) {
            const double h = y[j] - y[j - 1];
            require(h > 0.0, ErrorKind::InvalidInput, "gaussian_inner: grid must increase");
            sum += 0.5 * h * (prev + v);
        }
        prev = v;
    }
    return sum;
}

// ---------------------------------------------------------------- entropy

namespace {

struct Segment {
    Vec2 a;
    Vec2 e;
    double len;
    double xmin, xmax, ymin, ymax;
    double cx;
};

struct SegmentLevel {
    std::vector<Segment> segs; // sorted by cx
    double max_len = 0.0;
    double max_halfx = 0.0;
};

SegmentLevel make_level(const std::vector<Vec2>& pts, bool closed)
{
    SegmentLevel lvl;
    const std::size_t n = pts.size();
    const std::size_t m = closed ? n : n - 1;
    lvl.segs.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2 a = pts[i], b = pts[(i + 1) % n];
        const double len = distance(a, b);
        if (len <= 0.0) continue;
        Segment s{a, (b - a) / len, len, std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y),
                  0.5 * (a.x + b.x)};
        lvl.max_len = std::max(lvl.max_len, len);
        lvl.max_halfx = std::max(lvl.max_halfx, 0.5 * (s.xmax - s.xmin));
        lvl.segs.push_back(s);
    }
    std::sort(lvl.segs.begin(), lvl.segs.end(), [](const Segment& p, const Segment& q) { return p.cx < q.cx; });
    return lvl;
}

// Half the Gaussian line integral along one segment, with erfc forms away from the foot point.
double segment_density(const Segment& s, Vec2 x0, double lambda)
{
    const Vec2 d = x0 - s.a;
    const double sp = dot(d, s.e);
    const double q2 = std::max(0.0, norm2(d) - sp * sp);
    const double c = 2.0 * std::sqrt(lambda);
    double span;
    if (sp < 0.0)
        span = std::erfc(-sp / c) - std::erfc((s.len - sp) / c);
    else if (sp > s.len)
        span = std::erfc((sp - s.len) / c) - std::erfc(sp / c);
    else
        span = std::erf((s.len - sp) / c) + std::erf(sp / c);
    return 0.5 * std::exp(-q2 / (4.0 * lambda)) * span;
}

class DensityEvaluator {
public:
    explicit DensityEvaluator(const PlanarCurve& curve)
    {
        std::vector<Vec2> pts = curve.points();
        const bool closed = curve.closed();
        levels_.push_back(make_level(pts, closed));
        while (pts.size() >= 32) {
            std::vector<Vec2> next;
            for (std::size_t i = 0; i < pts.size(); i += 2) next.push_back(pts[i]);
            if (!closed && (pts.size() - 1) % 2 != 0) next.push_back(pts.back());
            pts = std::move(next);
            levels_.push_back(make_level(pts, closed));
        }
    }

    double operator()(Vec2 x0, double lambda) const
    {
        // coarsest level whose segments stay below a tenth of the Gaussian scale
        const double limit = 0.1 * std::sqrt(lambda);
        std::size_t li = 0;
        while (li + 1 < levels_.size() && levels_[li + 1].max_len <= limit) ++li;
        const SegmentLevel& lvl = levels_[li];
        const double r2 = 160.0 * lambda; // exp(-40) cutoff on |x - x0|^2 / 4 lambda
        const double r = std::sqrt(r2);
        const double lo = x0.x - r - lvl.max_halfx, hi = x0.x + r + lvl.max_halfx;
        auto it = std::lower_bound(lvl.segs.begin(), lvl.segs.end(), lo,
                                   [](const Segment& s, double v) { return s.cx < v; });
        double sum = 0.0;
        for (; it != lvl.segs.end() && it->cx <= hi; ++it) {
            const double dx = std::max({it->xmin - x0.x, x0.x - it->xmax, 0.0});
            const double dy = std::max({it->ymin - x0.y, x0.y - it->ymax, 0.0});
            if (dx * dx + dy * dy > r2) continue;
            sum += segment_density(*it, x0, lambda);
        }
        return sum;
    }

private:
    std::vector<SegmentLevel> levels_;
};

} // namespace

double gaussian_density(const PlanarCurve& curve, Vec2 x0, double lambda)
{
    require(lambda > 0.0, ErrorKind::InvalidInput, "gaussian_density: lambda must be positive");
    return DensityEvaluator(curve)(x0, lambda);
}

EntropyResult entropy(const PlanarCurve& curve, const EntropyOptions& opts)
{
    require(opts.grid >= 2 && opts.lambda_count >= 2 && opts.lambda_min > 0.0, ErrorKind::InvalidInput,
            "entropy: bad search options");
    const DensityEvaluator density(curve);

    Vec2 lo = curve[0], hi = curve[0];
    for (const Vec2& p : curve.points()) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const double diam = distance(lo, hi);
    double lmax = opts.lambda_max_factor * diam * diam;
    if (lmax <= opts.lambda_min) lmax = 10.0 * opts.lambda_min;
    const double llo = std::log(opts.lambda_min), lhi = std::log(lmax);
    const double dl = (lhi - llo) / (opts.lambda_count - 1);
    const double gx = (hi.x - lo.x) / (opts.grid - 1), gy = (hi.y - lo.y) / (opts.grid - 1);

    EntropyResult res;
    res.window_lo = lo;
    res.window_hi = hi;
    double best = -1.0;
    double bl = llo;
    Vec2 bx = lo;
    for (int il = 0; il < opts.lambda_count; ++il) {
        const double ll = llo + dl * il;
        const double lambda = std::exp(ll);
        for (int ix = 0; ix < opts.grid; ++ix)
            for (int iy = 0; iy < opts.grid; ++iy) {
                const Vec2 x0{lo.x + gx * ix, lo.y + gy * iy};
                const double v = density(x0, lambda);
                if (v > best) {
                    best = v;
                    bl = ll;
                    bx = x0;
                }
            }
    }
    res.grid_value = best;

    // coordinate descent in (x, y, log lambda) with Brent line searches
    double p[3] = {bx.x, bx.y, bl};
    const double floor_step = 1e-3 * std::max(diam, 1e-12);
    double step[3] = {std::max(gx, floor_step), std::max(gy, floor_step), dl};
    auto value = [&](const double* q) { return density({q[0], q[1]}, std::exp(q[2])); };
    double current = best;
    double gap = 0.0;
    int sweeps = 0;
    for (; sweeps < opts.max_sweeps; ++sweeps) {
        const double before = current;
        double moved[3];
        for (int c = 0; c < 3; ++c) {
            double q[3] = {p[0], p[1], p[2]};
            auto neg = [&](double v) {
                q[c] = v;
                return -value(q);
            };
            const double start = p[c];
            auto [arg, fmin] = boost::math::tools::brent_find_minima(neg, start - step[c], start + step[c], 52);
            if (-fmin > current) {
                p[c] = arg;
                current = -fmin;
            }
            moved[c] = std::abs(p[c] - start);
        }
        gap = current - before;
        for (int c = 0; c < 3; ++c) step[c] = std::max(4.0 * moved[c], 1e-7 * step[c]);
        if (gap <= 1e-14 * std::max(1.0, current)) {
            ++sweeps;
            break;
        }
    }
    res.value = current;
    res.x0 = {p[0], p[1]};
    res.lambda = std::exp(p[2]);
    res.iterations = sweeps;
    res.gap = gap;
    return res;
}

double total_curvature(const PlanarCurve& curve)
{
    const CurveGeometry g = geometry(curve);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.kappa.size(); ++i) sum += std::abs(g.kappa[i]) * g.weight[i];
    return sum;
}

// ---------------------------------------------------------------- fingers

namespace {

struct AxisCrossing {
    std::size_t after;  // first vertex strictly past the crossing
    std::size_t before; // last vertex strictly before the crossing
    Vec2 point;
};

int axis_side(double x, double eps) { return x > eps ? 1 : (x < -eps ? -1 : 0); }

// Crossings of x1 = 0 along an open polyline. A run of on-axis vertices counts as one crossing point
// (its first vertex); interior sign changes are interpolated.
std::vector<AxisCrossing> open_crossings(const std::vector<Vec2>& pts)
{
    double scale = 0.0;
    for (const Vec2& p : pts) scale = std::max(scale, std::abs(p.x));
    const double eps = 1e-12 * std::max(scale, 1.0);
    std::vector<AxisCrossing> out;
    const std::size_t n = pts.size();
    int prev_side = 0;
    std::size_t prev_i = 0;
    bool have_prev = false;
    for (std::size_t i = 0; i < n; ++i) {
        const int sd = axis_side(pts[i].x, eps);
        if (sd == 0) {
            std::size_t j = i;
            while (j + 1 < n && axis_side(pts[j + 1].x, eps) == 0) ++j;
            const int next_side = j + 1 < n ? axis_side(pts[j + 1].x, eps) : 0;
            // touching the axis without changing side is not a crossing
            if (!(have_prev && next_side != 0 && next_side == prev_side))
                out.push_back({j + 1, i == 0 ? 0 : i - 1, {0.0, pts[i].y}});
            i = j;
            have_prev = false;
            continue;
        }
        if (have_prev && sd != prev_side) {
            const Vec2 a = pts[prev_i], b = pts[i];
            const double s = a.x / (a.x - b.x);
            out.push_back({i, prev_i, {0.0, a.y + s * (b.y - a.y)}});
        }
        prev_side = sd;
        prev_i = i;
        have_prev = true;
    }
    return out;
}

double polygon_area(const std::vector<Vec2>& poly)
{
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * a;
}

} // namespace

std::vector<std::pair<std::size_t, Vec2>> axis_crossings(const PlanarCurve& curve)
{
    std::vector<Vec2> pts = curve.points();
    if (curve.closed()) pts.push_back(pts.front());
    std::vector<std::pair<std::size_t, Vec2>> out;
    for (const auto& c : open_crossings(pts)) out.emplace_back(c.after == 0 ? 0 : c.after - 1, c.point);
    return out;
}

double finger_area(const PlanarCurve& arc)
{
    std::vector<Vec2> pts = arc.points();
    if (arc.closed()) pts.push_back(pts.front());
    const auto cr = open_crossings(pts);
    require(cr.size() == 2, ErrorKind::RegionUndefined,
            "finger_area: arc crosses the x2-axis " + std::to_string(cr.size()) + " times, expected 2");
    std::vector<Vec2> poly{cr[0].point};
    for (std::size_t i = cr[0].after; i <= cr[1].before && i < pts.size(); ++i)
        if (i > 0 || cr[0].after > 0) poly.push_back(pts[i]);
    poly.push_back(cr[1].point);
    require(poly.size() >= 3, ErrorKind::RegionUndefined, "finger_area: empty region");
    return std::abs(polygon_area(poly));
}

double finger_area(const PlanarCurve& curve, const FingerRegion& finger)
{
    require(finger.first <= finger.last && finger.last < curve.size(), ErrorKind::RegionUndefined,
            "finger_area: finger outside the curve");
    std::vector<Vec2> poly{finger.entry};
    for (std::size_t i = finger.first; i <= finger.last; ++i) poly.push_back(curve[i]);
    poly.push_back(finger.exit);
    const double a = std::abs(polygon_area(poly));
    require(a > 0.0, ErrorKind::RegionUndefined, "finger_area: degenerate region");
    return a;
}

std::vector<FingerRegion> finger_regions(const PlanarCurve& curve)
{
    require(!curve.closed(), ErrorKind::RegionUndefined, "finger_regions: fingers are defined on open curves");
    const auto cr = open_crossings(curve.points());
    std::vector<FingerRegion> out;
    if (cr.size() < 2) return out;
    const CurveGeometry g = geometry(curve);
    for (std::size_t j = 0; j + 1 < cr.size(); ++j) {
        FingerRegion f;
        f.id = static_cast<int>(j) + 1;
        f.first = cr[j].after;
        f.last = cr[j + 1].before;
        if (f.first > f.last) continue;
        f.entry = cr[j].point;
        f.exit = cr[j + 1].point;
        f.aLo = std::min(f.entry.y, f.exit.y);
        f.aHi = std::max(f.entry.y, f.exit.y);
        f.pointing = curve[f.first].x > 0.0 ? Pointing::Right : Pointing::Left;
        const double sg = sign_of(f.pointing);
        std::size_t it = f.first, iv = f.first;
        for (std::size_t i = f.first; i <= f.last; ++i) {
            if (sg * curve[i].x > sg * curve[it].x) it = i;
            if (std::abs(g.kappa[i]) > std::abs(g.kappa[iv])) iv = i;
        }
        f.tip = curve[it];
        if (it > f.first && it < f.last) {
            // extreme of the parabola x(y) through the three samples around the tip
            const Vec2 p0 = curve[it - 1], p1 = curve[it], p2 = curve[it + 1];
            const double d1 = p1.y - p0.y, d2 = p2.y - p1.y;
            if (d1 * d2 > 0.0) {
                const double s1 = (p1.x - p0.x) / d1, s2 = (p2.x - p1.x) / d2;
                const double c2 = (s2 - s1) / (p2.y - p0.y);
                if (c2 != 0.0) {
                    // x(y) = p1.x + s (y - p1.y) + c2 (y - p1.y)^2 with s the slope at p1
                    const double s = s1 + c2 * d1;
                    const double dy = -s / (2.0 * c2);
                    if (std::abs(dy) <= std::max(std::abs(d1), std::abs(d2)))
                        f.tip = {p1.x + s * dy + c2 * dy * dy, p1.y + dy};
                }
            }
        }
        f.vertex = curve[iv];
        f.vertex_index = iv;
        f.vertex_kappa = g.kappa[iv];
        f.vertex_theta = g.theta[iv];
        f.area = finger_area(curve, f);
        out.push_back(f);
    }
    return out;
}

AreaSeries fit_area(std::vector<double> t, std::vector<double> area, double fit_from)
{
    require(t.size() == area.size(), ErrorKind::InvalidInput, "fit_area: size mismatch");
    require(fit_from >= 0.0 && fit_from < 1.0, ErrorKind::InvalidInput, "fit_area: fit_from must lie in [0, 1)");
    const std::size_t start = static_cast<std::size_t>(std::floor(fit_from * static_cast<double>(t.size())));
    require(t.size() >= start + 2, ErrorKind::InvalidInput, "fit_area: need at least two samples in the fit window");
    AreaSeries s;
    const LinearFit fit = linear_fit(std::vector<double>(t.begin() + static_cast<long>(start), t.end()),
                                     std::vector<double>(area.begin() + static_cast<long>(start), area.end()));
    s.slope = fit.slope;
    s.intercept = fit.intercept;
    s.residual = fit.max_residual;
    s.r2 = fit.r2;
    s.fit_start = start;
    s.t = std::move(t);
    s.area = std::move(area);
    return s;
}

AreaSeries area_series(const FlowTrajectory& traj, int finger_id, double fit_from)
{
    require(traj.size() >= 2, ErrorKind::Tracking, "area_series: trajectory has fewer than two snapshots");
    std::vector<double> t, a;
    std::size_t count = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto fingers = finger_regions(traj[i].curve);
        if (i == 0) count = fingers.size();
        require(fingers.size() == count, ErrorKind::Tracking,
                "area_series: finger count changed at t = " + fmt12(traj[i].t));
        require(finger_id >= 1 && static_cast<std::size_t>(finger_id) <= fingers.size(), ErrorKind::Tracking,
                "area_series: finger " + std::to_string(finger_id) + " not found at t = " + fmt12(traj[i].t));
        t.push_back(traj[i].t);
        a.push_back(fingers[static_cast<std::size_t>(finger_id) - 1].area);
    }
    return fit_area(std::move(t), std::move(a), fit_from);
}

// ---------------------------------------------------------------- L1 distance

double l1_graph_distance(const SheetGraph& v, const SheetGraph& vbar)
{
    require(v.axis == vbar.axis && v.periodic == vbar.periodic && v.size() == vbar.size() && v.lo == vbar.lo &&
                v.hi == vbar.hi && v.size() >= 2,
            ErrorKind::InvalidInput, "l1_graph_distance: graphs live on different grids");
    const double h = v.dx();
    const std::size_t n = v.size();
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = std::abs(v.u[j] - vbar.u[j]);
        require(std::isfinite(d), ErrorKind::InvalidInput, "l1_graph_distance: non-finite sample");
        sum += (v.periodic || (j > 0 && j + 1 < n)) ? d : 0.5 * d;
    }
    return sum * h;
}

std::pair<std::vector<double>, std::vector<double>> graph_over_x2(const PlanarCurve& curve, double zlo, double zhi)
{
    require(zlo < zhi, ErrorKind::InvalidInput, "graph_over_x2: empty window");
    std::vector<Vec2> pts = curve.points();
    if (pts.back().y < pts.front().y) std::reverse(pts.begin(), pts.end());
    const std::size_t n = pts.size();
    std::size_t i0 = n;
    for (std::size_t i = 0; i < n; ++i)
        if (pts[i].y <= zlo) i0 = i;
    std::size_t i1 = n;
    for (std::size_t i = (i0 == n ? 0 : i0 + 1); i < n; ++i)
        if (pts[i].y >= zhi) {
            i1 = i;
            break;
        }
    require(i0 < n && i1 < n, ErrorKind::InvalidInput, "graph_over_x2: curve does not span the window");
    // horizontal runs (flat sheets) are vertical jumps of the graph; roundoff reversals below 1e-12 count as flat
    for (std::size_t i = i0; i < i1; ++i) {
        require(pts[i + 1].y >= pts[i].y - 1e-12, ErrorKind::GraphicalityLost,
                "graph_over_x2: curve is not a graph over x2 near x2 = " + fmt12(pts[i].y));
        pts[i + 1].y = std::max(pts[i + 1].y, pts[i].y);
    }
    auto lerp = [&](std::size_t i, double z) {
        const Vec2 a = pts[i], b = pts[i + 1];
        return a.x + (z - a.y) / (b.y - a.y) * (b.x - a.x);
    };
    std::vector<double> z{zlo}, x{lerp(i0, zlo)};
    for (std::size_t i = i0 + 1; i < i1; ++i)
        if (pts[i].y > zlo && pts[i].y < zhi) {
            z.push_back(pts[i].y);
            x.push_back(pts[i].x);
        }
    z.push_back(zhi);
    x.push_back(lerp(i1 - 1, zhi));
    return {std::move(z), std::move(x)};
}

namespace {

// Piecewise linear graph with possible jumps (repeated abscissae); evaluates one-sided limits on an open interval.
class JumpGraph {
public:
    JumpGraph(std::vector<double> z, std::vector<double> x) : z_(std::move(z)), x_(std::move(x)) {}

    // values at zl+ and zr- for an interval (zl, zr) free of breakpoints
    std::pair<double, double> on(double zl, double zr)
    {
        const double q = 0.5 * (zl + zr);
        while (k_ + 2 < z_.size() && !(z_[k_ + 1] > q)) ++k_;
        const double h = z_[k_ + 1] - z_[k_];
        auto at = [&](double v) { return x_[k_] + (v - z_[k_]) / h * (x_[k_ + 1] - x_[k_]); };
        return {at(zl), at(zr)};
    }

private:
    std::vector<double> z_, x_;
    std::size_t k_ = 0;
};

} // namespace

double l1_graph_distance(const PlanarCurve& a, const PlanarCurve& b, double zlo, double zhi)
{
    auto [za, xa] = graph_over_x2(a, zlo, zhi);
    auto [zb, xb] = graph_over_x2(b, zlo, zhi);
    // merge breakpoints; both graphs are linear on each open interval between consecutive distinct nodes
    std::vector<double> z;
    z.reserve(za.size() + zb.size());
    std::merge(za.begin(), za.end(), zb.begin(), zb.end(), std::back_inserter(z));
    z.erase(std::unique(z.begin(), z.end()), z.end());
    JumpGraph ga(std::move(za), std::move(xa)), gb(std::move(zb), std::move(xb));
    double sum = 0.0;
    for (std::size_t i = 1; i < z.size(); ++i) {
        const auto [al, ar] = ga.on(z[i - 1], z[i]);
        const auto [bl, br] = gb.on(z[i - 1], z[i]);
        const double dl = al - bl, dr = ar - br, h = z[i] - z[i - 1];
        if ((dl >= 0.0) == (dr >= 0.0))
            sum += 0.5 * h * std::abs(dl + dr);
        else
            sum += 0.5 * h * (dl * dl + dr * dr) / (std::abs(dl) + std::abs(dr));
    }
    return sum;
}

} // namespace csf
