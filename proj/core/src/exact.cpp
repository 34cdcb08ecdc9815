#include "csf/exact.hpp"

#include "csf/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace csf {

using std::numbers::pi;

double GrimReaperSpec::k() const { return pi / width(); }

void GrimReaperSpec::validate() const
{
    require(std::isfinite(aLo) && std::isfinite(aHi) && std::isfinite(b), ErrorKind::InvalidInput, "grim reaper: non-finite parameter");
    require(aHi > aLo, ErrorKind::InvalidInput, "grim reaper: need aLo < aHi");
}

double grim_reaper_tip_x(const GrimReaperSpec& spec, double t)
{
    return spec.b - sign_of(spec.pointing) * spec.k() * t;
}

Vec2 grim_reaper_point(const GrimReaperSpec& spec, double t, double z)
{
    spec.validate();
    const double k = spec.k();
    require(std::abs(z) < pi / (2 * k), ErrorKind::OutOfDomain, "grim reaper: |z| >= pi/(2k)");
    const double s = sign_of(spec.pointing);
    return {s * std::log(std::cos(k * z)) / k - s * k * t + spec.b, z + spec.mid()};
}

Vec2 grim_reaper_arc(const GrimReaperSpec& spec, double t, double s)
{
    const double k = spec.k();
    const double ks = k * s;
    // log cosh without overflow
    const double a = std::abs(ks);
    const double lch = a + std::log1p(std::exp(-2 * a)) - std::log(2.0);
    const double gd = 2 * std::atan(std::tanh(ks / 2));
    return {grim_reaper_tip_x(spec, t) - sign_of(spec.pointing) * lch / k, spec.mid() + gd / k};
}

double grim_reaper_arclength(const GrimReaperSpec& spec, double z)
{
    const double k = spec.k();
    require(std::abs(z) < pi / (2 * k), ErrorKind::OutOfDomain, "grim reaper: |z| >= pi/(2k)");
    return std::atanh(std::sin(k * z)) / k;
}

PlanarCurve grim_reaper_curve(const GrimReaperSpec& spec, double t, double zmax, std::size_t n)
{
    spec.validate();
    require(n >= 8, ErrorKind::InvalidInput, "grim reaper: need >= 8 samples");
    const double S = grim_reaper_arclength(spec, zmax);
    std::vector<Vec2> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = grim_reaper_arc(spec, t, -S + 2 * S * i / (n - 1));
    return PlanarCurve(std::move(p), Topology::Open, true);
}

double grim_reaper_branch(const GrimReaperSpec& spec, double t, double x1, bool lower)
{
    const double k = spec.k();
    const double sg = sign_of(spec.pointing);
    const double e = sg * k * (x1 - grim_reaper_tip_x(spec, t));
    require(e <= 0, ErrorKind::OutOfDomain, "grim reaper branch: abscissa beyond the tip");
    const double off = std::asin(std::exp(e)) / k;
    return lower ? spec.aLo + off : spec.aHi - off;
}

std::vector<FarReaperPoint> unit_reaper_far_points(long double dmin, long double dmax, std::size_t n)
{
    constexpr long double half_pi = std::numbers::pi_v<long double> / 2;
    require(std::isfinite(dmin) && std::isfinite(dmax) && dmin > 2 && dmax >= dmin, ErrorKind::InvalidInput,
            "unit_reaper_far_points: need 2 < dmin <= dmax");
    require(n >= 2, ErrorKind::InvalidInput, "unit_reaper_far_points: need at least two points");
    std::vector<FarReaperPoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long double d = dmin + (dmax - dmin) * static_cast<long double>(i) / static_cast<long double>(n - 1);
        // Newton on u = -log g for |gamma|^2 = d^2
        long double u = std::sqrt(d * d - half_pi * half_pi);
        for (int it = 0; it < 30; ++it) {
            const long double g = std::exp(-u);
            const long double L = std::log(std::sin(g));
            const long double f = (half_pi - g) * (half_pi - g) + L * L - d * d;
            const long double df = 2 * (half_pi - g) * g - 2 * L * g / std::tan(g);
            const long double step = f / df;
            u -= step;
            if (std::abs(step) <= 1e-18L * u) break;
        }
        FarReaperPoint p;
        p.gap = std::exp(-u);
        p.x = std::log(std::sin(p.gap));
        p.y = (i % 2 ? -1 : 1) * (half_pi - p.gap);
        p.d = std::hypot(p.x, p.y);
        require(p.gap > 0 && std::isfinite(p.x), ErrorKind::OutOfDomain, "unit_reaper_far_points: gap underflow");
        out.push_back(p);
    }
    return out;
}

PlanarCurve line_samples(double a, double x_lo, double x_hi, std::size_t n)
{
    require(x_hi > x_lo, ErrorKind::InvalidInput, "line: empty window");
    std::vector<Vec2> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = {x_lo + (x_hi - x_lo) * i / (n - 1), a};
    return PlanarCurve(std::move(p), Topology::Open, true);
}

double circle_radius(double r0, double t)
{
    require(r0 > 0, ErrorKind::InvalidInput, "circle: r0 must be positive");
    require(t < r0 * r0 / 2, ErrorKind::ExtinctSolution, "circle: t >= r0^2/2");
    return std::sqrt(r0 * r0 - 2 * t);
}

PlanarCurve shrinking_circle(double r0, double t, std::size_t n, Vec2 center)
{
    const double r = circle_radius(r0, t);
    std::vector<Vec2> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2 * pi * i / n;
        p[i] = center + Vec2{r * std::cos(a), r * std::sin(a)};
    }
    return PlanarCurve(std::move(p), Topology::Closed, true);
}

double paperclip_level(Vec2 p, double t)
{
    const double c = std::cos(p.x);
    if (c <= 0) return std::numeric_limits<double>::infinity();
    const double ay = std::abs(p.y);
    const double lch = ay + std::log1p(std::exp(-2 * ay)) - std::log(2.0);
    return t + lch - std::log(c);
}

Vec2 paperclip_level_gradient(Vec2 p) { return {std::tan(p.x), std::tanh(p.y)}; }

namespace {

Vec2 project_to_paperclip(Vec2 p, double t)
{
    for (int it = 0; it < 8; ++it) {
        const double g = paperclip_level(p, t);
        const Vec2 dg = paperclip_level_gradient(p);
        p -= (g / norm2(dg)) * dg;
        if (std::abs(g) < 1e-15) break;
    }
    return p;
}

} // namespace

PlanarCurve paperclip(double t, std::size_t n)
{
    require(t < 0, ErrorKind::ExtinctSolution, "paper clip: t >= 0");
    require(n >= 8, ErrorKind::InvalidInput, "paper clip: need >= 8 samples");
    const double ymax = std::acosh(std::exp(-t));
    const std::size_t raw = std::max<std::size_t>(4096, 8 * n);
    std::vector<Vec2> p(raw);
    for (std::size_t i = 0; i < raw; ++i) {
        // angles from an ellipse-like parametrization spread samples along the elongated curve
        const double u = 2 * pi * i / raw;
        const Vec2 dir = normalized(Vec2{(pi / 2) * std::cos(u), ymax * std::sin(u)});
        double lo = 0, hi = 0;
        const double rx = std::abs(dir.x) > 0 ? (pi / 2) / std::abs(dir.x) : 1e300;
        const double ry = std::abs(dir.y) > 0 ? ymax / std::abs(dir.y) : 1e300;
        hi = std::min(rx, ry) * (1 + 1e-12);
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (paperclip_level(mid * dir, t) < 0 ? lo : hi) = mid;
        }
        p[i] = project_to_paperclip(0.5 * (lo + hi) * dir, t);
    }
    PlanarCurve c = resample_arclength(PlanarCurve(std::move(p), Topology::Closed, true), n);
    std::vector<Vec2> q(c.points());
    for (auto& v : q) v = project_to_paperclip(v, t);
    return PlanarCurve(std::move(q), Topology::Closed, true);
}

int TromboneSpec::sigma(int i) const
{
    const int s1 = tailDirection == Pointing::Left ? 1 : -1;
    return (i % 2 == 1) ? s1 : -s1;
}

GrimReaperSpec TromboneSpec::finger(int i) const
{
    return {a[i - 1], a[i], b[i - 1], sigma(i) > 0 ? Pointing::Right : Pointing::Left};
}

void TromboneSpec::validate() const
{
    require(m() >= 2, ErrorKind::InvalidInput, "trombone: need m >= 2");
    require(static_cast<int>(a.size()) == m() + 1, ErrorKind::InvalidInput, "trombone: need m+1 heights");
    for (std::size_t i = 1; i < a.size(); ++i)
        require(a[i] > a[i - 1], ErrorKind::InvalidInput, "trombone: heights must be strictly increasing");
    for (double v : a) require(std::isfinite(v), ErrorKind::InvalidInput, "trombone: non-finite height");
    for (double v : b) require(std::isfinite(v), ErrorKind::InvalidInput, "trombone: non-finite shift");
}

double trombone_tip_x(const TromboneSpec& spec, int i, double t) { return grim_reaper_tip_x(spec.finger(i), t); }

double trombone_tmin(const TromboneSpec& spec)
{
    spec.validate();
    double wmax = 0;
    for (int i = 1; i <= spec.m(); ++i) wmax = std::max(wmax, spec.a[i] - spec.a[i - 1]);
    double tmin = 0;
    for (int i = 1; i < spec.m(); ++i) {
        const double ki = spec.finger(i).k(), kj = spec.finger(i + 1).k();
        const double db = spec.sigma(i) * (spec.b[i - 1] - spec.b[i]);
        tmin = std::max(tmin, (10 * wmax - db) / (ki + kj));
    }
    return tmin;
}

double trombone_gluing_height(const TromboneSpec& spec, double t0)
{
    double kmin = 1e300, wmin = 1e300;
    for (int i = 1; i <= spec.m(); ++i) {
        kmin = std::min(kmin, spec.finger(i).k());
        wmin = std::min(wmin, spec.a[i] - spec.a[i - 1]);
    }
    return std::clamp(std::exp(-0.5 * kmin * std::abs(t0)), 1e-8, wmin / 10);
}

PlanarCurve trombone_initial(const TromboneSpec& spec, double t0, const TromboneOptions& opts)
{
    spec.validate();
    require(t0 < 0, ErrorKind::GluingInfeasible, "trombone: t0 must be negative");
    require(t0 <= -trombone_tmin(spec), ErrorKind::GluingInfeasible, "trombone: tips closer than 10 widths");
    require(opts.spacing > 0 && opts.tail_length > 0, ErrorKind::InvalidInput, "trombone: bad options");
    const int m = spec.m();
    const double h = trombone_gluing_height(spec, t0);
    const double dx = opts.spacing / 2;

    std::vector<GrimReaperSpec> f(m + 1);
    std::vector<double> X(m + 1), D(m + 1), d(m + 1), k(m + 1);
    std::vector<int> sg(m + 1);
    double xmin = 1e300, xmax = -1e300;
    for (int i = 1; i <= m; ++i) {
        f[i] = spec.finger(i);
        k[i] = f[i].k();
        sg[i] = spec.sigma(i);
        X[i] = grim_reaper_tip_x(f[i], t0);
        D[i] = opts.cap_fraction * f[i].width();
        d[i] = -std::log(std::sin(k[i] * h)) / k[i];
        xmin = std::min(xmin, X[i]);
        xmax = std::max(xmax, X[i]);
    }

    std::vector<Vec2> raw;
    auto add = [&](Vec2 p) {
        if (raw.empty() || raw.back() != p) raw.push_back(p);
    };
    // uniform x samples from xa to xb, excluding xb (and xa unless keep_first)
    auto graph = [&](double xa, double xb, bool keep_first, auto&& z) {
        const auto n = static_cast<std::size_t>(std::ceil(std::abs(xb - xa) / dx));
        for (std::size_t j = keep_first ? 0 : 1; j < n; ++j) {
            const double x = xa + (xb - xa) * static_cast<double>(j) / n;
            add({x, z(x)});
        }
    };
    auto cap = [&](int i) {
        const double S = std::acosh(std::exp(k[i] * D[i])) / k[i];
        const auto n = static_cast<std::size_t>(std::ceil(2 * S / dx));
        for (std::size_t j = 0; j <= n; ++j) add(grim_reaper_arc(f[i], t0, -S + 2 * S * j / n));
    };

    const double tail0 = sg[1] > 0 ? xmin - opts.tail_length : xmax + opts.tail_length;
    graph(tail0, X[1] - sg[1] * D[1], true, [&](double x) { return grim_reaper_branch(f[1], t0, x, true); });
    for (int i = 1; i <= m; ++i) {
        cap(i);
        if (i == m) break;
        const int s = sg[i];
        const double lo = s * X[i + 1] + d[i + 1], hi = s * X[i] - d[i];
        require(hi > lo, ErrorKind::GluingInfeasible, "trombone: empty matching window at sheet " + std::to_string(i));
        graph(X[i] - s * D[i], X[i + 1] - sg[i + 1] * D[i + 1], false, [&](double x) {
            const double w = smoothstep5((s * x - lo) / (hi - lo));
            double z = 0;
            if (w > 0) z += w * grim_reaper_branch(f[i], t0, x, false);
            if (w < 1) z += (1 - w) * grim_reaper_branch(f[i + 1], t0, x, true);
            return z;
        });
    }
    const double tailm = sg[m] > 0 ? xmin - opts.tail_length : xmax + opts.tail_length;
    {
        const double xa = X[m] - sg[m] * D[m];
        const auto n = static_cast<std::size_t>(std::ceil(std::abs(tailm - xa) / dx));
        for (std::size_t j = 1; j <= n; ++j) {
            const double x = xa + (tailm - xa) * static_cast<double>(j) / n;
            add({x, grim_reaper_branch(f[m], t0, x, false)});
        }
    }
    PlanarCurve c(std::move(raw), Topology::Open, true);
    return resample_spacing(c, opts.spacing);
}

} // namespace csf
