#include "csf/flow.hpp"

#include "csf/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace csf {

std::string to_string(Scheme s) { return s == Scheme::Explicit ? "explicit" : "semi-implicit"; }

Scheme scheme_from_string(const std::string& s)
{
    if (s == "explicit") return Scheme::Explicit;
    if (s == "semi-implicit" || s == "semiimplicit") return Scheme::SemiImplicit;
    fail(ErrorKind::InvalidInput, "unknown scheme '" + s + "'");
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    default: return "N.A.";
    }
}

void FlowTrajectory::append(FlowSnapshot s)
{
    if (!snapshots.empty()) {
        require(s.t > snapshots.back().t, ErrorKind::InvalidInput, "trajectory times must increase");
        require(s.curve.topology() == snapshots.back().curve.topology(), ErrorKind::InvalidInput, "trajectory topology changed");
    }
    snapshots.push_back(std::move(s));
}

std::vector<double> FlowTrajectory::times() const
{
    std::vector<double> t;
    for (const auto& s : snapshots) t.push_back(s.t);
    return t;
}

std::size_t FlowTrajectory::nearest(double t) const
{
    require(!snapshots.empty(), ErrorKind::InvalidInput, "empty trajectory");
    std::size_t best = 0;
    for (std::size_t i = 1; i < snapshots.size(); ++i)
        if (std::abs(snapshots[i].t - t) < std::abs(snapshots[best].t - t)) best = i;
    return best;
}

namespace {

// Shared buffers for the per-step linear algebra.
struct StepWork {
    std::vector<double> h, a, b, c, cp, dx, dy;
};

// In-place Thomas for two right-hand sides sharing one matrix.
void thomas2(StepWork& w, std::size_t n)
{
    auto& a = w.a; auto& b = w.b; auto& c = w.c; auto& cp = w.cp; auto& dx = w.dx; auto& dy = w.dy;
    cp.resize(n);
    double beta = b[0];
    cp[0] = c[0] / beta;
    dx[0] /= beta;
    dy[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        beta = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / beta;
        dx[i] = (dx[i] - a[i] * dx[i - 1]) / beta;
        dy[i] = (dy[i] - a[i] * dy[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        dx[i] -= cp[i] * dx[i + 1];
        dy[i] -= cp[i] * dy[i + 1];
    }
}

// Advance p to out. theta = 1 is the linearly implicit Euler step, theta = 1/2 Crank-Nicolson
// with the metric frozen at the old state.
void advance(const std::vector<Vec2>& p, bool closed, std::vector<Vec2>& out, double t_next, double dt, Scheme scheme,
             double theta, const EndpointFn& end_fn, StepWork& w, const std::vector<Vec2>* metric = nullptr)
{
    const std::size_t n = p.size();
    const std::size_t m = closed ? n : n - 1;
    const std::vector<Vec2>& q = metric ? *metric : p;
    w.h.resize(m);
    double hmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        w.h[i] = distance(q[i], q[i + 1]);
        hmin = std::min(hmin, w.h[i]);
    }
    if (closed) {
        w.h[n - 1] = distance(q[n - 1], q[0]);
        hmin = std::min(hmin, w.h[n - 1]);
    }
    out.resize(n);
    auto lap = [&](std::size_t i, double& lm, double& lp) {
        const double hm = w.h[(i + m - 1) % m], hp = w.h[i % m];
        const double s = 2.0 / (hm + hp);
        lm = s / hm;
        lp = s / hp;
    };
    auto endpoint = [&](std::size_t i) { return end_fn ? end_fn(t_next, i == 0 ? 0 : 1, p[i]) : p[i]; };
    if (scheme == Scheme::Explicit) {
        require(dt <= 0.4 * hmin * hmin, ErrorKind::Stability,
                "explicit step violates dt <= 0.4 h_min^2 (h_min = " + std::to_string(hmin) + ")");
        for (std::size_t i = 0; i < n; ++i) {
            if (!closed && (i == 0 || i == n - 1)) {
                out[i] = endpoint(i);
                continue;
            }
            double lm, lp;
            lap(i, lm, lp);
            const Vec2 pm = p[(i + n - 1) % n], pp = p[(i + 1) % n];
            out[i] = p[i] + dt * (lp * (pp - p[i]) - lm * (p[i] - pm));
        }
        return;
    }
    w.a.assign(n, 0.0);
    w.b.assign(n, 1.0);
    w.c.assign(n, 0.0);
    w.dx.resize(n);
    w.dy.resize(n);
    const double ex = (1.0 - theta) * dt, im = theta * dt;
    for (std::size_t i = 0; i < n; ++i) {
        if (!closed && (i == 0 || i == n - 1)) {
            const Vec2 e = endpoint(i);
            w.dx[i] = e.x;
            w.dy[i] = e.y;
            continue;
        }
        double lm, lp;
        lap(i, lm, lp);
        const Vec2 pm = p[(i + n - 1) % n], pp = p[(i + 1) % n];
        const Vec2 rhs = p[i] + ex * (lp * (pp - p[i]) - lm * (p[i] - pm));
        w.dx[i] = rhs.x;
        w.dy[i] = rhs.y;
        w.a[i] = -im * lm;
        w.c[i] = -im * lp;
        w.b[i] = 1.0 + im * (lm + lp);
    }
    if (closed) {
        const auto x = solve_cyclic_tridiagonal(w.a, w.b, w.c, w.dx);
        const auto y = solve_cyclic_tridiagonal(w.a, w.b, w.c, w.dy);
        for (std::size_t i = 0; i < n; ++i) out[i] = {x[i], y[i]};
    } else {
        thomas2(w, n);
        for (std::size_t i = 0; i < n; ++i) out[i] = {w.dx[i], w.dy[i]};
    }
}

PlanarCurve make_curve(std::vector<Vec2> pts, const PlanarCurve& like)
{
    return PlanarCurve(std::move(pts), like.topology(), like.embedded());
}

void check_embedded(const PlanarCurve& c, double t)
{
    if (!c.embedded()) return;
    const auto hit = self_intersects(c);
    if (hit.found)
        fail(ErrorKind::EmbeddednessViolation, "self-intersection at t = " + std::to_string(t) + " between segments " +
                                                   std::to_string(hit.seg_a) + " and " + std::to_string(hit.seg_b));
}

double drift_of(const std::vector<Vec2>& p, bool closed, double target)
{
    const std::size_t n = p.size(), m = closed ? n : n - 1;
    double worst = 0;
    for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(distance(p[i], p[(i + 1) % n]) / target - 1.0));
    return worst;
}

// Re-space open-curve windows whose segments deviate from the target spacing by more than tol.
void respace_windows(std::vector<Vec2>& p, double target, double tol, std::size_t pad)
{
    const std::size_t m = p.size() - 1;
    std::vector<std::pair<std::size_t, std::size_t>> windows;
    for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(distance(p[i], p[i + 1]) / target - 1.0) <= tol) continue;
        const std::size_t lo = i > pad ? i - pad : 0;
        const std::size_t hi = std::min(m, i + 1 + pad);
        if (!windows.empty() && lo <= windows.back().second) windows.back().second = hi;
        else windows.emplace_back(lo, hi);
    }
    if (windows.empty()) return;
    std::vector<Vec2> out;
    out.reserve(p.size() + 64);
    std::size_t next = 0;
    for (auto [lo, hi] : windows) {
        while (next < lo) out.push_back(p[next++]);
        std::vector<Vec2> sub(p.begin() + static_cast<long>(lo), p.begin() + static_cast<long>(hi) + 1);
        if (sub.size() < 8) {
            for (auto& q : sub) out.push_back(q);
        } else {
            const PlanarCurve c(std::move(sub), Topology::Open);
            const CurveSpline sp(c);
            const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sp.length() / target)));
            out.push_back(c.points().front());
            for (std::size_t j = 1; j < k; ++j) out.push_back(sp.position(sp.param_at_arclength(sp.length() * j / k)));
            out.push_back(c.points().back());
        }
        next = hi + 1;
    }
    while (next < p.size()) out.push_back(p[next++]);
    p = std::move(out);
}

} // namespace

FlowSnapshot step_parametric(const FlowSnapshot& snap, double dt, Scheme scheme, const EndpointFn& end_fn)
{
    require(dt > 0, ErrorKind::InvalidInput, "dt must be positive");
    StepWork w;
    std::vector<Vec2> out, mid;
    const auto& p = snap.curve.points();
    advance(p, snap.curve.closed(), out, snap.t + dt, dt, scheme, 0.5, end_fn, w);
    if (scheme == Scheme::SemiImplicit) {
        mid.resize(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) mid[i] = 0.5 * (p[i] + out[i]);
        advance(p, snap.curve.closed(), out, snap.t + dt, dt, scheme, 0.5, end_fn, w, &mid);
    }
    FlowSnapshot next{snap.t + dt, make_curve(std::move(out), snap.curve), scheme, dt};
    check_embedded(next.curve, next.t);
    return next;
}

double spacing_drift(const PlanarCurve& curve)
{
    const auto& p = curve.points();
    const std::size_t m = curve.segment_count();
    double mean = 0, lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double h = distance(p[i], p[(i + 1) % p.size()]);
        mean += h;
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    mean /= m;
    return std::max(hi - mean, mean - lo) / mean;
}

FlowTrajectory evolve(const PlanarCurve& curve, double t0, double t1, const FlowOptions& opts)
{
    require(t1 > t0, ErrorKind::InvalidInput, "evolve needs t0 < t1");
    require(opts.dt > 0, ErrorKind::InvalidInput, "dt must be positive");
    require(opts.theta >= 0.5 && opts.theta <= 1.0, ErrorKind::InvalidInput, "theta must lie in [1/2, 1]");
    FlowTrajectory traj;
    std::vector<double> stops;
    if (opts.snapshot_every > 0) {
        const auto k = static_cast<long>(std::floor((t1 - t0) / opts.snapshot_every + 1e-9));
        for (long j = 1; j <= k; ++j) stops.push_back(t0 + j * opts.snapshot_every);
        if (stops.empty() || stops.back() < t1 - 1e-12 * std::max(1.0, std::abs(t1))) stops.push_back(t1);
        else stops.back() = t1;
    } else {
        stops.push_back(t1);
    }
    const bool closed = curve.closed();
    check_embedded(curve, t0);
    auto emit = [&](FlowSnapshot s) {
        if (opts.on_snapshot) opts.on_snapshot(s);
        traj.append(std::move(s));
    };
    emit({t0, curve, opts.scheme, opts.dt});
    const std::size_t n0 = curve.size();
    const double target = opts.spacing > 0 ? opts.spacing : polyline_length(curve) / curve.segment_count();
    StepWork w;
    std::vector<Vec2> pts = curve.points(), next, mid;
    int since = 0;
    double t = t0, dt = opts.dt;
    auto full_resample = [&]() {
        const PlanarCurve c(pts, curve.topology(), curve.embedded());
        pts = (opts.spacing > 0 ? resample_spacing(c, opts.spacing) : resample_arclength(c, n0)).points();
    };
    for (double stop : stops) {
        const long steps = std::max(1L, static_cast<long>(std::ceil((stop - t) / opts.dt - 1e-9)));
        dt = (stop - t) / steps;
        for (long j = 0; j < steps; ++j) {
            const double tn = (j + 1 == steps) ? stop : t + dt;
            advance(pts, closed, next, tn, tn - t, opts.scheme, opts.theta, opts.end_fn, w);
            if (opts.scheme == Scheme::SemiImplicit && opts.midpoint_metric) {
                // corrector: metric frozen at the midpoint state
                mid.resize(pts.size());
                for (std::size_t i = 0; i < pts.size(); ++i) mid[i] = 0.5 * (pts[i] + next[i]);
                advance(pts, closed, next, tn, tn - t, opts.scheme, opts.theta, opts.end_fn, w, &mid);
            }
            pts.swap(next);
            t = tn;
            ++since;
            const bool cadence = opts.resample_every > 0 && since >= opts.resample_every;
            if (closed) {
                if (cadence || spacing_drift(PlanarCurve(pts, curve.topology())) > opts.drift_tolerance) {
                    full_resample();
                    since = 0;
                }
            } else if (cadence || drift_of(pts, false, target) > opts.drift_tolerance) {
                // open curves: only the drifted windows move; the sample count follows the length
                respace_windows(pts, target, cadence ? opts.drift_tolerance / 5 : opts.drift_tolerance / 2, 40);
                since = 0;
            }
        }
        FlowSnapshot snap{t, PlanarCurve(pts, curve.topology(), curve.embedded()), opts.scheme, dt};
        if (opts.monitor_embedded) check_embedded(snap.curve, t);
        emit(std::move(snap));
    }
    return traj;
}

double SheetGraph::dx() const
{
    const double n = static_cast<double>(u.size());
    return periodic ? (hi - lo) / n : (hi - lo) / (n - 1);
}

void SheetGraph::validate() const
{
    require(u.size() >= 3, ErrorKind::InvalidInput, "sheet needs >= 3 samples");
    require(hi > lo, ErrorKind::InvalidInput, "sheet domain is degenerate");
    const double lim = std::tan(80.0 * 3.14159265358979323846 / 180.0);
    const double h = dx();
    const std::size_t n = u.size();
    for (std::size_t j = 0; j + 1 < n + (periodic ? 1 : 0); ++j) {
        const double s = (u[(j + 1) % n] - u[j]) / h;
        require(std::isfinite(s), ErrorKind::InvalidInput, "sheet has non-finite samples");
        if (std::abs(s) >= lim) fail(ErrorKind::GraphicalityLost, "sheet slope exceeds tan 80 deg at x = " + std::to_string(x(j)));
    }
}

SheetGraph step_graphical(const SheetGraph& sheet, double dt, const GraphBC& bc)
{
    sheet.validate();
    require(dt > 0, ErrorKind::InvalidInput, "dt must be positive");
    const bool per = bc.kind == GraphBC::Kind::Periodic;
    require(per == sheet.periodic, ErrorKind::InvalidInput, "periodic boundary condition needs a periodic grid");
    const std::size_t n = sheet.size();
    const double h = sheet.dx();
    const auto& u = sheet.u;
    // fluxes at faces j+1/2: A = atan(p), B = 1/(1+p^2)
    const std::size_t nf = per ? n : n - 1;
    std::vector<double> A(nf), B(nf), P(nf);
    for (std::size_t j = 0; j < nf; ++j) {
        P[j] = (u[(j + 1) % n] - u[j]) / h;
        A[j] = std::atan(P[j]);
        B[j] = 1.0 / (1.0 + P[j] * P[j]);
    }
    const double r = dt / (h * h);
    std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), d(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!per && (j == 0 || j == n - 1)) {
            d[j] = u[j];
            continue;
        }
        const std::size_t fp = j, fm = (j + nf - 1) % nf;
        a[j] = -r * B[fm];
        c[j] = -r * B[fp];
        b[j] = 1.0 + r * (B[fm] + B[fp]);
        d[j] = u[j] + dt / h * ((A[fp] - B[fp] * P[fp]) - (A[fm] - B[fm] * P[fm]));
    }
    SheetGraph out = sheet;
    out.t = sheet.t + dt;
    if (per) {
        out.u = solve_cyclic_tridiagonal(a, b, c, d);
    } else {
        if (bc.kind == GraphBC::Kind::Dirichlet) {
            d[0] = bc.left;
            d[n - 1] = bc.right;
        } else {
            require(static_cast<bool>(bc.tail), ErrorKind::InvalidInput, "FromExactTail needs a tail callback");
            const auto [l, rr] = bc.tail(out.t);
            d[0] = l;
            d[n - 1] = rr;
        }
        out.u = solve_tridiagonal(a, b, c, d);
    }
    out.validate();
    return out;
}

SheetGraph evolve_graphical(SheetGraph sheet, double t1, double dt, const GraphBC& bc)
{
    require(t1 >= sheet.t, ErrorKind::InvalidInput, "evolve_graphical: t1 before sheet time");
    const auto steps = static_cast<long>(std::ceil((t1 - sheet.t) / dt - 1e-9));
    if (steps <= 0) return sheet;
    const double t0 = sheet.t;
    const double h = (t1 - t0) / steps;
    for (long j = 0; j < steps; ++j) {
        sheet = step_graphical(sheet, h, bc);
        sheet.t = (j + 1 == steps) ? t1 : t0 + (j + 1) * h;
    }
    return sheet;
}

PlanarCurve sheet_curve(const SheetGraph& sheet)
{
    std::vector<Vec2> p(sheet.size());
    for (std::size_t j = 0; j < p.size(); ++j)
        p[j] = sheet.axis == GraphAxis::OverX1 ? Vec2{sheet.x(j), sheet.u[j]} : Vec2{sheet.u[j], sheet.x(j)};
    return PlanarCurve(std::move(p), sheet.periodic ? Topology::Closed : Topology::Open);
}

RescaledSheet rescale(const SheetGraph& sheet)
{
    require(sheet.t < 0, ErrorKind::OutOfDomain, "rescale needs t < 0");
    const double s = std::sqrt(-sheet.t);
    RescaledSheet r;
    r.tau = -std::log(-sheet.t);
    r.y.resize(sheet.size());
    r.u.resize(sheet.size());
    for (std::size_t j = 0; j < sheet.size(); ++j) {
        r.y[j] = sheet.x(j) / s;
        r.u[j] = sheet.u[j] / s;
    }
    return r;
}

RescaledSheet rescale(const SheetGraph& sheet, double rho, std::size_t n)
{
    RescaledSheet full = rescale(sheet);
    require(n >= 3, ErrorKind::InvalidInput, "rescale needs >= 3 nodes");
    require(full.y.front() <= -2 * rho && full.y.back() >= 2 * rho, ErrorKind::InsufficientRange,
            "sheet does not cover (-2 rho, 2 rho) after rescaling");
    const CubicSpline sp(full.y, full.u, SplineEnd::Natural);
    RescaledSheet r;
    r.tau = full.tau;
    r.y.resize(n);
    r.u.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        r.y[j] = -2 * rho + 4 * rho * static_cast<double>(j) / (n - 1);
        r.u[j] = sp(r.y[j]);
    }
    return r;
}

SheetGraph unrescale(const RescaledSheet& r, GraphAxis axis)
{
    require(r.y.size() >= 3 && r.y.size() == r.u.size(), ErrorKind::InvalidInput, "unrescale: bad sheet");
    const double t = -std::exp(-r.tau);
    const double s = std::sqrt(-t);
    SheetGraph g;
    g.axis = axis;
    g.t = t;
    g.lo = r.y.front() * s;
    g.hi = r.y.back() * s;
    g.u.resize(r.u.size());
    for (std::size_t j = 0; j < r.u.size(); ++j) g.u[j] = r.u[j] * s;
    return g;
}

AvoidanceReport avoidance_check(const FlowTrajectory& a, const FlowTrajectory& b, double tolerance)
{
    require(a.size() == b.size() && a.size() > 0, ErrorKind::InvalidInput, "avoidance: mismatched time grids");
    AvoidanceReport rep;
    rep.tolerance = tolerance;
    for (std::size_t i = 0; i < a.size(); ++i) {
        require(std::abs(a[i].t - b[i].t) <= 1e-12 * std::max(1.0, std::abs(a[i].t)), ErrorKind::InvalidInput,
                "avoidance: mismatched time grids");
        rep.t.push_back(a[i].t);
        rep.distance.push_back(min_distance(a[i].curve, b[i].curve));
    }
    if (rep.distance.front() <= 0.0) {
        rep.verdict = Verdict::NotApplicable;
        return rep;
    }
    rep.verdict = Verdict::Pass;
    for (double d : rep.distance)
        if (d < rep.distance.front() - tolerance) rep.verdict = Verdict::Fail;
    return rep;
}

} // namespace csf
