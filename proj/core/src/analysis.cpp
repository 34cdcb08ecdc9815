#include "csf/analysis.hpp"

#include "csf/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace csf {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t wrap(long i, std::size_t n) { return static_cast<std::size_t>(((i % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n)); }

// Least-squares parabola through five samples around c; returns the refined (s, value) of its extremum.
std::pair<double, double> refine_quadratic(const std::vector<double>& s, const std::vector<double>& f, std::size_t c,
                                           bool closed, double length)
{
    const std::size_t n = f.size();
    if (!closed && (c < 2 || c + 2 >= n)) return {s[c], f[c]};
    double S[5] = {0, 0, 0, 0, 0}, T[3] = {0, 0, 0};
    for (long k = -2; k <= 2; ++k) {
        const std::size_t j = closed ? wrap(static_cast<long>(c) + k, n) : c + static_cast<std::size_t>(k + 2) - 2;
        double ds = s[j] - s[c];
        if (closed) {
            if (k < 0 && ds > 0) ds -= length;
            if (k > 0 && ds < 0) ds += length;
        }
        double p = 1.0;
        for (int e = 0; e < 5; ++e) {
            S[e] += p;
            if (e < 3) T[e] += p * f[j];
            p *= ds;
        }
    }
    // normal equations for f = c0 + c1 ds + c2 ds^2
    const double M[3][3] = {{S[0], S[1], S[2]}, {S[1], S[2], S[3]}, {S[2], S[3], S[4]}};
    auto det3 = [](const double A[3][3]) {
        return A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
               A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
    };
    const double D = det3(M);
    if (D == 0.0) return {s[c], f[c]};
    double coef[3];
    for (int col = 0; col < 3; ++col) {
        double A[3][3];
        for (int r = 0; r < 3; ++r)
            for (int q = 0; q < 3; ++q) A[r][q] = (q == col) ? T[r] : M[r][q];
        coef[col] = det3(A) / D;
    }
    if (coef[2] == 0.0) return {s[c], f[c]};
    const double ds = -coef[1] / (2.0 * coef[2]);
    const double h = std::max(std::abs(s[closed ? wrap(static_cast<long>(c) + 1, n) : c + 1] - s[c]),
                              std::abs(s[c] - s[closed ? wrap(static_cast<long>(c) - 1, n) : c - 1]));
    if (!(std::abs(ds) <= 1.5 * std::min(h, length))) return {s[c], f[c]};
    return {s[c] + ds, coef[0] + coef[1] * ds + coef[2] * ds * ds};
}

Vec2 point_at(const PlanarCurve& curve, const std::vector<double>& s, double length, double q)
{
    const std::size_t n = curve.size();
    if (curve.closed()) {
        q = std::fmod(q, length);
        if (q < 0) q += length;
    } else {
        q = std::clamp(q, 0.0, s.back());
    }
    auto it = std::upper_bound(s.begin(), s.end(), q);
    std::size_t i = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
    if (!curve.closed() && i + 1 >= n) return curve[n - 1];
    const std::size_t j = curve.closed() ? (i + 1) % n : i + 1;
    const double end = (j == 0) ? length : s[j];
    const double u = end > s[i] ? (q - s[i]) / (end - s[i]) : 0.0;
    return curve[i] + u * (curve[j] - curve[i]);
}

struct RawCritical {
    std::size_t index;
    bool maximum;
};

// Sign changes of the forward differences; plateaus collapse to their midpoint.
std::vector<RawCritical> sign_change_criticals(const std::vector<double>& f, bool closed, double tol)
{
    const std::size_t n = f.size();
    const std::size_t m = closed ? n : n - 1;
    std::vector<int> sg(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = f[(i + 1) % n] - f[i];
        sg[i] = d > tol ? 1 : (d < -tol ? -1 : 0);
    }
    std::vector<RawCritical> out;
    std::size_t start = 0;
    if (closed) {
        while (start < m && sg[start] == 0) ++start;
        if (start == m) return out;
    }
    long last = -1;
    int last_sign = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t q = closed ? (start + k) % m : k;
        if (sg[q] == 0) continue;
        if (last_sign != 0 && sg[q] != last_sign) {
            // samples last+1 .. q form the plateau between the two runs
            const std::size_t a = static_cast<std::size_t>(last) + 1;
            std::size_t b = q;
            if (b < a) b += n;
            out.push_back({(a + (b - a) / 2) % n, last_sign > 0});
        }
        last = static_cast<long>(q);
        last_sign = sg[q];
    }
    if (closed && last_sign != 0 && sg[start] != last_sign) {
        const std::size_t a = static_cast<std::size_t>(last) + 1;
        std::size_t b = start;
        if (b < a) b += n;
        out.push_back({(a + (b - a) / 2) % n, last_sign > 0});
    }
    std::sort(out.begin(), out.end(), [](const RawCritical& x, const RawCritical& y) { return x.index < y.index; });
    return out;
}

void check_resolution(const std::vector<std::size_t>& idx, std::size_t n, bool closed, const char* what)
{
    for (std::size_t k = 0; k + 1 < idx.size(); ++k)
        require(idx[k + 1] - idx[k] >= 3, ErrorKind::Resolution,
                std::string("detect_features: fewer than 3 samples between ") + what + " critical points near sample " +
                    std::to_string(idx[k]));
    if (closed && idx.size() >= 2)
        require(idx.front() + n - idx.back() >= 3, ErrorKind::Resolution,
                std::string("detect_features: fewer than 3 samples between ") + what + " critical points across the seam");
}

CriticalPoint make_critical(const PlanarCurve& curve, const CurveGeometry& g, const std::vector<double>& f,
                            std::size_t index, bool maximum)
{
    CriticalPoint c;
    c.index = index;
    c.maximum = maximum;
    const auto [s, v] = refine_quadratic(g.s, f, index, curve.closed(), g.length);
    c.s = s;
    c.value = v;
    c.point = point_at(curve, g.s, g.length, s);
    return c;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

} // namespace

// ---------------------------------------------------------------- features

FeatureSet detect_features(const PlanarCurve& curve, const FeatureOptions& opts)
{
    require(curve.size() >= 5, ErrorKind::Resolution, "detect_features: need at least 5 samples");
    const CurveGeometry g = geometry(curve);
    const std::size_t n = curve.size();
    const bool closed = curve.closed();
    FeatureSet fs;

    double kmax = 0.0, kmin = std::numeric_limits<double>::infinity();
    for (double k : g.kappa) {
        kmax = std::max(kmax, std::abs(k));
        kmin = std::min(kmin, std::abs(k));
    }
    const double floor = opts.kappa_floor * kmax;

    // curvature: critical points of signed kappa above the floor
    fs.constant_curvature = kmax == 0.0 || (closed && kmax - kmin <= opts.constant_tolerance * kmax);
    if (!fs.constant_curvature) {
        std::vector<double> kap = g.kappa;
        if (!closed) {
            // endpoint curvature is one-sided; copy the neighbour so it cannot create a critical point
            kap.front() = kap[1];
            kap.back() = kap[n - 2];
        }
        std::vector<std::size_t> idx;
        for (const auto& rc : sign_change_criticals(kap, closed, 1e-9 * kmax)) {
            if (std::abs(kap[rc.index]) < floor) continue;
            if (!closed && (rc.index < 1 || rc.index + 2 > n)) continue;
            idx.push_back(rc.index);
            const bool sharp = (kap[rc.index] > 0) == rc.maximum;
            CriticalPoint c = make_critical(curve, g, kap, rc.index, rc.maximum);
            (sharp ? fs.sharp_vertices : fs.flat_vertices).push_back(c);
        }
        check_resolution(idx, n, closed, "curvature");
    }

    // distance to the basepoint
    std::vector<double> d(n);
    double dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = norm(curve[i] - opts.basepoint);
        dmax = std::max(dmax, d[i]);
    }
    {
        std::vector<std::size_t> idx;
        for (const auto& rc : sign_change_criticals(d, closed, 1e-13 * dmax)) {
            idx.push_back(rc.index);
            CriticalPoint c = make_critical(curve, g, d, rc.index, rc.maximum);
            (rc.maximum ? fs.tips : fs.knuckles).push_back(c);
        }
        check_resolution(idx, n, closed, "distance");
    }

    // inflections: sign changes between significant curvature samples
    if (!fs.constant_curvature) {
        long last = -1;
        const std::size_t lo = closed ? 0 : 1, hi = closed ? n : n - 1;
        long first = -1;
        for (std::size_t i = lo; i < hi; ++i) {
            if (std::abs(g.kappa[i]) < floor) continue;
            if (first < 0) first = static_cast<long>(i);
            if (last >= 0 && (g.kappa[i] > 0) != (g.kappa[static_cast<std::size_t>(last)] > 0)) {
                CriticalPoint c;
                const std::size_t a = static_cast<std::size_t>(last);
                if (i == a + 1) {
                    const double u = g.kappa[a] / (g.kappa[a] - g.kappa[i]);
                    c.s = g.s[a] + u * (g.s[i] - g.s[a]);
                } else {
                    c.s = 0.5 * (g.s[a + 1] + g.s[i - 1]);
                }
                c.index = (a + i) / 2;
                c.point = point_at(curve, g.s, g.length, c.s);
                fs.inflections.push_back(c);
            }
            last = static_cast<long>(i);
        }
        if (closed && last >= 0 && first >= 0 && last != first &&
            (g.kappa[static_cast<std::size_t>(first)] > 0) != (g.kappa[static_cast<std::size_t>(last)] > 0)) {
            CriticalPoint c;
            c.index = static_cast<std::size_t>(last);
            c.s = g.s[c.index];
            c.point = curve[c.index];
            fs.inflections.push_back(c);
        }
    }

    // sheets: x1-monotone runs crossing the strip |x1 - b1| <= R
    double R = opts.graphical_radius;
    if (R <= 0.0) {
        R = std::numeric_limits<double>::infinity();
        for (const auto& t : fs.tips) R = std::min(R, 0.5 * norm(t.point - opts.basepoint));
    }
    fs.graphical_radius = R;
    if (!closed) {
        const double xl = opts.basepoint.x - R, xr = opts.basepoint.x + R;
        auto flush = [&](std::size_t a, std::size_t b) {
            if (b <= a) return;
            std::vector<double> xs, us;
            for (std::size_t i = a; i <= b; ++i) {
                xs.push_back(curve[i].x);
                us.push_back(curve[i].y);
            }
            if (xs.front() > xs.back()) {
                std::reverse(xs.begin(), xs.end());
                std::reverse(us.begin(), us.end());
            }
            const bool bounded = std::isfinite(R);
            SheetGraph sh;
            sh.axis = GraphAxis::OverX1;
            sh.lo = bounded ? xl : xs.front();
            sh.hi = bounded ? xr : xs.back();
            // a finite strip must be crossed from side to side
            if (bounded && (xs.front() > xl || xs.back() < xr)) return;
            if (!(sh.hi > sh.lo)) return;
            const std::size_t cnt = std::max<std::size_t>(xs.size(), 2);
            sh.u.resize(cnt);
            std::size_t k = 0;
            for (std::size_t j = 0; j < cnt; ++j) {
                const double x = sh.lo + (sh.hi - sh.lo) * static_cast<double>(j) / static_cast<double>(cnt - 1);
                while (k + 2 < xs.size() && xs[k + 1] < x) ++k;
                const double u = (x - xs[k]) / (xs[k + 1] - xs[k]);
                sh.u[j] = us[k] + std::clamp(u, 0.0, 1.0) * (us[k + 1] - us[k]);
            }
            fs.sheets.push_back(std::move(sh));
        };
        // split at direction reversals of x1, then clip to the strip inside flush
        std::size_t a = 0;
        int dir = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double dx = curve[i + 1].x - curve[i].x;
            const int sd = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
            if (sd == 0 || (dir != 0 && sd != dir)) {
                flush(a, i);
                a = (sd == 0) ? i + 1 : i;
                dir = sd;
                continue;
            }
            dir = sd;
        }
        flush(a, n - 1);
        fs.fingers = finger_regions(curve);
    }
    return fs;
}

// ---------------------------------------------------------------- edges

std::string to_string(EdgeTag t)
{
    switch (t) {
    case EdgeTag::A1: return "A1";
    case EdgeTag::A2: return "A2";
    case EdgeTag::B: return "B";
    case EdgeTag::Unclassified: return "Unclassified";
    }
    return "Unclassified";
}

EdgeClass classify_edge(const PlanarCurve& edge, double kappa_floor)
{
    require(!edge.closed() && edge.size() >= 7, ErrorKind::InvalidInput, "classify_edge: need an open edge with at least 7 samples");
    const CurveGeometry g = geometry(edge);
    const std::size_t n = edge.size();
    // interior samples only; endpoint curvature is one-sided
    std::vector<double> k(g.kappa.begin() + 1, g.kappa.end() - 1), s(g.s.begin() + 1, g.s.end() - 1);
    double kmax = 0.0;
    for (double v : k) kmax = std::max(kmax, std::abs(v));
    EdgeClass ec;
    if (kmax == 0.0) {
        ec.diagnostics = "edge is straight";
        return ec;
    }
    const double floor = kappa_floor * kmax, tol = 1e-9 * kmax;

    long last = -1;
    std::size_t infl_a = 0, infl_b = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (std::abs(k[i]) < floor) continue;
        if (last >= 0 && (k[i] > 0) != (k[static_cast<std::size_t>(last)] > 0)) {
            ++ec.sign_changes;
            infl_a = static_cast<std::size_t>(last);
            infl_b = i;
        }
        last = static_cast<long>(i);
    }

    int up = 0, down = 0;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        const double d = k[i + 1] - k[i];
        if (d > tol) ++up;
        if (d < -tol) ++down;
    }
    ec.kappa_monotone = up == 0 || down == 0;

    std::vector<double> ak(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) ak[i] = std::abs(k[i]);
    int maxima = 0;
    std::size_t min_index = 0;
    for (const auto& rc : sign_change_criticals(ak, false, tol)) {
        if (ak[rc.index] < floor && !rc.maximum) continue;
        if (rc.maximum) {
            ++maxima;
        } else {
            ++ec.interior_minima;
            min_index = rc.index;
        }
    }
    ec.tail_kappa = std::min(ak.front(), ak.back());

    if (ec.sign_changes == 1 && ec.kappa_monotone) {
        ec.tag = EdgeTag::A1;
        const double sa = s[infl_a], sb = s[infl_b];
        const double q = infl_b == infl_a + 1 ? sa + k[infl_a] / (k[infl_a] - k[infl_b]) * (sb - sa)
                                              : 0.5 * (s[infl_a + 1] + s[infl_b - 1]);
        ec.inflection = point_at(edge, g.s, g.length, q);
    } else if (ec.sign_changes == 0 && ec.interior_minima == 1 && maxima == 0 && ak[min_index] >= floor) {
        ec.tag = EdgeTag::A2;
        const auto [sq, v] = refine_quadratic(s, ak, min_index, false, g.length);
        (void)v;
        ec.flat_vertex = point_at(edge, g.s, g.length, sq);
    } else if (ec.sign_changes == 0 && ec.kappa_monotone && ec.tail_kappa <= 1e-6) {
        ec.tag = EdgeTag::B;
    }
    ec.diagnostics = "sign changes " + std::to_string(ec.sign_changes) + ", interior |kappa| minima " +
                     std::to_string(ec.interior_minima) + ", maxima " + std::to_string(maxima) + ", monotone " +
                     (ec.kappa_monotone ? "yes" : "no") + ", tail |kappa| " + fmt12(ec.tail_kappa) + ", samples " +
                     std::to_string(n);
    return ec;
}

// ---------------------------------------------------------------- strip confinement

StripReport strip_confinement(const FlowTrajectory& traj, const std::vector<double>& asymptotes, double tol)
{
    require(!asymptotes.empty(), ErrorKind::InvalidInput, "strip_confinement: no asymptote estimates");
    StripReport r;
    double amax = 0.0;
    for (double a : asymptotes) amax = std::max(amax, std::abs(a));
    r.A = 1.0 + amax;
    bool ok = true;
    for (const auto& snap : traj.snapshots) {
        double h = 0.0;
        for (const auto& p : snap.curve.points()) h = std::max(h, std::abs(p.y));
        r.t.push_back(snap.t);
        r.max_height.push_back(h);
        r.margin.push_back(r.A - h);
        ok = ok && h < r.A;
        double fm = std::numeric_limits<double>::infinity();
        if (!snap.curve.closed()) {
            for (const auto& f : finger_regions(snap.curve)) {
                for (std::size_t i = f.first; i <= f.last; ++i) {
                    const double y = snap.curve[i].y;
                    fm = std::min(fm, std::min(y - f.aLo, f.aHi - y));
                }
            }
        }
        r.finger_margin.push_back(fm);
        ok = ok && fm >= -tol;
    }
    r.verdict = traj.size() == 0 ? Verdict::NotApplicable : (ok ? Verdict::Pass : Verdict::Fail);
    return r;
}

// ---------------------------------------------------------------- vertices

std::vector<FingerRegion> track_finger(const FlowTrajectory& traj, int finger_id)
{
    require(traj.size() >= 1, ErrorKind::Tracking, "track_finger: empty trajectory");
    std::vector<FingerRegion> out;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto fingers = finger_regions(traj[k].curve);
        if (k == 0) {
            require(finger_id >= 1 && static_cast<std::size_t>(finger_id) <= fingers.size(), ErrorKind::Tracking,
                    "track_finger: finger " + std::to_string(finger_id) + " not found at t = " + fmt12(traj[0].t));
            out.push_back(fingers[static_cast<std::size_t>(finger_id) - 1]);
            continue;
        }
        const FingerRegion& prev = out.back();
        const double kap = std::max(std::abs(prev.vertex_kappa), 1e-12);
        // the vertex moves with normal speed |kappa|; allow twice that on top of the per-step gate
        const double gate = 3.0 / kap + 2.0 * kap * std::abs(traj[k].t - traj[k - 1].t);
        const FingerRegion* best = nullptr;
        double bd = std::numeric_limits<double>::infinity();
        for (const auto& f : fingers) {
            const double d = norm(f.tip - prev.tip);
            if (f.pointing == prev.pointing && d < bd) {
                bd = d;
                best = &f;
            }
        }
        require(best != nullptr && bd <= gate, ErrorKind::Tracking,
                "track_finger: finger " + std::to_string(finger_id) + " lost at t = " + fmt12(traj[k].t));
        out.push_back(*best);
        out.back().id = finger_id;
    }
    return out;
}

VertexReport vertex_asymptotics(const FlowTrajectory& traj, int finger_id, double t_cut)
{
    require(traj.size() >= 2, ErrorKind::Tracking, "vertex_asymptotics: need at least two snapshots");
    const auto track = track_finger(traj, finger_id);
    VertexReport r;
    std::vector<double> widths;
    double amax = 0.0;
    for (const auto& f : finger_regions(traj[0].curve)) amax = std::max({amax, std::abs(f.aLo), std::abs(f.aHi)});
    for (std::size_t k = 0; k < track.size(); ++k) {
        const auto& f = track[k];
        r.t.push_back(traj[k].t);
        // curvature maximum refined on the five point stencil, tangent angle interpolated there
        const CurveGeometry g = geometry(traj[k].curve);
        std::vector<double> ak(g.kappa.size());
        for (std::size_t i = 0; i < ak.size(); ++i) ak[i] = std::abs(g.kappa[i]);
        const auto [sv, kv] = refine_quadratic(g.s, ak, f.vertex_index, false, g.length);
        std::size_t i0 = f.vertex_index;
        if (sv < g.s[i0] && i0 > 0) --i0;
        i0 = std::min(i0, g.s.size() - 2);
        const double u = std::clamp((sv - g.s[i0]) / (g.s[i0 + 1] - g.s[i0]), 0.0, 1.0);
        r.kappa.push_back(kv);
        // angle of the tangent line in [0, pi)
        double th = std::fmod(g.theta[i0] + u * (g.theta[i0 + 1] - g.theta[i0]), kPi);
        if (th < 0) th += kPi;
        r.theta.push_back(th);
        r.tip_x.push_back(f.tip.x);
        if (traj[k].t <= t_cut) widths.push_back(f.aHi - f.aLo);
    }
    require(!widths.empty(), ErrorKind::InsufficientRange, "vertex_asymptotics: no snapshot with t <= t_cut");
    r.expected_kappa = kPi / median(widths);
    r.strip_bound = -3.0 / (2.0 * (1.0 + amax));
    const std::size_t n = track.size();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t a = k == 0 ? 0 : k - 1, b = k + 1 == n ? n - 1 : k + 1;
        r.speed.push_back((r.tip_x[b] - r.tip_x[a]) / (r.t[b] - r.t[a]));
    }
    r.kappa_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        if (r.t[k] > t_cut) continue;
        r.speed_error = std::max(r.speed_error, std::abs(std::abs(r.speed[k]) - r.expected_kappa) / r.expected_kappa);
        r.theta_error = std::max(r.theta_error, std::abs(r.theta[k] - kPi / 2));
        r.kappa_ratio = std::min(r.kappa_ratio, r.kappa[k] / r.expected_kappa);
    }
    return r;
}

// ---------------------------------------------------------------- height decay

HeightDecayFit height_decay_fit(const std::vector<double>& x, const std::vector<double>& U, double a,
                                const std::vector<double>& vertex_x, double min_distance, double bin, double floor)
{
    require(x.size() == U.size() && !x.empty(), ErrorKind::InvalidInput, "height_decay_fit: sample size mismatch");
    require(bin > 0.0, ErrorKind::InvalidInput, "height_decay_fit: bin width must be positive");
    HeightDecayFit r;
    r.a = a;
    // sup of the deviation per distance bin, at the distance where it is attained
    std::vector<std::pair<double, double>> best; // (d, e) indexed by bin
    std::vector<long> bins;
    bool any = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = std::numeric_limits<double>::infinity();
        for (double v : vertex_x) d = std::min(d, std::abs(x[i] - v));
        const double e = std::abs(U[i] - a);
        if (!std::isfinite(d) || d < min_distance) continue;
        if (e >= floor) any = true;
        if (e < floor) continue;
        const long b = static_cast<long>(std::floor((d - min_distance) / bin));
        auto it = std::find(bins.begin(), bins.end(), b);
        if (it == bins.end()) {
            bins.push_back(b);
            best.push_back({d, e});
        } else {
            auto& slot = best[static_cast<std::size_t>(it - bins.begin())];
            if (e > slot.second) slot = {d, e};
        }
    }
    if (!any) {
        r.degenerate = true;
        r.pass = true;
        return r;
    }
    require(best.size() >= 3, ErrorKind::InsufficientRange,
            "height_decay_fit: fewer than 3 distance bins above the floor");
    std::vector<double> dd, le;
    for (const auto& [d, e] : best) {
        dd.push_back(d);
        le.push_back(std::log(e));
    }
    const LinearFit fit = linear_fit(dd, le);
    r.beta = -fit.slope;
    r.r2 = fit.r2;
    r.points = best.size();
    r.pass = r.beta > 0.0 && r.r2 >= 0.98;
    return r;
}

std::pair<std::vector<double>, std::vector<double>> sheet_samples(const PlanarCurve& curve, int sheet)
{
    const auto fingers = finger_regions(curve);
    const int m = static_cast<int>(fingers.size());
    require(sheet >= 0 && sheet <= m, ErrorKind::InvalidInput, "sheet_samples: sheet " + std::to_string(sheet) + " out of range");
    const std::size_t a = sheet == 0 ? 0 : fingers[static_cast<std::size_t>(sheet) - 1].vertex_index;
    const std::size_t b = sheet == m ? curve.size() - 1 : fingers[static_cast<std::size_t>(sheet)].vertex_index;
    std::vector<double> x, u;
    for (std::size_t i = a; i <= b; ++i) {
        x.push_back(curve[i].x);
        u.push_back(curve[i].y);
    }
    return {std::move(x), std::move(u)};
}

std::vector<double> tip_abscissae(const PlanarCurve& curve)
{
    std::vector<double> out;
    for (const auto& f : finger_regions(curve)) out.push_back(f.tip.x);
    return out;
}

// ---------------------------------------------------------------- best reaper

BestReaper fit_best_reaper(const AreaSeries& area, double aLo, double aHi, Pointing pointing)
{
    require(aHi > aLo, ErrorKind::InvalidInput, "fit_best_reaper: empty strip");
    require(std::abs(area.slope / -kPi - 1.0) <= 0.02, ErrorKind::NotInRegime,
            "fit_best_reaper: area slope " + fmt12(area.slope) + " is not within 2% of -pi");
    BestReaper r;
    r.area = area;
    r.slope = area.slope;
    // the limit of |F| + pi t is taken as t -> -infinity: read it off at the earliest sample
    require(!area.t.empty(), ErrorKind::InvalidInput, "fit_best_reaper: empty area series");
    const std::size_t first = static_cast<std::size_t>(std::min_element(area.t.begin(), area.t.end()) - area.t.begin());
    r.C0 = area.area[first] + kPi * area.t[first];
    const double w = aHi - aLo, k = kPi / w;
    // the exact reaper region has area -pi t + sigma w b - pi log 2 / k^2
    r.b = sign_of(pointing) * (r.C0 + kPi * std::log(2.0) / (k * k)) / w;
    r.reaper = GrimReaperSpec{aLo, aHi, r.b, pointing};
    return r;
}

double symmetric_difference(const PlanarCurve& curve, const FingerRegion& finger, const GrimReaperSpec& reaper, double t)
{
    const double sg = sign_of(finger.pointing);
    std::vector<Vec2> arc{finger.entry};
    for (std::size_t i = finger.first; i <= finger.last; ++i) arc.push_back(curve[i]);
    arc.push_back(finger.exit);
    if (arc.back().y < arc.front().y) std::reverse(arc.begin(), arc.end());
    const double tip = grim_reaper_tip_x(reaper, t), k = reaper.k();
    auto vhat = [&](double z) {
        const double c = std::cos(k * (z - reaper.mid()));
        if (!(c > 0.0)) return 0.0;
        return std::max(0.0, sg * (tip + std::log(c) / k));
    };
    // the strips outside the crossing ordinates carry exponentially small reaper area and are skipped
    double sum = 0.0, prev = std::abs(std::max(0.0, sg * arc[0].x) - vhat(arc[0].y));
    for (std::size_t i = 1; i < arc.size(); ++i) {
        // flat sheet stretches may carry roundoff-level reversals
        require(arc[i].y >= arc[i - 1].y - 1e-12, ErrorKind::GraphicalityLost,
                "symmetric_difference: finger arc is not a graph over x2 near x2 = " + fmt12(arc[i].y));
        const double cur = std::abs(std::max(0.0, sg * arc[i].x) - vhat(arc[i].y));
        sum += 0.5 * std::max(0.0, arc[i].y - arc[i - 1].y) * (prev + cur);
        prev = cur;
    }
    return sum;
}

BestReaper fit_best_reaper(const FlowTrajectory& traj, int finger_id, double fit_from)
{
    const AreaSeries area = area_series(traj, finger_id, fit_from);
    const auto track = track_finger(traj, finger_id);
    std::vector<double> lo, hi;
    for (const auto& f : track) {
        lo.push_back(f.aLo);
        hi.push_back(f.aHi);
    }
    BestReaper r = fit_best_reaper(area, median(lo), median(hi), track.front().pointing);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        r.t.push_back(traj[k].t);
        r.symmetric_difference.push_back(symmetric_difference(traj[k].curve, track[k], r.reaper, traj[k].t));
    }
    return r;
}

TipLimitReport tip_limit_check(const FlowTrajectory& traj, int finger_id, double b, double slack)
{
    const auto track = track_finger(traj, finger_id);
    TipLimitReport r;
    std::vector<double> lo, hi;
    for (const auto& f : track) {
        lo.push_back(f.aLo);
        hi.push_back(f.aHi);
    }
    const double aLo = median(lo), aHi = median(hi);
    const double k = kPi / (aHi - aLo), mid = 0.5 * (aLo + aHi);
    const double sg = sign_of(track.front().pointing);
    for (std::size_t i = 0; i < track.size(); ++i) {
        const Vec2 v = track[i].tip;
        r.t.push_back(traj[i].t);
        r.residual.push_back(std::hypot(v.x + sg * k * traj[i].t - b, v.y - mid));
    }
    // the limit is taken as t -> -infinity: walking back in time the residual must not grow
    std::vector<std::size_t> order(r.t.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return r.t[x] > r.t[y]; });
    r.decreasing = true;
    for (std::size_t j = 1; j < order.size(); ++j)
        if (r.residual[order[j]] > r.residual[order[j - 1]] + slack) r.decreasing = false;
    r.final_residual = r.residual[order.back()];
    r.verdict = (r.decreasing && r.final_residual <= 0.05) ? Verdict::Pass : Verdict::Fail;
    return r;
}

// ---------------------------------------------------------------- configuration

ConfigVerdict validate_config(const TromboneSpec& spec)
{
    ConfigVerdict v;
    const auto& a = spec.a;
    const int m = static_cast<int>(a.size()) - 1;
    if (m < 2) {
        v.pattern = "Too few fingers";
        v.detail = "m = " + std::to_string(std::max(m, 0)) + ", need at least 2";
        return v;
    }
    for (int j = 1; j <= m; ++j) {
        if (a[static_cast<std::size_t>(j)] == a[static_cast<std::size_t>(j) - 1]) {
            v.pattern = "Degenerate";
            v.detail = "finger " + std::to_string(j) + " has zero width: a_" + std::to_string(j - 1) + " = a_" +
                       std::to_string(j) + " = " + fmt12(a[static_cast<std::size_t>(j)]);
            v.turn_index = j;
            return v;
        }
    }
    // turning points of the height sequence
    std::vector<int> turns;
    for (int j = 1; j < m; ++j) {
        const double l = a[static_cast<std::size_t>(j)] - a[static_cast<std::size_t>(j) - 1];
        const double r = a[static_cast<std::size_t>(j) + 1] - a[static_cast<std::size_t>(j)];
        if ((l > 0) != (r > 0)) turns.push_back(j);
    }
    const bool increasing = a[1] > a[0];
    if (turns.empty() && increasing) {
        v.pass = true;
        return v;
    }
    if (turns.empty()) {
        // decreasing heights nest every finger in the reversed order
        v.pattern = "Case 1: proper nesting of fingers";
        v.detail = "heights decrease from a_0";
        v.turn_index = 0;
        return v;
    }
    v.turn_index = turns.front();
    const std::string at = "a_" + std::to_string(turns.front()) + " = " + fmt12(a[static_cast<std::size_t>(turns.front())]);
    if (turns.size() == 1) {
        v.pattern = "Case 1: proper nesting of fingers";
        v.detail = "finger " + std::to_string(turns.front() + 1) + " folds back inside finger " +
                   std::to_string(turns.front()) + " at " + at;
    } else {
        v.pattern = "Case 2: spiral and nesting chains";
        v.detail = std::to_string(turns.size()) + " turning points, first at " + at;
    }
    return v;
}

// ---------------------------------------------------------------- contraction and slopes

ContractionReport l1_contraction_check(const FlowTrajectory& m, const FlowTrajectory& ref, double zlo, double zhi,
                                       double rel_tol)
{
    require(m.size() == ref.size() && m.size() >= 1, ErrorKind::InvalidInput,
            "l1_contraction_check: trajectories have different snapshot counts");
    ContractionReport r;
    bool ok = true;
    for (std::size_t k = 0; k < m.size(); ++k) {
        require(std::abs(m[k].t - ref[k].t) <= 1e-9 * std::max(1.0, std::abs(m[k].t)), ErrorKind::InvalidInput,
                "l1_contraction_check: snapshot times differ at index " + std::to_string(k));
        const double A = l1_graph_distance(m[k].curve, ref[k].curve, zlo, zhi);
        if (!r.A.empty()) {
            const double prev = r.A.back();
            const double inc = prev > 0.0 ? (A - prev) / prev : (A > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            r.worst_increase = std::max(r.worst_increase, inc);
            ok = ok && A <= prev * (1.0 + rel_tol);
        }
        r.t.push_back(m[k].t);
        r.A.push_back(A);
    }
    r.verdict = ok ? Verdict::Pass : Verdict::Fail;
    return r;
}

SlopeReport asymptotic_slope_check(const FlowTrajectory& traj, double delta, double Lambda)
{
    require(delta > 0.0, ErrorKind::InvalidInput, "asymptotic_slope_check: delta must be positive");
    SlopeReport r;
    bool ok = true, any = false;
    for (const auto& snap : traj.snapshots) {
        if (!(snap.t < 0.0)) continue;
        any = true;
        const double root = std::sqrt(-snap.t);
        double worst = 0.0, reach = 0.0;
        for (const auto& p : snap.curve.points()) {
            const double ax = std::abs(p.x);
            const double ratio = ax > 0.0 ? std::abs(p.y) / ax : (p.y == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
            if (ax >= Lambda * root) worst = std::max(worst, ratio);
            if (ratio >= delta) reach = std::max(reach, ax);
        }
        r.t.push_back(snap.t);
        r.max_ratio.push_back(worst);
        r.lambda_fit = std::max(r.lambda_fit, std::nextafter(reach / root, INFINITY));
        ok = ok && worst < delta;
    }
    r.verdict = !any ? Verdict::NotApplicable : (ok ? Verdict::Pass : Verdict::Fail);
    return r;
}

} // namespace csf
