// csflab: experiments on curve shortening flow from flat key-value configs.

#include "csf/analysis.hpp"
#include "csf/error.hpp"
#include "csf/exact.hpp"
#include "csf/flow.hpp"
#include "csf/functionals.hpp"
#include "csf/io.hpp"
#include "csf/spectral.hpp"
#include "csf/svg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace csf;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kRootEnv = "CSFLAB_OUTPUT_ROOT";

struct Context {
    fs::path root;
    Config cfg;
};

fs::path output_path(const Context& ctx, const std::string& p)
{
    const fs::path q(p);
    return q.is_absolute() ? q : ctx.root / q;
}

// Relative inputs are looked up in the working directory first, then under the output root.
fs::path input_path(const Context& ctx, const std::string& p)
{
    const fs::path q(p);
    if (q.is_absolute() || fs::exists(q)) return q;
    return ctx.root / q;
}

json num(double v) { return std::isfinite(v) ? json(round12(v)) : json(nullptr); }

json nums(const std::vector<double>& v)
{
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

void write_json(const fs::path& path, const json& j)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorKind::Io, "cannot write " + path.string());
    os << j.dump(2) << '\n';
}

Pointing pointing_of(const std::string& s)
{
    if (s == "left") return Pointing::Left;
    if (s == "right") return Pointing::Right;
    fail(ErrorKind::Config, "pointing must be 'left' or 'right', got '" + s + "'");
}

TromboneSpec trombone_spec(const Config& c)
{
    TromboneSpec s;
    s.a = c.get_list("a", {0, 1, 2});
    s.b = c.get_list("b", std::vector<double>(s.a.size() > 1 ? s.a.size() - 1 : 0, 0.0));
    s.tailDirection = pointing_of(c.get_string("tail", "left"));
    return s;
}

GrimReaperSpec reaper_spec(const Config& c)
{
    const auto a = c.get_list("a", {0, 1});
    require(a.size() == 2, ErrorKind::Config, "reaper: 'a' needs two heights");
    GrimReaperSpec s{a[0], a[1], c.get_double("b", 0.0), pointing_of(c.get_string("pointing", "right"))};
    s.validate();
    return s;
}

// Initial snapshot from 'input' (last snapshot of a trajectory file) or from a solution family.
FlowSnapshot initial_snapshot(const Context& ctx)
{
    const Config& c = ctx.cfg;
    if (c.has("input")) {
        const auto traj = read_trajectory(input_path(ctx, c.get_string("input", "")));
        require(traj.size() > 0, ErrorKind::Io, "input trajectory is empty");
        return traj.back();
    }
    const std::string family = c.require_string("family");
    if (family == "circle") {
        const double r0 = c.get_double("r0", 1.0, 1e-12, 1e12), t = c.get_double("t", 0.0);
        const auto ctr = c.get_list("center", {0, 0});
        require(ctr.size() == 2, ErrorKind::Config, "circle: 'center' needs two coordinates");
        const auto n = static_cast<std::size_t>(c.get_int("n", 512, 8, 10000000));
        return {t, shrinking_circle(r0, t, n, {ctr[0], ctr[1]})};
    }
    if (family == "reaper") {
        const auto s = reaper_spec(c);
        const double t = c.get_double("t", 0.0);
        const double zmax = c.get_double("zmax", 0.5 * s.width() * (1 - 1e-6), 0.0, 0.5 * s.width() * (1 - 1e-9));
        const auto n = static_cast<std::size_t>(c.get_int("n", 2048, 8, 10000000));
        return {t, grim_reaper_curve(s, t, zmax, n)};
    }
    if (family == "trombone") {
        const auto s = trombone_spec(c);
        const double t = c.get_double("t", -50.0);
        TromboneOptions o;
        o.spacing = c.get_double("spacing", o.spacing, 1e-6, 10.0);
        o.tail_length = c.get_double("tail_length", o.tail_length, 1e-3, 1e6);
        return {t, trombone_initial(s, t, o)};
    }
    if (family == "paperclip") {
        const double t = c.get_double("t", -3.0);
        return {t, paperclip(t, static_cast<std::size_t>(c.get_int("n", 512, 8, 10000000)))};
    }
    if (family == "line") {
        const double h = c.get_double("height", 0.0);
        return {c.get_double("t", 0.0),
                line_samples(h, c.get_double("xlo", -10.0), c.get_double("xhi", 10.0),
                             static_cast<std::size_t>(c.get_int("n", 201, 8, 10000000)))};
    }
    fail(ErrorKind::Config, "unknown family '" + family + "' (circle, reaper, trombone, paperclip, line)");
}

json finger_areas(const PlanarCurve& c)
{
    json a = json::array();
    if (c.closed()) return a;
    for (const auto& f : finger_regions(c)) a.push_back(num(f.area));
    return a;
}

// ---------------------------------------------------------------- commands

int cmd_exact(Context& ctx)
{
    const FlowSnapshot s = initial_snapshot(ctx);
    const fs::path out = output_path(ctx, ctx.cfg.get_string("output", "exact.jsonl"));
    ctx.cfg.finish();
    FlowTrajectory traj;
    traj.append(s);
    write_trajectory(out, traj);
    std::cout << "wrote " << s.curve.size() << " points at t = " << fmt12(s.t) << " to " << out.string() << '\n';
    return 0;
}

int cmd_evolve(Context& ctx)
{
    const Config& c = ctx.cfg;
    const FlowSnapshot s0 = initial_snapshot(ctx);
    FlowOptions o;
    const double t1 = c.get_double("t1", s0.t + 1.0);
    require(t1 > s0.t, ErrorKind::Config, "evolve: t1 must exceed the initial time " + fmt12(s0.t));
    o.scheme = scheme_from_string(c.get_string("scheme", "semi-implicit"));
    o.dt = c.get_double("dt", 1e-3, 1e-12, 1.0);
    o.snapshot_every = c.get_double("snapshot_every", 0.0, 0.0, 1e12);
    o.spacing = c.get_double("resample_spacing", 0.0, 0.0, 1e6);
    o.resample_every = static_cast<int>(c.get_int("resample_every", 50, 0, 1000000000));
    o.drift_tolerance = c.get_double("drift_tolerance", o.drift_tolerance, 0.0, 10.0);
    const bool want_entropy = c.get_bool("entropy", false);
    const fs::path out = output_path(ctx, c.get_string("output", "evolve.jsonl"));
    const fs::path summary = output_path(ctx, c.get_string("summary", "evolve.summary.json"));
    c.finish();

    const auto traj = evolve(s0.curve, s0.t, t1, o);
    write_trajectory(out, traj);
    json snaps = json::array();
    for (const auto& s : traj.snapshots) {
        json j{{"t", num(s.t)}, {"points", s.curve.size()}, {"length", num(polyline_length(s.curve))}};
        if (s.curve.closed())
            j["area"] = num(std::abs(signed_area(s.curve)));
        else
            j["finger_areas"] = finger_areas(s.curve);
        if (want_entropy) j["entropy"] = num(entropy(s.curve).value);
        snaps.push_back(std::move(j));
    }
    write_json(summary, {{"scheme", to_string(o.scheme)}, {"dt", num(o.dt)}, {"t0", num(s0.t)}, {"t1", num(t1)},
                         {"snapshots", std::move(snaps)}});
    std::cout << "evolved to t = " << fmt12(traj.back().t) << ", " << traj.size() << " snapshots, " << out.string() << '\n';
    return 0;
}

int cmd_entropy(Context& ctx)
{
    const Config& c = ctx.cfg;
    FlowTrajectory traj;
    if (c.has("input"))
        traj = read_trajectory(input_path(ctx, c.get_string("input", "")));
    else
        traj.append(initial_snapshot(ctx));
    EntropyOptions eo;
    eo.lambda_count = static_cast<int>(c.get_int("lambda_count", eo.lambda_count, 2, 100000));
    eo.grid = static_cast<int>(c.get_int("grid", eo.grid, 2, 100000));
    eo.max_sweeps = static_cast<int>(c.get_int("max_sweeps", eo.max_sweeps, 1, 100000));
    const fs::path out = output_path(ctx, c.get_string("output", "entropy.json"));
    const fs::path csv = output_path(ctx, c.get_string("series", "entropy.csv"));
    c.finish();

    Table tab{{"t", "entropy", "x0", "y0", "lambda", "gap"}, {}};
    json rows = json::array();
    for (const auto& s : traj.snapshots) {
        const auto e = entropy(s.curve, eo);
        tab.add_row({s.t, e.value, e.x0.x, e.x0.y, e.lambda, e.gap});
        rows.push_back({{"t", num(s.t)},
                        {"entropy", num(e.value)},
                        {"x0", nums({e.x0.x, e.x0.y})},
                        {"lambda", num(e.lambda)},
                        {"grid_value", num(e.grid_value)},
                        {"gap", num(e.gap)},
                        {"iterations", e.iterations}});
        std::cout << "t = " << fmt12(s.t) << "  entropy = " << fmt12(e.value) << '\n';
    }
    write_json(out, {{"series", std::move(rows)}});
    tab.write_csv(csv);
    return 0;
}

int cmd_spectral(Context& ctx)
{
    const Config& c = ctx.cfg;
    const auto spec = trombone_spec(c);
    const int sheet = static_cast<int>(c.get_int("sheet", 1, 0, 1000));
    SheetRunOptions so;
    so.tau_start = c.get_double("tau_start", so.tau_start);
    so.tau_end = c.get_double("tau_end", so.tau_end);
    so.snapshots = static_cast<int>(c.get_int("snapshots", so.snapshots, 10, 100000));
    so.grid = static_cast<std::size_t>(c.get_int("grid", static_cast<long>(so.grid), 101, 10000000));
    so.nodes = static_cast<std::size_t>(c.get_int("nodes", static_cast<long>(so.nodes), 101, 10000000));
    const double mu = c.get_double("mu", 0.4, 0.0, 10.0);
    const fs::path out = output_path(ctx, c.get_string("output", "spectral.json"));
    const fs::path csv = output_path(ctx, c.get_string("series", "spectral.csv"));
    c.finish();

    const auto eb = eigenbasis_check();
    const auto run = trombone_sheet_run(spec, sheet, so);
    const auto series = spectral_series(run);
    const auto track = mode_track(series.states, series.e_inner);
    const auto mz = mz_classify(series.states, mu);
    HypothesisOptions ho;
    ho.mu = mu;
    const auto hyp = hypotheses_check(run.samples, ho);

    Table tab{{"tau", "rho", "alpha1", "alpha2", "alpha3", "Wplus", "W0", "Wminus"}, {}};
    json states = json::array();
    for (const auto& s : series.states) {
        tab.add_row({s.tau, s.rho, s.alpha1, s.alpha2, s.alpha3, s.Wplus, s.W0, s.Wminus});
        states.push_back({{"tau", num(s.tau)}, {"rho", num(s.rho)}, {"alpha", nums({s.alpha1, s.alpha2, s.alpha3})},
                          {"Wplus", num(s.Wplus)}, {"W0", num(s.W0)}, {"Wminus", num(s.Wminus)}});
    }
    json checks = json::array();
    for (const auto& h : hyp.checks) checks.push_back({{"name", h.name}, {"margin", num(h.margin)}, {"pass", h.pass}});
    json report{{"sheet", sheet},
                {"mu", num(mu)},
                {"eigenbasis", {{"orthonormality", num(eb.orthonormality)}, {"residual", nums({eb.residual[0], eb.residual[1], eb.residual[2]})}}},
                {"mz", {{"verdict", to_string(mz.verdict)}, {"tail", mz.tail}}},
                {"mode_residual", nums({track.max_residual[0], track.max_residual[1], track.max_residual[2]})},
                {"hypotheses", std::move(checks)},
                {"states", std::move(states)}};
    if (mz.verdict == MZVerdict::UnstableDominant) {
        const auto sl = sharp_limit_fit(series.states, mu);
        report["sharp_limit"] = {{"a", num(sl.a)}, {"spread", num(sl.spread)}, {"bound_holds", sl.bound_holds}};
        std::cout << "sharp limit a = " << fmt12(sl.a) << '\n';
    }
    write_json(out, report);
    tab.write_csv(csv);
    std::cout << "sheet " << sheet << ": " << to_string(mz.verdict) << " over " << series.states.size() << " states\n";
    return 0;
}

int cmd_fit(Context& ctx)
{
    const Config& c = ctx.cfg;
    const auto traj = read_trajectory(input_path(ctx, c.require_string("input")));
    const int finger = static_cast<int>(c.get_int("finger", 1, 1, 100000));
    const double fit_from = c.get_double("fit_from", 0.5, 0.0, 0.99);
    const fs::path out = output_path(ctx, c.get_string("output", "fit.json"));
    const fs::path csv = output_path(ctx, c.get_string("series", "fit.csv"));
    c.finish();

    const auto area = area_series(traj, finger, fit_from);
    const auto best = fit_best_reaper(traj, finger, fit_from);
    const auto tip = tip_limit_check(traj, finger, best.b);
    Table tab{{"t", "area", "symmetric_difference", "tip_residual"}, {}};
    for (std::size_t i = 0; i < area.t.size(); ++i)
        tab.add_row({area.t[i], area.area[i], best.symmetric_difference[i], tip.residual[i]});
    write_json(out, {{"finger", finger},
                     {"area", {{"slope", num(area.slope)}, {"intercept", num(area.intercept)}, {"r2", num(area.r2)}, {"residual", num(area.residual)}}},
                     {"best_reaper", {{"b", num(best.b)}, {"C0", num(best.C0)}, {"aLo", num(best.reaper.aLo)}, {"aHi", num(best.reaper.aHi)},
                                      {"pointing", best.reaper.pointing == Pointing::Right ? "right" : "left"}}},
                     {"tip_limit", {{"verdict", to_string(tip.verdict)}, {"final_residual", num(tip.final_residual)}}}});
    tab.write_csv(csv);
    std::cout << "finger " << finger << ": slope " << fmt12(area.slope) << ", b = " << fmt12(best.b) << ", tip limit "
              << to_string(tip.verdict) << '\n';
    return 0;
}

// ---------------------------------------------------------------- verify

struct CheckResult {
    Verdict verdict = Verdict::NotApplicable;
    std::string summary;
    json detail = json::object();
};

FlowTrajectory static_line(const FlowTrajectory& like, double height)
{
    double lo = 0, hi = 0;
    for (const auto& s : like.snapshots)
        for (const auto& p : s.curve.points()) {
            lo = std::min(lo, p.x);
            hi = std::max(hi, p.x);
        }
    FlowTrajectory line;
    const PlanarCurve c = line_samples(height, lo - 10, hi + 10, 2001);
    for (const auto& s : like.snapshots) line.append({s.t, c});
    return line;
}

Verdict pass_if(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

int cmd_verify(Context& ctx)
{
    const Config& c = ctx.cfg;
    const auto checks = c.get_words("checks", {});
    const std::string input = c.get_string("input", "");
    const std::string reference = c.get_string("reference", "");
    const auto a = c.get_list("a", {});
    const auto b = c.get_list("b", {});
    const std::string tail = c.get_string("tail", "left");
    const int finger = static_cast<int>(c.get_int("finger", 1, 1, 100000));
    const double t_cut = c.get_double("t_cut", INFINITY);
    const double delta = c.get_double("delta", 0.1, 1e-12, 1e6);
    const double lambda = c.get_double("lambda", 0.0, 0.0, 1e12);
    const double tolerance = c.get_double("tolerance", 1e-3, 0.0, 1e6);
    const double line_height = c.get_double("line_height", -1.0);
    const double mu = c.get_double("mu", 0.4, 0.0, 10.0);
    const double zlo = c.get_double("zlo", a.empty() ? 0.0 : a.front() + 1e-9);
    const double zhi = c.get_double("zhi", a.empty() ? 1.0 : a.back() - 1e-9);
    const fs::path out = output_path(ctx, c.get_string("output", "verify.json"));
    c.finish();

    static const std::vector<std::string> known{"strip", "vertex", "height", "area", "best_reaper", "tip_limit",
                                                "mz", "l1", "avoidance", "slope"};
    for (const auto& name : checks)
        require(std::find(known.begin(), known.end(), name) != known.end(), ErrorKind::Config,
                "verify: unknown check '" + name + "'");
    FlowTrajectory traj;
    if (!checks.empty()) traj = read_trajectory(input_path(ctx, input.empty() ? c.require_string("input") : input));

    json results = json::array();
    bool all = true;
    for (const auto& name : checks) {
        CheckResult r;
        try {
            if (name == "strip") {
                require(!a.empty(), ErrorKind::Config, "strip needs the asymptotes 'a'");
                const auto s = strip_confinement(traj, a);
                r.verdict = s.verdict;
                r.summary = "A = " + fmt12(s.A) + ", min margin " + fmt12(*std::min_element(s.margin.begin(), s.margin.end()));
                r.detail = {{"A", num(s.A)}, {"t", nums(s.t)}, {"margin", nums(s.margin)}, {"finger_margin", nums(s.finger_margin)}};
            } else if (name == "vertex") {
                const auto v = vertex_asymptotics(traj, finger, t_cut);
                r.verdict = pass_if(v.kappa_ratio >= 0.98 && v.theta_error <= 0.05 && v.speed_error <= 0.02);
                r.summary = "kappa ratio " + fmt12(v.kappa_ratio) + ", theta error " + fmt12(v.theta_error) +
                            ", speed error " + fmt12(v.speed_error);
                r.detail = {{"t", nums(v.t)}, {"kappa", nums(v.kappa)}, {"theta", nums(v.theta)}, {"speed", nums(v.speed)},
                            {"expected_kappa", num(v.expected_kappa)}, {"strip_bound", num(v.strip_bound)}};
            } else if (name == "height") {
                require(a.size() >= 3, ErrorKind::Config, "height needs the asymptotes 'a' of a trombone");
                const auto& cur = traj.back().curve;
                bool ok = true;
                json fits = json::array();
                for (std::size_t i = 1; i + 1 < a.size(); ++i) {
                    const auto [x, u] = sheet_samples(cur, static_cast<int>(i));
                    const auto f = height_decay_fit(x, u, a[i], tip_abscissae(cur), 1.0, 0.5, 1e-11);
                    ok = ok && f.pass;
                    fits.push_back({{"sheet", i}, {"beta", num(f.beta)}, {"r2", num(f.r2)}, {"pass", f.pass}});
                }
                r.verdict = pass_if(ok);
                r.summary = std::to_string(fits.size()) + " interior sheets";
                r.detail = {{"fits", std::move(fits)}};
            } else if (name == "area") {
                const auto s = area_series(traj, finger);
                r.verdict = pass_if(std::abs(s.slope / -kPi - 1.0) <= 0.01);
                r.summary = "slope " + fmt12(s.slope);
                r.detail = {{"slope", num(s.slope)}, {"intercept", num(s.intercept)}, {"r2", num(s.r2)}};
            } else if (name == "best_reaper") {
                const auto f = fit_best_reaper(traj, finger);
                r.verdict = Verdict::Pass;
                r.summary = "b = " + fmt12(f.b);
                r.detail = {{"b", num(f.b)}, {"C0", num(f.C0)}, {"symmetric_difference", nums(f.symmetric_difference)}};
            } else if (name == "tip_limit") {
                const auto f = fit_best_reaper(traj, finger);
                const auto t = tip_limit_check(traj, finger, f.b);
                r.verdict = t.verdict;
                r.summary = "final residual " + fmt12(t.final_residual);
                r.detail = {{"t", nums(t.t)}, {"residual", nums(t.residual)}};
            } else if (name == "mz") {
                require(a.size() >= 2, ErrorKind::Config, "mz needs the trombone heights 'a'");
                TromboneSpec spec{a, b.empty() ? std::vector<double>(a.size() - 1, 0.0) : b, pointing_of(tail)};
                const auto series = spectral_series(trombone_sheet_run(spec, finger < static_cast<int>(a.size()) ? finger : 1));
                const auto m = mz_classify(series.states, mu);
                r.verdict = pass_if(m.verdict == MZVerdict::UnstableDominant);
                r.summary = to_string(m.verdict);
                r.detail = {{"verdict", to_string(m.verdict)}, {"tail", m.tail}};
            } else if (name == "l1") {
                if (reference.empty()) {
                    r.summary = "no reference trajectory";
                } else {
                    const auto ref = read_trajectory(input_path(ctx, reference));
                    const auto l = l1_contraction_check(traj, ref, zlo, zhi);
                    r.verdict = l.verdict;
                    r.summary = "worst relative increase " + fmt12(l.worst_increase);
                    r.detail = {{"t", nums(l.t)}, {"A", nums(l.A)}};
                }
            } else if (name == "avoidance") {
                const auto av = avoidance_check(traj, static_line(traj, line_height), tolerance);
                r.verdict = av.verdict;
                r.summary = "initial distance " + fmt12(av.distance.front()) + ", min " +
                            fmt12(*std::min_element(av.distance.begin(), av.distance.end()));
                r.detail = {{"t", nums(av.t)}, {"distance", nums(av.distance)}};
            } else if (name == "slope") {
                double L = lambda;
                // the fitted value is an infimum: the farthest offending point sits exactly on |x1| = Lambda sqrt(-t)
                if (L <= 0.0) L = asymptotic_slope_check(traj, delta, 0.0).lambda_fit * (1 + 1e-9);
                const auto s = asymptotic_slope_check(traj, delta, L);
                r.verdict = s.verdict;
                r.summary = "Lambda " + fmt12(L) + ", max ratio " +
                            (s.max_ratio.empty() ? std::string("n/a") : fmt12(*std::max_element(s.max_ratio.begin(), s.max_ratio.end())));
                r.detail = {{"lambda", num(L)}, {"t", nums(s.t)}, {"max_ratio", nums(s.max_ratio)}};
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Config) throw;
            r.verdict = Verdict::Fail;
            r.summary = e.what();
        }
        all = all && r.verdict != Verdict::Fail;
        std::cout << name << ": " << to_string(r.verdict) << "  " << r.summary << '\n';
        results.push_back({{"name", name}, {"verdict", to_string(r.verdict)}, {"summary", r.summary}, {"detail", std::move(r.detail)}});
    }
    write_json(out, {{"all_pass", all}, {"checks", std::move(results)}});
    return all ? 0 : 1;
}

// ---------------------------------------------------------------- plot

int cmd_plot(Context& ctx)
{
    const Config& c = ctx.cfg;
    const std::string kind = c.require_string("kind");
    const fs::path out = output_path(ctx, c.get_string("output", kind + ".svg"));
    if (kind == "curve") {
        const auto traj = read_trajectory(input_path(ctx, c.require_string("input")));
        const std::string reference = c.get_string("reference", "");
        const auto times = c.get_list("times", {});
        c.finish();
        SvgPlot p("curves", "x1", "x2");
        std::vector<std::size_t> idx;
        if (times.empty()) {
            idx.push_back(traj.size() - 1);
        } else {
            for (double t : times) idx.push_back(traj.nearest(t));
        }
        static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b"};
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const auto& s = traj[idx[k]];
            std::vector<double> x, y;
            for (const auto& q : s.curve.points()) {
                x.push_back(q.x);
                y.push_back(q.y);
            }
            if (s.curve.closed() && !x.empty()) {
                x.push_back(x.front());
                y.push_back(y.front());
            }
            p.add_line(x, y, colors[k % 5], "t = " + fmt12(s.t));
        }
        if (!reference.empty()) {
            const auto ref = read_trajectory(input_path(ctx, reference));
            const auto& s = ref[ref.nearest(traj[idx.back()].t)];
            std::vector<double> x, y;
            for (const auto& q : s.curve.points()) {
                x.push_back(q.x);
                y.push_back(q.y);
            }
            p.add_line(x, y, "#d62728", "reference t = " + fmt12(s.t), true);
        }
        p.write(out);
    } else if (kind == "area") {
        const auto traj = read_trajectory(input_path(ctx, c.require_string("input")));
        const int finger = static_cast<int>(c.get_int("finger", 1, 1, 100000));
        c.finish();
        const auto s = area_series(traj, finger);
        SvgPlot p("finger area", "t", "|F|");
        p.add_line(s.t, s.area, "#1f77b4", "finger " + std::to_string(finger));
        // guide of slope -pi through the first sample
        std::vector<double> g;
        for (double t : s.t) g.push_back(s.area.front() - kPi * (t - s.t.front()));
        p.add_line(s.t, g, "#d62728", "slope -pi", true);
        p.write(out);
    } else if (kind == "modes") {
        const fs::path in = input_path(ctx, c.require_string("input"));
        const double mu = c.get_double("mu", 0.4, 0.0, 10.0);
        c.finish();
        std::ifstream is(in);
        require(static_cast<bool>(is), ErrorKind::Io, "cannot read " + in.string());
        json j;
        try {
            j = json::parse(is);
        } catch (const json::exception& e) {
            fail(ErrorKind::Io, "malformed spectral report " + in.string() + ": " + e.what());
        }
        std::vector<double> tau, ratio, env;
        for (const auto& s : j.at("states")) {
            const double wp = s.at("Wplus").get<double>(), w0 = s.at("W0").get<double>(), wm = s.at("Wminus").get<double>();
            const double t = s.at("tau").get<double>();
            tau.push_back(t);
            ratio.push_back(wp / (w0 + wm));
            env.push_back(std::exp(-mu * t / 2));
        }
        SvgPlot p("mode ratio", "tau", "W+ / (W0 + W-)", true);
        p.add_line(tau, ratio, "#1f77b4", "W+ / (W0 + W-)");
        p.add_line(tau, env, "#d62728", "exp(-mu tau / 2)", true);
        p.write(out);
    } else {
        fail(ErrorKind::Config, "plot: unknown kind '" + kind + "' (curve, area, modes)");
    }
    std::cout << "wrote " << out.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"csflab: curve shortening flow experiments"};
    app.require_subcommand(1);
    std::string config_path;
    std::vector<std::string> overrides;
    const std::pair<const char*, int (*)(Context&)> commands[] = {
        {"exact", cmd_exact}, {"evolve", cmd_evolve}, {"spectral", cmd_spectral}, {"entropy", cmd_entropy},
        {"fit", cmd_fit},     {"verify", cmd_verify}, {"plot", cmd_plot},
    };
    const char* help[] = {"write an exact solution", "run the flow", "rescaled sheet spectral analysis",
                          "entropy of snapshots", "area law and best fitting reaper", "run a battery of checks",
                          "render SVG plots"};
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        auto* sub = app.add_subcommand(commands[i].first, help[i]);
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_option("--set", overrides, "override key=value (repeatable)");
        subs.push_back(sub);
    }
    CLI11_PARSE(app, argc, argv);

    try {
        Context ctx;
        const char* root = std::getenv(kRootEnv);
        ctx.root = root && *root ? fs::path(root) : fs::current_path();
        ctx.cfg = config_path.empty() ? Config::parse("", "--set") : Config::load(config_path);
        for (const auto& o : overrides) ctx.cfg.set(o);
        for (std::size_t i = 0; i < subs.size(); ++i)
            if (subs[i]->parsed()) return commands[i].second(ctx);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::Config ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
