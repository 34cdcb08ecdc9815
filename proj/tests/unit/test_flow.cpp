#include "csf/curve.hpp"
#include "csf/error.hpp"
#include "csf/exact.hpp"
#include "csf/flow.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace csf;
using std::numbers::pi;

namespace {

double mean_radius(const PlanarCurve& c)
{
    Vec2 ctr;
    for (const auto& p : c.points()) ctr += p;
    ctr = ctr / static_cast<double>(c.size());
    double r = 0;
    for (const auto& p : c.points()) r += distance(p, ctr);
    return r / c.size();
}

// reaper arc with endpoints slaved to the exact translate
EndpointFn reaper_ends(const GrimReaperSpec& spec, double S)
{
    return [spec, S](double t, int which, Vec2) { return grim_reaper_arc(spec, t, which == 0 ? -S : S); };
}

} // namespace

TEST_CASE("one step of a circle moves at speed 1/r")
{
    const auto c = shrinking_circle(1.0, 0.0, 512);
    for (Scheme s : {Scheme::Explicit, Scheme::SemiImplicit}) {
        const auto out = step_parametric({0.0, c, s, 0.0}, 1e-6, s);
        CHECK(std::abs(mean_radius(out.curve) - (1 - 1e-6)) < 1e-9);
    }
}

TEST_CASE("explicit stepping enforces the stability bound")
{
    const auto c = shrinking_circle(1.0, 0.0, 512);
    CHECK_THROWS_AS(step_parametric({0.0, c, Scheme::Explicit, 0.0}, 1e-3, Scheme::Explicit), Error);
}

TEST_CASE("a line is a fixed point")
{
    const auto c = line_samples(0.7, -3, 3, 64);
    const auto out = step_parametric({0.0, c, Scheme::SemiImplicit, 0.0}, 1e-2, Scheme::SemiImplicit);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(distance(out.curve[i], c[i]) <= 1e-14);
}

TEST_CASE("grim reaper translates")
{
    const GrimReaperSpec spec{-pi / 2, pi / 2, 0, Pointing::Right}; // k = 1
    const double S = grim_reaper_arclength(spec, 1.3);
    const auto c = grim_reaper_curve(spec, 0.0, 1.3, 2048);
    FlowOptions o;
    o.dt = 1e-5;
    o.end_fn = reaper_ends(spec, S);
    const auto traj = evolve(c, 0.0, 0.01, o);
    const auto exact = grim_reaper_curve(spec, 0.01, 1.3, 4096);
    CHECK(hausdorff_distance(traj.back().curve, exact) < 1e-4);
}

TEST_CASE("circle law, area rate and length decrease")
{
    FlowOptions o;
    o.scheme = Scheme::Explicit;
    o.dt = 1e-5;
    o.snapshot_every = 0.05;
    const auto traj = evolve(shrinking_circle(1.0, 0.0, 256), 0.0, 0.3, o);
    for (std::size_t i = 0; i < traj.size(); ++i)
        CHECK(std::abs(mean_radius(traj[i].curve) - std::sqrt(1 - 2 * traj[i].t)) < 1e-5);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double rate = (signed_area(traj[i].curve) - signed_area(traj[i - 1].curve)) / (traj[i].t - traj[i - 1].t);
        CHECK(std::abs(rate + 2 * pi) < 1e-3);
        CHECK(polyline_length(traj[i].curve) < polyline_length(traj[i - 1].curve));
    }
}

TEST_CASE("paper clip area decreases at rate 2 pi")
{
    FlowOptions o;
    o.dt = 1e-4;
    o.snapshot_every = 0.25;
    const auto traj = evolve(paperclip(-3.0, 1024), -3.0, -2.0, o);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double rate = (signed_area(traj[i].curve) - signed_area(traj[i - 1].curve)) / (traj[i].t - traj[i - 1].t);
        CHECK(std::abs(rate + 2 * pi) < 1e-3);
    }
    // compare against the closed form
    CHECK(hausdorff_distance(traj.back().curve, paperclip(-2.0, 2048)) < 1e-3);
}

TEST_CASE("graphical stepper: constants are stationary")
{
    SheetGraph g{GraphAxis::OverX1, -2, 2, std::vector<double>(101, 1.25), 0, false};
    const auto out = step_graphical(g, 0.01, GraphBC::dirichlet(1.25, 1.25));
    for (double v : out.u) CHECK(std::abs(v - 1.25) <= 1e-14);
}

TEST_CASE("graphical stepper: small sine decays like the heat equation")
{
    const double eps = 1e-3;
    const std::size_t n = 1024;
    SheetGraph g{GraphAxis::OverX1, 0, 2 * pi, std::vector<double>(n), 0, true};
    for (std::size_t j = 0; j < n; ++j) g.u[j] = eps * std::sin(g.x(j));
    const auto out = evolve_graphical(g, 0.1, 1e-4, GraphBC::periodic_bc());
    double worst = 0;
    for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(out.u[j] - eps * std::exp(-0.1) * std::sin(g.x(j))));
    CHECK(worst < 1e-8);
}

TEST_CASE("graphical stepper: grim reaper sheet over x1")
{
    const GrimReaperSpec spec{0, 1, 0, Pointing::Right};
    const double t0 = -1, t1 = -0.5;
    // lower branch behind the tip; the tip moves from pi to pi/2
    const double lo = -6, hi = 1.2;
    SheetGraph g{GraphAxis::OverX1, lo, hi, std::vector<double>(1301), t0, false};
    for (std::size_t j = 0; j < g.size(); ++j) g.u[j] = grim_reaper_branch(spec, t0, g.x(j), true);
    const auto bc = GraphBC::from_exact_tail([&](double t) {
        return std::pair{grim_reaper_branch(spec, t, lo, true), grim_reaper_branch(spec, t, hi, true)};
    });
    const auto out = evolve_graphical(g, t1, 1e-4, bc);
    double worst = 0;
    for (std::size_t j = 0; j < out.size(); ++j) worst = std::max(worst, std::abs(out.u[j] - grim_reaper_branch(spec, t1, out.x(j), true)));
    CHECK(worst < 1e-4);
}

TEST_CASE("graphical and parametric steppers agree on a shared sheet")
{
    // bump profile with pinned ends
    const double lo = -6, hi = 6;
    SheetGraph g{GraphAxis::OverX1, lo, hi, std::vector<double>(1201), 0, false};
    for (std::size_t j = 0; j < g.size(); ++j) g.u[j] = 0.5 * std::exp(-g.x(j) * g.x(j));
    const auto gout = evolve_graphical(g, 0.2, 1e-4, GraphBC::dirichlet(g.u.front(), g.u.back()));
    FlowOptions o;
    o.dt = 1e-4;
    o.resample_every = 50;
    const auto pout = evolve(sheet_curve(g), 0.0, 0.2, o);
    CHECK(hausdorff_distance(sheet_curve(gout), pout.back().curve) < 1e-3);
}

TEST_CASE("graphicality loss is reported")
{
    SheetGraph g{GraphAxis::OverX1, 0, 1, {0, 0, 10, 0, 0}, 0, false};
    try {
        step_graphical(g, 1e-3, GraphBC::dirichlet(0, 0));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GraphicalityLost);
    }
}

TEST_CASE("rescale")
{
    SheetGraph c{GraphAxis::OverX1, -10, 10, std::vector<double>(41, 1.5), -std::exp(2.0), false};
    const auto r = rescale(c);
    CHECK(r.tau == doctest::Approx(-2.0));
    for (double v : r.u) CHECK(v == doctest::Approx(1.5 * std::exp(-1.0)));
    CHECK(1.5 * std::exp(-1.0) == doctest::Approx(0.5518).epsilon(1e-4));

    SheetGraph lin{GraphAxis::OverX1, -10, 10, std::vector<double>(41), -3.7, false};
    for (std::size_t j = 0; j < lin.size(); ++j) lin.u[j] = 0.3 * lin.x(j);
    const auto rl = rescale(lin);
    for (std::size_t j = 0; j < rl.y.size(); ++j) CHECK(rl.u[j] == doctest::Approx(0.3 * rl.y[j]));

    const auto back = unrescale(rl);
    CHECK(std::abs(back.t - lin.t) < 1e-10);
    CHECK(std::abs(back.lo - lin.lo) < 1e-10);
    CHECK(std::abs(back.hi - lin.hi) < 1e-10);
    for (std::size_t j = 0; j < lin.size(); ++j) CHECK(std::abs(back.u[j] - lin.u[j]) < 1e-10);

    SheetGraph late = lin;
    late.t = 0.0;
    CHECK_THROWS_AS(rescale(late), Error);
    CHECK_THROWS_AS(rescale(lin, 100.0, 64), Error);
    const auto ru = rescale(lin, 2.0, 65);
    CHECK(ru.y.front() == doctest::Approx(-4.0));
    CHECK(ru.u[10] == doctest::Approx(0.3 * ru.y[10]));
}

TEST_CASE("avoidance: concentric circles separate")
{
    FlowOptions o;
    o.scheme = Scheme::Explicit;
    o.dt = 2e-5;
    o.snapshot_every = 0.1;
    const auto a = evolve(shrinking_circle(1.0, 0.0, 256), 0.0, 0.4, o);
    const auto b = evolve(shrinking_circle(2.0, 0.0, 512), 0.0, 0.4, o);
    const auto rep = avoidance_check(a, b);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.distance.front() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rep.distance.back() == doctest::Approx(std::sqrt(3.2) - std::sqrt(0.2)).epsilon(1e-3));
    const auto same = avoidance_check(a, a);
    CHECK(same.verdict == Verdict::NotApplicable);
    FlowTrajectory shorter;
    shorter.append(a[0]);
    CHECK_THROWS_AS(avoidance_check(a, shorter), Error);
}

TEST_CASE("embeddedness monitoring")
{
    // figure eight flagged as embedded is rejected
    std::vector<Vec2> eight(200);
    for (std::size_t i = 0; i < eight.size(); ++i) {
        const double a = 2 * pi * i / eight.size();
        eight[i] = {std::sin(a), std::sin(a) * std::cos(a)};
    }
    PlanarCurve c(eight, Topology::Closed, true);
    try {
        step_parametric({0.0, c, Scheme::SemiImplicit, 0.0}, 1e-5, Scheme::SemiImplicit);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmbeddednessViolation);
    }
}
