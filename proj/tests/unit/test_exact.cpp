#include "csf/curve.hpp"
#include "csf/error.hpp"
#include "csf/exact.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace csf;
using std::numbers::pi;

TEST_CASE("line sampler")
{
    const auto c = line_samples(0, -1, 1, 8);
    CHECK(c[0].x == -1.0);
    CHECK(c[7].x == 1.0);
    for (const auto& p : c.points()) CHECK(p.y == 0.0);
}

TEST_CASE("shrinking circle radius and extinction")
{
    CHECK(circle_radius(2, 1.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(shrinking_circle(1, 0.5), Error);
    try {
        shrinking_circle(1, 0.5);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ExtinctSolution);
    }
}

TEST_CASE("grim reaper closed form")
{
    const GrimReaperSpec s{0, 1, 0, Pointing::Right};
    CHECK(s.k() == doctest::Approx(pi));
    const Vec2 tip = grim_reaper_point(s, 0, 0);
    CHECK(tip.x == doctest::Approx(0.0));
    CHECK(tip.y == doctest::Approx(0.5));
    const Vec2 tip1 = grim_reaper_point(s, -1, 0);
    CHECK(tip1.x == doctest::Approx(pi));
    CHECK(grim_reaper_point(s, 0, 0.49).x == doctest::Approx(-1.1016).epsilon(1e-4));
    CHECK_THROWS_AS(grim_reaper_point(s, 0, 0.5), Error);

    // left pointing mirrors about the tip and moves the other way
    const GrimReaperSpec l{0, 1, 0, Pointing::Left};
    CHECK(grim_reaper_point(l, -1, 0).x == doctest::Approx(-pi));
    CHECK(grim_reaper_point(l, 0, 0.49).x == doctest::Approx(1.1016).epsilon(1e-4));
}

TEST_CASE("grim reaper arclength parametrization agrees with the graph form")
{
    const GrimReaperSpec s{-0.3, 1.7, 0.4, Pointing::Left};
    for (double z = -0.95; z <= 0.95; z += 0.05) {
        const Vec2 g = grim_reaper_point(s, -2.5, z);
        const Vec2 a = grim_reaper_arc(s, -2.5, grim_reaper_arclength(s, z));
        CHECK(distance(g, a) < 1e-12);
        // branch form over x1
        const bool lower = z < 0;
        CHECK(grim_reaper_branch(s, -2.5, g.x, lower) == doctest::Approx(g.y).epsilon(1e-10));
    }
}

TEST_CASE("paper clip intercepts and level set")
{
    const double t = -5;
    const auto c = paperclip(t, 512);
    double xmax = 0;
    for (const auto& p : c.points()) {
        CHECK(std::abs(paperclip_level(p, t)) < 1e-12);
        xmax = std::max(xmax, std::abs(p.x));
    }
    // x-intercepts at arccos(e^t); sampled max |x1| cannot exceed it
    const double xi = std::acos(std::exp(t));
    CHECK(xmax <= xi + 1e-12);
    CHECK(xmax > xi - 1e-4);
    CHECK(xi == doctest::Approx(pi / 2 - std::exp(t)).epsilon(1e-6));
    CHECK_THROWS_AS(paperclip(0.0), Error);
}

TEST_CASE("paper clip arcs approach grim reapers with the log 2 offset")
{
    // e^t cosh y = cos x  =>  |y| = -t + log cos x + log 2 - log(1 + e^{-2|y|})
    const double t = -30;
    const auto c = paperclip(t, 2048);
    for (const auto& p : c.points()) {
        if (std::abs(p.x) > 1.4) continue;
        const double asym = -t + std::log(std::cos(p.x)) + std::log(2.0);
        CHECK(std::abs(std::abs(p.y) - asym) < 1e-6);
    }
}

TEST_CASE("paper clip normal velocity equals curvature")
{
    // oracle: the normal velocity is measured by moving each point to the level set at t +- dt along the
    // gradient; curvature comes from implicit differentiation of F = cosh(y) e^t - cos(x).
    const double t = -3, dt = 1e-4;
    const auto c = paperclip(t, 512);
    double worst = 0;
    for (const auto& p : c.points()) {
        const Vec2 grad{std::sin(p.x), std::exp(t) * std::sinh(p.y)};
        const Vec2 nu = normalized(grad); // outward
        auto level_hit = [&](double tt) {
            double r = 0;
            for (int it = 0; it < 50; ++it) {
                const Vec2 q = p + r * nu;
                const double f = std::exp(tt) * std::cosh(q.y) - std::cos(q.x);
                const double df = dot(Vec2{std::sin(q.x), std::exp(tt) * std::sinh(q.y)}, nu);
                r -= f / df;
            }
            return r;
        };
        const double v = (level_hit(t + dt) - level_hit(t - dt)) / (2 * dt);
        // curvature of a level set: (Fxx Fy^2 - 2 Fxy Fx Fy + Fyy Fx^2)/|grad F|^3, positive for convex
        const double Fx = grad.x, Fy = grad.y;
        const double Fxx = std::cos(p.x), Fyy = std::exp(t) * std::cosh(p.y);
        const double kappa = (Fxx * Fy * Fy + Fyy * Fx * Fx) / std::pow(norm(grad), 3);
        // inward motion at speed kappa
        worst = std::max(worst, std::abs(-v - kappa));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("trombone initial data")
{
    TromboneSpec spec{{0, 1, 2}, {0, 0}, Pointing::Left};
    const auto c = trombone_initial(spec, -20);
    CHECK_FALSE(self_intersects(c).found);
    // graph over x2: ordinate increases monotonically along the curve
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i].y >= c[i - 1].y - 1e-12);
    // tips at b_i - sigma_i k t0
    CHECK(trombone_tip_x(spec, 1, -20) == doctest::Approx(20 * pi));
    CHECK(trombone_tip_x(spec, 2, -20) == doctest::Approx(-20 * pi));
    double xmax = -1e9, xmin = 1e9, ymax = 0;
    for (const auto& p : c.points()) {
        if (p.y > 0.25 && p.y < 0.75) xmax = std::max(xmax, p.x);
        if (p.y > 1.25 && p.y < 1.75) xmin = std::min(xmin, p.x);
        ymax = std::max(ymax, std::abs(p.y));
    }
    CHECK(std::abs(xmax - 20 * pi) < 1e-3);
    CHECK(std::abs(xmin + 20 * pi) < 1e-3);
    CHECK(ymax < 3.0);
}

TEST_CASE("symmetric trombone is symmetric")
{
    TromboneSpec spec{{0, 1, 2}, {0, 0}, Pointing::Left};
    const auto c = trombone_initial(spec, -20);
    const std::size_t n = c.size();
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 m{-c[n - 1 - i].x, 2 - c[n - 1 - i].y};
        worst = std::max(worst, distance(c[i], m));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("trombone gluing feasibility")
{
    TromboneSpec spec{{0, 1, 2}, {0, 0}, Pointing::Left};
    CHECK(trombone_tmin(spec) == doctest::Approx(10 / (2 * pi)));
    CHECK_THROWS_AS(trombone_initial(spec, -1.0), Error);
    TromboneSpec bad{{0, 2, 1}, {0, 0}, Pointing::Left};
    CHECK_THROWS_AS(trombone_initial(bad, -20), Error);
}

TEST_CASE("far reaper points lie on the closed form")
{
    const auto pts = unit_reaper_far_points(10.0L, 300 * std::numbers::pi_v<long double>, 201);
    REQUIRE(pts.size() == 201);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        const long double d = 10.0L + (300 * std::numbers::pi_v<long double> - 10.0L) * i / 200.0L;
        CHECK(std::abs(p.d - d) <= 1e-15L * d);
        // x = log cos(phi) and pi/2 - |phi| = asin(e^x)
        CHECK(std::abs(std::asin(std::exp(p.x)) - p.gap) <= 1e-15L * p.gap);
        CHECK((p.y > 0) == (i % 2 == 0));
    }
    CHECK(pts.back().gap < 1e-400L);
    CHECK_THROWS_AS(unit_reaper_far_points(1.0L, 5.0L, 10), Error);
}
