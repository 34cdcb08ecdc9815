#include "csf/curve.hpp"
#include "csf/error.hpp"
#include "csf/exact.hpp"
#include "gen.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace csf;
using std::numbers::pi;

namespace {

PlanarCurve circle(double r, std::size_t n, Vec2 c = {})
{
    std::vector<Vec2> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = c + Vec2{r * std::cos(2 * pi * i / n), r * std::sin(2 * pi * i / n)};
    return PlanarCurve(p, Topology::Closed, true);
}

// unit-width reaper graph x = log cos(kz)/k sampled uniformly in z
PlanarCurve reaper_by_height(double k, double zmax, std::size_t n)
{
    std::vector<Vec2> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = -zmax + 2 * zmax * i / (n - 1);
        p[i] = {std::log(std::cos(k * z)) / k, z};
    }
    return PlanarCurve(p, Topology::Open);
}

} // namespace

TEST_CASE("curve validation")
{
    std::vector<Vec2> few(5, Vec2{});
    CHECK_THROWS_AS(PlanarCurve(few, Topology::Open), Error);
    std::vector<Vec2> dup{{0, 0}, {1, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}, {6, 0}};
    CHECK_THROWS_AS(PlanarCurve(dup, Topology::Open), Error);
}

TEST_CASE("resample: circle gives equal chords")
{
    const auto c = resample_arclength(circle(1.0, 101), 16);
    const auto& p = c.points();
    double lo = 1e9, hi = 0;
    for (std::size_t i = 0; i < 16; ++i) {
        const double h = distance(p[i], p[(i + 1) % 16]);
        lo = std::min(lo, h);
        hi = std::max(hi, h);
        CHECK(norm(p[i]) == doctest::Approx(1.0).epsilon(1e-5));
    }
    CHECK((hi - lo) / hi < 1e-6);
}

TEST_CASE("resample: straight segment")
{
    std::vector<Vec2> p;
    for (int i = 0; i < 13; ++i) p.push_back({std::pow(i / 12.0, 2), 0});
    const auto c = resample_arclength(PlanarCurve(p, Topology::Open), 9);
    for (int k = 0; k < 9; ++k) {
        CHECK(c[k].x == doctest::Approx(k / 8.0).epsilon(1e-12));
        CHECK(std::abs(c[k].y) < 1e-15);
    }
}

TEST_CASE("resample: reaper arc length against adaptive quadrature")
{
    const double k = pi;
    const auto c = reaper_by_height(k, 0.45, 2000);
    const auto r = resample_arclength(c, 256);
    const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double z) { return std::sqrt(1 + std::pow(std::tan(k * z), 2)); }, -0.45, 0.45, 15, 1e-14);
    CHECK(std::abs(smooth_length(r) - oracle) / oracle < 1e-6);
    // endpoints preserved, spline arclength equispaced
    CHECK(r.points().front() == c.points().front());
    CHECK(r.points().back() == c.points().back());
    const CurveSpline sp(r);
    const auto& s = sp.knot_arclength();
    const double h = s.back() / 255;
    double worst = 0;
    for (std::size_t i = 1; i < s.size(); ++i) worst = std::max(worst, std::abs(s[i] - s[i - 1] - h) / h);
    CHECK(worst < 1e-6);
}

TEST_CASE("resample preserves length and is idempotent")
{
    for (int trial = 0; trial < 5; ++trial) {
        // smooth star-shaped closed curves
        const double e = gen::uniform(0.05, 0.25);
        const int f = gen::integer(2, 5);
        std::vector<Vec2> p(3000);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double a = 2 * pi * i / p.size();
            const double r = 1 + e * std::cos(f * a);
            p[i] = {r * std::cos(a), r * std::sin(a)};
        }
        const PlanarCurve c(p, Topology::Closed);
        const auto r1 = resample_arclength(c, 2048);
        CHECK(std::abs(smooth_length(r1) - smooth_length(c)) / smooth_length(c) < 1e-8);
        const auto r2 = resample_arclength(r1, 2048);
        double worst = 0;
        for (std::size_t i = 0; i < 2048; ++i) worst = std::max(worst, distance(r1[i], r2[i]));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("resample rejects degenerate input")
{
    CHECK_THROWS_AS(resample_arclength(circle(1, 64), 4), Error);
}

TEST_CASE("geometry: circle radius 2")
{
    const auto g = geometry(circle(2.0, 512));
    for (std::size_t i = 0; i < 512; ++i) {
        CHECK(std::abs(g.kappa[i] - 0.5) < 1e-4);
        CHECK(std::abs(norm(g.tangent[i]) - 1) < 1e-12);
    }
}

TEST_CASE("geometry: straight line")
{
    const auto g = geometry(line_samples(0.3, -2, 5, 40));
    for (double k : g.kappa) CHECK(std::abs(k) < 1e-10);
}

TEST_CASE("geometry: grim reaper tip curvature")
{
    // unit reaper k = 1: kappa = cos z
    GrimReaperSpec spec{-pi / 2, pi / 2, 0, Pointing::Right};
    const auto c = grim_reaper_curve(spec, 0, 1.4, 1024);
    const auto g = geometry(c);
    std::size_t tip = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (std::abs(c[i].y) < std::abs(c[tip].y)) tip = i;
    CHECK(std::abs(g.kappa[tip] - 1.0) < 1e-3);
    // kappa = cos z along the arc
    for (std::size_t i = 0; i < c.size(); i += 7) CHECK(std::abs(g.kappa[i] - std::cos(c[i].y)) < 2e-3);
}

TEST_CASE("geometry properties: theta lift, reversal, total turning")
{
    for (int trial = 0; trial < 5; ++trial) {
        const double e = gen::uniform(0.0, 0.3);
        const int f = gen::integer(2, 4);
        std::vector<Vec2> p(1024);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double a = 2 * pi * i / p.size();
            const double r = 1 + e * std::cos(f * a);
            p[i] = {r * std::cos(a), r * std::sin(a)};
        }
        const PlanarCurve c(p, Topology::Closed);
        const auto g = geometry(c);
        double total = 0;
        for (std::size_t i = 0; i < c.size(); ++i) total += g.kappa[i] * g.weight[i];
        CHECK(std::abs(total - 2 * pi) < 1e-6);

        double hmax = 0;
        for (std::size_t i = 1; i < c.size(); ++i) hmax = std::max(hmax, g.s[i] - g.s[i - 1]);
        for (std::size_t i = 1; i < c.size(); ++i) {
            CHECK(std::abs(g.theta[i] - g.theta[i - 1]) < pi);
            const double dth = (g.theta[i] - g.theta[i - 1]) / (g.s[i] - g.s[i - 1]);
            CHECK(std::abs(dth - 0.5 * (g.kappa[i] + g.kappa[i - 1])) < 50 * hmax);
        }

        const auto gr = geometry(reversed(c));
        const std::size_t n = c.size();
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(gr.kappa[n - 1 - i] == doctest::Approx(-g.kappa[i]).epsilon(1e-9));
            double d = std::fmod(gr.theta[n - 1 - i] - g.theta[i] - pi, 2 * pi);
            if (d > pi) d -= 2 * pi;
            if (d < -pi) d += 2 * pi;
            CHECK(std::abs(d) < 1e-9);
        }
    }
}

TEST_CASE("self intersection")
{
    CHECK_FALSE(self_intersects(circle(1, 200)).found);
    std::vector<Vec2> eight(400);
    for (std::size_t i = 0; i < eight.size(); ++i) {
        const double a = 2 * pi * i / eight.size();
        eight[i] = {std::sin(a), std::sin(a) * std::cos(a)};
    }
    const auto hit = self_intersects(PlanarCurve(eight, Topology::Closed));
    REQUIRE(hit.found);
    CHECK(norm(hit.point) < 1e-2);
}

TEST_CASE("hausdorff distance")
{
    const auto c = circle(1.0, 400);
    CHECK(hausdorff_distance(c, c) == 0.0);
    const double h = hausdorff_distance(circle(1.0, 2000), circle(1.1, 2000));
    CHECK(std::abs(h - 0.1) < 1e-3);
    // symmetric
    const auto a = circle(1.0, 300, {0.2, 0});
    const auto b = circle(1.3, 500);
    CHECK(hausdorff_distance(a, b) == doctest::Approx(hausdorff_distance(b, a)));
}

TEST_CASE("min distance between disjoint curves")
{
    const double d = min_distance(circle(1.0, 2000), line_samples(1.5, -3, 3, 100));
    CHECK(std::abs(d - 0.5) < 1e-5);
    CHECK(min_distance(circle(1.0, 200), line_samples(0.0, -3, 3, 100)) == 0.0);
}
