#include "csf/error.hpp"
#include "csf/exact.hpp"
#include "csf/functionals.hpp"

#include "gen.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace csf;
using std::numbers::pi;

namespace {

double phi1(double) { return 1.0; }
double phi2(double y) { return y / std::sqrt(2.0); }
double phi3(double y) { return (y * y - 2.0) / std::pow(2.0, 1.5); }

PlanarCurve ellipse(double a, double b, std::size_t n)
{
    std::vector<Vec2> p;
    for (std::size_t i = 0; i < n; ++i) {
        const double th = 2 * pi * static_cast<double>(i) / static_cast<double>(n);
        p.push_back({a * std::cos(th), b * std::sin(th)});
    }
    return PlanarCurve(p, Topology::Closed, true);
}

PlanarCurve transform(const PlanarCurve& c, double angle, Vec2 shift, double scale = 1.0)
{
    std::vector<Vec2> p;
    const double cs = std::cos(angle), sn = std::sin(angle);
    for (const Vec2& q : c.points()) p.push_back(Vec2{cs * q.x - sn * q.y, sn * q.x + cs * q.y} * scale + shift);
    return PlanarCurve(p, c.topology(), c.embedded());
}

PlanarCurve reaper_finger(const GrimReaperSpec& s, double t, double smax, std::size_t n)
{
    std::vector<Vec2> p;
    for (std::size_t i = 0; i < n; ++i)
        p.push_back(grim_reaper_arc(s, t, -smax + 2 * smax * static_cast<double>(i) / static_cast<double>(n - 1)));
    return PlanarCurve(p, Topology::Open, true);
}

// area right of the axis under V(z) = log cos(k(z - mid))/k - k t + b, by quadrature of the closed form
double reaper_area_oracle(const GrimReaperSpec& s, double t)
{
    const double k = s.k();
    boost::math::quadrature::tanh_sinh<double> q;
    auto v = [&](double z) { return std::max(0.0, std::log(std::cos(k * (z - s.mid()))) / k - k * t + s.b); };
    return q.integrate(v, s.aLo, s.aHi);
}

} // namespace

TEST_CASE("gaussian inner product of the eigenbasis")
{
    CHECK(gaussian_inner(phi1, phi1) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gaussian_inner([](double y) { return y; }, [](double y) { return y; }) == doctest::Approx(2.0).epsilon(1e-13));
    auto q = [](double y) { return y * y - 2; };
    CHECK(gaussian_inner(q, q) == doctest::Approx(8.0).epsilon(1e-13));
    CHECK(std::abs(gaussian_inner(phi1, phi2)) < 1e-12);
    CHECK(std::abs(gaussian_inner(phi1, phi3)) < 1e-12);
    CHECK(std::abs(gaussian_inner(phi2, phi3)) < 1e-12);
    CHECK(gaussian_inner(phi3, phi3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gaussian inner product is exact on polynomials of degree 40")
{
    // E y^{2j} for y ~ N(0, 2) is 2^j (2j - 1)!!
    double moment = 1.0;
    for (int j = 1; j <= 20; ++j) {
        moment *= 2.0 * (2 * j - 1);
        const double got = gaussian_inner([j](double y) { return std::pow(y, j); }, [j](double y) { return std::pow(y, j); });
        CHECK(got == doctest::Approx(moment).epsilon(1e-11));
    }
}

TEST_CASE("gaussian inner product: symmetry, bilinearity, positivity")
{
    for (int trial = 0; trial < 50; ++trial) {
        double c[3][4];
        for (auto& row : c)
            for (double& v : row) v = gen::uniform(-2, 2);
        auto poly = [&](int r) { return [&, r](double y) { return c[r][0] + y * (c[r][1] + y * (c[r][2] + y * c[r][3])); }; };
        const auto f = poly(0), g = poly(1), h = poly(2);
        const double a = gen::uniform(-3, 3);
        CHECK(gaussian_inner(f, g) == doctest::Approx(gaussian_inner(g, f)).epsilon(1e-12));
        const double lhs = gaussian_inner([&](double y) { return a * f(y) + h(y); }, g);
        CHECK(lhs == doctest::Approx(a * gaussian_inner(f, g) + gaussian_inner(h, g)).epsilon(1e-10).scale(1.0));
        CHECK(gaussian_inner(f, f) > 0.0);
    }
}

TEST_CASE("sampled gaussian inner product")
{
    std::vector<double> y, f, g;
    for (int j = 0; j <= 4000; ++j) {
        const double v = -20 + 40.0 * j / 4000;
        y.push_back(v);
        f.push_back(phi3(v));
        g.push_back(phi3(v));
    }
    CHECK(gaussian_inner(y, f, g) == doctest::Approx(1.0).epsilon(1e-10));
    f[10] = std::nan("");
    CHECK_THROWS_AS(gaussian_inner(y, f, g), Error);
    CHECK_THROWS_AS(gaussian_inner([](double) { return INFINITY; }, phi1), Error);
}

TEST_CASE("entropy of a unit circle")
{
    // oracle: maximize (4 pi l)^{-1/2} exp(-1/(4 l)) 2 pi over a dense grid
    double oracle = 0.0;
    for (int i = 1; i <= 200000; ++i) {
        const double l = 2.0 * i / 200000;
        oracle = std::max(oracle, 2 * pi * std::exp(-1 / (4 * l)) / std::sqrt(4 * pi * l));
    }
    CHECK(oracle == doctest::Approx(std::sqrt(2 * pi / std::exp(1.0))).epsilon(1e-9));
    const auto e = entropy(shrinking_circle(1, 0, 1024));
    CHECK(e.value == doctest::Approx(oracle).epsilon(1e-3));
    CHECK(e.lambda == doctest::Approx(0.5).epsilon(1e-2));
    CHECK(norm(e.x0) < 1e-4);
    CHECK(e.value >= e.grid_value);
    CHECK(e.gap <= 1e-4);
}

TEST_CASE("entropy of a line window is one")
{
    const auto e = entropy(line_samples(0.3, -1000, 1000, 4001));
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(e.value >= 1.0 - 1e-3);
    CHECK(e.lambda > 0.0);
}

TEST_CASE("entropy is invariant under rigid motion and covariant under scaling")
{
    const auto c = ellipse(1.5, 0.7, 600);
    const auto base = entropy(c);
    for (int trial = 0; trial < 3; ++trial) {
        const double ang = gen::uniform(0, 2 * pi);
        const Vec2 shift{gen::uniform(-5, 5), gen::uniform(-5, 5)};
        CHECK(entropy(transform(c, ang, shift)).value == doctest::Approx(base.value).epsilon(1e-6));
    }
    const double s = 2.5;
    const auto scaled = entropy(transform(c, 0, {}, s));
    CHECK(scaled.value == doctest::Approx(base.value).epsilon(1e-6));
    CHECK(scaled.lambda == doctest::Approx(s * s * base.lambda).epsilon(1e-3));
    CHECK(distance(scaled.x0, base.x0 * s) < 1e-3 * s);
}

TEST_CASE("entropy of a three sheet trombone")
{
    const TromboneSpec spec{{0, 1, 2}, {0, 0}, Pointing::Left};
    const auto e = entropy(trombone_initial(spec, -100));
    CHECK(e.value >= 2.9);
    CHECK(e.value <= 3.0);
}

TEST_CASE("total curvature")
{
    CHECK(total_curvature(shrinking_circle(1, 0, 512)) == doctest::Approx(2 * pi).epsilon(1e-4));
    const GrimReaperSpec r{0, 1, 0, Pointing::Right};
    const auto reaper = grim_reaper_curve(r, 0, 0.5 - 1e-6, 4000);
    CHECK(total_curvature(reaper) == doctest::Approx(pi).epsilon(1e-3));
    const TromboneSpec spec{{0, 1, 2}, {0, 0}, Pointing::Left};
    CHECK(total_curvature(trombone_initial(spec, -50)) == doctest::Approx(2 * pi).epsilon(0.02));
}

TEST_CASE("finger area of a half disk")
{
    std::vector<Vec2> p;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) {
        const double th = -pi / 2 + pi * i / n;
        p.push_back({std::cos(th), std::sin(th)});
    }
    p.front().x = 0.0;
    p.back().x = 0.0;
    const PlanarCurve half(p, Topology::Open, true);
    CHECK(finger_area(half) == doctest::Approx(pi / 2).epsilon(1e-6));
}

TEST_CASE("finger area of an exact reaper")
{
    const GrimReaperSpec r{0, 1, 0, Pointing::Right};
    const auto arc = reaper_finger(r, -10, 40, 20001);
    const double oracle = reaper_area_oracle(r, -10);
    CHECK(oracle == doctest::Approx(10 * pi - std::log(2.0) / pi).epsilon(1e-12));
    CHECK(finger_area(arc) == doctest::Approx(oracle).epsilon(1e-4));
    const auto fingers = finger_regions(arc);
    REQUIRE(fingers.size() == 1);
    CHECK(fingers[0].area == doctest::Approx(oracle).epsilon(1e-4));
    CHECK(fingers[0].pointing == Pointing::Right);
    CHECK(fingers[0].tip.x == doctest::Approx(10 * pi).epsilon(1e-9));
    CHECK(fingers[0].tip.y == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fingers[0].vertex_kappa == doctest::Approx(pi).epsilon(1e-4));
    CHECK(fingers[0].aLo == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(fingers[0].aHi == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("finger area needs exactly two axis crossings")
{
    const GrimReaperSpec r{0, 1, 0, Pointing::Right};
    const auto arc = reaper_finger(r, -10, 5, 200); // never reaches the axis
    try {
        finger_area(arc);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RegionUndefined);
    }
}

TEST_CASE("trombone finger regions")
{
    const TromboneSpec spec{{0, 1, 2}, {0, 0}, Pointing::Left};
    const auto c = trombone_initial(spec, -20);
    const auto f = finger_regions(c);
    REQUIRE(f.size() == 2);
    CHECK(f[0].pointing == Pointing::Right);
    CHECK(f[1].pointing == Pointing::Left);
    CHECK(f[0].tip.x == doctest::Approx(20 * pi).epsilon(1e-6));
    CHECK(f[1].tip.x == doctest::Approx(-20 * pi).epsilon(1e-6));
    CHECK(f[0].area == doctest::Approx(20 * pi - std::log(2.0) / pi).epsilon(1e-4));
    CHECK(f[1].area == doctest::Approx(f[0].area).epsilon(1e-9));
}

TEST_CASE("area series of exact reapers")
{
    const GrimReaperSpec r{0, 1, 0, Pointing::Right};
    const GrimReaperSpec shifted{0, 1, 0.3, Pointing::Right};
    FlowTrajectory a, b;
    for (int i = 0; i <= 20; ++i) {
        const double t = -10 + 0.25 * i;
        a.append({t, reaper_finger(r, t, 40, 8001), Scheme::SemiImplicit, 0.0});
        b.append({t, reaper_finger(shifted, t, 40, 8001), Scheme::SemiImplicit, 0.0});
    }
    const auto sa = area_series(a, 1);
    const auto sb = area_series(b, 1);
    CHECK(sa.slope == doctest::Approx(-pi).epsilon(1e-3));
    CHECK(sa.residual <= 1e-4);
    CHECK(sb.intercept - sa.intercept == doctest::Approx(0.3).epsilon(1e-3));
    CHECK(sa.t.size() == 21);
    CHECK_THROWS_AS(area_series(a, 2), Error);
}

TEST_CASE("area series loses a finger")
{
    const GrimReaperSpec r{0, 1, 0, Pointing::Right};
    FlowTrajectory traj;
    traj.append({-10, reaper_finger(r, -10, 40, 2001), Scheme::SemiImplicit, 0.0});
    traj.append({-9, reaper_finger(r, -9, 5, 2001), Scheme::SemiImplicit, 0.0});
    try {
        area_series(traj, 1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Tracking);
    }
}

TEST_CASE("l1 graph distance on sheets")
{
    SheetGraph v{GraphAxis::OverX2, 0, 2, std::vector<double>(201), 0, false};
    for (std::size_t j = 0; j < v.size(); ++j) v.u[j] = std::sin(v.x(j));
    SheetGraph w = v;
    CHECK(l1_graph_distance(v, w) == 0.0);
    for (double& u : w.u) u += 0.1;
    CHECK(l1_graph_distance(v, w) == doctest::Approx(0.2).epsilon(1e-12));
    SheetGraph other = v;
    other.hi = 3;
    CHECK_THROWS_AS(l1_graph_distance(v, other), Error);
    for (int trial = 0; trial < 50; ++trial) {
        SheetGraph p = v, q = v, r = v;
        for (std::size_t j = 0; j < v.size(); ++j) {
            p.u[j] = gen::uniform(-1, 1);
            q.u[j] = gen::uniform(-1, 1);
            r.u[j] = gen::uniform(-1, 1);
        }
        CHECK(l1_graph_distance(p, r) <= l1_graph_distance(p, q) + l1_graph_distance(q, r) + 1e-14);
    }
}

TEST_CASE("l1 graph distance between polylines is exact")
{
    auto graph = [](auto fn, int n, double lo, double hi) {
        std::vector<Vec2> p;
        for (int i = 0; i < n; ++i) {
            const double z = lo + (hi - lo) * i / (n - 1);
            p.push_back({fn(z), z});
        }
        return PlanarCurve(p, Topology::Open, true);
    };
    const auto a = graph([](double z) { return z; }, 9, -1, 1);
    const auto b = graph([](double z) { return -z; }, 13, -1, 1);
    CHECK(l1_graph_distance(a, b, -1, 1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(l1_graph_distance(a, reversed(b), -0.5, 1) == doctest::Approx(1.25).epsilon(1e-14));
    // fine sampling of smooth graphs against a trapezoid oracle
    const auto s = graph([](double z) { return std::sin(3 * z); }, 3001, 0, 2);
    const auto c = graph([](double z) { return 0.2 * z; }, 1501, 0, 2);
    double oracle = 0.0;
    const int m = 200000;
    for (int i = 0; i < m; ++i) {
        const double z = 2.0 * (i + 0.5) / m;
        oracle += std::abs(std::sin(3 * z) - 0.2 * z) * 2.0 / m;
    }
    CHECK(l1_graph_distance(s, c, 0, 2) == doctest::Approx(oracle).epsilon(1e-5));
    const auto bent = PlanarCurve({{0, 0}, {1, 1}, {2, 0.5}, {3, 2}, {4, 3}, {5, 4}, {6, 5}, {7, 6}}, Topology::Open, true);
    try {
        l1_graph_distance(bent, a, 0.2, 1.5);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GraphicalityLost);
    }
}

TEST_CASE("l1 graph distance across a flat run")
{
    // a staircase: x = z on (0, 1), a horizontal run at z = 1 from x = 1 to x = 5, then x = z + 4 on (1, 2)
    std::vector<Vec2> p;
    for (int i = 0; i <= 10; ++i) p.push_back({0.1 * i, 0.1 * i});
    for (int i = 1; i <= 8; ++i) p.push_back({1 + 0.5 * i, 1.0});
    for (int i = 1; i <= 10; ++i) p.push_back({5 + 0.1 * i, 1 + 0.1 * i});
    const PlanarCurve stair(p, Topology::Open, true);
    const PlanarCurve zero({{0, -1}, {0, -0.5}, {0, 0}, {0, 0.5}, {0, 1}, {0, 1.5}, {0, 2}, {0, 3}}, Topology::Open, true);
    // oracle: int_0^1 z dz + int_1^2 (z + 4) dz
    CHECK(l1_graph_distance(stair, zero, 1e-12, 2 - 1e-12) == doctest::Approx(0.5 + 5.5).epsilon(1e-10));
    CHECK(l1_graph_distance(stair, stair, 1e-12, 2 - 1e-12) == 0.0);
    // roundoff reversals on the run are tolerated
    p[12].y = 1 - 1e-14;
    CHECK(l1_graph_distance(PlanarCurve(p, Topology::Open, true), zero, 1e-12, 2 - 1e-12) == doctest::Approx(6.0).epsilon(1e-10));
}
