#include "csf/error.hpp"
#include "csf/functionals.hpp"
#include "csf/numeric.hpp"
#include "csf/spectral.hpp"

#include "gen.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace csf;
using std::numbers::pi;

namespace {

std::vector<double> grid(double lo, double hi, std::size_t n)
{
    std::vector<double> y(n);
    for (std::size_t j = 0; j < n; ++j) y[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n - 1);
    return y;
}

template <class F>
std::vector<double> sample(const std::vector<double>& y, F f)
{
    std::vector<double> v(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) v[j] = f(y[j]);
    return v;
}

SpectralState synthetic(double tau, double wp, double w0, double wm)
{
    SpectralState s;
    s.tau = tau;
    s.rho = 0.5 * std::exp(-0.4 * tau);
    s.Wplus = wp;
    s.W0 = w0;
    s.Wminus = wm;
    return s;
}

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidInput;
}

} // namespace

TEST_CASE("eigenfunctions of the linearized operator")
{
    const auto rep = eigenbasis_check(6.0, 1e-3);
    for (double r : rep.residual) CHECK(r <= 1e-6);
    CHECK(rep.orthonormality <= 1e-10);
    CHECK(apply_L([](double y) { return phi(2, y); }, 1.3, 1e-3) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    CHECK(apply_L([](double y) { return phi(1, y); }, -2.0, 1e-3) == doctest::Approx(0.5));
    CHECK(apply_L([](double y) { return phi(3, y); }, 0.0, 1e-3) == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-8));
}

TEST_CASE("stable mode coercivity on random polynomials")
{
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> c(static_cast<std::size_t>(gen::integer(1, 9)));
        for (double& v : c) v = gen::uniform(-1, 1);
        CHECK(coercivity_excess(c) <= 1e-8);
    }
    // phi_3 attains the bound
    CHECK(coercivity_excess({-2.0, 0.0, 1.0}) == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("low mode derivative transfer")
{
    for (int trial = 0; trial < 50; ++trial) {
        const double a1 = gen::uniform(-3, 3), a2 = gen::uniform(-3, 3);
        // (P+ u)_y = 0 and (P0 u)_y = a2 / sqrt 2, so |(P0 u)_y|^2 = |P0 u|^2 / 2
        const double p0y = gaussian_inner([a2](double) { return a2 / std::sqrt(2.0); }, [a2](double) { return a2 / std::sqrt(2.0); });
        CHECK(p0y <= 0.5 * a2 * a2 + 1e-12);
        CHECK(0.0 <= 0.5 * a1 * a1);
    }
}

TEST_CASE("cutoff function and its constants")
{
    CHECK(eta(0.3) == 1.0);
    CHECK(eta(-0.5) == 1.0);
    CHECK(eta(0.75) == 0.0);
    CHECK(eta(-2.0) == 0.0);
    CHECK(eta(0.625) == doctest::Approx(0.5));
    const auto c = cutoff_constants();
    CHECK(c.d1_max == doctest::Approx(7.5).epsilon(1e-8));
    CHECK(c.d2_max == doctest::Approx(160.0 / std::sqrt(3.0)).epsilon(1e-6));
    // derivatives against differences
    for (double s : {0.55, 0.6, -0.66, 0.7}) {
        CHECK(eta_d1(s) == doctest::Approx((eta(s + 1e-6) - eta(s - 1e-6)) / 2e-6).epsilon(1e-6));
        CHECK(eta_d2(s) == doctest::Approx((eta_d1(s + 1e-6) - eta_d1(s - 1e-6)) / 2e-6).epsilon(1e-6));
    }
}

TEST_CASE("cutoff of sampled profiles")
{
    const double rho = 12;
    const auto y = grid(-2 * rho, 2 * rho, 2001);
    const auto u = sample(y, [](double v) { return std::sin(v); });
    const auto uh = cutoff(y, u, rho);
    for (std::size_t j = 0; j < y.size(); ++j) {
        if (std::abs(y[j]) <= rho / 2) CHECK(uh[j] == u[j]);
        if (std::abs(y[j]) >= 0.75 * rho) CHECK(uh[j] == 0.0);
    }
    CHECK(kind_of([&] { cutoff(y, u, 10.0); }) == ErrorKind::HypothesisViolation);
}

TEST_CASE("cutoff of a constant stays within the Gaussian tail bound")
{
    const double rho = 12, a = 1.7;
    const auto y = grid(-80, 80, 400001);
    std::vector<double> diff(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) diff[j] = a * eta(y[j] / rho) - a;
    const double dist = gaussian_inner(y, diff, diff);
    const double bound = 4 * a * a / (rho * std::sqrt(pi)) * std::exp(-rho * rho / 16);
    CHECK(dist > 0.0);
    CHECK(dist <= bound);
}

TEST_CASE("projections onto the modes")
{
    auto s = project([](double y) { return 3 + y; }, 20, 0);
    CHECK(s.alpha1 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(s.alpha2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(s.Wminus) <= 1e-10);
    CHECK(s.Wplus >= 20.0 * 20.0 * std::exp(-400.0 / 16));
    s = project([](double y) { return y * y; }, 20, 0);
    CHECK(s.alpha1 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(s.alpha2) <= 1e-12);
    CHECK(s.Wminus == doctest::Approx(8.0).epsilon(1e-12));
    s = project([](double y) { return phi(3, y); }, 20, 0);
    CHECK(std::abs(s.alpha1) <= 1e-12);
    CHECK(std::abs(s.alpha2) <= 1e-12);
    CHECK(s.Wminus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.alpha3 == doctest::Approx(1.0).epsilon(1e-12));
    // sampled projection on a wide grid matches
    const auto y = grid(-40, 40, 8001);
    const auto sp = project(y, sample(y, [](double v) { return 3 + v + v * v; }), 20, 0);
    CHECK(sp.alpha1 == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(sp.alpha2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(sp.Wminus == doctest::Approx(8.0).epsilon(1e-10));
    CHECK(sp.normSq >= sp.alpha1 * sp.alpha1 + sp.alpha2 * sp.alpha2 - 1e-10);
}

TEST_CASE("finite differences on uniform grids")
{
    const auto y = grid(-3, 3, 601);
    const auto d = differentiate(y, sample(y, [](double v) { return v * v * v; }));
    for (std::size_t j = 0; j < y.size(); ++j) {
        CHECK(d.d1[j] == doctest::Approx(3 * y[j] * y[j]).scale(1.0).epsilon(1e-3));
        CHECK(d.d2[j] == doctest::Approx(6 * y[j]).scale(1.0).epsilon(1e-6));
        CHECK(d.d3[j] == doctest::Approx(6.0).epsilon(1e-5));
    }
}

TEST_CASE("error terms: trivial profiles")
{
    const double rho = 12;
    const auto y = grid(-2 * rho, 2 * rho, 4001);
    const std::vector<double> zero(y.size(), 0.0);
    ErrorTermInput in{y, std::vector<double>(y.size(), 0.8), zero, zero, zero, rho, -0.4 * rho};
    auto rep = error_terms(in);
    CHECK(rep.sup_E1 == 0.0);
    for (std::size_t j = 0; j < y.size(); ++j) {
        const double s = std::abs(y[j]) / rho;
        if (s < 0.5 || s > 0.75) CHECK(rep.E2[j] == 0.0);
    }
    CHECK(rep.sup_E2 > 0.0);
    const double eps = 0.01;
    in.u = sample(y, [eps](double v) { return eps * v; });
    in.u_y = std::vector<double>(y.size(), eps);
    rep = error_terms(in);
    CHECK(rep.sup_E1 == 0.0);
    in.rho_prime.reset();
    CHECK(kind_of([&] { error_terms(in); }) == ErrorKind::InvalidInput);
}

TEST_CASE("error terms agree with uhat_tau - L uhat")
{
    const double rho = 12, rho_p = -0.4 * rho;
    auto u = [](double y) { return 0.1 + 0.3 * std::sin(0.2 * y) + 0.02 * y; };
    auto uy = [](double y) { return 0.06 * std::cos(0.2 * y) + 0.02; };
    auto uyy = [](double y) { return -0.012 * std::sin(0.2 * y); };
    auto uyyy = [](double y) { return -0.0024 * std::cos(0.2 * y); };
    const auto y = grid(-2 * rho, 2 * rho, 1201);
    ErrorTermInput in{y, sample(y, u), sample(y, uy), sample(y, uyy), sample(y, uyyy), rho, rho_p};
    const auto rep = error_terms(in);
    for (std::size_t j = 0; j < y.size(); j += 7) {
        const double v = y[j];
        // u_tau from the graphical rescaled flow, then chain rule through eta(y / rho(tau))
        const double ut = uyy(v) / (1 + uy(v) * uy(v)) - 0.5 * v * uy(v) + 0.5 * u(v);
        const double uht = ut * eta(v / rho) - u(v) * eta_d1(v / rho) * v * rho_p / (rho * rho);
        auto uhat = [&](double w) { return u(w) * eta(w / rho); };
        const double oracle = uht - apply_L(uhat, v, 1e-4);
        CHECK(rep.E1[j] + rep.E2[j] == doctest::Approx(oracle).scale(1.0).epsilon(1e-6));
    }
    CHECK(rep.K > 0.0);
    CHECK(rep.etilde_c1 > 0.0);
}

TEST_CASE("hypotheses on the graphical radius")
{
    std::vector<RescaledSample> s;
    for (int k = 0; k < 20; ++k) {
        const double tau = -10 + 0.25 * k;
        s.push_back({tau, 0.5 * std::exp(-0.4 * tau), {}, {}});
    }
    HypothesisOptions opts;
    opts.mu = 0.4;
    opts.B = 1.0;
    auto rep = hypotheses_check(s, opts);
    CHECK(rep.find("R1")->pass);
    CHECK(rep.find("R3")->pass);
    CHECK(rep.mu == doctest::Approx(0.4).epsilon(1e-9));
    for (double r : rep.log_rate) CHECK(r == doctest::Approx(-0.4).epsilon(1e-9));
    for (auto& x : s) x.rho = 15.0;
    opts.mu = 0.01;
    rep = hypotheses_check(s, opts);
    CHECK(rep.find("R1")->pass);
    CHECK_FALSE(rep.find("R3")->pass);
    CHECK(rep.find("H3") == nullptr);
}

TEST_CASE("mode dynamics of synthetic profiles")
{
    std::vector<SpectralState> st, neutral;
    const double c = 0.7;
    for (int k = 0; k <= 20; ++k) {
        const double tau = -5 + 1e-3 * k;
        st.push_back(project([&](double) { return c * std::exp(0.5 * tau); }, 20, tau));
        neutral.push_back(project([&](double y) { return c * phi(2, y); }, 20, tau));
    }
    const auto mt = mode_track(st);
    CHECK(mt.max_residual[0] <= 1e-6);
    CHECK(mt.max_residual[1] <= 1e-12);
    const auto mn = mode_track(neutral);
    for (double r : mn.r_zero) CHECK(std::abs(r) <= 1e-10);
}

TEST_CASE("Merle-Zaag dichotomy on synthetic series")
{
    std::vector<SpectralState> unstable, neutral;
    for (int k = 0; k < 40; ++k) {
        const double tau = -20 + 18.0 * k / 39;
        unstable.push_back(synthetic(tau, std::exp(tau), std::exp(1.6 * tau), std::exp(1.6 * tau)));
    }
    for (int k = 0; k < 40; ++k) {
        const double tau = -20 + 10.0 * k / 39;
        neutral.push_back(synthetic(tau, std::exp(tau), 1.0, std::exp(tau)));
    }
    const auto a = mz_classify(unstable, 0.5);
    CHECK(a.verdict == MZVerdict::UnstableDominant);
    for (double m : a.margin2) CHECK(m >= 0.0);
    CHECK(mz_classify(neutral, 0.5).verdict == MZVerdict::NeutralDominant);
    CHECK(kind_of([&] { sharp_limit_fit(neutral, 0.5); }) == ErrorKind::NotApplicable);
}

TEST_CASE("sharp limit of a synthetic unstable profile")
{
    const double a0 = 1.3;
    std::vector<SpectralState> st;
    for (int k = 0; k < 30; ++k) {
        const double tau = -20 + 0.5 * k;
        const double rho = 0.5 * std::exp(-0.4 * tau);
        st.push_back(project([&](double y) { return a0 * std::exp(0.5 * tau) * (1 + std::exp(tau) * phi(3, y)); }, rho, tau));
    }
    const auto r = sharp_limit_fit(st, 0.4);
    CHECK(r.a == doctest::Approx(a0).epsilon(1e-6));
    CHECK(r.spread <= 1e-6);
}

TEST_CASE("sharp limit of an exact reaper sheet is its asymptote")
{
    const GrimReaperSpec r{0.7, 1.7, 0.0, Pointing::Right};
    SheetRun run;
    for (int k = 0; k < 20; ++k) {
        const double tau = -9 + 1.5 * k / 19;
        const double rho = 0.5 * std::exp(-0.4 * tau);
        const double t = -std::exp(-tau);
        const auto y = grid(-2 * rho, 2 * rho, 2001);
        const auto u = sample(y, [&](double v) {
            return std::exp(0.5 * tau) * grim_reaper_branch(r, t, v * std::exp(-0.5 * tau), true);
        });
        run.samples.push_back({tau, rho, y, u});
        run.rho_prime.push_back(-0.4 * rho);
    }
    const auto series = spectral_series(run);
    const auto fit = sharp_limit_fit(series.states, 0.4);
    CHECK(fit.a == doctest::Approx(0.7).epsilon(1e-3));
    CHECK(fit.bound_holds);
}

TEST_CASE("interpolation inequality")
{
    auto x = grid(-5, 5, 10001);
    auto r = interpolation_check(x, sample(x, [](double v) { return v * v; }), std::vector<double>(x.size(), 2.0), 2.0);
    CHECK(r.fp_sup == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(r.margin == doctest::Approx(17.0).epsilon(1e-9));
    x = grid(-8, 8, 16001);
    r = interpolation_check(x, sample(x, [](double v) { return std::sin(v); }), sample(x, [](double v) { return -std::sin(v); }), 1.0);
    CHECK(r.margin == doctest::Approx(1.5).epsilon(1e-5));
    for (int trial = 0; trial < 100; ++trial) {
        const auto knots = grid(-6, 6, 9);
        std::vector<double> vals(knots.size());
        for (double& v : vals) v = gen::uniform(-1, 1);
        const CubicSpline sp(knots, vals, SplineEnd::Natural);
        const auto xs = grid(-6, 6, 6001);
        const double xi = gen::uniform(0.1, 5.9);
        const auto rep = interpolation_check(xs, sample(xs, [&](double v) { return sp(v); }),
                                             sample(xs, [&](double v) { return sp.derivative(v, 2); }), xi);
        CHECK(rep.margin >= 0.0);
    }
}

TEST_CASE("trombone sheet in the rescaled frame")
{
    const TromboneSpec spec{{0, 1, 2}, {0, 0}, Pointing::Left};
    SheetRunOptions opts;
    opts.snapshots = 21;
    opts.grid = 2001;
    const auto run = trombone_sheet_run(spec, 1, opts);
    REQUIRE(run.samples.size() == 21);
    const auto series = spectral_series(run);
    const auto mz = mz_classify(series.states, 0.4);
    CHECK(mz.verdict == MZVerdict::UnstableDominant);
    const auto fit = sharp_limit_fit(series.states, 0.4);
    CHECK(fit.a == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(fit.bound_holds);
    const auto mt = mode_track(series.states, series.e_inner);
    CHECK(mt.max_residual[0] <= 1e-4);
    HypothesisOptions ho;
    ho.mu = 0.4;
    const auto hr = hypotheses_check(run.samples, ho);
    CHECK(hr.find("R1")->pass);
    CHECK(hr.find("R3")->pass);
    CHECK(hr.find("H3")->pass);
    CHECK(std::isfinite(hr.K0));
}
