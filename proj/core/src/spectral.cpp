#include "csf/spectral.hpp"

#include "csf/error.hpp"
#include "csf/functionals.hpp"
#include "csf/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace csf {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double sup_abs(const std::vector<double>& v, std::size_t lo = 0, std::size_t hi = static_cast<std::size_t>(-1))
{
    double m = 0.0;
    for (std::size_t j = lo; j < std::min(hi, v.size()); ++j) m = std::max(m, std::abs(v[j]));
    return m;
}

double horner(const std::vector<double>& c, double y)
{
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * y + *it;
    return v;
}

void require_increasing(const std::vector<SpectralState>& s, const char* who)
{
    for (std::size_t i = 1; i < s.size(); ++i)
        require(s[i].tau > s[i - 1].tau, ErrorKind::InvalidInput, std::string(who) + ": tau must increase");
}

} // namespace

double phi(int i, double y)
{
    switch (i) {
    case 1: return 1.0;
    case 2: return y / kSqrt2;
    case 3: return (y * y - 2.0) / (2.0 * kSqrt2);
    default: fail(ErrorKind::InvalidInput, "phi: index must be 1, 2 or 3");
    }
}

double eigenvalue(int i)
{
    require(i >= 1 && i <= 3, ErrorKind::InvalidInput, "eigenvalue: index must be 1, 2 or 3");
    return 0.5 * (i - 2);
}

double apply_L(const std::function<double(double)>& f, double y, double h)
{
    const double fp = f(y + h), f0 = f(y), fm = f(y - h);
    return (fp - 2.0 * f0 + fm) / (h * h) - 0.5 * y * (fp - fm) / (2.0 * h) + 0.5 * f0;
}

EigenbasisReport eigenbasis_check(double ymax, double h)
{
    require(ymax > 0 && h > 0 && h < ymax, ErrorKind::InvalidInput, "eigenbasis_check: bad grid");
    EigenbasisReport rep;
    rep.ymax = ymax;
    rep.h = h;
    const auto n = static_cast<long>(std::floor(2.0 * ymax / h + 1e-9));
    for (int i = 1; i <= 3; ++i) {
        auto f = [i](double y) { return phi(i, y); };
        double r = 0.0;
        for (long j = 0; j <= n; ++j) {
            const double y = -ymax + h * static_cast<double>(j);
            r = std::max(r, std::abs(apply_L(f, y, h) + eigenvalue(i) * phi(i, y)));
        }
        rep.residual[static_cast<std::size_t>(i - 1)] = r;
    }
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            const double g = gaussian_inner([i](double y) { return phi(i, y); }, [j](double y) { return phi(j, y); });
            rep.orthonormality = std::max(rep.orthonormality, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    return rep;
}

double coercivity_excess(const std::vector<double>& coeffs)
{
    require(!coeffs.empty(), ErrorKind::InvalidInput, "coercivity_excess: empty polynomial");
    auto f = [&](double y) { return horner(coeffs, y); };
    std::vector<double> q = coeffs;
    q.resize(std::max<std::size_t>(q.size(), 2), 0.0);
    q[0] -= gaussian_inner(f, [](double) { return 1.0; });
    q[1] -= 0.5 * gaussian_inner(f, [](double y) { return y; });
    // L y^k = k(k-1) y^{k-2} - (k-1)/2 y^k
    std::vector<double> lq(q.size(), 0.0);
    for (std::size_t k = 0; k < q.size(); ++k) {
        lq[k] += -0.5 * (static_cast<double>(k) - 1.0) * q[k];
        if (k >= 2) lq[k - 2] += static_cast<double>(k * (k - 1)) * q[k];
    }
    auto qf = [&](double y) { return horner(q, y); };
    auto lqf = [&](double y) { return horner(lq, y); };
    return gaussian_inner(lqf, qf) + 0.5 * gaussian_inner(qf, qf);
}

double eta(double s)
{
    const double a = std::abs(s);
    return 1.0 - smoothstep5(4.0 * (a - 0.5));
}

double eta_d1(double s)
{
    const double a = std::abs(s);
    const double sg = s < 0 ? -1.0 : 1.0;
    return -4.0 * sg * smoothstep5_d1(4.0 * (a - 0.5));
}

double eta_d2(double s)
{
    const double a = std::abs(s);
    return -16.0 * smoothstep5_d2(4.0 * (a - 0.5));
}

CutoffConstants cutoff_constants()
{
    static const CutoffConstants c = [] {
        CutoffConstants r;
        const int n = 200000;
        for (int j = 0; j <= n; ++j) {
            const double s = 0.5 + 0.25 * j / n;
            r.d1_max = std::max(r.d1_max, std::abs(eta_d1(s)));
            r.d2_max = std::max(r.d2_max, std::abs(eta_d2(s)));
        }
        return r;
    }();
    return c;
}

std::vector<double> cutoff(const std::vector<double>& y, const std::vector<double>& u, double rho)
{
    require(rho > 10.0, ErrorKind::HypothesisViolation, "cutoff: needs rho > 10, got " + fmt12(rho));
    require(y.size() == u.size() && y.size() >= 2, ErrorKind::InvalidInput, "cutoff: grid and samples differ");
    require(y.front() <= -0.75 * rho && y.back() >= 0.75 * rho, ErrorKind::InsufficientRange,
            "cutoff: grid must cover |y| <= 3 rho / 4");
    std::vector<double> out(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) out[j] = u[j] * eta(y[j] / rho);
    return out;
}

namespace {

SpectralState finish_state(double a1, double a2, double a3, double norm_sq, double w_minus, double rho, double tau)
{
    SpectralState s;
    s.tau = tau;
    s.rho = rho;
    s.alpha1 = a1;
    s.alpha2 = a2;
    s.alpha3 = a3;
    s.normSq = norm_sq;
    s.Wplus = a1 * a1 + rho * rho * std::exp(-rho * rho / 16.0);
    s.W0 = a2 * a2;
    s.Wminus = w_minus;
    return s;
}

} // namespace

SpectralState project(const std::vector<double>& y, const std::vector<double>& uhat, double rho, double tau)
{
    require(y.size() == uhat.size(), ErrorKind::InvalidInput, "project: grid and samples differ");
    auto basis = [&](int i) {
        std::vector<double> v(y.size());
        for (std::size_t j = 0; j < y.size(); ++j) v[j] = phi(i, y[j]);
        return v;
    };
    const double a1 = gaussian_inner(y, uhat, basis(1));
    const double a2 = gaussian_inner(y, uhat, basis(2));
    const double a3 = gaussian_inner(y, uhat, basis(3));
    std::vector<double> rest(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) rest[j] = uhat[j] - a1 - a2 * phi(2, y[j]);
    return finish_state(a1, a2, a3, gaussian_inner(y, uhat, uhat), gaussian_inner(y, rest, rest), rho, tau);
}

SpectralState project(const std::function<double(double)>& uhat, double rho, double tau, int nodes)
{
    auto b = [](int i) { return [i](double y) { return phi(i, y); }; };
    const double a1 = gaussian_inner(uhat, b(1), nodes);
    const double a2 = gaussian_inner(uhat, b(2), nodes);
    const double a3 = gaussian_inner(uhat, b(3), nodes);
    auto rest = [&](double y) { return uhat(y) - a1 - a2 * phi(2, y); };
    return finish_state(a1, a2, a3, gaussian_inner(uhat, uhat, nodes), gaussian_inner(rest, rest, nodes), rho, tau);
}

Derivatives differentiate(const std::vector<double>& y, const std::vector<double>& u)
{
    const std::size_t n = y.size();
    require(n == u.size() && n >= 5, ErrorKind::InvalidInput, "differentiate: need >= 5 matching samples");
    const double h = (y.back() - y.front()) / static_cast<double>(n - 1);
    for (std::size_t j = 1; j < n; ++j)
        require(std::abs(y[j] - y[j - 1] - h) <= 1e-8 * h, ErrorKind::InvalidInput, "differentiate: grid must be uniform");
    Derivatives d;
    d.d1.resize(n);
    d.d2.resize(n);
    d.d3.resize(n);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        d.d1[j] = (u[j + 1] - u[j - 1]) / (2 * h);
        d.d2[j] = (u[j + 1] - 2 * u[j] + u[j - 1]) / (h * h);
    }
    d.d1[0] = (-3 * u[0] + 4 * u[1] - u[2]) / (2 * h);
    d.d1[n - 1] = (3 * u[n - 1] - 4 * u[n - 2] + u[n - 3]) / (2 * h);
    d.d2[0] = (2 * u[0] - 5 * u[1] + 4 * u[2] - u[3]) / (h * h);
    d.d2[n - 1] = (2 * u[n - 1] - 5 * u[n - 2] + 4 * u[n - 3] - u[n - 4]) / (h * h);
    const double h3 = h * h * h;
    for (std::size_t j = 0; j < n; ++j) {
        if (j >= 2 && j + 2 < n)
            d.d3[j] = (-u[j - 2] + 2 * u[j - 1] - 2 * u[j + 1] + u[j + 2]) / (2 * h3);
        else if (j < 2)
            d.d3[j] = (-u[j] + 3 * u[j + 1] - 3 * u[j + 2] + u[j + 3]) / h3;
        else
            d.d3[j] = (u[j] - 3 * u[j - 1] + 3 * u[j - 2] - u[j - 3]) / h3;
    }
    return d;
}

ErrorTermReport error_terms(const ErrorTermInput& in)
{
    require(in.rho_prime.has_value(), ErrorKind::InvalidInput, "error_terms: rho' is required");
    const std::size_t n = in.y.size();
    require(in.u.size() == n && in.u_y.size() == n && in.u_yy.size() == n && in.u_yyy.size() == n, ErrorKind::InvalidInput,
            "error_terms: derivative arrays differ in size");
    const double rho = in.rho, rate = *in.rho_prime / rho;
    ErrorTermReport rep;
    rep.uhat = cutoff(in.y, in.u, rho);
    rep.E1.resize(n);
    rep.E2.resize(n);
    rep.Etilde.resize(n);
    rep.Etilde_y.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double y = in.y[j], u = in.u[j], uy = in.u_y[j], uyy = in.u_yy[j], uyyy = in.u_yyy[j];
        const double s = y / rho;
        const double e = eta(s), e1 = eta_d1(s), e2 = eta_d2(s);
        const double hy = uy * e + u * e1 / rho;
        const double hyy = uyy * e + 2 * uy * e1 / rho + u * e2 / (rho * rho);
        const double g = 1.0 + uy * uy;
        rep.Etilde[j] = -hy * uyy / g;
        rep.E1[j] = hy * rep.Etilde[j];
        rep.Etilde_y[j] = -((hyy * uyy + hy * uyyy) * g - 2 * hy * uy * uyy * uyy) / (g * g);
        rep.E2[j] = uyy / g * (e * (e - 1) * uy * uy + 2 * u * uy * e * e1 / rho + u * u * e1 * e1 / (rho * rho)) +
                    e1 / rho * ((0.5 - rate) * u * y - 2 * uy) - u * e2 / (rho * rho);
    }
    rep.sup_E1 = sup_abs(rep.E1);
    rep.sup_E2 = sup_abs(rep.E2);
    rep.etilde_c1 = sup_abs(rep.Etilde) + sup_abs(rep.Etilde_y);

    const SpectralState st = project(in.y, rep.uhat, rho, 0.0);
    std::vector<double> E(n), pp(n, st.alpha1), p0(n), pm(n);
    for (std::size_t j = 0; j < n; ++j) {
        E[j] = rep.E1[j] + rep.E2[j];
        p0[j] = st.alpha2 * phi(2, in.y[j]);
        pm[j] = rep.uhat[j] - st.alpha1 - p0[j];
    }
    rep.inner = {gaussian_inner(in.y, E, pp), gaussian_inner(in.y, E, p0), gaussian_inner(in.y, E, pm)};
    rep.rhs_unit = (st.normSq + rho * rho * std::exp(-rho * rho / 16.0)) / std::sqrt(rho);
    for (std::size_t k = 0; k < 3; ++k) {
        rep.lhs[k] = 2.0 * std::abs(rep.inner[k]);
        rep.K = std::max(rep.K, rep.lhs[k] / rep.rhs_unit);
    }
    rep.eta_bounds = cutoff_constants();
    return rep;
}

const HypothesisCheck* HypothesisReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<double> tau_derivative(const std::vector<double>& tau, const std::vector<double>& v)
{
    const std::size_t n = tau.size();
    require(n == v.size() && n >= 3, ErrorKind::InvalidInput, "tau_derivative: need >= 3 matching samples");
    for (std::size_t i = 1; i < n; ++i)
        require(tau[i] > tau[i - 1], ErrorKind::InvalidInput, "tau_derivative: tau must increase");
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = tau[i] - tau[i - 1], h2 = tau[i + 1] - tau[i];
        d[i] = -h2 / (h1 * (h1 + h2)) * v[i - 1] + (h2 - h1) / (h1 * h2) * v[i] + h1 / (h2 * (h1 + h2)) * v[i + 1];
    }
    {
        const double h1 = tau[1] - tau[0], h2 = tau[2] - tau[1];
        d[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * v[0] + (h1 + h2) / (h1 * h2) * v[1] - h1 / (h2 * (h1 + h2)) * v[2];
    }
    {
        const double h1 = tau[n - 2] - tau[n - 3], h2 = tau[n - 1] - tau[n - 2];
        d[n - 1] = (2 * h2 + h1) / (h2 * (h1 + h2)) * v[n - 1] - (h1 + h2) / (h1 * h2) * v[n - 2] +
                   h2 / (h1 * (h1 + h2)) * v[n - 3];
    }
    return d;
}

HypothesisReport hypotheses_check(const std::vector<RescaledSample>& series, const HypothesisOptions& opts)
{
    require(series.size() >= 10, ErrorKind::InvalidInput, "hypotheses_check: need at least 10 samples");
    HypothesisReport rep;
    std::vector<double> logr;
    for (const auto& s : series) {
        require(s.rho > 0.0 && std::isfinite(s.rho), ErrorKind::InvalidInput, "hypotheses_check: rho must be positive");
        rep.tau.push_back(s.tau);
        logr.push_back(std::log(s.rho));
    }
    rep.log_rate = tau_derivative(rep.tau, logr);

    double r1 = INFINITY;
    rep.mu = INFINITY;
    for (double r : rep.log_rate) {
        r1 = std::min({r1, r + 0.5, -r});
        rep.mu = std::min(rep.mu, -r);
    }
    rep.checks.push_back({"R1", r1, r1 >= -1e-9});
    rep.B = series.back().rho;
    rep.checks.push_back({"R2", rep.B - opts.B, rep.B >= opts.B});
    rep.checks.push_back({"R3", rep.mu - opts.mu, rep.mu > 0.0 && rep.mu >= opts.mu - 1e-9});

    const bool have_u = std::all_of(series.begin(), series.end(), [](const RescaledSample& s) { return !s.u.empty(); });
    if (!have_u) return rep;

    rep.eps0 = opts.eps0;
    const double tau0 = series.back().tau;
    double uy_max = 0.0;
    std::vector<double> uy_sup(series.size()), rho_v(series.size());
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const Derivatives d = differentiate(s.y, s.u);
        rep.A = std::max(rep.A, sup_abs(s.u) * std::exp(-opts.eps0 * (s.tau - tau0)));
        uy_sup[k] = sup_abs(d.d1);
        rho_v[k] = s.rho;
        uy_max = std::max(uy_max, uy_sup[k]);
        rep.K0 = std::max(rep.K0, 2.0 * s.rho * sup_abs(d.d2));
        // third derivative on (-rho, rho)
        double m3 = 0.0;
        for (std::size_t j = 0; j < s.y.size(); ++j)
            if (std::abs(s.y[j]) < s.rho) m3 = std::max(m3, std::abs(d.d3[j]));
        rep.K1 = std::max(rep.K1, s.rho * s.rho * m3);
    }
    rep.checks.push_back({"H2.u", 0.0, std::isfinite(rep.A)});
    rep.checks.push_back({"H2.uy", opts.eps0 - uy_max, uy_max <= opts.eps0});
    rep.checks.push_back({"H3", 0.0, std::isfinite(rep.K0)});
    rep.checks.push_back({"d3", 0.0, std::isfinite(rep.K1)});
    double decay = INFINITY;
    for (std::size_t k = 0; k < series.size(); ++k)
        decay = std::min(decay, (rep.A + rep.K0) / std::sqrt(rho_v[k]) - uy_sup[k]);
    rep.checks.push_back({"du.decay", decay, decay >= -1e-12});
    return rep;
}

ModeTrack mode_track(std::vector<SpectralState> states, const std::vector<std::array<double, 3>>& e_inner)
{
    require(states.size() >= 3, ErrorKind::InvalidInput, "mode_track: need at least 3 states");
    require_increasing(states, "mode_track");
    require(e_inner.empty() || e_inner.size() == states.size(), ErrorKind::InvalidInput,
            "mode_track: error inner products do not match the states");
    const std::size_t n = states.size();
    std::vector<double> tau(n), wp(n), w0(n), wm(n);
    for (std::size_t i = 0; i < n; ++i) {
        tau[i] = states[i].tau;
        wp[i] = states[i].alpha1 * states[i].alpha1;
        w0[i] = states[i].W0;
        wm[i] = states[i].Wminus;
    }
    const auto dp = tau_derivative(tau, wp), d0 = tau_derivative(tau, w0), dm = tau_derivative(tau, wm);
    ModeTrack mt;
    mt.r_plus.resize(n);
    mt.r_zero.resize(n);
    mt.r_minus.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::array<double, 3> e = e_inner.empty() ? std::array<double, 3>{} : e_inner[i];
        mt.r_plus[i] = dp[i] - wp[i] - 2 * e[0];
        mt.r_zero[i] = d0[i] - 2 * e[1];
        mt.r_minus[i] = std::max(0.0, dm[i] + wm[i] - 2 * e[2]);
        mt.max_residual[0] = std::max(mt.max_residual[0], std::abs(mt.r_plus[i]));
        mt.max_residual[1] = std::max(mt.max_residual[1], std::abs(mt.r_zero[i]));
        mt.max_residual[2] = std::max(mt.max_residual[2], mt.r_minus[i]);
    }
    mt.states = std::move(states);
    return mt;
}

std::string to_string(MZVerdict v)
{
    switch (v) {
    case MZVerdict::NeutralDominant: return "MZ1";
    case MZVerdict::UnstableDominant: return "MZ2";
    case MZVerdict::Undetermined: return "Undetermined";
    }
    return "?";
}

MZReport mz_classify(const std::vector<SpectralState>& states, double mu)
{
    require(states.size() >= 10, ErrorKind::InvalidInput, "mz_classify: need at least 10 states");
    require(mu > 0.0, ErrorKind::InvalidInput, "mz_classify: mu must be positive");
    std::vector<SpectralState> s = states;
    std::sort(s.begin(), s.end(), [](const SpectralState& a, const SpectralState& b) { return a.tau < b.tau; });
    MZReport rep;
    rep.mu = mu;
    rep.tail = static_cast<std::size_t>(std::ceil(0.6 * static_cast<double>(s.size())));
    bool mz1 = true, mz2 = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = std::exp(0.5 * mu * s[i].tau);
        rep.tau.push_back(s[i].tau);
        rep.margin1.push_back(f * s[i].W0 - (s[i].Wplus + s[i].Wminus));
        rep.margin2.push_back(f * s[i].Wplus - (s[i].W0 + s[i].Wminus));
        if (i < rep.tail) {
            mz1 = mz1 && rep.margin1.back() >= 0.0;
            mz2 = mz2 && rep.margin2.back() >= 0.0;
        }
    }
    if (mz2 && !mz1)
        rep.verdict = MZVerdict::UnstableDominant;
    else if (mz1 && !mz2)
        rep.verdict = MZVerdict::NeutralDominant;
    return rep;
}

SharpLimitReport sharp_limit_fit(const std::vector<SpectralState>& states, double mu)
{
    SharpLimitReport rep;
    rep.mz = mz_classify(states, mu);
    require(rep.mz.verdict == MZVerdict::UnstableDominant, ErrorKind::NotApplicable,
            "sharp_limit_fit: unstable dominance (MZ2) not established, verdict " + to_string(rep.mz.verdict));
    std::vector<SpectralState> s = states;
    std::sort(s.begin(), s.end(), [](const SpectralState& a, const SpectralState& b) { return a.tau < b.tau; });
    for (const auto& st : s) {
        rep.tau.push_back(st.tau);
        rep.scaled_alpha1.push_back(std::exp(-0.5 * st.tau) * st.alpha1);
    }
    rep.a = rep.scaled_alpha1.front();
    rep.bound_holds = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double e = std::exp(-0.5 * s[i].tau);
        const double d = e * e * s[i].normSq - 2.0 * rep.a * e * s[i].alpha1 + rep.a * rep.a;
        const double bound = (1.0 + rep.a * rep.a) * std::exp(-s[i].rho * s[i].rho / 36.0);
        rep.distance_sq.push_back(d);
        rep.bound.push_back(bound);
        if (i < rep.mz.tail) {
            rep.spread = std::max(rep.spread, std::abs(rep.scaled_alpha1[i] - rep.a));
            // rounding floor of the expanded square
            if (d > bound + 8e-16 * (e * e * s[i].normSq + rep.a * rep.a)) rep.bound_holds = false;
        }
    }
    return rep;
}

InterpolationReport interpolation_check(const std::vector<double>& x, const std::vector<double>& f,
                                        const std::vector<double>& fpp, double xi)
{
    require(x.size() == f.size() && x.size() == fpp.size() && x.size() >= 5, ErrorKind::InvalidInput,
            "interpolation_check: samples differ in size");
    const double l = 0.5 * (x.back() - x.front());
    require(l > 4.0 && xi > 0.0 && xi < l, ErrorKind::InvalidInput, "interpolation_check: need l > 4 and 0 < xi < l");
    const Derivatives d = differentiate(x, f);
    InterpolationReport r;
    r.f_sup = sup_abs(f);
    r.fp_sup = sup_abs(d.d1);
    r.fpp_sup = sup_abs(fpp);
    r.rhs = 2.0 / xi * r.f_sup + 0.5 * xi * r.fpp_sup;
    r.margin = r.rhs - r.fp_sup;
    return r;
}

double trombone_sheet_height(const TromboneSpec& spec, int sheet, double t, double x1)
{
    spec.validate();
    require(sheet >= 0 && sheet <= spec.m(), ErrorKind::InvalidInput, "trombone sheet index out of range");
    const auto i = static_cast<std::size_t>(sheet);
    double v = spec.a[i];
    if (sheet >= 1) v += grim_reaper_branch(spec.finger(sheet), t, x1, false) - spec.a[i];
    if (sheet < spec.m()) v += grim_reaper_branch(spec.finger(sheet + 1), t, x1, true) - spec.a[i];
    return v;
}

SheetRun trombone_sheet_run(const TromboneSpec& spec, int sheet, const SheetRunOptions& opts)
{
    spec.validate();
    require(opts.snapshots >= 3 && opts.tau_end > opts.tau_start && opts.tau_end < 0 && opts.delta > 0,
            ErrorKind::InvalidInput, "sheet run: bad time window");
    require(opts.grid >= 5 && opts.nodes >= 5 && opts.substeps >= 1, ErrorKind::InvalidInput, "sheet run: bad grid");
    auto rho_at = [&](double tau) { return 0.5 * std::exp(-opts.delta * tau); };
    auto half_window = [&](double tau) { return 1.02 * 2.0 * rho_at(tau) * std::exp(-0.5 * tau); };

    SheetGraph g;
    g.axis = GraphAxis::OverX1;
    g.t = -std::exp(-opts.tau_start);
    const double X = half_window(opts.tau_start);
    g.lo = -X;
    g.hi = X;
    g.u.resize(opts.grid);
    for (std::size_t j = 0; j < opts.grid; ++j) g.u[j] = trombone_sheet_height(spec, sheet, g.t, g.x(j));

    SheetRun run;
    for (int k = 0; k < opts.snapshots; ++k) {
        const double tau = opts.tau_start + (opts.tau_end - opts.tau_start) * k / (opts.snapshots - 1);
        const double t = -std::exp(-tau);
        if (k > 0) {
            // shrink the window to what the current radius needs, keeping the grid
            const double need = half_window(opts.tau_start + (opts.tau_end - opts.tau_start) * (k - 1) / (opts.snapshots - 1));
            const double h = g.dx();
            const auto drop = static_cast<std::size_t>(std::floor((g.hi - need) / h + 1e-9));
            if (drop > 0 && g.size() > 2 * drop + 5) {
                g.u = std::vector<double>(g.u.begin() + static_cast<long>(drop), g.u.end() - static_cast<long>(drop));
                g.lo += h * static_cast<double>(drop);
                g.hi -= h * static_cast<double>(drop);
            }
            const GraphBC bc = GraphBC::from_exact_tail([&, lo = g.lo, hi = g.hi](double tt) {
                return std::pair{trombone_sheet_height(spec, sheet, tt, lo), trombone_sheet_height(spec, sheet, tt, hi)};
            });
            g = evolve_graphical(g, t, (t - g.t) / opts.substeps, bc);
        }
        const double rho = rho_at(tau);
        const RescaledSheet r = rescale(g, rho, opts.nodes);
        run.samples.push_back({tau, rho, r.y, r.u});
        run.rho_prime.push_back(-opts.delta * rho);
    }
    return run;
}

SpectralSeries spectral_series(const SheetRun& run)
{
    require(run.samples.size() == run.rho_prime.size(), ErrorKind::InvalidInput, "spectral_series: rho' missing");
    SpectralSeries out;
    for (std::size_t k = 0; k < run.samples.size(); ++k) {
        const auto& s = run.samples[k];
        const Derivatives d = differentiate(s.y, s.u);
        ErrorTermInput in{s.y, s.u, d.d1, d.d2, d.d3, s.rho, run.rho_prime[k]};
        ErrorTermReport e = error_terms(in);
        out.states.push_back(project(s.y, e.uhat, s.rho, s.tau));
        out.e_inner.push_back(e.inner);
        out.errors.push_back(std::move(e));
    }
    return out;
}

} // namespace csf
