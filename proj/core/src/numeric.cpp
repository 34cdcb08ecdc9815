#include "csf/numeric.hpp"

#include "csf/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <system_error>

namespace csf {

std::vector<double> solve_tridiagonal(const std::vector<double>& a, const std::vector<double>& b,
                                      const std::vector<double>& c, std::vector<double> d)
{
    const std::size_t n = b.size();
    require(n > 0 && a.size() == n && c.size() == n && d.size() == n, ErrorKind::InvalidInput,
            "tridiagonal: size mismatch");
    std::vector<double> cp(n);
    double beta = b[0];
    require(beta != 0.0, ErrorKind::InvalidInput, "tridiagonal: zero pivot");
    cp[0] = c[0] / beta;
    d[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        beta = b[i] - a[i] * cp[i - 1];
        require(beta != 0.0, ErrorKind::InvalidInput, "tridiagonal: zero pivot");
        cp[i] = c[i] / beta;
        d[i] = (d[i] - a[i] * d[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= cp[i] * d[i + 1];
    return d;
}

std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& a, const std::vector<double>& b,
                                             const std::vector<double>& c, const std::vector<double>& d)
{
    const std::size_t n = b.size();
    require(n >= 3, ErrorKind::InvalidInput, "cyclic tridiagonal: need n >= 3");
    const double alpha = c[n - 1]; // row n-1, col 0
    const double beta = a[0];      // row 0, col n-1
    const double gamma = -b[0];
    std::vector<double> bb(b);
    bb[0] = b[0] - gamma;
    bb[n - 1] = b[n - 1] - alpha * beta / gamma;
    std::vector<double> aa(a), cc(c);
    aa[0] = 0.0;
    cc[n - 1] = 0.0;
    const auto x = solve_tridiagonal(aa, bb, cc, d);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;
    const auto z = solve_tridiagonal(aa, bb, cc, u);
    const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - fact * z[i];
    return out;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y, SplineEnd end)
    : x_(std::move(x)), y_(std::move(y)), end_(end)
{
    const std::size_t n = x_.size();
    require(n >= 3 && y_.size() == n, ErrorKind::InvalidInput, "spline: need >= 3 knots");
    for (std::size_t i = 1; i < n; ++i)
        require(x_[i] > x_[i - 1], ErrorKind::InvalidInput, "spline: knots not increasing");
    m_.assign(n, 0.0);
    if (end_ == SplineEnd::Natural) {
        std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            c[i] = h1 / 6.0;
            d[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
        }
        m_ = solve_tridiagonal(a, b, c, d);
    } else {
        // unknowns m_0..m_{n-2}; m_{n-1} = m_0
        const std::size_t p = n - 1;
        require(p >= 3, ErrorKind::InvalidInput, "periodic spline: need >= 4 knots");
        std::vector<double> a(p), b(p), c(p), d(p);
        for (std::size_t i = 0; i < p; ++i) {
            const double h0 = i == 0 ? x_[p] - x_[p - 1] : x_[i] - x_[i - 1];
            const double h1 = x_[i + 1] - x_[i];
            const double yprev = i == 0 ? y_[p - 1] : y_[i - 1];
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            c[i] = h1 / 6.0;
            d[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - yprev) / h0;
        }
        const auto m = solve_cyclic_tridiagonal(a, b, c, d);
        for (std::size_t i = 0; i < p; ++i) m_[i] = m[i];
        m_[p] = m_[0];
    }
}

std::size_t CubicSpline::interval(double t) const
{
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double CubicSpline::eval(double t, int order) const
{
    if (end_ == SplineEnd::Periodic) {
        const double period = x_.back() - x_.front();
        t = x_.front() + std::fmod(t - x_.front(), period);
        if (t < x_.front()) t += period;
    }
    const std::size_t i = interval(t);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h, B = (t - x_[i]) / h;
    switch (order) {
    case 0:
        return A * y_[i] + B * y_[i + 1] + ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
    case 1:
        return (y_[i + 1] - y_[i]) / h - (3.0 * A * A - 1.0) / 6.0 * h * m_[i] + (3.0 * B * B - 1.0) / 6.0 * h * m_[i + 1];
    case 2:
        return A * m_[i] + B * m_[i + 1];
    case 3:
        return (m_[i + 1] - m_[i]) / h;
    default:
        return 0.0;
    }
}

namespace {

QuadratureRule golub_welsch(int n, const std::vector<double>& offdiag, double mu0)
{
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int i = 0; i < n - 1; ++i) sub[i] = offdiag[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = es.eigenvalues()[i];
        const double v = es.eigenvectors()(0, i);
        r.weights[i] = mu0 * v * v;
    }
    // symmetrize: the rules are symmetric about 0
    for (int i = 0; i < n / 2; ++i) {
        const double x = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
        const double w = 0.5 * (r.weights[i] + r.weights[n - 1 - i]);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

} // namespace

QuadratureRule gauss_legendre(int n)
{
    require(n >= 1, ErrorKind::InvalidInput, "gauss_legendre: n >= 1");
    if (n == 1) return {{0.0}, {2.0}};
    std::vector<double> off(n - 1);
    for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    return golub_welsch(n, off, 2.0);
}

QuadratureRule gauss_hermite(int n)
{
    require(n >= 1, ErrorKind::InvalidInput, "gauss_hermite: n >= 1");
    if (n == 1) return {{0.0}, {std::sqrt(std::numbers::pi)}};
    std::vector<double> off(n - 1);
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k / 2.0);
    QuadratureRule r = golub_welsch(n, off, std::sqrt(std::numbers::pi));
    // Newton polish with the orthonormal recurrence; weights from the derivative
    for (int i = 0; i < n; ++i) {
        double x = r.nodes[i], pp = 0;
        for (int it = 0; it < 10; ++it) {
            double p1 = std::pow(std::numbers::pi, -0.25), p2 = 0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = x * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15 * std::max(1.0, std::abs(x))) break;
        }
        r.nodes[i] = x;
        r.weights[i] = 2.0 / (pp * pp);
    }
    return r;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    require(n >= 2 && y.size() == n, ErrorKind::InvalidInput, "linear_fit: need >= 2 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require(sxx > 0, ErrorKind::InvalidInput, "linear_fit: degenerate abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
        f.max_residual = std::max(f.max_residual, std::abs(r));
    }
    f.rms = std::sqrt(ss / n);
    f.r2 = syy > 0 ? 1.0 - ss / syy : 1.0;
    return f;
}

std::string fmt12(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string fmt_exact(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s)
{
    double v = 0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\t')) --e;
    if (b < e && *b == '+') ++b;
    auto res = std::from_chars(b, e, v);
    require(res.ec == std::errc() && res.ptr == e, ErrorKind::InvalidInput, "not a number: '" + s + "'");
    return v;
}

double smoothstep5(double x)
{
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double smoothstep5_d1(double x)
{
    if (x <= 0 || x >= 1) return 0;
    return 30.0 * x * x * (1.0 - x) * (1.0 - x);
}

double smoothstep5_d2(double x)
{
    if (x <= 0 || x >= 1) return 0;
    return 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
}

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::ExtinctSolution: return "extinct-solution";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::GluingInfeasible: return "gluing-infeasible";
    case ErrorKind::Stability: return "stability";
    case ErrorKind::EmbeddednessViolation: return "embeddedness-violation";
    case ErrorKind::GraphicalityLost: return "graphicality-lost";
    case ErrorKind::HypothesisViolation: return "hypothesis-violation";
    case ErrorKind::RegionUndefined: return "region-undefined";
    case ErrorKind::Tracking: return "tracking";
    case ErrorKind::NotInRegime: return "not-in-regime";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::InsufficientRange: return "insufficient-range";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

} // namespace csf
