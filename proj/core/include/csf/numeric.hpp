#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace csf {

// Thomas algorithm; a is the sub-diagonal (a[0] unused), c the super-diagonal (c[n-1] unused).
std::vector<double> solve_tridiagonal(const std::vector<double>& a, const std::vector<double>& b,
                                      const std::vector<double>& c, std::vector<double> d);

// Periodic tridiagonal system with corner entries a[0] (row 0, col n-1) and c[n-1] (row n-1, col 0).
std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& a, const std::vector<double>& b,
                                             const std::vector<double>& c, const std::vector<double>& d);

enum class SplineEnd { Natural, Periodic };

// Cubic interpolating spline on strictly increasing knots.
// Periodic splines require y.front() == y.back() and use the last knot as the period end.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y, SplineEnd end);

    double operator()(double t) const { return eval(t, 0); }
    double derivative(double t, int order = 1) const { return eval(t, order); }
    std::size_t interval(double t) const;
    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return y_; }
    const std::vector<double>& second_derivatives() const { return m_; }

private:
    double eval(double t, int order) const;

    std::vector<double> x_, y_, m_;
    SplineEnd end_ = SplineEnd::Natural;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1].
QuadratureRule gauss_legendre(int n);
// Gauss-Hermite for weight exp(-x^2), Golub-Welsch.
QuadratureRule gauss_hermite(int n);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double rms = 0.0;
    double max_residual = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Report formatting: 12 significant digits, locale independent.
std::string fmt12(double v);
// Shortest representation that round-trips.
std::string fmt_exact(double v);
double parse_double(const std::string& s);

// Quintic smoothstep S(x) = 6x^5 - 15x^4 + 10x^3 clamped to [0, 1], with derivatives.
double smoothstep5(double x);
double smoothstep5_d1(double x);
double smoothstep5_d2(double x);

} // namespace csf
