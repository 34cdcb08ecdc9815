#pragma once

#include "csf/exact.hpp"
#include "csf/flow.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace csf {

// Eigenfunctions of L = d^2/dy^2 - (y/2) d/dy + 1/2, orthonormal in the Gaussian inner product.
// L phi_i = -lambda_i phi_i with lambda = -1/2, 0, 1/2.
double phi(int i, double y);
double eigenvalue(int i);
// L f by central differences with step h.
double apply_L(const std::function<double(double)>& f, double y, double h);

struct EigenbasisReport {
    std::array<double, 3> residual{}; // sup |L phi_i + lambda_i phi_i| on the grid
    double orthonormality = 0.0;      // max |<phi_i, phi_j> - delta_ij|
    double ymax = 0.0;
    double h = 0.0;
};
EigenbasisReport eigenbasis_check(double ymax = 6.0, double h = 1e-3);

// <L P_- f, P_- f> + (1/2)|P_- f|^2 for the polynomial sum c_k y^k; nonpositive by the spectral gap.
double coercivity_excess(const std::vector<double>& coeffs);

// Cutoff eta(s): 1 on |s| <= 1/2, 0 on |s| >= 3/4, quintic smoothstep between.
double eta(double s);
double eta_d1(double s);
double eta_d2(double s);
struct CutoffConstants {
    double d1_max = 0.0;
    double d2_max = 0.0;
};
// Measured on a fine grid.
CutoffConstants cutoff_constants();

// uhat = u * eta(y / rho) on the grid of u; needs rho > 10 and the grid to cover |y| <= 3 rho / 4.
std::vector<double> cutoff(const std::vector<double>& y, const std::vector<double>& u, double rho);

struct SpectralState {
    double tau = 0.0;
    double rho = 0.0;
    double alpha1 = 0.0, alpha2 = 0.0, alpha3 = 0.0;
    double normSq = 0.0;
    double Wplus = 0.0, W0 = 0.0, Wminus = 0.0;
};

// Coefficients from sampled uhat (trapezoid on the grid).
SpectralState project(const std::vector<double>& y, const std::vector<double>& uhat, double rho, double tau);
// Coefficients from a function (Gauss-Hermite).
SpectralState project(const std::function<double(double)>& uhat, double rho, double tau, int nodes = 64);

struct Derivatives {
    std::vector<double> d1, d2, d3;
};
// Finite differences on a uniform grid: second order for d1, d2; d3 from a five point stencil.
Derivatives differentiate(const std::vector<double>& y, const std::vector<double>& u);

struct ErrorTermInput {
    std::vector<double> y, u, u_y, u_yy, u_yyy;
    double rho = 0.0;
    std::optional<double> rho_prime;
};

struct ErrorTermReport {
    std::vector<double> uhat, E1, E2, Etilde, Etilde_y;
    double sup_E1 = 0.0, sup_E2 = 0.0, etilde_c1 = 0.0;
    std::array<double, 3> lhs{};   // 2 |<E, P_* uhat>| for * = +, 0, -
    std::array<double, 3> inner{}; // <E, P_* uhat>
    double rhs_unit = 0.0;         // (|uhat|^2 + rho^2 e^{-rho^2/16}) / sqrt(rho)
    double K = 0.0;                // smallest K with lhs <= K rhs_unit
    CutoffConstants eta_bounds;
};
ErrorTermReport error_terms(const ErrorTermInput& in);

struct HypothesisCheck {
    std::string name;
    double margin = 0.0;
    bool pass = false;
};

struct RescaledSample {
    double tau = 0.0;
    double rho = 0.0;
    std::vector<double> y, u; // may be empty when only rho is examined
};

struct HypothesisOptions {
    double eps0 = 0.0099;
    double mu = 0.0; // required rate for (R3); the fitted rate must also be positive
    double B = 10.0;
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;
    std::vector<double> tau, log_rate; // rho'/rho by centered differences
    double A = 0.0, eps0 = 0.0, K0 = 0.0, K1 = 0.0, mu = 0.0, B = 0.0;
    const HypothesisCheck* find(const std::string& name) const;
};
HypothesisReport hypotheses_check(const std::vector<RescaledSample>& series, const HypothesisOptions& opts = {});

// d/dtau by three point differences on a nonuniform increasing grid.
std::vector<double> tau_derivative(const std::vector<double>& tau, const std::vector<double>& v);

struct ModeTrack {
    std::vector<SpectralState> states;
    // d/dtau |P+ u|^2 - |P+ u|^2 - 2<E,P+ u>, d/dtau |P0 u|^2 - 2<E,P0 u>,
    // and the excess of d/dtau |P- u|^2 + |P- u|^2 - 2<E,P- u> over zero
    std::vector<double> r_plus, r_zero, r_minus;
    std::array<double, 3> max_residual{};
};
ModeTrack mode_track(std::vector<SpectralState> states, const std::vector<std::array<double, 3>>& e_inner = {});

enum class MZVerdict { NeutralDominant, UnstableDominant, Undetermined };
std::string to_string(MZVerdict v);

struct MZReport {
    MZVerdict verdict = MZVerdict::Undetermined;
    double mu = 0.0;
    std::vector<double> tau;
    std::vector<double> margin1; // e^{mu tau/2} W0 - (W+ + W-)
    std::vector<double> margin2; // e^{mu tau/2} W+ - (W0 + W-)
    std::size_t tail = 0;        // samples with the most negative tau forming the tail
};
MZReport mz_classify(const std::vector<SpectralState>& states, double mu);

struct SharpLimitReport {
    double a = 0.0;
    double spread = 0.0; // max |e^{-tau/2} alpha1 - a| over the tail
    std::vector<double> tau, scaled_alpha1, distance_sq, bound;
    bool bound_holds = false;
    MZReport mz;
};
SharpLimitReport sharp_limit_fit(const std::vector<SpectralState>& states, double mu = 0.4);

struct InterpolationReport {
    double f_sup = 0.0, fp_sup = 0.0, fpp_sup = 0.0;
    double rhs = 0.0, margin = 0.0;
};
// |f'| <= (2/xi)|f| + (xi/2)|f''| on a uniform grid over (-l, l); f' by finite differences.
InterpolationReport interpolation_check(const std::vector<double>& x, const std::vector<double>& f,
                                        const std::vector<double>& fpp, double xi);

// Sheet i (0..m) of the glued trombone as a graph over x1; valid between the tips bounding it.
double trombone_sheet_height(const TromboneSpec& spec, int sheet, double t, double x1);

struct SheetRunOptions {
    double tau_start = -10.0;
    double tau_end = -7.5;
    int snapshots = 51;
    double delta = 0.4;         // rho = e^{-delta tau} / 2
    std::size_t grid = 4001;    // unrescaled window nodes
    std::size_t nodes = 2001;   // rescaled nodes on (-2 rho, 2 rho)
    int substeps = 4;           // graphical steps between snapshots
};

struct SheetRun {
    std::vector<RescaledSample> samples;
    std::vector<double> rho_prime;
};
// Evolves the window of sheet i containing (-2 rho, 2 rho) after rescaling, pinned to the glued profile at the ends.
SheetRun trombone_sheet_run(const TromboneSpec& spec, int sheet, const SheetRunOptions& opts = {});

struct SpectralSeries {
    std::vector<SpectralState> states;
    std::vector<ErrorTermReport> errors;
    std::vector<std::array<double, 3>> e_inner;
};
SpectralSeries spectral_series(const SheetRun& run);

} // namespace csf
