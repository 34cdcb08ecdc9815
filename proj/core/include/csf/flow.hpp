#pragma once

#include "csf/curve.hpp"

#include <functional>
#include <string>
#include <vector>

namespace csf {

enum class Scheme { Explicit, SemiImplicit };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct FlowSnapshot {
    double t = 0.0;
    PlanarCurve curve;
    Scheme scheme = Scheme::SemiImplicit;
    double dt = 0.0;
};

struct FlowTrajectory {
    std::vector<FlowSnapshot> snapshots;

    void append(FlowSnapshot s);
    std::size_t size() const { return snapshots.size(); }
    const FlowSnapshot& operator[](std::size_t i) const { return snapshots[i]; }
    const FlowSnapshot& back() const { return snapshots.back(); }
    std::vector<double> times() const;
    // index of the snapshot with time closest to t
    std::size_t nearest(double t) const;
};

// Prescribed endpoint position for open curves: (time, endpoint index 0 or 1, current position).
using EndpointFn = std::function<Vec2(double, int, Vec2)>;

// One step of gamma_t = kappa n. Open curves keep their endpoints unless end_fn is given.
// The semi-implicit step is Crank-Nicolson with a midpoint metric (second order).
FlowSnapshot step_parametric(const FlowSnapshot& snap, double dt, Scheme scheme, const EndpointFn& end_fn = {});

struct FlowOptions {
    Scheme scheme = Scheme::SemiImplicit;
    double dt = 1e-3;
    double snapshot_every = 0.0; // time between stored snapshots; 0 stores only endpoints
    int resample_every = 50;     // steps; 0 disables the cadence
    double drift_tolerance = 0.05;
    double spacing = 0.0;        // target spacing at resample; 0 keeps the sample count
    double theta = 0.5;          // implicitness of the semi-implicit scheme
    bool midpoint_metric = true; // re-solve with the metric at the predicted midpoint
    bool monitor_embedded = true;
    EndpointFn end_fn;
    std::function<void(const FlowSnapshot&)> on_snapshot;
};

FlowTrajectory evolve(const PlanarCurve& curve, double t0, double t1, const FlowOptions& opts);

double spacing_drift(const PlanarCurve& curve);

enum class GraphAxis { OverX1, OverX2 };

// Profile U sampled on a uniform grid over [lo, hi] (periodic grids exclude hi).
struct SheetGraph {
    GraphAxis axis = GraphAxis::OverX1;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> u;
    double t = 0.0;
    bool periodic = false;

    std::size_t size() const { return u.size(); }
    double dx() const;
    double x(std::size_t j) const { return lo + dx() * static_cast<double>(j); }
    void validate() const;
};

struct GraphBC {
    enum class Kind { Dirichlet, Periodic, FromExactTail };
    Kind kind = Kind::Dirichlet;
    double left = 0.0;
    double right = 0.0;
    // boundary ordinates at a given time
    std::function<std::pair<double, double>(double)> tail;

    static GraphBC dirichlet(double l, double r) { return {Kind::Dirichlet, l, r, {}}; }
    static GraphBC periodic_bc() { return {Kind::Periodic, 0, 0, {}}; }
    static GraphBC from_exact_tail(std::function<std::pair<double, double>(double)> f) { return {Kind::FromExactTail, 0, 0, std::move(f)}; }
};

// U_t = (arctan U_x)_x, flux linearized about the current state and solved implicitly.
SheetGraph step_graphical(const SheetGraph& sheet, double dt, const GraphBC& bc);
SheetGraph evolve_graphical(SheetGraph sheet, double t1, double dt, const GraphBC& bc);
// Graph samples as a polyline.
PlanarCurve sheet_curve(const SheetGraph& sheet);

struct RescaledSheet {
    double tau = 0.0;
    std::vector<double> y;
    std::vector<double> u;
};

// u(y, tau) = e^{tau/2} U(e^{-tau/2} y, -e^{-tau}), node by node.
RescaledSheet rescale(const SheetGraph& sheet);
// Same, resampled onto n uniform nodes of (-2 rho, 2 rho) by spline.
RescaledSheet rescale(const SheetGraph& sheet, double rho, std::size_t n);
SheetGraph unrescale(const RescaledSheet& r, GraphAxis axis = GraphAxis::OverX1);

enum class Verdict { Pass, Fail, NotApplicable };
std::string to_string(Verdict v);

struct AvoidanceReport {
    std::vector<double> t;
    std::vector<double> distance;
    double tolerance = 1e-3;
    Verdict verdict = Verdict::NotApplicable;
};

AvoidanceReport avoidance_check(const FlowTrajectory& a, const FlowTrajectory& b, double tolerance = 1e-3);

} // namespace csf
