#pragma once

#include "csf/curve.hpp"
#include "csf/exact.hpp"
#include "csf/flow.hpp"

#include <functional>
#include <vector>

namespace csf {

// <f, g>_H = int f g e^{-y^2/4} / sqrt(4 pi) dy by Gauss-Hermite (y = 2u).
double gaussian_inner(const std::function<double(double)>& f, const std::function<double(double)>& g, int nodes = 64);
// Sampled version: composite trapezoid on the grid y (increasing). Samples outside the grid count as zero.
double gaussian_inner(const std::vector<double>& y, const std::vector<double>& f, const std::vector<double>& g);
// Gaussian weight e^{-y^2/4}/sqrt(4 pi).
double gaussian_weight(double y);

struct EntropyOptions {
    int lambda_count = 60;
    double lambda_min = 1e-3;
    double lambda_max_factor = 10.0; // times diam^2
    int grid = 41;
    int max_sweeps = 60;
};

struct EntropyResult {
    double value = 0.0;
    Vec2 x0;
    double lambda = 0.0;
    double grid_value = 0.0;
    int iterations = 0;
    double gap = 0.0; // last refinement sweep improvement
    Vec2 window_lo, window_hi;
};

// Gaussian density of the polyline, exact per segment.
double gaussian_density(const PlanarCurve& curve, Vec2 x0, double lambda);
EntropyResult entropy(const PlanarCurve& curve, const EntropyOptions& opts = {});

double total_curvature(const PlanarCurve& curve);

struct FingerRegion {
    int id = 0;                   // 1-based, ordered along the curve
    std::size_t first = 0;        // first sample strictly inside the arc
    std::size_t last = 0;         // last sample strictly inside the arc
    Vec2 entry, exit;             // axis crossings bounding the arc
    Vec2 tip;                     // farthest point from the axis
    Vec2 vertex;                  // curvature maximum on the arc
    double vertex_kappa = 0.0;
    double vertex_theta = 0.0;
    std::size_t vertex_index = 0;
    double aLo = 0.0, aHi = 0.0;  // crossing ordinates (asymptote estimates)
    Pointing pointing = Pointing::Right;
    double area = 0.0;
};

// Crossings of the x2-axis along the curve as (segment index, point).
std::vector<std::pair<std::size_t, Vec2>> axis_crossings(const PlanarCurve& curve);
std::vector<FingerRegion> finger_regions(const PlanarCurve& curve);
// Area enclosed by an arc and the x2-axis; the arc must cross the axis exactly twice.
double finger_area(const PlanarCurve& arc);
double finger_area(const PlanarCurve& curve, const FingerRegion& finger);

struct AreaSeries {
    std::vector<double> t;
    std::vector<double> area;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // max abs residual of the fit
    double r2 = 0.0;
    std::size_t fit_start = 0; // first sample of the fit window
};

// Fit over the last half of the series (fit_from = 0.5) or a custom tail fraction.
AreaSeries area_series(const FlowTrajectory& traj, int finger_id, double fit_from = 0.5);
AreaSeries fit_area(std::vector<double> t, std::vector<double> area, double fit_from = 0.5);

// int |V - Vbar| dz on a common grid (trapezoid).
double l1_graph_distance(const SheetGraph& v, const SheetGraph& vbar);
// Exact L1 distance between two polylines that are graphs over x2, on the window zlo < x2 < zhi.
// Flat tails outside the window are ignored; inside it both curves must be strictly monotone in x2.
double l1_graph_distance(const PlanarCurve& a, const PlanarCurve& b, double zlo, double zhi);
// (z, x1) samples of a graph over x2 restricted to [zlo, zhi], z increasing.
std::pair<std::vector<double>, std::vector<double>> graph_over_x2(const PlanarCurve& curve, double zlo, double zhi);

} // namespace csf
