#pragma once

#include "csf/exact.hpp"
#include "csf/flow.hpp"
#include "csf/functionals.hpp"

#include <optional>
#include <string>
#include <vector>

namespace csf {

struct CriticalPoint {
    std::size_t index = 0; // nearest sample
    double s = 0.0;        // refined arclength
    Vec2 point;
    double value = 0.0;    // refined value of the examined function
    bool maximum = false;
};

struct FeatureOptions {
    Vec2 basepoint{};
    double kappa_floor = 1e-6;     // relative to max |kappa|; smaller curvature is treated as zero
    double graphical_radius = 0.0; // 0: half the smallest tip distance
    double constant_tolerance = 1e-4; // relative spread of |kappa| below which a closed curve counts as round
};

struct FeatureSet {
    std::vector<CriticalPoint> sharp_vertices; // local maxima of |kappa|
    std::vector<CriticalPoint> flat_vertices;  // other curvature critical points
    std::vector<CriticalPoint> tips;           // local maxima of the distance to the basepoint
    std::vector<CriticalPoint> knuckles;       // local minima of the distance to the basepoint
    std::vector<CriticalPoint> inflections;    // kappa sign changes
    std::vector<SheetGraph> sheets;            // graphs over x1 within the graphical radius
    std::vector<FingerRegion> fingers;
    bool constant_curvature = false;           // no isolated curvature critical points
    double graphical_radius = 0.0;
};

FeatureSet detect_features(const PlanarCurve& curve, const FeatureOptions& opts = {});

enum class EdgeTag { A1, A2, B, Unclassified };
std::string to_string(EdgeTag t);

struct EdgeClass {
    EdgeTag tag = EdgeTag::Unclassified;
    std::optional<Vec2> inflection;  // A1
    std::optional<Vec2> flat_vertex; // A2
    int sign_changes = 0;
    int interior_minima = 0;         // of |kappa|
    bool kappa_monotone = false;
    double tail_kappa = 0.0;         // |kappa| at the flatter end
    std::string diagnostics;
};

// The edge is an ordered sub-curve between sharp vertices, or between a vertex and the end of a tail.
EdgeClass classify_edge(const PlanarCurve& edge, double kappa_floor = 1e-6);

struct StripReport {
    double A = 0.0; // 1 + max |a_i|
    std::vector<double> t, max_height, margin;
    std::vector<double> finger_margin; // per snapshot, min over fingers of the strip margin of the arc
    Verdict verdict = Verdict::NotApplicable;
};
StripReport strip_confinement(const FlowTrajectory& traj, const std::vector<double>& asymptotes, double tol = 1e-9);

// Fingers followed across snapshots by id, with a displacement gate of 3/|kappa(v)| plus the vertex travel.
std::vector<FingerRegion> track_finger(const FlowTrajectory& traj, int finger_id);

struct VertexReport {
    std::vector<double> t, kappa, theta, tip_x, speed;
    double expected_kappa = 0.0; // pi / |a_i - a_j|
    double speed_error = 0.0;    // max relative deviation of |speed| from expected, over t <= t_cut
    double theta_error = 0.0;    // max |theta - pi/2| over t <= t_cut
    double kappa_ratio = 0.0;    // min |kappa| / expected over t <= t_cut
    double strip_bound = 0.0;    // -3/(2A)
};
VertexReport vertex_asymptotics(const FlowTrajectory& traj, int finger_id, double t_cut = INFINITY);

struct HeightDecayFit {
    double a = 0.0;
    double beta = 0.0;  // -slope of log sup |U - a| against distance to the nearest vertex
    double r2 = 0.0;
    std::size_t points = 0;
    bool degenerate = false; // no deviation above the floor
    bool pass = false;
};
// Samples (x, U) of a sheet, vertices bounding it; bins of width bin, deviations below floor are discarded.
HeightDecayFit height_decay_fit(const std::vector<double>& x, const std::vector<double>& U, double a,
                                const std::vector<double>& vertex_x, double min_distance = 1.0, double bin = 0.5,
                                double floor = 1e-12);
// Sheet i of a snapshot: samples between consecutive finger tips (tails for i = 0 and i = m).
std::pair<std::vector<double>, std::vector<double>> sheet_samples(const PlanarCurve& curve, int sheet);
std::vector<double> tip_abscissae(const PlanarCurve& curve);

struct BestReaper {
    double b = 0.0;
    double C0 = 0.0;
    double slope = 0.0;
    GrimReaperSpec reaper;
    std::vector<double> t, symmetric_difference;
    AreaSeries area;
};
BestReaper fit_best_reaper(const FlowTrajectory& traj, int finger_id, double fit_from = 0.5);
BestReaper fit_best_reaper(const AreaSeries& area, double aLo, double aHi, Pointing pointing);
// |F(t) delta Fhat_b(t)| for a finger region against the region of the reaper.
double symmetric_difference(const PlanarCurve& curve, const FingerRegion& finger, const GrimReaperSpec& reaper, double t);

struct TipLimitReport {
    std::vector<double> t, residual;
    bool decreasing = false;     // non-increasing toward the most negative time, within slack
    double final_residual = 0.0; // at the most negative time
    Verdict verdict = Verdict::NotApplicable;
};
TipLimitReport tip_limit_check(const FlowTrajectory& traj, int finger_id, double b, double slack = 1e-4);

struct ConfigVerdict {
    bool pass = false;
    std::string pattern; // empty on pass
    std::string detail;
    int turn_index = -1;
};
ConfigVerdict validate_config(const TromboneSpec& spec);

struct ContractionReport {
    std::vector<double> t, A;
    double worst_increase = 0.0; // max (A_{k+1} - A_k) / A_k
    Verdict verdict = Verdict::NotApplicable;
};
ContractionReport l1_contraction_check(const FlowTrajectory& m, const FlowTrajectory& ref, double zlo, double zhi,
                                       double rel_tol = 1e-6);

struct SlopeReport {
    std::vector<double> t, max_ratio;
    double lambda_fit = 0.0; // infimum of the Lambda values for which the check passes on every snapshot
    Verdict verdict = Verdict::NotApplicable;
};
SlopeReport asymptotic_slope_check(const FlowTrajectory& traj, double delta, double Lambda);

} // namespace csf
