#pragma once

#include "csf/numeric.hpp"
#include "csf/vec2.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace csf {

enum class Topology { Open, Closed };

// Sampled oriented planar curve. Closed curves do not repeat the first point.
class PlanarCurve {
public:
    PlanarCurve(std::vector<Vec2> points, Topology topology, bool embedded = false);

    const std::vector<Vec2>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    const Vec2& operator[](std::size_t i) const { return points_[i]; }
    Topology topology() const { return topology_; }
    bool closed() const { return topology_ == Topology::Closed; }
    bool embedded() const { return embedded_; }
    void set_embedded(bool e) { embedded_ = e; }
    std::size_t segment_count() const { return closed() ? size() : size() - 1; }

private:
    std::vector<Vec2> points_;
    Topology topology_;
    bool embedded_;
};

struct CurveGeometry {
    std::vector<double> s;      // cumulative chord arclength, s[0] = 0
    std::vector<Vec2> tangent;
    std::vector<Vec2> normal;   // J t
    std::vector<double> kappa;  // > 0 when bending toward the normal
    std::vector<double> theta;  // continuous angle lift of the tangent
    std::vector<double> weight; // arclength quadrature weights, kappa*weight = turning angle
    double length = 0.0;        // polyline length
};

CurveGeometry geometry(const PlanarCurve& curve);

// Cubic spline through the samples in the chord-length parameter.
class CurveSpline {
public:
    explicit CurveSpline(const PlanarCurve& curve);

    Vec2 position(double u) const { return {x_(u), y_(u)}; }
    Vec2 derivative(double u, int order = 1) const { return {x_.derivative(u, order), y_.derivative(u, order)}; }
    double param_end() const { return u_.back(); }
    double length() const { return s_.back(); }
    // spline arclength from 0 to the knot / parameter
    const std::vector<double>& knot_arclength() const { return s_; }
    double arclength_at(double u) const;
    double param_at_arclength(double s) const;

private:
    double segment_length(std::size_t i, double ua, double ub) const;

    std::vector<double> u_, s_;
    CubicSpline x_, y_;
    bool closed_;
};

PlanarCurve resample_arclength(const PlanarCurve& curve, std::size_t n);
// resample to spacing close to h (count chosen from the spline length)
PlanarCurve resample_spacing(const PlanarCurve& curve, double h);

double polyline_length(const PlanarCurve& curve);
double smooth_length(const PlanarCurve& curve);
double signed_area(const PlanarCurve& curve);
double min_spacing(const PlanarCurve& curve);
double max_spacing(const PlanarCurve& curve);
PlanarCurve reversed(const PlanarCurve& curve);

struct Intersection {
    bool found = false;
    std::size_t seg_a = 0;
    std::size_t seg_b = 0;
    Vec2 point;
};

Intersection self_intersects(const PlanarCurve& curve);

// Bucket grid over the segments of a polyline for nearest-segment queries.
class SegmentIndex {
public:
    explicit SegmentIndex(const PlanarCurve& curve);
    double distance(Vec2 p) const;

private:
    std::vector<Vec2> pts_;
    std::vector<std::pair<std::size_t, std::size_t>> segs_;
    double x0_ = 0, y0_ = 0, cell_ = 1;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<std::size_t>> cells_;
};

double hausdorff_distance(const PlanarCurve& a, const PlanarCurve& b);
// minimum distance between two polylines (0 if they cross)
double min_distance(const PlanarCurve& a, const PlanarCurve& b);
bool curves_intersect(const PlanarCurve& a, const PlanarCurve& b);

} // namespace csf
