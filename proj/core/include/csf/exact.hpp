#pragma once

#include "csf/curve.hpp"

#include <vector>

namespace csf {

enum class Pointing { Left, Right };

inline int sign_of(Pointing p) { return p == Pointing::Right ? 1 : -1; }

struct GrimReaperSpec {
    double aLo = 0.0;
    double aHi = 1.0;
    double b = 0.0;
    Pointing pointing = Pointing::Right;

    double width() const { return aHi - aLo; }
    double k() const;
    double mid() const { return 0.5 * (aLo + aHi); }
    void validate() const;
};

// Tip abscissa b - sigma*k*t.
double grim_reaper_tip_x(const GrimReaperSpec& spec, double t);
// Point at height offset z from the midline.
Vec2 grim_reaper_point(const GrimReaperSpec& spec, double t, double z);
// Point at signed arclength s from the tip (s > 0 toward aHi).
Vec2 grim_reaper_arc(const GrimReaperSpec& spec, double t, double s);
// Arclength from the tip to height offset z.
double grim_reaper_arclength(const GrimReaperSpec& spec, double z);
// Samples equispaced in arclength over |z| <= zmax.
PlanarCurve grim_reaper_curve(const GrimReaperSpec& spec, double t, double zmax, std::size_t n);
// Sheet ordinate of the branch approaching aLo (lower = true) or aHi, as a function of x1.
double grim_reaper_branch(const GrimReaperSpec& spec, double t, double x1, bool lower);

// Unit reaper gamma(phi) = (log cos phi, phi) far from its tip, in long double. The angle gap
// g = pi/2 - |phi| underflows double once the tip distance d exceeds about 700, so points are built from g.
struct FarReaperPoint {
    long double gap = 0; // pi/2 - |phi|
    long double x = 0, y = 0;
    long double d = 0;   // distance to the tip (0, 0)
};
// n points with tip distances equispaced in [dmin, dmax], alternating between the two branches.
std::vector<FarReaperPoint> unit_reaper_far_points(long double dmin, long double dmax, std::size_t n);

PlanarCurve line_samples(double a, double x_lo, double x_hi, std::size_t n);

double circle_radius(double r0, double t);
PlanarCurve shrinking_circle(double r0, double t, std::size_t n = 512, Vec2 center = {});

// Level set G = t + log cosh(y) - log cos(x); the paper clip at time t is {G = 0}.
double paperclip_level(Vec2 p, double t);
Vec2 paperclip_level_gradient(Vec2 p);
PlanarCurve paperclip(double t, std::size_t n = 512);

struct TromboneSpec {
    std::vector<double> a;
    std::vector<double> b;
    Pointing tailDirection = Pointing::Left; // direction of the tail along a_0

    int m() const { return static_cast<int>(b.size()); }
    // finger i in 1..m
    int sigma(int i) const;
    GrimReaperSpec finger(int i) const;
    void validate() const;
};

struct TromboneOptions {
    double tail_length = 30.0;
    double spacing = 0.05;
    double cap_fraction = 0.25; // cap x-extent as a fraction of finger width
};

double trombone_tmin(const TromboneSpec& spec);
double trombone_tip_x(const TromboneSpec& spec, int i, double t);
double trombone_gluing_height(const TromboneSpec& spec, double t0);
PlanarCurve trombone_initial(const TromboneSpec& spec, double t0, const TromboneOptions& opts = {});

} // namespace csf
