#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace cliff {

// Side length of the square chart lattice; the torus is R^2 / (kPeriod Z^2).
inline constexpr double kPeriod = std::numbers::pi * std::numbers::sqrt2;
inline constexpr double kTorusArea = kPeriod * kPeriod;  // 2 pi^2

struct KnotVector {
    int a = 1;
    int b = 1;
    double norm() const { return std::hypot(double(a), double(b)); }
};

struct ChartPoint {
    double x = 0.0;
    double y = 0.0;
};

// Reduce into the fundamental square [0, kPeriod)^2.
ChartPoint reduce(ChartPoint p);
// Distance on the torus: minimum over lattice translates.
double chart_distance(ChartPoint p, ChartPoint q);
// Shortest lattice-translate of q - p.
ChartPoint chart_delta(ChartPoint p, ChartPoint q);

// q -> sign * q + offset (sign = -1 is the point reflection through offset / 2).
struct TorusIsometry {
    int sign = 1;
    ChartPoint offset;
    ChartPoint apply(ChartPoint p) const;
    TorusIsometry compose(const TorusIsometry& inner) const;
};

enum class Variant { OnePoint, ThreePoint };

struct ConfigOptions {
    double alpha = 0.3;
    double c_bar = 10.0;
    int grid_n = 0;  // 0: choose automatically
    double m_min_factor = 10.0;
    bool strict = false;  // MTooSmall becomes an error instead of a warning
};

struct DoublingConfig {
    KnotVector v;
    int k = 1;
    int m = 1;
    Variant variant = Variant::OnePoint;
    double alpha = 0.3;
    double c_bar = 10.0;
    int grid_n = 0;
    double m_min_factor = 10.0;

    double F = 0.0;
    double r_v = 0.0;
    double knot_length = 0.0;
    std::vector<std::string> warnings;

    int km() const { return k * m; }
    int point_count() const { return variant == Variant::OnePoint ? km() : 3 * km(); }
    double delta() const { return 1.0 / (100.0 * m); }
    double theta() const { return std::numbers::sqrt2 * std::numbers::pi / (k * v.norm()); }
};

// F = sqrt2 |v| tan(sqrt2 pi / (k |v|)).
double f_constant(KnotVector v, int k);

DoublingConfig validate_config(int a, int b, int k, int m, Variant variant = Variant::OnePoint,
                               const ConfigOptions& opts = {});

struct KnotInvariants {
    double r_v;
    double knot_length;
};
KnotInvariants knot_invariants(KnotVector v);

struct IntVec {
    long x = 0;
    long y = 0;
    bool operator==(const IntVec&) const = default;
};

// Exact integer description of the singular lattice. Integer coordinates count
// multiples of unit = sqrt2 pi / (2km), so the chart lattice is modulus * Z^2.
struct LatticeFrame {
    long modulus = 0;     // 2km
    double unit = 0.0;    // chart length of one integer step
    IntVec s;             // spacing of consecutive knot points, 2k (a, b)
    IntVec t;             // spacing of consecutive parallel copies, w / k
    IntVec p1;            // s / 2
    IntVec p2;            // w / (2k)
    IntVec w_coarse;      // w in units of sqrt2 pi / m
    long layer = 1;       // |w x v| / m
    std::array<IntVec, 2> basis;  // reduced basis of the translation lattice T = <s, t> + modulus Z^2
    double line_spacing = 0.0;    // chart distance between adjacent parallel lines hit by T

    ChartPoint to_chart(IntVec p) const { return {unit * p.x, unit * p.y}; }
    long hnf_g = 0, hnf_y0 = 0, hnf_h = 0;  // T = Z (hnf_g, hnf_y0) + Z (0, hnf_h)

    IntVec wrap(IntVec p) const;
    bool in_T(IntVec p) const;
};

LatticeFrame lattice_frame(const DoublingConfig& cfg);

// Shortest vector of M = Z v + m Z^2 off span(v), canonical sign and lexicographic tie-break.
IntVec shortest_off_span(KnotVector v, int m);

struct SingularSet {
    std::vector<ChartPoint> points;
    std::vector<IntVec> ipoints;
    std::vector<int> copy_index;   // parallel copy j in 0..k-1
    std::vector<int> class_index;  // 0 in the one-point variant
    ChartPoint w;
    ChartPoint p1;
    ChartPoint p2;
};

SingularSet build_singular_set(const DoublingConfig& cfg);

// Signed offset of p from the knot line through the origin along the unit normal (-b, a)/|v|.
double perp_coordinate(ChartPoint p, KnotVector v);
double dist_to_Lpar(ChartPoint p, const DoublingConfig& cfg);

std::vector<TorusIsometry> group_generators(const DoublingConfig& cfg);
std::vector<ChartPoint> orbit(ChartPoint p, const std::vector<TorusIsometry>& gens, double tol = 1e-12);

// Exact finite group of integer isometries q -> sign q + offset (mod modulus).
struct IntIsometry {
    int sign = 1;
    IntVec offset;
    bool operator==(const IntIsometry&) const = default;
};
std::vector<IntIsometry> symmetry_group(const LatticeFrame& frame);

using Vec4 = std::array<double, 4>;
Vec4 embed_r4(ChartPoint p);
Vec4 normal_r4(ChartPoint p);
// Point at signed normal distance z along the great circle through embed_r4(p).
Vec4 fermi_r4(ChartPoint p, double z);

}  // namespace cliff
