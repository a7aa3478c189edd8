#pragma once

#include <complex>
#include <map>
#include <vector>

#include "cliff/special.hpp"
#include "cliff/torus.hpp"

namespace cliff {

// A coset offset + T of the translation lattice, with a multiplicity weight.
struct PointClass {
    IntVec offset;
    double weight = 1.0;
};

struct GreenSumOptions {
    double cut_fraction = 0.45;   // outer kernel cutoff radius as a fraction of the minimal point spacing
    double inner_fraction = 0.25; // inner cutoff radius relative to the outer one
    double rho_width = 300.0;     // mode cutoff |xi| <= rho_width / (cutoff annulus width)
};

// Periodic quintic interpolation of an n x n sample grid (x fastest).
class PeriodicGrid {
public:
    PeriodicGrid() = default;
    PeriodicGrid(int n, std::vector<double> samples);
    int n() const { return n_; }
    const std::vector<double>& samples() const { return s_; }
    double value(ChartPoint p) const;

private:
    int n_ = 0;
    std::vector<double> s_;
};

// Solution of (Delta + 4) phi = 2 pi sum_p weight_p delta_p on the torus, with the sum over
// the classes offset + T. Split as a compactly supported radial kernel around every point plus
// a smooth remainder given by its Fourier modes on the dual lattice T*.
class GreenSum {
public:
    struct Mode {
        int j;
        int l;
        std::complex<double> c;
    };

    GreenSum(const DoublingConfig& cfg, std::vector<PointClass> classes, const GreenSumOptions& opts = {});

    const LatticeFrame& frame() const { return frame_; }
    const std::vector<PointClass>& classes() const { return classes_; }
    const std::vector<Mode>& modes() const { return modes_; }
    double inner_radius() const { return step_.a; }
    double outer_radius() const { return step_.b; }
    double min_spacing() const { return dmin_; }

    // Compactly supported kernel (1 - psi(r)) G(r) and its source -L applied to it.
    double kernel(double r) const;
    double kernel_source(double r) const;
    // Fourier transform 2 pi int source(r) J0(rho r) r dr.
    double source_transform(double rho) const;

    // Points of every class within `radius` of q, as chart displacements p - q (lifted) and weights.
    struct Nearby {
        ChartPoint delta;
        double weight;
        int cls;
    };
    std::vector<Nearby> nearby(ChartPoint q, double radius) const;
    // Distance from q to the closest singular point of any class.
    double nearest_distance(ChartPoint q) const;

    double singular_part(ChartPoint q) const;
    double smooth_part(ChartPoint q) const;  // exact mode sum
    double value(ChartPoint q) const { return singular_part(q) + smooth_part(q); }

    // Smooth part sampled exactly on an n x n grid, and its periodic interpolant.
    std::vector<double> smooth_samples(int n) const;
    void build_interpolant(int n);
    bool has_interpolant() const { return grid_.n() > 0; }
    double smooth_part_fast(ChartPoint q) const;
    double value_fast(ChartPoint q) const { return singular_part(q) + smooth_part_fast(q); }

    // Average along the closed geodesic parallel to the knot at signed normal offset s from the origin.
    double average(double s) const;
    double smooth_average(double s) const;
    // Integral of the kernel along a line at distance sigma from a point.
    double line_integral(double sigma) const;

private:
    DoublingConfig cfg_;
    LatticeFrame frame_;
    std::vector<PointClass> classes_;
    RadialStep step_;
    double dmin_ = 0.0;
    std::vector<double> qnode_, qweight_;  // quadrature of the source transform
    std::vector<Mode> modes_;
    PeriodicGrid grid_;
    std::array<ChartPoint, 2> basis_;
    double basis_inv_[2][2];
};

}  // namespace cliff
