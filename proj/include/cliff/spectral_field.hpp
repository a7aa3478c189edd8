#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "cliff/torus.hpp"

namespace cliff {

// Real field on the torus stored as Fourier coefficients of modes exp(i sqrt2 (j x + l y)),
// |j|, |l| <= n/2. Storage index: (l mod n) * n + (j mod n).
class SpectralField {
public:
    using Complex = std::complex<double>;

    SpectralField() = default;
    explicit SpectralField(int n);

    static SpectralField from_samples(int n, const std::vector<double>& samples);
    static SpectralField from_function(int n, const std::function<double(ChartPoint)>& f);

    int n() const { return n_; }
    Complex& at(int j, int l) { return c_[index(j, l)]; }
    Complex at(int j, int l) const { return c_[index(j, l)]; }
    const std::vector<Complex>& coefficients() const { return c_; }
    std::vector<Complex>& coefficients() { return c_; }

    // Samples at (i, j) * kPeriod / n, row-major with x fastest.
    std::vector<double> samples() const;
    double evaluate(ChartPoint p) const;
    double l2_norm() const;  // sqrt of the sum of |c|^2

    // Signed frequency represented by storage slot s.
    int freq(int s) const { return s < n_ / 2 ? s : s - n_; }

private:
    int index(int j, int l) const;
    int n_ = 0;
    std::vector<Complex> c_;
};

// Multiply by the Jacobi symbol 4 - 2(j^2 + l^2), divided by scale^2 for the rescaled metric.
SpectralField apply_jacobi(const SpectralField& f, double scale = 1.0);

// Inverse on the complement of the four kernel modes (+-1, +-1).
SpectralField solve_jacobi(const SpectralField& rhs, double scale = 1.0, double kernel_tol = 1e-8);
// Largest kernel coefficient magnitude relative to the l2 norm of f.
double kernel_component(const SpectralField& f);

SpectralField knot_average(const SpectralField& f, KnotVector v);
SpectralField knot_oscillation(const SpectralField& f, KnotVector v);

// Reynolds average over the exact symmetry group.
SpectralField symmetrize(const SpectralField& f, const LatticeFrame& frame, const std::vector<IntIsometry>& group);

}  // namespace cliff
