#pragma once

namespace cliff {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Radial solution of u'' + u'/r + 4u = 0 normalized to u = log r + O(r^2 log r):
// (pi/2) Y0(2r) - gamma_E J0(2r).
double singular_kernel_Gp(double r);
double singular_kernel_Gp_deriv(double r);

// Smooth step chi(t) = B(t) / (B(t) + B(1 - t)), B(t) = exp(-1/t) for t > 0, else 0.
double smooth_step(double t);
double smooth_step_d1(double t);
double smooth_step_d2(double t);

// Blend: f for d <= a, g for d >= b, smooth in between.
double cutoff(double a, double b, double d, double f, double g);

// Radial profile psi(r) = chi((r - a) / (b - a)) with first and second r-derivatives.
struct RadialStep {
    double a;
    double b;
    double value(double r) const;
    double d1(double r) const;
    double d2(double r) const;
};

}  // namespace cliff
