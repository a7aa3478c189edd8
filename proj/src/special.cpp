#include "cliff/special.hpp"

#include <cmath>
#include <numbers>

#include "cliff/error.hpp"

namespace cliff {

double singular_kernel_Gp(double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "singular kernel needs r > 0");
    return 0.5 * std::numbers::pi * std::cyl_neumann(0.0, 2.0 * r) - kEulerGamma * std::cyl_bessel_j(0.0, 2.0 * r);
}

double singular_kernel_Gp_deriv(double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "singular kernel needs r > 0");
    return -std::numbers::pi * std::cyl_neumann(1.0, 2.0 * r) + 2.0 * kEulerGamma * std::cyl_bessel_j(1.0, 2.0 * r);
}

namespace {
// Exponent q with chi = 1 / (1 + exp(q)).
double step_exponent(double t) { return 1.0 / t - 1.0 / (1.0 - t); }
}  // namespace

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double q = step_exponent(t);
    if (q > 700.0) return 0.0;
    return 1.0 / (1.0 + std::exp(q));
}

double smooth_step_d1(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double c = smooth_step(t);
    double s = 1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t));
    return c * (1.0 - c) * s;
}

double smooth_step_d2(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double c = smooth_step(t);
    double u = 1.0 - t;
    double s = 1.0 / (t * t) + 1.0 / (u * u);
    double ds = -2.0 / (t * t * t) + 2.0 / (u * u * u);
    double d1 = c * (1.0 - c) * s;
    return (1.0 - 2.0 * c) * d1 * s + c * (1.0 - c) * ds;
}

double cutoff(double a, double b, double d, double f, double g) {
    if (!(a < b)) throw Error(ErrorKind::DomainError, "cutoff needs a < b");
    double c = smooth_step((d - a) / (b - a));
    return (1.0 - c) * f + c * g;
}

double RadialStep::value(double r) const { return smooth_step((r - a) / (b - a)); }
double RadialStep::d1(double r) const { return smooth_step_d1((r - a) / (b - a)) / (b - a); }
double RadialStep::d2(double r) const { return smooth_step_d2((r - a) / (b - a)) / ((b - a) * (b - a)); }

}  // namespace cliff
