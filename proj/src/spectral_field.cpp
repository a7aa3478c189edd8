#include "cliff/spectral_field.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "cliff/error.hpp"

namespace cliff {

namespace {

void fft2(int n, std::vector<std::complex<double>>& data, int direction) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = fftw_plan_dft_2d(n, n, ptr, ptr, direction, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

long mod_floor(long x, long n) {
    long r = x % n;
    return r < 0 ? r + n : r;
}

}  // namespace

SpectralField::SpectralField(int n) : n_(n), c_(size_t(n) * n) {
    if (n <= 0 || n % 2 != 0) throw Error(ErrorKind::DomainError, "grid size must be even and positive");
}

int SpectralField::index(int j, int l) const { return int(mod_floor(l, n_)) * n_ + int(mod_floor(j, n_)); }

SpectralField SpectralField::from_samples(int n, const std::vector<double>& samples) {
    SpectralField f(n);
    for (size_t i = 0; i < samples.size(); ++i) f.c_[i] = samples[i];
    fft2(n, f.c_, FFTW_FORWARD);
    const double scale = 1.0 / (double(n) * n);
    for (auto& c : f.c_) c *= scale;
    return f;
}

SpectralField SpectralField::from_function(int n, const std::function<double(ChartPoint)>& fn) {
    std::vector<double> s(size_t(n) * n);
    const double h = kPeriod / n;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) s[size_t(iy) * n + ix] = fn({ix * h, iy * h});
    return from_samples(n, s);
}

std::vector<double> SpectralField::samples() const {
    std::vector<Complex> data = c_;
    fft2(n_, data, FFTW_BACKWARD);
    std::vector<double> out(data.size());
    for (size_t i = 0; i < data.size(); ++i) out[i] = data[i].real();
    return out;
}

double SpectralField::evaluate(ChartPoint p) const {
    const double s = std::numbers::sqrt2;
    double sum = 0.0;
    for (int sl = 0; sl < n_; ++sl) {
        const int l = freq(sl);
        for (int sj = 0; sj < n_; ++sj) {
            const Complex c = c_[size_t(sl) * n_ + sj];
            if (c == Complex(0.0)) continue;
            const double ph = s * (freq(sj) * p.x + l * p.y);
            sum += c.real() * std::cos(ph) - c.imag() * std::sin(ph);
        }
    }
    return sum;
}

double SpectralField::l2_norm() const {
    double s = 0.0;
    for (const auto& c : c_) s += std::norm(c);
    return std::sqrt(s);
}

SpectralField apply_jacobi(const SpectralField& f, double scale) {
    SpectralField out = f;
    const int n = f.n();
    for (int sl = 0; sl < n; ++sl)
        for (int sj = 0; sj < n; ++sj) {
            const int j = f.freq(sj), l = f.freq(sl);
            out.at(j, l) *= (4.0 - 2.0 * (j * j + l * l)) / (scale * scale);
        }
    return out;
}

double kernel_component(const SpectralField& f) {
    const double norm = f.l2_norm();
    if (norm == 0.0) return 0.0;
    double worst = 0.0;
    for (int j : {-1, 1})
        for (int l : {-1, 1}) worst = std::max(worst, std::abs(f.at(j, l)));
    return worst / norm;
}

SpectralField solve_jacobi(const SpectralField& rhs, double scale, double kernel_tol) {
    if (kernel_component(rhs) > kernel_tol)
        throw Error(ErrorKind::KernelObstruction, "right-hand side has a kernel component");
    SpectralField out = rhs;
    const int n = rhs.n();
    for (int sl = 0; sl < n; ++sl)
        for (int sj = 0; sj < n; ++sj) {
            const int j = rhs.freq(sj), l = rhs.freq(sl);
            const int q = j * j + l * l;
            if (q == 2)
                out.at(j, l) = 0.0;
            else
                out.at(j, l) *= scale * scale / (4.0 - 2.0 * q);
        }
    return out;
}

namespace {
SpectralField split_average(const SpectralField& f, KnotVector v, bool keep_parallel) {
    SpectralField out = f;
    const int n = f.n();
    for (int sl = 0; sl < n; ++sl)
        for (int sj = 0; sj < n; ++sj) {
            const int j = f.freq(sj), l = f.freq(sl);
            const bool parallel = j * v.a + l * v.b == 0;
            if (parallel != keep_parallel) out.at(j, l) = 0.0;
        }
    return out;
}
}  // namespace

SpectralField knot_average(const SpectralField& f, KnotVector v) { return split_average(f, v, true); }
SpectralField knot_oscillation(const SpectralField& f, KnotVector v) { return split_average(f, v, false); }

SpectralField symmetrize(const SpectralField& f, const LatticeFrame& frame, const std::vector<IntIsometry>& group) {
    // (f o g)(q) = f(sign q + o) moves the coefficient of xi to sign * xi with phase exp(i xi . o).
    const int n = f.n();
    const long mod = frame.modulus;
    std::vector<SpectralField::Complex> roots(size_t(2 * mod));
    for (long r = 0; r < 2 * mod; ++r) {
        const double ang = std::numbers::pi * double(r) / double(mod);
        roots[r] = {std::cos(ang), std::sin(ang)};
    }
    SpectralField out(n);
    for (const auto& g : group) {
        for (int sl = 0; sl < n; ++sl)
            for (int sj = 0; sj < n; ++sj) {
                const int j = f.freq(sj), l = f.freq(sl);
                const auto c = f.at(j, l);
                if (c == SpectralField::Complex(0.0)) continue;
                // xi . o = pi (j ox + l oy) / mod * 2; exponent counted in units of pi / mod.
                const long e = mod_floor(2 * (long(j) * g.offset.x + long(l) * g.offset.y), 2 * mod);
                out.at(g.sign * j, g.sign * l) += c * roots[e];
            }
    }
    for (auto& c : out.coefficients()) c /= double(group.size());
    return out;
}

}  // namespace cliff
