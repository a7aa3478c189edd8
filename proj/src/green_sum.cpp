#include "cliff/green_sum.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <math.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "cliff/error.hpp"
#include "cliff/spectral_field.hpp"

namespace cliff {

namespace {

long mod_floor(long x, long n) {
    long r = x % n;
    return r < 0 ? r + n : r;
}

double fast_G(double r) { return 0.5 * std::numbers::pi * ::y0(2.0 * r) - kEulerGamma * ::j0(2.0 * r); }
double fast_dG(double r) { return -std::numbers::pi * ::y1(2.0 * r) + 2.0 * kEulerGamma * ::j1(2.0 * r); }

}  // namespace

PeriodicGrid::PeriodicGrid(int n, std::vector<double> samples) : n_(n), s_(std::move(samples)) {}

double PeriodicGrid::value(ChartPoint p) const {
    const double h = kPeriod / n_;
    auto weights = [](double t, double* w) {
        // Lagrange basis on nodes -2..3 evaluated at t in [0, 1).
        for (int i = 0; i < 6; ++i) {
            double num = 1.0, den = 1.0;
            for (int j = 0; j < 6; ++j) {
                if (j == i) continue;
                num *= t - (j - 2);
                den *= double(i - j);
            }
            w[i] = num / den;
        }
    };
    const double fx = p.x / h, fy = p.y / h;
    const long ix = long(std::floor(fx)), iy = long(std::floor(fy));
    double wx[6], wy[6];
    weights(fx - ix, wx);
    weights(fy - iy, wy);
    double sum = 0.0;
    for (int b = 0; b < 6; ++b) {
        const size_t row = size_t(mod_floor(iy + b - 2, n_)) * n_;
        double r = 0.0;
        for (int a = 0; a < 6; ++a) r += wx[a] * s_[row + mod_floor(ix + a - 2, n_)];
        sum += wy[b] * r;
    }
    return sum;
}

GreenSum::GreenSum(const DoublingConfig& cfg, std::vector<PointClass> classes, const GreenSumOptions& opts)
    : cfg_(cfg), frame_(lattice_frame(cfg)), classes_(std::move(classes)) {
    const auto& f = frame_;
    basis_ = {f.to_chart(f.basis[0]), f.to_chart(f.basis[1])};
    const double det = basis_[0].x * basis_[1].y - basis_[1].x * basis_[0].y;
    basis_inv_[0][0] = basis_[1].y / det;
    basis_inv_[0][1] = -basis_[1].x / det;
    basis_inv_[1][0] = -basis_[0].y / det;
    basis_inv_[1][1] = basis_[0].x / det;

    // Minimal distance between distinct singular points.
    dmin_ = std::hypot(basis_[0].x, basis_[0].y);
    for (size_t i = 0; i < classes_.size(); ++i)
        for (size_t j = 0; j < i; ++j) {
            ChartPoint d = f.to_chart({classes_[i].offset.x - classes_[j].offset.x,
                                       classes_[i].offset.y - classes_[j].offset.y});
            const double a0 = basis_inv_[0][0] * d.x + basis_inv_[0][1] * d.y;
            const double b0 = basis_inv_[1][0] * d.x + basis_inv_[1][1] * d.y;
            for (long u = long(std::floor(a0)) - 2; u <= long(std::ceil(a0)) + 2; ++u)
                for (long v = long(std::floor(b0)) - 2; v <= long(std::ceil(b0)) + 2; ++v) {
                    const double x = d.x - u * basis_[0].x - v * basis_[1].x;
                    const double y = d.y - u * basis_[0].y - v * basis_[1].y;
                    dmin_ = std::min(dmin_, std::hypot(x, y));
                }
        }
    if (dmin_ < 1e-12) throw Error(ErrorKind::DegenerateW, "singular classes overlap");

    const double outer = opts.cut_fraction * dmin_;
    step_ = {opts.inner_fraction * outer, outer};
    const double width = step_.b - step_.a;
    const double rho_cut = opts.rho_width / width;

    // Composite 16-point Gauss-Legendre nodes on the cutoff annulus.
    using GL = boost::math::quadrature::gauss<double, 16>;
    const int panels = std::max(24, int(std::ceil(width * rho_cut / 12.0)));
    const double ph = width / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = step_.a + (p + 0.5) * ph;
        for (size_t i = 0; i < GL::abscissa().size(); ++i) {
            const double x = GL::abscissa()[i], w = GL::weights()[i];
            for (double sgn : {-1.0, 1.0}) {
                if (x == 0.0 && sgn > 0) continue;
                const double r = mid + sgn * x * 0.5 * ph;
                qnode_.push_back(r);
                qweight_.push_back(2.0 * std::numbers::pi * kernel_source(r) * r * w * 0.5 * ph);
            }
        }
    }

    // Modes of the dual lattice T*: xi . b in 2 pi Z for both Hermite generators.
    const long mod = f.modulus;
    const double cosets = double(mod) * double(mod) / double(f.hnf_g * f.hnf_h);
    const long jmax = long(rho_cut / std::numbers::sqrt2) + 1;
    const long q_max = long(rho_cut * rho_cut / 2.0);
    std::unordered_map<long, double> transform;
    for (long l = -jmax; l <= jmax; ++l) {
        if (mod_floor(l * f.hnf_h, mod) != 0) continue;
        for (long j = -jmax; j <= jmax; ++j) {
            const long q = j * j + l * l;
            if (q > q_max) continue;
            if (mod_floor(j * f.hnf_g + l * f.hnf_y0, mod) != 0) continue;
            std::complex<double> S = 0.0;
            for (const auto& c : classes_) {
                // xi . offset in units of pi / mod, reduced exactly.
                const long e = mod_floor(2 * (j * c.offset.x + l * c.offset.y), 2 * mod);
                const double ang = -std::numbers::pi * double(e) / double(mod);
                S += c.weight * cosets * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            if (std::abs(S) < 1e-12 * cosets) continue;
            if (q == 2) throw Error(ErrorKind::KernelObstruction, "singular set excites a Jacobi kernel mode");
            auto it = transform.find(q);
            if (it == transform.end()) it = transform.emplace(q, source_transform(std::sqrt(2.0 * q))).first;
            modes_.push_back({int(j), int(l), S * it->second / (kTorusArea * (4.0 - 2.0 * q))});
        }
    }
}

double GreenSum::kernel(double r) const {
    if (r >= step_.b) return 0.0;
    if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "kernel evaluated at a singular point");
    const double g = fast_G(r);
    return r <= step_.a ? g : (1.0 - step_.value(r)) * g;
}

double GreenSum::kernel_source(double r) const {
    if (r <= step_.a || r >= step_.b) return 0.0;
    const double lap = step_.d2(r) + step_.d1(r) / r;
    return fast_G(r) * lap + 2.0 * step_.d1(r) * fast_dG(r);
}

double GreenSum::source_transform(double rho) const {
    double s = 0.0;
    for (size_t i = 0; i < qnode_.size(); ++i) s += qweight_[i] * ::j0(rho * qnode_[i]);
    return s;
}

std::vector<GreenSum::Nearby> GreenSum::nearby(ChartPoint q, double radius) const {
    std::vector<Nearby> out;
    const double shortest = std::hypot(basis_[0].x, basis_[0].y);
    const long K = long(std::ceil(2.0 * radius / shortest)) + 1;
    for (size_t c = 0; c < classes_.size(); ++c) {
        ChartPoint o = frame_.to_chart(classes_[c].offset);
        const double dx = q.x - o.x, dy = q.y - o.y;
        const long a0 = std::lround(basis_inv_[0][0] * dx + basis_inv_[0][1] * dy);
        const long b0 = std::lround(basis_inv_[1][0] * dx + basis_inv_[1][1] * dy);
        for (long u = a0 - K; u <= a0 + K; ++u)
            for (long v = b0 - K; v <= b0 + K; ++v) {
                const double px = o.x + u * basis_[0].x + v * basis_[1].x - q.x;
                const double py = o.y + u * basis_[0].y + v * basis_[1].y - q.y;
                if (px * px + py * py < radius * radius) out.push_back({{px, py}, classes_[c].weight, int(c)});
            }
    }
    return out;
}

double GreenSum::nearest_distance(ChartPoint q) const {
    double best = dmin_;
    for (const auto& n : nearby(q, dmin_)) best = std::min(best, std::hypot(n.delta.x, n.delta.y));
    return best;
}

double GreenSum::singular_part(ChartPoint q) const {
    double s = 0.0;
    for (const auto& n : nearby(q, step_.b)) s += n.weight * kernel(std::hypot(n.delta.x, n.delta.y));
    return s;
}

double GreenSum::smooth_part(ChartPoint q) const {
    const double r2 = std::numbers::sqrt2;
    double s = 0.0;
    for (const auto& md : modes_) {
        const double ph = r2 * (md.j * q.x + md.l * q.y);
        s += md.c.real() * std::cos(ph) - md.c.imag() * std::sin(ph);
    }
    return s;
}

std::vector<double> GreenSum::smooth_samples(int n) const {
    // Folding every mode onto its residue class keeps the grid values exact.
    SpectralField f(n);
    for (const auto& md : modes_) f.at(md.j, md.l) += md.c;
    return f.samples();
}

void GreenSum::build_interpolant(int n) { grid_ = PeriodicGrid(n, smooth_samples(n)); }

double GreenSum::smooth_part_fast(ChartPoint q) const {
    return grid_.n() > 0 ? grid_.value(q) : smooth_part(q);
}

double GreenSum::smooth_average(double s) const {
    const double nv = cfg_.v.norm();
    double sum = 0.0;
    for (const auto& md : modes_) {
        if (md.j * cfg_.v.a + md.l * cfg_.v.b != 0) continue;
        const double ph = std::numbers::sqrt2 * (-md.j * cfg_.v.b + md.l * cfg_.v.a) / nv * s;
        sum += md.c.real() * std::cos(ph) - md.c.imag() * std::sin(ph);
    }
    return sum;
}

double GreenSum::line_integral(double sigma) const {
    sigma = std::abs(sigma);
    if (sigma >= step_.b) return 0.0;
    const double T = std::sqrt(step_.b * step_.b - sigma * sigma);
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double t) {
        const double r = std::hypot(t, sigma);
        return r > 0.0 ? kernel(r) : 0.0;
    };
    double total = 0.0;
    // Split at the inner cutoff and near the peak so each piece is smooth apart from endpoints.
    std::vector<double> cuts = {0.0};
    for (double c : {sigma, std::sqrt(std::max(0.0, step_.a * step_.a - sigma * sigma))})
        if (c > 0.0 && c < T) cuts.push_back(c);
    cuts.push_back(T);
    std::sort(cuts.begin(), cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) total += ts.integrate(f, cuts[i], cuts[i + 1], 1e-14);
    return 2.0 * total;
}

double GreenSum::average(double s) const {
    const double period = kPeriod / cfg_.v.norm();  // perpendicular period of the torus
    const double ls = frame_.line_spacing;
    const double cosets = double(frame_.modulus) * double(frame_.modulus) / double(frame_.hnf_g * frame_.hnf_h);
    const double per_line = cosets * ls / period;
    double sum = smooth_average(s);
    for (const auto& c : classes_) {
        const double oc = perp_coordinate(frame_.to_chart(c.offset), cfg_.v);
        const long n0 = long(std::floor((s - step_.b - oc) / ls));
        const long n1 = long(std::ceil((s + step_.b - oc) / ls));
        for (long n = n0; n <= n1; ++n) {
            const double sigma = s - (oc + n * ls);
            if (std::abs(sigma) < step_.b) sum += c.weight * per_line / cfg_.knot_length * line_integral(sigma);
        }
    }
    return sum;
}

}  // namespace cliff
