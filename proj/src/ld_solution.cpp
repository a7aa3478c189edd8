#include "cliff/ld_solution.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

#include "cliff/error.hpp"
#include "cliff/special.hpp"

namespace cliff {

int default_grid_n(const DoublingConfig& cfg) {
    int n = 256;
    while (n < 16 * cfg.m) n *= 2;
    return n;
}

LDSolution::LDSolution(const DoublingConfig& cfg, int cls, const LDOptions& opts)
    : cfg_(cfg), cls_(cls), L_(build_singular_set(cfg)) {
    grid_n_ = cfg.grid_n > 0 ? cfg.grid_n : default_grid_n(cfg);
    if (grid_n_ < 16 * cfg.m) throw Error(ErrorKind::ResolutionError, "grid_n must be at least 16 m");
    if (grid_n_ % 2 != 0) throw Error(ErrorKind::ResolutionError, "grid_n must be even");
    if (cls < 0 || cls >= (cfg.variant == Variant::OnePoint ? 1 : 3))
        throw Error(ErrorKind::DomainError, "orbit class index out of range");
    const LatticeFrame f = lattice_frame(cfg);
    const IntVec centers[3] = {{0, 0}, f.p1, f.p2};
    green_ = std::make_shared<GreenSum>(cfg, std::vector<PointClass>{{centers[cls], 1.0}}, opts.green);
    if (3.0 * delta() >= green_->inner_radius())
        throw Error(ErrorKind::ResolutionError, "kernel cutoff does not clear the 3 delta disks");
    int interp = opts.interp_n;
    if (interp == 0) {
        // Resolve modes up to |xi| (cutoff width) = 160; finer modes are negligible off the grid nodes.
        const double width = green_->outer_radius() - green_->inner_radius();
        const int jmax = int(160.0 / width / std::numbers::sqrt2) + 1;
        interp = 256;
        while (interp < 2 * jmax + 2 && interp < 2048) interp *= 2;
    }
    if (interp > 0) green_->build_interpolant(interp);
}

std::vector<ChartPoint> LDSolution::class_points() const {
    std::vector<ChartPoint> out;
    for (size_t i = 0; i < L_.points.size(); ++i)
        if (L_.class_index[i] == cls_) out.push_back(L_.points[i]);
    return out;
}

ChartPoint LDSolution::base_point() const {
    if (cls_ == 1) return L_.p1;
    if (cls_ == 2) return L_.p2;
    return {0.0, 0.0};
}

void LDSolution::require_decomposed() const {
    if (!decomposed()) throw Error(ErrorKind::DomainError, "closed-form decomposition is defined for the one-point variant");
}

double LDSolution::average_amplitude() const {
    return cfg_.m / (std::sqrt(8.0) * cfg_.v.norm() * std::sin(cfg_.theta()));
}

double LDSolution::correction_amplitude() const { return cfg_.m / (std::sqrt(8.0) * cfg_.v.norm()); }

double LDSolution::closed_form_average(double d) const { return average_amplitude() * std::cos(cfg_.theta() - 2.0 * d); }

double LDSolution::ghat(ChartPoint q) const {
    require_decomposed();
    const double dl = delta();
    const double dlp = dist_to_Lpar(q, cfg_);
    double s = 0.0;
    for (const auto& n : green_->nearby(q, 3.0 * dl)) {
        const double r = std::hypot(n.delta.x, n.delta.y);
        s += cutoff(2.0 * dl, 3.0 * dl, r, singular_kernel_Gp(r) - std::log(dl) * std::cos(2.0 * dlp), 0.0);
    }
    return s;
}

double LDSolution::phihat(ChartPoint q) const {
    require_decomposed();
    const double d = dist_to_Lpar(q, cfg_);
    const double m = cfg_.m;
    return closed_form_average(d) - cutoff(2.0 / m, 3.0 / m, d, correction_amplitude() * std::sin(2.0 * d), 0.0);
}

namespace {

// Phi_R - Ghat contribution of one point at distance r, finite at r = 0.
double local_difference(const GreenSum& g, double r, double dl, double dlp) {
    const double lc = std::log(dl) * std::cos(2.0 * dlp);
    if (r < 2.0 * dl) return lc;
    if (r < 3.0 * dl) {
        const double chi = smooth_step((r - 2.0 * dl) / dl);
        return chi * singular_kernel_Gp(r) + (1.0 - chi) * lc;
    }
    return g.kernel(r);
}

}  // namespace

double LDSolution::phi_prime(ChartPoint q) const {
    require_decomposed();
    const double dl = delta();
    const double dlp = dist_to_Lpar(q, cfg_);
    double s = green_->smooth_part(q);
    for (const auto& n : green_->nearby(q, green_->outer_radius()))
        s += local_difference(*green_, std::hypot(n.delta.x, n.delta.y), dl, dlp);
    return s - phihat(q);
}

double LDSolution::e_prime(ChartPoint q) const {
    require_decomposed();
    const double dl = delta();
    const double m = cfg_.m;
    const double d = dist_to_Lpar(q, cfg_);
    const RadialStep outer{2.0 / m, 3.0 / m};
    double e = correction_amplitude() * (-outer.d2(d) * std::sin(2.0 * d) - 4.0 * outer.d1(d) * std::cos(2.0 * d));
    const RadialStep inner{2.0 * dl, 3.0 * dl};
    const double ld = std::log(dl);
    for (const auto& n : green_->nearby(q, 3.0 * dl)) {
        const double r = std::hypot(n.delta.x, n.delta.y);
        if (r <= 2.0 * dl) continue;
        const double y = -perp_coordinate(n.delta, cfg_.v);
        const double f = singular_kernel_Gp(r) - ld * std::cos(2.0 * y);
        const double fr = singular_kernel_Gp_deriv(r) + 2.0 * ld * std::sin(2.0 * y) * y / r;
        e += f * (inner.d2(r) + inner.d1(r) / r) + 2.0 * inner.d1(r) * fr;
    }
    return e / (m * m);
}

double LDSolution::regular_part(ChartPoint p) const {
    for (ChartPoint c : class_points())
        if (chart_distance(c, p) <= 1e-9) return green_->smooth_part(c);
    throw Error(ErrorKind::NotSingularPoint, "point is not in the singular class");
}

std::vector<double> LDSolution::phi_prime_samples() const {
    require_decomposed();
    const int n = grid_n_;
    std::vector<double> s = green_->smooth_samples(n);
    const double h = kPeriod / n;
    const double dl = delta();
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const ChartPoint q{ix * h, iy * h};
            const double dlp = dist_to_Lpar(q, cfg_);
            double v = s[size_t(iy) * n + ix];
            for (const auto& nb : green_->nearby(q, green_->outer_radius()))
                v += local_difference(*green_, std::hypot(nb.delta.x, nb.delta.y), dl, dlp);
            s[size_t(iy) * n + ix] = v - phihat(q);
        }
    return s;
}

SpectralField LDSolution::phi_prime_field() const { return SpectralField::from_samples(grid_n_, phi_prime_samples()); }

SpectralField LDSolution::source_field() const {
    const double m2 = double(cfg_.m) * cfg_.m;
    SpectralField f = SpectralField::from_function(grid_n_, [&](ChartPoint q) { return m2 * e_prime(q); });
    const LatticeFrame fr = lattice_frame(cfg_);
    return symmetrize(f, fr, symmetry_group(fr));
}

namespace {

void put_u32(std::ostream& os, uint32_t v) {
    for (int i = 0; i < 4; ++i) os.put(char((v >> (8 * i)) & 0xff));
}

void put_f64(std::ostream& os, double d) {
    const auto bits = std::bit_cast<uint64_t>(d);
    for (int i = 0; i < 8; ++i) os.put(char((bits >> (8 * i)) & 0xff));
}

}  // namespace

void write_ldf1(const std::string& path, int n, const std::vector<double>& samples) {
    if (samples.size() != size_t(n) * n) throw Error(ErrorKind::DomainError, "sample count does not match grid size");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorKind::IoError, "cannot open " + path);
    os.write("LDF1", 4);
    put_u32(os, uint32_t(n));
    for (double d : samples) put_f64(os, d);
    if (!os) throw Error(ErrorKind::IoError, "write failed for " + path);
}

std::vector<double> read_ldf1(const std::string& path, int& n) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::IoError, "cannot open " + path);
    char magic[4];
    unsigned char buf[8];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "LDF1", 4) != 0) throw Error(ErrorKind::IoError, "bad LDF1 magic in " + path);
    is.read(reinterpret_cast<char*>(buf), 4);
    uint32_t u = 0;
    for (int i = 0; i < 4; ++i) u |= uint32_t(buf[i]) << (8 * i);
    n = int(u);
    std::vector<double> out(size_t(n) * n);
    for (auto& d : out) {
        is.read(reinterpret_cast<char*>(buf), 8);
        uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= uint64_t(buf[i]) << (8 * i);
        d = std::bit_cast<double>(bits);
    }
    if (!is) throw Error(ErrorKind::IoError, "truncated LDF1 file " + path);
    return out;
}

}  // namespace cliff
