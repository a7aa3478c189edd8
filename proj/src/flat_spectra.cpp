#include "cliff/flat_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cliff/error.hpp"

namespace cliff {

namespace {
constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;
constexpr double kLatticeTol = 1e-12;
constexpr double kGroupTol = 1e-9;

struct Mode {
    double lambda;
    long p, q;
};

// All modes of S with lambda <= lambda_max, sorted by (lambda, q, p).
std::vector<Mode> modes_up_to(const FlatLattice& lat, double lambda_max) {
    std::vector<Mode> out;
    const double rad = std::sqrt(std::max(0.0, lambda_max) * (1.0 + kGroupTol) / kFourPiSq);
    const long qmax = long(std::floor(rad));
    for (long q = 0; q <= qmax; ++q) {
        const double span = lat.b * std::sqrt(std::max(0.0, rad * rad - double(q) * q));
        const long plo = long(std::floor(q * lat.a - span)) - 1, phi = long(std::ceil(q * lat.a + span)) + 1;
        for (long p = plo; p <= phi; ++p) {
            if (q == 0 && p < 0) continue;
            const double l = flat_eigenvalue(lat, p, q);
            if (l <= lambda_max * (1.0 + kGroupTol)) out.push_back({l, p, q});
        }
    }
    std::sort(out.begin(), out.end(), [](const Mode& x, const Mode& y) {
        if (x.lambda != y.lambda) return x.lambda < y.lambda;
        return x.q != y.q ? x.q < y.q : x.p < y.p;
    });
    return out;
}

}  // namespace

void validate_lattice(const FlatLattice& lat) {
    if (!(lat.b > 0.0) || lat.a < -kLatticeTol || lat.a > 0.5 + kLatticeTol || lat.a * lat.a + lat.b * lat.b < 1.0 - kLatticeTol)
        throw Error(ErrorKind::InvalidLattice, "lattice must satisfy 0 <= a <= 1/2, b > 0, a^2 + b^2 >= 1");
}

double flat_eigenvalue(const FlatLattice& lat, long p, long q) {
    const double y = (p - q * lat.a) / lat.b;
    return kFourPiSq * (double(q) * q + y * y);
}

std::vector<FlatLevel> flat_eigenvalues(const FlatLattice& lat, int count) {
    validate_lattice(lat);
    if (count < 1) throw Error(ErrorKind::DomainError, "count must be positive");
    double lambda_max = kFourPiSq * std::max(1.0, double(count));
    for (;;) {
        const std::vector<Mode> modes = modes_up_to(lat, lambda_max);
        std::vector<FlatLevel> levels;
        for (const Mode& md : modes) {
            if (levels.empty() || md.lambda > levels.back().lambda * (1.0 + kGroupTol) + kGroupTol) {
                levels.push_back({md.lambda, 0, {}});
            }
            levels.back().multiplicity += (md.p == 0 && md.q == 0) ? 1 : 2;
            levels.back().witnesses.emplace_back(md.p, md.q);
        }
        // Only levels strictly inside the window are known to be complete.
        while (!levels.empty() && levels.back().lambda > lambda_max * (1.0 - kGroupTol)) levels.pop_back();
        if (int(levels.size()) >= count) {
            levels.resize(size_t(count));
            return levels;
        }
        lambda_max *= 2.0;
    }
}

long flat_counting_function(const FlatLattice& lat, double lambda) {
    validate_lattice(lat);
    long n = 0;
    for (const Mode& md : modes_up_to(lat, lambda))
        if (md.lambda <= lambda * (1.0 + kGroupTol)) n += (md.p == 0 && md.q == 0) ? 1 : 2;
    return n;
}

FlatLattice normalize_lattice(double e1x, double e1y, double e2x, double e2y, double* shortest) {
    // Lagrange-Gauss reduction.
    auto n2 = [](double x, double y) { return x * x + y * y; };
    for (int it = 0; it < 100; ++it) {
        if (n2(e2x, e2y) < n2(e1x, e1y)) {
            std::swap(e1x, e2x);
            std::swap(e1y, e2y);
        }
        const double mu = std::round((e1x * e2x + e1y * e2y) / n2(e1x, e1y));
        if (mu == 0.0) break;
        e2x -= mu * e1x;
        e2y -= mu * e1y;
    }
    const double l2 = n2(e1x, e1y);
    FlatLattice lat;
    lat.a = std::abs((e1x * e2x + e1y * e2y) / l2);
    lat.b = std::abs(e1x * e2y - e1y * e2x) / l2;
    lat.a -= std::round(lat.a);
    lat.a = std::abs(lat.a);
    if (shortest) *shortest = std::sqrt(l2);
    return lat;
}

QuotientLattice quotient_lattice(const DoublingConfig& cfg) {
    const LatticeFrame f = lattice_frame(cfg);
    QuotientLattice q;
    q.lattice = normalize_lattice(f.basis[0].x * f.unit, f.basis[0].y * f.unit, f.basis[1].x * f.unit, f.basis[1].y * f.unit,
                                  &q.shorter_side);
    q.shorter_side_scaled = cfg.m * q.shorter_side;
    return q;
}

std::string flat_csv(const std::vector<FlatLevel>& levels) {
    std::ostringstream os;
    os.precision(15);
    os << "lambda,multiplicity,witnesses\n";
    for (const auto& l : levels) {
        os << l.lambda << ',' << l.multiplicity << ',';
        for (size_t i = 0; i < l.witnesses.size(); ++i)
            os << (i ? ";" : "") << l.witnesses[i].first << ':' << l.witnesses[i].second;
        os << '\n';
    }
    return os.str();
}

}  // namespace cliff
