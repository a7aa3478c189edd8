#include "cliff/torus.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "cliff/error.hpp"

namespace cliff {

const char* error_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::NonCoprime: return "NonCoprime";
        case ErrorKind::ExcludedTriple: return "ExcludedTriple";
        case ErrorKind::NonPositiveF: return "NonPositiveF";
        case ErrorKind::MTooSmall: return "MTooSmall";
        case ErrorKind::InvalidAlpha: return "InvalidAlpha";
        case ErrorKind::DegenerateW: return "DegenerateW";
        case ErrorKind::KernelObstruction: return "KernelObstruction";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::ResolutionError: return "ResolutionError";
        case ErrorKind::NotSingularPoint: return "NotSingularPoint";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::OutOfBox: return "OutOfBox";
        case ErrorKind::BridgeOverlap: return "BridgeOverlap";
        case ErrorKind::DegenerateTriangles: return "DegenerateTriangles";
        case ErrorKind::SolverFailure: return "SolverFailure";
        case ErrorKind::InvalidLattice: return "InvalidLattice";
        case ErrorKind::GenusTooSmall: return "GenusTooSmall";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::NonCoprime:
        case ErrorKind::ExcludedTriple:
        case ErrorKind::NonPositiveF:
        case ErrorKind::MTooSmall:
        case ErrorKind::InvalidAlpha:
        case ErrorKind::InvalidLattice:
        case ErrorKind::GenusTooSmall:
        case ErrorKind::ConfigError:
        case ErrorKind::ResolutionError:
        case ErrorKind::NotSingularPoint:
            return 2;
        case ErrorKind::IoError:
            return 4;
        default:
            return 3;
    }
}

namespace {

double wrap_coord(double x) {
    double r = std::fmod(x, kPeriod);
    if (r < 0) r += kPeriod;
    if (r >= kPeriod) r -= kPeriod;
    return r;
}

double nearest_delta(double d) { return d - kPeriod * std::round(d / kPeriod); }

long mod_floor(long x, long n) {
    long r = x % n;
    return r < 0 ? r + n : r;
}

// Extended Euclid: returns g = gcd(a, b) >= 0 with a*x + b*y = g.
long ext_gcd(long a, long b, long& x, long& y) {
    long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        long q = a / b;
        long t = a - q * b; a = b; b = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
    }
    if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
    x = x0;
    y = y0;
    return a;
}

long norm2(IntVec v) { return v.x * v.x + v.y * v.y; }

}  // namespace

ChartPoint reduce(ChartPoint p) { return {wrap_coord(p.x), wrap_coord(p.y)}; }

ChartPoint chart_delta(ChartPoint p, ChartPoint q) {
    return {nearest_delta(q.x - p.x), nearest_delta(q.y - p.y)};
}

double chart_distance(ChartPoint p, ChartPoint q) {
    ChartPoint d = chart_delta(p, q);
    return std::hypot(d.x, d.y);
}

ChartPoint TorusIsometry::apply(ChartPoint p) const {
    return reduce({sign * p.x + offset.x, sign * p.y + offset.y});
}

TorusIsometry TorusIsometry::compose(const TorusIsometry& inner) const {
    return {sign * inner.sign, reduce({sign * inner.offset.x + offset.x, sign * inner.offset.y + offset.y})};
}

double f_constant(KnotVector v, int k) {
    double n = v.norm();
    return std::numbers::sqrt2 * n * std::tan(std::numbers::sqrt2 * std::numbers::pi / (k * n));
}

DoublingConfig validate_config(int a, int b, int k, int m, Variant variant, const ConfigOptions& opts) {
    if (a <= 0 || b <= 0 || k <= 0 || m <= 0)
        throw Error(ErrorKind::ConfigError, "a, b, k, m must be positive integers");
    if (std::gcd(a, b) != 1) throw Error(ErrorKind::NonCoprime, "gcd(a, b) != 1");
    DoublingConfig cfg;
    cfg.v = {a, b};
    cfg.k = k;
    cfg.m = m;
    cfg.variant = variant;
    cfg.alpha = opts.alpha;
    cfg.c_bar = opts.c_bar;
    cfg.grid_n = opts.grid_n;
    cfg.m_min_factor = opts.m_min_factor;
    cfg.F = f_constant(cfg.v, k);
    // tan(pi) evaluates to about -1.2e-16, so treat F within round-off of zero as zero.
    if (cfg.F <= 1e-9 * cfg.v.norm()) {
        std::ostringstream os;
        os << "F = " << cfg.F << " <= 0";
        throw Error(ErrorKind::NonPositiveF, os.str());
    }
    const bool excluded = k == 1 && ((a == 1 && b == 1) || (a == 1 && b == 2) || (a == 2 && b == 1));
    if (excluded) throw Error(ErrorKind::ExcludedTriple, "(a, b, k) is an excluded triple");
    if (!(opts.alpha > 0.0 && opts.alpha < 0.5)) throw Error(ErrorKind::InvalidAlpha, "alpha must lie in (0, 1/2)");
    const double threshold = opts.m_min_factor * k * cfg.v.norm();
    if (m < threshold) {
        std::ostringstream os;
        os << "m = " << m << " is below m_min_factor * k|v| = " << threshold;
        if (opts.strict) throw Error(ErrorKind::MTooSmall, os.str());
        cfg.warnings.push_back("MTooSmall: " + os.str());
    }
    KnotInvariants inv = knot_invariants(cfg.v);
    cfg.r_v = inv.r_v;
    cfg.knot_length = inv.knot_length;
    return cfg;
}

KnotInvariants knot_invariants(KnotVector v) {
    double n = v.norm();
    return {std::numbers::pi / (std::numbers::sqrt2 * n), kPeriod * n};
}

IntVec shortest_off_span(KnotVector v, int m) {
    // M = Z v + m Z^2 is exactly {(x, y) : b x - a y = 0 mod m}; (m, 0) is in M and off span(v).
    long best = -1;
    IntVec w;
    for (long x = 0; x <= m; ++x) {
        for (long y = -m; y <= m; ++y) {
            if (x == 0 && y <= 0) continue;
            long cross = v.b * x - v.a * y;
            if (cross == 0 || mod_floor(cross, m) != 0) continue;
            long n2 = x * x + y * y;
            if (best < 0 || n2 < best) {
                best = n2;
                w = {x, y};
            }
        }
    }
    if (best < 0) throw Error(ErrorKind::DegenerateW, "no lattice vector off span(v)");
    return w;
}

IntVec LatticeFrame::wrap(IntVec p) const { return {mod_floor(p.x, modulus), mod_floor(p.y, modulus)}; }

bool LatticeFrame::in_T(IntVec p) const {
    if (p.x % hnf_g != 0) return false;
    long alpha = p.x / hnf_g;
    return (p.y - alpha * hnf_y0) % hnf_h == 0;
}

LatticeFrame lattice_frame(const DoublingConfig& cfg) {
    LatticeFrame f;
    const long k = cfg.k, m = cfg.m, a = cfg.v.a, b = cfg.v.b;
    f.modulus = 2 * k * m;
    f.unit = kPeriod / double(f.modulus);
    f.s = {2 * k * a, 2 * k * b};
    f.p1 = {k * a, k * b};
    f.w_coarse = shortest_off_span(cfg.v, cfg.m);
    f.p2 = f.w_coarse;
    f.t = {2 * f.w_coarse.x, 2 * f.w_coarse.y};
    f.layer = std::labs(b * f.w_coarse.x - a * f.w_coarse.y) / m;

    // Hermite normal form of the lattice spanned by s, t and modulus Z^2.
    std::vector<IntVec> gens = {f.s, f.t, {f.modulus, 0}, {0, f.modulus}};
    IntVec b1{0, 0};
    long h = 0;
    for (IntVec g : gens) {
        if (g.x == 0) {
            h = std::gcd(h, std::labs(g.y));
        } else if (b1.x == 0) {
            b1 = g;
        } else {
            long u, w;
            long gx = ext_gcd(b1.x, g.x, u, w);
            IntVec nb{u * b1.x + w * g.x, u * b1.y + w * g.y};
            IntVec z{(g.x / gx) * b1.x - (b1.x / gx) * g.x, (g.x / gx) * b1.y - (b1.x / gx) * g.y};
            h = std::gcd(h, std::labs(z.y));
            b1 = nb;
        }
        if (h > 0) b1.y = mod_floor(b1.y, h);
    }
    if (b1.x < 0) b1 = {-b1.x, -b1.y};
    if (h > 0) b1.y = mod_floor(b1.y, h);
    f.hnf_g = b1.x;
    f.hnf_y0 = b1.y;
    f.hnf_h = h;

    // Lagrange-Gauss reduction.
    IntVec u = b1, v{0, h};
    if (norm2(u) > norm2(v)) std::swap(u, v);
    while (true) {
        long dot = u.x * v.x + u.y * v.y;
        long n = norm2(u);
        long q = std::lround(double(dot) / double(n));
        v = {v.x - q * u.x, v.y - q * u.y};
        if (norm2(v) >= norm2(u)) break;
        std::swap(u, v);
    }
    f.basis = {u, v};

    auto cross = [&](IntVec p) { return std::labs(-b * p.x + a * p.y); };
    long g = std::gcd(cross(u), cross(v));
    f.line_spacing = double(g) * f.unit / cfg.v.norm();
    return f;
}

SingularSet build_singular_set(const DoublingConfig& cfg) {
    LatticeFrame f = lattice_frame(cfg);
    SingularSet L;
    std::vector<IntVec> centers = {{0, 0}};
    if (cfg.variant == Variant::ThreePoint) {
        centers.push_back(f.p1);
        centers.push_back(f.p2);
    }
    std::set<std::pair<long, long>> seen;
    for (size_t c = 0; c < centers.size(); ++c) {
        for (int j = 0; j < cfg.k; ++j) {
            for (int i = 0; i < cfg.m; ++i) {
                IntVec p = f.wrap({centers[c].x + i * f.s.x + j * f.t.x, centers[c].y + i * f.s.y + j * f.t.y});
                if (!seen.insert({p.x, p.y}).second)
                    throw Error(ErrorKind::DegenerateW, "singular points coincide; w does not separate the parallels");
                L.ipoints.push_back(p);
                L.points.push_back(f.to_chart(p));
                L.copy_index.push_back(j);
                L.class_index.push_back(int(c));
            }
        }
    }
    L.w = f.to_chart({f.w_coarse.x * 2 * cfg.k, f.w_coarse.y * 2 * cfg.k});
    L.p1 = f.to_chart(f.p1);
    L.p2 = f.to_chart(f.p2);
    return L;
}

double perp_coordinate(ChartPoint p, KnotVector v) { return (-v.b * p.x + v.a * p.y) / v.norm(); }

double dist_to_Lpar(ChartPoint p, const DoublingConfig& cfg) {
    const double spacing = kPeriod / (cfg.v.norm() * cfg.k);
    double y = perp_coordinate(p, cfg.v);
    return std::abs(y - spacing * std::round(y / spacing));
}

std::vector<TorusIsometry> group_generators(const DoublingConfig& cfg) {
    SingularSet L = build_singular_set(cfg);
    std::vector<TorusIsometry> gens;
    for (ChartPoint p : {ChartPoint{0.0, 0.0}, L.p1, L.p2}) gens.push_back({-1, reduce({2 * p.x, 2 * p.y})});
    return gens;
}

std::vector<ChartPoint> orbit(ChartPoint p, const std::vector<TorusIsometry>& gens, double tol) {
    std::vector<ChartPoint> out = {reduce(p)};
    std::deque<ChartPoint> queue = {out.front()};
    while (!queue.empty()) {
        ChartPoint q = queue.front();
        queue.pop_front();
        for (const auto& g : gens) {
            ChartPoint r = g.apply(q);
            bool known = std::any_of(out.begin(), out.end(),
                                     [&](ChartPoint s) { return chart_distance(r, s) <= tol; });
            if (!known) {
                out.push_back(r);
                queue.push_back(r);
            }
        }
    }
    return out;
}

std::vector<IntIsometry> symmetry_group(const LatticeFrame& f) {
    std::vector<IntIsometry> gens;
    for (IntVec p : {IntVec{0, 0}, f.p1, f.p2}) gens.push_back({-1, f.wrap({2 * p.x, 2 * p.y})});
    std::vector<IntIsometry> out = {{1, {0, 0}}};
    std::set<std::tuple<int, long, long>> seen = {{1, 0, 0}};
    for (size_t i = 0; i < out.size(); ++i) {
        for (const auto& g : gens) {
            IntIsometry h = out[i];
            IntIsometry c{g.sign * h.sign, f.wrap({g.sign * h.offset.x + g.offset.x, g.sign * h.offset.y + g.offset.y})};
            if (seen.insert({c.sign, c.offset.x, c.offset.y}).second) out.push_back(c);
        }
    }
    return out;
}

Vec4 embed_r4(ChartPoint p) {
    const double s = std::numbers::sqrt2, r = 1.0 / std::numbers::sqrt2;
    return {r * std::cos(s * p.x), r * std::sin(s * p.x), r * std::cos(s * p.y), r * std::sin(s * p.y)};
}

Vec4 normal_r4(ChartPoint p) {
    const double s = std::numbers::sqrt2, r = 1.0 / std::numbers::sqrt2;
    return {r * std::cos(s * p.x), r * std::sin(s * p.x), -r * std::cos(s * p.y), -r * std::sin(s * p.y)};
}

Vec4 fermi_r4(ChartPoint p, double z) {
    Vec4 e = embed_r4(p), n = normal_r4(p);
    const double c = std::cos(z), s = std::sin(z);
    return {c * e[0] + s * n[0], c * e[1] + s * n[1], c * e[2] + s * n[2], c * e[3] + s * n[3]};
}

}  // namespace cliff
