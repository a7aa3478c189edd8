#include "cliff/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <unordered_map>

#include "cliff/error.hpp"
#include "cliff/special.hpp"

namespace cliff {

const char* region_name(Region r) {
    switch (r) {
        case Region::Graph: return "graph";
        case Region::Annulus: return "annulus";
        case Region::Bridge: return "bridge";
    }
    return "graph";
}

namespace {

long wrap(long x, long n) {
    long r = x % n;
    return r < 0 ? r + n : r;
}

// Signed representative of x mod n in [-n/2, n/2).
long centered(long x, long n) {
    long r = wrap(x, n);
    return r >= n / 2 ? r - n : r;
}

double dot4(const Vec4& a, const Vec4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }
Vec4 sub4(const Vec4& a, const Vec4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }

double tri_area(const Vec4& a, const Vec4& b, const Vec4& c) {
    const Vec4 u = sub4(b, a), v = sub4(c, a);
    const double uu = dot4(u, u), vv = dot4(v, v), uv = dot4(u, v);
    return 0.5 * std::sqrt(std::max(0.0, uu * vv - uv * uv));
}

// Boundary vertex k (counterclockwise from (c, 0)) of the square of half-width c, in cell units.
std::pair<long, long> square_point(long k, long c) {
    const long S = 8 * c;
    k = wrap(k, S);
    if (k <= c) return {c, k};
    if (k <= 3 * c) return {c - (k - c), c};
    if (k <= 5 * c) return {-c, c - (k - 3 * c)};
    if (k <= 7 * c) return {-c + (k - 5 * c), -c};
    return {c, -c + (k - 7 * c)};
}

}  // namespace

SurfaceMesh build_initial_surface(const DoublingConfig& cfg, const std::vector<const LDSolution*>& lds,
                                  const BalanceReport& report, int mesh_density) {
    const long mod = 2L * cfg.km();
    const long N = std::max(mod, long(std::ceil(double(mesh_density) / mod)) * mod);
    const long scale = N / mod;
    const double h = kPeriod / N;
    const SingularSet L = build_singular_set(cfg);
    const LatticeFrame frame = lattice_frame(cfg);
    const size_t nb = L.points.size();

    std::vector<std::pair<long, long>> centers(nb);
    std::map<std::pair<long, long>, int> center_index;
    for (size_t b = 0; b < nb; ++b) {
        centers[b] = {wrap(L.ipoints[b].x * scale, N), wrap(L.ipoints[b].y * scale, N)};
        center_index[centers[b]] = int(b);
    }
    long cheb = N;
    for (size_t b = 0; b < nb; ++b)
        for (size_t e = 0; e < b; ++e)
            cheb = std::min(cheb, std::max(std::labs(centered(centers[b].first - centers[e].first, N)),
                                           std::labs(centered(centers[b].second - centers[e].second, N))));

    double tau_max = 0.0;
    for (double t : report.tau_star) tau_max = std::max(tau_max, t);
    const long c = std::min((cheb - 1) / 2, long(std::ceil(3.3 * std::pow(tau_max, cfg.alpha) / h)));
    if (c < 3) throw Error(ErrorKind::BridgeOverlap, "mesh too coarse to separate the bridges");
    const double H = c * h;
    const long S = 8 * c;

    std::vector<double> dprime(nb), tout(nb);
    for (size_t b = 0; b < nb; ++b) {
        const double t = report.tau_star[b];
        dprime[b] = std::min(std::pow(t, cfg.alpha), H / 3.2);
        if (2.0 * dprime[b] < 1.2 * t || H < 1.5 * t)
            throw Error(ErrorKind::BridgeOverlap, "bridge necks do not fit between neighbouring singular points");
        tout[b] = std::acosh(H / t);
    }
    long J = 2;
    for (size_t b = 0; b < nb; ++b) J = std::max(J, long(std::ceil(tout[b] * S / (2.0 * std::numbers::pi))));

    auto phi = [&](ChartPoint q) {
        double s = 0.0;
        for (const auto* ld : lds) s += report.tau_class[ld->class_index()] * ld->phi_fast(q);
        return s;
    };

    // Vertical scale of each catenoid so that it meets the circle average of phi at 2 delta'.
    std::vector<double> cat_scale(nb);
    for (size_t b = 0; b < nb; ++b) {
        const int na = 64;
        const double r = 2.0 * dprime[b];
        double avg = 0.0;
        for (int i = 0; i < na; ++i) {
            const double a = 2.0 * std::numbers::pi * (i + 0.5) / na;
            avg += phi(reduce({L.points[b].x + r * std::cos(a), L.points[b].y + r * std::sin(a)}));
        }
        cat_scale[b] = avg / na / std::acosh(r / report.tau_star[b]);
    }

    // Grid vertices strictly inside a hole are dropped; cells inside a hole are dropped.
    std::vector<int> hole_of(size_t(N * N), -1);
    std::vector<char> cell_dropped(size_t(N * N), 0);
    for (size_t b = 0; b < nb; ++b)
        for (long dy = -c; dy <= c; ++dy)
            for (long dx = -c; dx <= c; ++dx) {
                const long ix = wrap(centers[b].first + dx, N), iy = wrap(centers[b].second + dy, N);
                if (std::labs(dx) < c && std::labs(dy) < c) hole_of[size_t(iy * N + ix)] = int(b);
                if (dx < c && dy < c) cell_dropped[size_t(iy * N + ix)] = 1;
            }

    SurfaceMesh mesh;
    mesh.expected_genus = int(nb) + 1;
    mesh.grid_cells = int(N);
    mesh.hole_half_cells = int(c);
    mesh.sectors = int(S);
    mesh.rings = int(J);
    mesh.gluing_radius = dprime;
    mesh.catenoid_scale = cat_scale;
    mesh.bridge_centers = L.points;

    // Per-sheet vertex data, built once and mirrored.
    std::vector<ChartPoint> pos;
    std::vector<double> height;
    std::vector<Region> reg;
    std::vector<long> grid_id(size_t(N * N), -1);
    for (long iy = 0; iy < N; ++iy)
        for (long ix = 0; ix < N; ++ix) {
            if (hole_of[size_t(iy * N + ix)] >= 0) continue;
            grid_id[size_t(iy * N + ix)] = long(pos.size());
            const ChartPoint q{ix * h, iy * h};
            pos.push_back(q);
            height.push_back(phi(q));
            reg.push_back(Region::Graph);
        }
    // Polar rings 1..J-1 of each bridge; ring J is the square boundary, ring 0 the shared waist.
    auto ring_offset = [&](size_t b, long j, long k) {
        const double u = double(j) / J;
        const double r = report.tau_star[b] * std::cosh(u * tout[b]);
        const double beta = u * u * (3.0 - 2.0 * u);
        const auto [px, py] = square_point(k, c);
        const double ex = px * h, ey = py * h;
        const double len = std::hypot(ex, ey);
        const double f = r * ((1.0 - beta) / len + beta / H);
        return ChartPoint{f * ex, f * ey};
    };
    const long polar_base = long(pos.size());
    for (size_t b = 0; b < nb; ++b) {
        const double t = report.tau_star[b];
        for (long j = 1; j < J; ++j)
            for (long k = 0; k < S; ++k) {
                const ChartPoint d = ring_offset(b, j, k);
                const ChartPoint q = reduce({L.points[b].x + d.x, L.points[b].y + d.y});
                const double dist = std::hypot(d.x, d.y);
                const double cat = cat_scale[b] * std::acosh(std::max(1.0, dist / t));
                double z;
                Region rg;
                if (dist <= 2.0 * dprime[b]) {
                    z = cat;
                    rg = Region::Bridge;
                } else if (dist < 3.0 * dprime[b]) {
                    z = cutoff(2.0 * dprime[b], 3.0 * dprime[b], dist, cat, phi(q));
                    rg = Region::Annulus;
                } else {
                    z = phi(q);
                    rg = Region::Graph;
                }
                pos.push_back(q);
                height.push_back(z);
                reg.push_back(rg);
            }
    }
    const long sheet_size = long(pos.size());
    const long waist_base = 2 * sheet_size;
    auto polar_id = [&](size_t b, long j, long k) { return polar_base + (long(b) * (J - 1) + (j - 1)) * S + wrap(k, S); };
    // Vertex id on a sheet (0 top, 1 bottom) of ring j, sector k at bridge b.
    auto ring_vertex = [&](int sh, size_t b, long j, long k) -> long {
        if (j == 0) return waist_base + long(b) * S + wrap(k, S);
        if (j == J) {
            const auto [px, py] = square_point(k, c);
            const long ix = wrap(centers[b].first + px, N), iy = wrap(centers[b].second + py, N);
            return sh * sheet_size + grid_id[size_t(iy * N + ix)];
        }
        return sh * sheet_size + polar_id(b, j, k);
    };

    for (int sh = 0; sh < 2; ++sh) {
        const double sign = sh == 0 ? 1.0 : -1.0;
        for (long i = 0; i < sheet_size; ++i) {
            mesh.vertices.push_back(fermi_r4(pos[i], sign * height[i]));
            mesh.chart.push_back(pos[i]);
            mesh.region.push_back(reg[i]);
            mesh.sheet.push_back(int8_t(sh == 0 ? 1 : -1));
        }
    }
    for (size_t b = 0; b < nb; ++b)
        for (long k = 0; k < S; ++k) {
            const ChartPoint d = ring_offset(b, 0, k);
            const ChartPoint q = reduce({L.points[b].x + d.x, L.points[b].y + d.y});
            mesh.vertices.push_back(fermi_r4(q, 0.0));
            mesh.chart.push_back(q);
            mesh.region.push_back(Region::Bridge);
            mesh.sheet.push_back(0);
        }
    const long nv = long(mesh.vertices.size());

    mesh.rho_perm.resize(size_t(nv));
    for (long i = 0; i < sheet_size; ++i) {
        mesh.rho_perm[size_t(i)] = int(i + sheet_size);
        mesh.rho_perm[size_t(i + sheet_size)] = int(i);
    }
    for (long i = waist_base; i < nv; ++i) mesh.rho_perm[size_t(i)] = int(i);

    // Point reflections through p0, p1, p2 act on grid indices and carry sector k to k + S/2.
    for (IntVec p : {IntVec{0, 0}, frame.p1, frame.p2}) {
        const long px = 2 * p.x * scale, py = 2 * p.y * scale;
        std::vector<int> perm(size_t(nv), -1);
        std::vector<size_t> bridge_image(nb);
        for (size_t b = 0; b < nb; ++b) {
            auto it = center_index.find({wrap(px - centers[b].first, N), wrap(py - centers[b].second, N)});
            if (it == center_index.end()) throw Error(ErrorKind::DomainError, "reflection does not preserve the singular set");
            bridge_image[b] = size_t(it->second);
        }
        for (int sh = 0; sh < 2; ++sh) {
            for (long iy = 0; iy < N; ++iy)
                for (long ix = 0; ix < N; ++ix) {
                    const long id = grid_id[size_t(iy * N + ix)];
                    if (id < 0) continue;
                    const long jd = grid_id[size_t(wrap(py - iy, N) * N + wrap(px - ix, N))];
                    perm[size_t(sh * sheet_size + id)] = int(sh * sheet_size + jd);
                }
            for (size_t b = 0; b < nb; ++b)
                for (long j = 1; j < J; ++j)
                    for (long k = 0; k < S; ++k)
                        perm[size_t(ring_vertex(sh, b, j, k))] = int(ring_vertex(sh, bridge_image[b], j, k + S / 2));
        }
        for (size_t b = 0; b < nb; ++b)
            for (long k = 0; k < S; ++k)
                perm[size_t(ring_vertex(0, b, 0, k))] = int(ring_vertex(0, bridge_image[b], 0, k + S / 2));
        mesh.group_perms.push_back(std::move(perm));
    }

    for (int sh = 0; sh < 2; ++sh) {
        auto emit = [&](long a, long b2, long c2) {
            if (sh == 0)
                mesh.triangles.push_back({int(a), int(b2), int(c2)});
            else
                mesh.triangles.push_back({int(a), int(c2), int(b2)});
        };
        const long off = sh * sheet_size;
        for (long iy = 0; iy < N; ++iy)
            for (long ix = 0; ix < N; ++ix) {
                if (cell_dropped[size_t(iy * N + ix)]) continue;
                const long x1 = wrap(ix + 1, N), y1 = wrap(iy + 1, N);
                const long v00 = off + grid_id[size_t(iy * N + ix)], v10 = off + grid_id[size_t(iy * N + x1)];
                const long v11 = off + grid_id[size_t(y1 * N + x1)], v01 = off + grid_id[size_t(y1 * N + ix)];
                emit(v00, v10, v11);
                emit(v00, v11, v01);
            }
        for (size_t b = 0; b < nb; ++b)
            for (long j = 0; j < J; ++j)
                for (long k = 0; k < S; ++k) {
                    const long A = ring_vertex(sh, b, j, k), B = ring_vertex(sh, b, j, k + 1);
                    const long C = ring_vertex(sh, b, j + 1, k + 1), D = ring_vertex(sh, b, j + 1, k);
                    emit(A, D, C);
                    emit(A, C, B);
                }
    }
    if (min_angle_degrees(mesh) < 5.0) throw Error(ErrorKind::DegenerateTriangles, "mesh has triangles with angles below 5 degrees");
    return mesh;
}

SurfaceMesh build_bare_torus(int n) {
    SurfaceMesh mesh;
    const double h = kPeriod / n;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const ChartPoint q{ix * h, iy * h};
            mesh.vertices.push_back(embed_r4(q));
            mesh.chart.push_back(q);
            mesh.region.push_back(Region::Graph);
            mesh.sheet.push_back(1);
        }
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const int x1 = (ix + 1) % n, y1 = (iy + 1) % n;
            const int v00 = iy * n + ix, v10 = iy * n + x1, v11 = y1 * n + x1, v01 = y1 * n + ix;
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }
    mesh.rho_perm.resize(mesh.vertices.size());
    for (size_t i = 0; i < mesh.rho_perm.size(); ++i) mesh.rho_perm[i] = int(i);
    mesh.expected_genus = 1;
    mesh.grid_cells = n;
    return mesh;
}

namespace {
using EdgeMap = std::unordered_map<uint64_t, int>;
uint64_t edge_key(int a, int b) { return (uint64_t(uint32_t(a)) << 32) | uint32_t(b); }
}  // namespace

int euler_characteristic(const SurfaceMesh& mesh) {
    EdgeMap edges;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            edges[edge_key(a, b)]++;
        }
    return int(mesh.vertices.size()) - int(edges.size()) + int(mesh.triangles.size());
}

bool is_closed_oriented_manifold(const SurfaceMesh& mesh) {
    EdgeMap directed;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            if (t[e] == t[(e + 1) % 3]) return false;
            if (++directed[edge_key(t[e], t[(e + 1) % 3])] > 1) return false;
        }
    for (const auto& [key, count] : directed) {
        const int a = int(key >> 32), b = int(key & 0xffffffffu);
        if (!directed.count(edge_key(b, a))) return false;
    }
    return true;
}

double min_angle_degrees(const SurfaceMesh& mesh) {
    double worst = 180.0;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            const Vec4& p = mesh.vertices[t[e]];
            const Vec4 u = sub4(mesh.vertices[t[(e + 1) % 3]], p), v = sub4(mesh.vertices[t[(e + 2) % 3]], p);
            const double cs = dot4(u, v) / std::sqrt(dot4(u, u) * dot4(v, v));
            worst = std::min(worst, std::acos(std::clamp(cs, -1.0, 1.0)) * 180.0 / std::numbers::pi);
        }
    return worst;
}

double discrete_area(const SurfaceMesh& mesh) {
    double a = 0.0;
    for (const auto& t : mesh.triangles) a += tri_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    return a;
}

std::vector<double> discrete_mean_curvature(const SurfaceMesh& mesh) {
    const size_t n = mesh.vertices.size();
    std::vector<Vec4> lap(n, Vec4{0, 0, 0, 0});
    std::vector<double> mass(n, 0.0);
    for (const auto& t : mesh.triangles) {
        const double area = tri_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
        for (int e = 0; e < 3; ++e) {
            const int i = t[e], j = t[(e + 1) % 3], k = t[(e + 2) % 3];
            mass[i] += area / 3.0;
            // Cotangent of the angle at k weights the edge (i, j).
            const Vec4 u = sub4(mesh.vertices[i], mesh.vertices[k]), v = sub4(mesh.vertices[j], mesh.vertices[k]);
            const double uv = dot4(u, v);
            const double cot = uv / std::sqrt(std::max(1e-300, dot4(u, u) * dot4(v, v) - uv * uv));
            const Vec4 d = sub4(mesh.vertices[j], mesh.vertices[i]);
            for (int c = 0; c < 4; ++c) {
                lap[i][c] += 0.5 * cot * d[c];
                lap[j][c] -= 0.5 * cot * d[c];
            }
        }
    }
    std::vector<double> H(n);
    for (size_t i = 0; i < n; ++i) {
        Vec4 hv = lap[i];
        for (auto& x : hv) x /= mass[i];
        const Vec4& x = mesh.vertices[i];
        const double radial = dot4(hv, x);
        for (int c = 0; c < 4; ++c) hv[c] -= radial * x[c];
        H[i] = std::sqrt(dot4(hv, hv));
    }
    return H;
}

void write_obj(const SurfaceMesh& mesh, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::IoError, "cannot open " + path);
    os << std::setprecision(12);
    // Stereographic projection from (0, 0, 0, -1), which lies at maximal distance from the torus.
    for (const auto& v : mesh.vertices) {
        const double s = 1.0 / (1.0 + v[3]);
        os << "v " << v[0] * s << ' ' << v[1] * s << ' ' << v[2] * s << '\n';
    }
    for (const auto& t : mesh.triangles) os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    if (!os) throw Error(ErrorKind::IoError, "write failed for " + path);
}

void write_csv4d(const SurfaceMesh& mesh, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::IoError, "cannot open " + path);
    os << std::setprecision(15) << "x0,x1,x2,x3,region\n";
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        const auto& v = mesh.vertices[i];
        os << v[0] << ',' << v[1] << ',' << v[2] << ',' << v[3] << ',' << region_name(mesh.region[i]) << '\n';
    }
    if (!os) throw Error(ErrorKind::IoError, "write failed for " + path);
}

}  // namespace cliff
