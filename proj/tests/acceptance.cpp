// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cliff/balancing.hpp"
#include "cliff/error.hpp"
#include "cliff/flat_spectra.hpp"
#include "cliff/ld_solution.hpp"
#include "cliff/mesh.hpp"
#include "cliff/moduli.hpp"
#include "cliff/spectrum.hpp"

using namespace cliff;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

// Criterion 1
constexpr int kAvgGrid = 1024;
constexpr double kAvgRelTol = 1e-6;
constexpr double kAvgSeconds = 30.0;
// Criterion 2
constexpr double kBoundaryRelTol = 1e-6;
constexpr double kTrigIdentityTol = 1e-14;
// Criterion 3
constexpr double kKernelSumTol = 1e-10;
// Criterion 4
constexpr double kShiftTol = 1e-12;
constexpr double kExtractionTol = 1e-4;
// Criterion 5
constexpr int kNewtonMaxIter = 15;
constexpr double kNewtonResidual = 1e-8;
constexpr double kSigmaFactor = 10.0;
// Criterion 6
constexpr double kDeficitBand = 0.25;
constexpr double kMeshSeconds = 120.0;
// Criterion 7
constexpr double kBandLo = 1.90, kBandHi = 2.06;
constexpr double kAlignmentMin = 0.95;
constexpr double kConvergenceTol = 0.01;  // relative change of the four values between densities
constexpr double kBareTol = 0.01;
constexpr int kSpectrumCount = 16;
// Criterion 8
constexpr double kOddInvariantMin = 3.0;
// Criterion 9
constexpr double kSquareExactTol = 1e-12;
constexpr int kHexLevels = 20;
// Criterion 10
constexpr double kDensityTol = 0.05;
constexpr double kGrowthTol = 0.20;
// Criterion 11
constexpr double kVerifySeconds = 600.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome average_closed_form() {
    const auto t0 = std::chrono::steady_clock::now();
    ConfigOptions opts;
    opts.grid_n = kAvgGrid;
    const DoublingConfig cfg = validate_config(2, 3, 1, 6, Variant::OnePoint, opts);
    const LDSolution ld(cfg);
    const double theta = cfg.theta();
    const double C = cfg.m / (std::sqrt(8.0) * cfg.v.norm() * std::sin(theta));
    double worst = 0.0;
    int samples = 0;
    for (int i = 0; i <= 64; ++i) {
        const double s = -theta / 2 + theta * i / 64.0;
        const double d = std::abs(s - theta * std::round(s / theta));
        if (d < 2 * cfg.delta() && d > 0) continue;
        const double ref = C * std::cos(theta - 2 * d);
        worst = std::max(worst, std::abs(ld.phi_average(s) - ref) / std::abs(ref));
        ++samples;
    }
    const double t = seconds_since(t0);
    return {worst <= kAvgRelTol && t <= kAvgSeconds,
            "grid " + std::to_string(ld.grid_n()) + ", " + std::to_string(samples) + " offsets, max rel err " + fmt(worst) +
                ", " + fmt(t, 3) + " s"};
}

Outcome boundary_value() {
    const DoublingConfig cfg = validate_config(2, 3, 1, 6);
    const LDSolution ld(cfg);
    const double target = cfg.m / (2 * cfg.F);
    const double avg = ld.phi_average(0.0);
    const double rel = std::abs(avg - target) / target;
    // C cos(theta) = m / (2F) as a trig identity over a sweep of configurations.
    double trig = 0.0;
    for (auto [a, b] : {std::pair{2, 3}, std::pair{1, 3}, std::pair{3, 4}, std::pair{5, 7}})
        for (int k : {1, 2, 3})
            for (int m : {6, 24, 100}) {
                const DoublingConfig c = validate_config(a, b, k, m);
                const double theta = c.theta();
                const double C = m / (std::sqrt(8.0) * c.v.norm() * std::sin(theta));
                trig = std::max(trig, std::abs(C * std::cos(theta) - m / (2 * c.F)) / (m / (2 * c.F)));
            }
    return {rel <= kBoundaryRelTol && trig <= kTrigIdentityTol,
            "Phi_avg(L_par) = " + fmt(avg, 10) + ", m/2F = " + fmt(target, 10) + ", rel " + fmt(rel) + "; identity max rel " + fmt(trig)};
}

Outcome kernel_triviality() {
    int configs = 0;
    double worst = 0.0;
    bool pass = true;
    for (auto [a, b] : {std::pair{2, 3}, std::pair{1, 3}, std::pair{3, 4}})
        for (int k : {1, 2})
            for (int m : {6, 12, 24}) {
                DoublingConfig cfg;
                try {
                    cfg = validate_config(a, b, k, m);
                } catch (const Error&) {
                    continue;
                }
                ++configs;
                const SingularSet L = build_singular_set(cfg);
                const double n = double(L.points.size());
                for (int sgn : {1, -1}) {
                    double c = 0, s = 0;
                    for (const auto& p : L.points) {
                        c += std::cos(std::numbers::sqrt2 * (p.x + sgn * p.y));
                        s += std::sin(std::numbers::sqrt2 * (p.x + sgn * p.y));
                    }
                    worst = std::max({worst, std::abs(c) / n, std::abs(s) / n});
                    pass = pass && std::abs(c) <= kKernelSumTol * n && std::abs(s) <= kKernelSumTol * n;
                }
            }
    return {pass && configs > 0, std::to_string(configs) + " configs, max |sum u|/|L| = " + fmt(worst)};
}

Outcome mismatch_identity() {
    const DoublingConfig cfg = validate_config(2, 3, 1, 6);
    const LDSolution ld(cfg);
    double spread = 0.0;
    for (const auto& p : ld.class_points()) {
        const double base = normalized_mismatch(ld, 0.0, p);
        for (double z : {-1.0, 1.0}) spread = std::max(spread, std::abs(normalized_mismatch(ld, z, p) - z - base));
    }
    const BalanceReport br = balanced_zeta(ld);
    const double rho1 = std::min(2 * br.tau_base, ld.green().outer_radius() / 8);
    const double diff = std::abs(extracted_mismatch(ld, 0.0, {0.0, 0.0}, rho1) - normalized_mismatch(ld, 0.0, {0.0, 0.0}));
    return {spread <= kShiftTol && diff <= kExtractionTol, "shift deviation " + fmt(spread) + ", formula vs extraction " + fmt(diff)};
}

Outcome three_point_newton() {
    const DoublingConfig cfg = validate_config(2, 3, 4, 8, Variant::ThreePoint);
    const LDSolution l0(cfg, 0), l1(cfg, 1), l2(cfg, 2);
    const BalanceReport r = newton_balance_three({&l0, &l1, &l2}, cfg);
    double res = 0.0;
    for (double x : r.residuals) res = std::max(res, std::abs(x));
    const double bound = kSigmaFactor / cfg.km();
    const double smax = std::max(std::abs(r.sigma[0]), std::abs(r.sigma[1]));
    return {r.iterations <= kNewtonMaxIter && res <= kNewtonResidual && smax <= bound,
            std::to_string(r.iterations) + " iterations, residual " + fmt(res) + ", sigma = (" + fmt(r.sigma[0]) + ", " +
                fmt(r.sigma[1]) + "), bound " + fmt(bound)};
}

struct MeshRun {
    DoublingConfig cfg;
    std::unique_ptr<LDSolution> ld;
    BalanceReport br;
    SurfaceMesh mesh;
    double seconds = 0.0;
};

MeshRun make_mesh(int m, int density) {
    const auto t0 = std::chrono::steady_clock::now();
    MeshRun r;
    r.cfg = validate_config(2, 3, 1, m);
    r.ld = std::make_unique<LDSolution>(r.cfg);
    r.br = balanced_zeta(*r.ld);
    r.mesh = build_initial_surface(r.cfg, {r.ld.get()}, r.br, density);
    r.seconds = seconds_since(t0);
    return r;
}

Outcome mesh_topology_area() {
    bool pass = true;
    std::string detail;
    for (auto [m, density] : {std::pair{24, 192}, std::pair{48, 384}}) {
        const MeshRun r = make_mesh(m, density);
        const int chi = euler_characteristic(r.mesh);
        const double deficit = 4 * pi * pi - discrete_area(r.mesh);
        const double predicted = pi * r.cfg.km() * r.br.tau_base * r.br.tau_base;
        const double ratio = deficit / predicted;
        const bool ok = chi == 2 - 2 * (r.cfg.km() + 1) && std::abs(ratio - 1) <= kDeficitBand && r.seconds <= kMeshSeconds;
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += "m=" + std::to_string(m) + ": chi " + std::to_string(chi) + ", deficit/predicted " + fmt(ratio, 4) + ", " +
                  fmt(r.seconds, 3) + " s" + (ok ? "" : " [out]");
    }
    return {pass, detail};
}

struct SpectrumRun {
    Spectrum spec;
    std::vector<double> restricted;
};

SpectrumRun& spectrum_at(int density) {
    static std::map<int, SpectrumRun> cache;
    auto it = cache.find(density);
    if (it != cache.end()) return it->second;
    const MeshRun r = make_mesh(24, density);
    SpectrumRun s{laplace_spectrum(r.mesh, kSpectrumCount), odd_invariant_spectrum(r.mesh, 1)};
    return cache.emplace(density, std::move(s)).first->second;
}

std::vector<double> near_two(const Spectrum& s, double& min_align) {
    std::vector<double> out;
    min_align = 1.0;
    for (const auto& e : s.entries)
        if (e.value >= kBandLo && e.value <= kBandHi) {
            out.push_back(e.value);
            min_align = std::min(min_align, e.coordinate_alignment);
        }
    return out;
}

Outcome spectrum_near_two() {
    double a1 = 0, a2 = 0;
    const auto v1 = near_two(spectrum_at(192).spec, a1);
    const auto v2 = near_two(spectrum_at(384).spec, a2);
    double change = v1.size() == v2.size() ? 0.0 : 1.0;
    for (size_t i = 0; i < std::min(v1.size(), v2.size()); ++i) change = std::max(change, std::abs(v1[i] - v2[i]) / v2[i]);
    const Spectrum bare = laplace_spectrum(build_bare_torus(96), 6);
    int bare_mult = 0;
    for (const auto& e : bare.entries)
        if (std::abs(e.value - 2.0) <= kBareTol * 2.0) ++bare_mult;
    const double bare_l1 = bare.entries[1].value;
    const bool pass = v1.size() == 4 && v2.size() == 4 && a1 >= kAlignmentMin && a2 >= kAlignmentMin && change <= kConvergenceTol &&
                      bare_mult == 4 && bare.entries[5].value > 2.0 * (1 + kBareTol);
    std::string vals;
    for (double v : v2) vals += (vals.empty() ? "" : " ") + fmt(v, 6);
    return {pass, "N=192: " + std::to_string(v1.size()) + " in band, N=384: " + std::to_string(v2.size()) + " in band (" + vals +
                      "), min alignment " + fmt(std::min(a1, a2), 4) + ", density change " + fmt(change, 3) + "; bare lambda_1 " +
                      fmt(bare_l1, 8) + " x" + std::to_string(bare_mult)};
}

Outcome odd_invariant_gap() {
    std::string detail;
    bool pass = true;
    for (int density : {192, 384}) {
        const SpectrumRun& s = spectrum_at(density);
        double lowest = -1;
        for (const auto& e : s.spec.entries)
            if (e.parity == Parity::Odd && e.group_invariant) {
                lowest = e.value;
                break;
            }
        pass = pass && lowest >= kOddInvariantMin;
        if (!detail.empty()) detail += "; ";
        detail += "N=" + std::to_string(density) + ": " + (lowest < 0 ? std::string("none in lowest ") + std::to_string(kSpectrumCount) : fmt(lowest)) +
                  " (restricted " + fmt(s.restricted[0]) + ")";
    }
    return {pass, detail};
}

Outcome flat_spectra() {
    const auto sq = flat_eigenvalues({0.0, 1.0}, 2);
    const bool sq_ok = std::abs(sq[1].lambda - 4 * pi * pi) <= kSquareExactTol * 4 * pi * pi && sq[1].multiplicity == 4;
    // Brute-force oracle on a box of lattice indices.
    const FlatLattice hex{0.5, std::sqrt(3.0) / 2};
    std::vector<double> all;
    for (long q = -30; q <= 30; ++q)
        for (long p = -30; p <= 30; ++p) {
            const double x = (p - q * hex.a) / hex.b;
            all.push_back(4 * pi * pi * (q * q + x * x));
        }
    std::sort(all.begin(), all.end());
    std::vector<std::pair<double, int>> oracle;
    for (double v : all) {
        if (!oracle.empty() && std::abs(v - oracle.back().first) <= 1e-9 * std::max(1.0, v))
            ++oracle.back().second;
        else if (int(oracle.size()) == kHexLevels)
            break;
        else
            oracle.push_back({v, 1});
    }
    const auto hl = flat_eigenvalues(hex, kHexLevels);
    int matched = 0;
    for (int i = 0; i < kHexLevels && i < int(hl.size()); ++i)
        if (std::abs(hl[i].lambda - oracle[i].first) <= 1e-10 * std::max(1.0, oracle[i].first) && hl[i].multiplicity == oracle[i].second)
            ++matched;
    return {sq_ok && matched == kHexLevels, "square lambda_1 = " + fmt(sq[1].lambda, 15) + " x" + std::to_string(sq[1].multiplicity) +
                                                ", hexagonal " + std::to_string(matched) + "/" + std::to_string(kHexLevels) + " levels match"};
}

Outcome counting() {
    const long s5 = long(enumerate_SR(5.0).size());
    const double density = double(enumerate_SR(100.0).size()) / 1e4;
    const double target = 3.0 / (4 * pi);
    int mismatches = 0;
    for (int R = 1; R <= 500; ++R)
        if (long(enumerate_SR(R).size()) != count_SR_sieve(R)) ++mismatches;
    const DoublingCount c1 = count_doublings(1001), c2 = count_doublings(2001);
    const double growth = double(c2.constructible) / double(c1.constructible);
    const bool pass = s5 == 5 && std::abs(density / target - 1) <= kDensityTol && mismatches == 0 && std::abs(growth / 4 - 1) <= kGrowthTol;
    return {pass, "|S_5| = " + std::to_string(s5) + ", |S_100|/100^2 = " + fmt(density) + " vs " + fmt(target) + ", " +
                      std::to_string(mismatches) + " oracle mismatches for R <= 500, growth " + std::to_string(c2.constructible) + "/" +
                      std::to_string(c1.constructible) + " = " + fmt(growth, 4)};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
}

Outcome determinism(const std::string& exe) {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path root = fs::temp_directory_path() / "cliff_acceptance_verify";
    fs::remove_all(root);
    fs::create_directories(root);
    int codes[2];
    for (int i = 0; i < 2; ++i) {
        const fs::path dir = root / ("run" + std::to_string(i));
        const std::string cmd = exe + " verify --quick --output-dir " + dir.string() + " > " + (root / ("log" + std::to_string(i))).string() + " 2>&1";
        const int st = std::system(cmd.c_str());
        codes[i] = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    }
    const double t = seconds_since(t0);
    int files = 0, differ = 0;
    for (const auto& e : fs::directory_iterator(root / "run0")) {
        ++files;
        const fs::path other = root / "run1" / e.path().filename();
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) ++differ;
    }
    int files1 = 0;
    for (const auto& e : fs::directory_iterator(root / "run1")) (void)e, ++files1;
    fs::remove_all(root);
    const bool pass = codes[0] == 0 && codes[1] == 0 && files > 0 && files == files1 && differ == 0 && t <= kVerifySeconds;
    return {pass, "exit codes " + std::to_string(codes[0]) + "/" + std::to_string(codes[1]) + ", " + std::to_string(files) +
                      " artifacts, " + std::to_string(differ) + " differ, " + fmt(t, 3) + " s total"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path to cliffdbl>\n";
        return 2;
    }
    const std::string exe = argv[1];
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"phi_avg_closed_form", average_closed_form},
        {"boundary_value", boundary_value},
        {"kernel_triviality", kernel_triviality},
        {"mismatch_identity", mismatch_identity},
        {"three_point_newton", three_point_newton},
        {"mesh_topology_area", mesh_topology_area},
        {"spectrum_near_2", spectrum_near_two},
        {"odd_invariant_gap", odd_invariant_gap},
        {"flat_spectra", flat_spectra},
        {"counting", counting},
        {"determinism", [&] { return determinism(exe); }},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first << ": " << o.detail << std::endl;
    }
    std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
