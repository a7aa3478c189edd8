#include "cliff/verify.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cliff/balancing.hpp"
#include "cliff/error.hpp"
#include "cliff/flat_spectra.hpp"
#include "cliff/ld_solution.hpp"
#include "cliff/mesh.hpp"
#include "cliff/moduli.hpp"
#include "cliff/spectrum.hpp"

namespace cliff {

bool VerifyReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string VerifyReport::text() const {
    std::ostringstream os;
    for (const auto& c : checks) os << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    return os.str();
}

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

void write_text(const std::string& path, const std::string& s, VerifyReport& rep) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::IoError, "cannot open " + path);
    os << s;
    if (!os) throw Error(ErrorKind::IoError, "write failed for " + path);
    rep.artifacts.push_back(path);
}

// Sum of each kernel mode cos / sin (sqrt2 (x +- y)) over the singular set, max magnitude.
double max_kernel_sum(const SingularSet& L) {
    double worst = 0.0;
    for (int sgn : {1, -1}) {
        double c = 0.0, s = 0.0;
        for (const auto& p : L.points) {
            const double ph = std::numbers::sqrt2 * (p.x + sgn * p.y);
            c += std::cos(ph);
            s += std::sin(ph);
        }
        worst = std::max({worst, std::abs(c), std::abs(s)});
    }
    return worst;
}

void check(VerifyReport& rep, const std::string& name, bool pass, const std::string& detail) {
    rep.checks.push_back({name, pass, detail});
}

// Runs `body`, recording a failed check if it throws.
template <class F>
void guarded(VerifyReport& rep, const std::string& name, F body) {
    try {
        body();
    } catch (const std::exception& e) {
        check(rep, name, false, std::string("threw ") + e.what());
    }
}

void verify_reference(VerifyReport& rep, const std::string& dir) {
    const DoublingConfig cfg = validate_config(2, 3, 1, 6);
    check(rep, "knot.F_positive", cfg.F > 0.0, "F = " + fmt(cfg.F) + ", r_v = " + fmt(cfg.r_v));

    const SingularSet L = build_singular_set(cfg);
    const auto orb = orbit(L.points[0], group_generators(cfg));
    check(rep, "torus.group_transitive", L.points.size() == size_t(cfg.km()) && orb.size() == L.points.size(),
          "|L| = " + std::to_string(L.points.size()) + ", |orbit| = " + std::to_string(orb.size()));
    const double ks = max_kernel_sum(L);
    check(rep, "spectral.kernel_triviality", ks <= 1e-10 * double(L.points.size()), "max |sum u(p)| = " + fmt(ks));

    const LDSolution ld(cfg);
    double worst = 0.0;
    const double spacing = kPeriod / (cfg.v.norm() * cfg.k);
    for (int i = 0; i <= 16; ++i) {
        const double s = -0.5 * spacing + spacing * i / 16.0;
        const double d = std::abs(s - spacing * std::round(s / spacing));
        const double ref = ld.closed_form_average(d);
        worst = std::max(worst, std::abs(ld.phi_average(s) - ref) / std::abs(ref));
    }
    check(rep, "ld.average_closed_form", worst <= 1e-6, "max relative error = " + fmt(worst));
    const double bv = ld.phi_average(0.0), target = cfg.m / (2.0 * cfg.F);
    check(rep, "ld.boundary_value", std::abs(bv - target) <= 1e-6 * target, "Phi_avg(0) = " + fmt(bv) + ", m/2F = " + fmt(target));
    double eworst = 0.0;
    for (int i = 0; i < 32; ++i) {
        const double a = 2.0 * std::numbers::pi * i / 32.0, r = 1.9 * ld.delta() * (i % 4 + 1) / 4.0;
        eworst = std::max(eworst, std::abs(ld.e_prime(reduce({r * std::cos(a), r * std::sin(a)}))));
    }
    check(rep, "ld.source_vanishes_near_points", eworst == 0.0, "max |E'| on D(2 delta) = " + fmt(eworst));

    const std::vector<double> pp = ld.phi_prime_samples();
    const std::string ldf = dir + "/phi_prime.ldf1";
    write_ldf1(ldf, ld.grid_n(), pp);
    rep.artifacts.push_back(ldf);

    double spread = 0.0;
    const double base = normalized_mismatch(ld, 0.0, {0.0, 0.0});
    for (double z : {-1.0, 1.0}) spread = std::max(spread, std::abs(normalized_mismatch(ld, z, {0.0, 0.0}) - z - base));
    check(rep, "balancing.mismatch_shift", spread <= 1e-12, "max deviation = " + fmt(spread));
    BalanceReport br = balanced_zeta(ld);
    const double rho1 = std::min(2.0 * br.tau_star[0], ld.green().outer_radius() / 8.0);
    const double ext = extracted_mismatch(ld, 0.0, {0.0, 0.0}, rho1);
    check(rep, "balancing.extraction_agreement", std::abs(ext - base) <= 1e-4, "formula - extraction = " + fmt(base - ext));
    uniformity_audit({&ld}, br);
    check(rep, "balancing.genus", br.genus == cfg.km() + 1, "genus = " + std::to_string(br.genus));
    write_text(dir + "/balance.txt", report_text(br), rep);
    write_text(dir + "/balance.json", report_json(br), rep);
}

void verify_mesh(VerifyReport& rep, const std::string& dir, int m, int density, bool spectrum) {
    const std::string tag = "mesh.m" + std::to_string(m);
    const DoublingConfig cfg = validate_config(2, 3, 1, m);
    const LDSolution ld(cfg);
    const BalanceReport br = balanced_zeta(ld);
    const SurfaceMesh mesh = build_initial_surface(cfg, {&ld}, br, density);
    const int chi = euler_characteristic(mesh);
    check(rep, tag + ".euler_characteristic", chi == 2 - 2 * (cfg.km() + 1), "chi = " + std::to_string(chi));
    check(rep, tag + ".closed_oriented", is_closed_oriented_manifold(mesh), "each edge used once in each direction");
    double norm_err = 0.0;
    for (const auto& v : mesh.vertices) norm_err = std::max(norm_err, std::abs(std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]) - 1.0));
    check(rep, tag + ".unit_vertices", norm_err <= 1e-12, "max ||v| - 1| = " + fmt(norm_err));
    bool involution = true;
    size_t fixed = 0;
    for (size_t i = 0; i < mesh.rho_perm.size(); ++i) {
        if (mesh.rho_perm[size_t(mesh.rho_perm[i])] != int(i)) involution = false;
        if (mesh.rho_perm[i] == int(i)) {
            ++fixed;
            if (mesh.sheet[i] != 0) involution = false;
        }
    }
    check(rep, tag + ".rho_involution", involution, "fixed vertices = " + std::to_string(fixed));
    const double area = discrete_area(mesh);
    const double deficit = 4.0 * std::numbers::pi * std::numbers::pi - area;
    const double predicted = std::numbers::pi * cfg.km() * br.tau_star[0] * br.tau_star[0];
    check(rep, tag + ".area_deficit_positive", deficit > 0.0,
          "deficit = " + fmt(deficit) + ", pi km tau^2 = " + fmt(predicted) + ", ratio = " + fmt(deficit / predicted));
    const double angle = min_angle_degrees(mesh);
    check(rep, tag + ".min_angle", angle >= 5.0, "min angle = " + fmt(angle) + " deg");
    const std::string stem = dir + "/surface_m" + std::to_string(m);
    write_obj(mesh, stem + ".obj");
    write_csv4d(mesh, stem + ".csv");
    rep.artifacts.push_back(stem + ".obj");
    rep.artifacts.push_back(stem + ".csv");
    if (!spectrum) return;
    const Spectrum sp = laplace_spectrum(mesh, 12);
    int near_two = 0;
    double align = 1.0;
    for (const auto& e : sp.entries)
        if (e.value >= 1.90 && e.value <= 2.06) {
            ++near_two;
            align = std::min(align, e.coordinate_alignment);
        }
    check(rep, tag + ".four_eigenvalues_near_2", near_two == 4 && align >= 0.95,
          std::to_string(near_two) + " in [1.90, 2.06], min alignment = " + fmt(align));
    write_text(stem + "_spectrum.csv", spectrum_csv(sp), rep);
}

void verify_bare(VerifyReport& rep, const std::string& dir) {
    const SurfaceMesh bare = build_bare_torus(48);
    const Spectrum sp = laplace_spectrum(bare, 6);
    bool ok = std::abs(sp.entries[0].value) <= 1e-8;
    for (int i = 1; i <= 4; ++i) ok = ok && std::abs(sp.entries[size_t(i)].value - 2.0) <= 0.03 * 2.0;
    ok = ok && sp.entries[5].value > 2.0 * 1.03;
    check(rep, "mesh.bare_first_eigenvalue", ok, "lambda_1..4 = " + fmt(sp.entries[1].value) + " .. " + fmt(sp.entries[4].value));
    const auto cr = coordinate_rayleigh(bare);
    double w = 0.0;
    for (double c : cr) w = std::max(w, std::abs(c - 2.0) / 2.0);
    check(rep, "mesh.bare_coordinate_rayleigh", w <= 0.01, "max relative deviation from 2 = " + fmt(w));
    write_text(dir + "/bare_spectrum.csv", spectrum_csv(sp), rep);
}

void verify_flat_and_count(VerifyReport& rep, const std::string& dir, long sieve_limit) {
    const auto sq = flat_eigenvalues({0.0, 1.0}, 6);
    const double fp2 = 4.0 * std::numbers::pi * std::numbers::pi;
    check(rep, "flat.square_first", sq[0].multiplicity == 1 && sq[1].lambda == fp2 && sq[1].multiplicity == 4,
          "lambda_1 = " + fmt(sq[1].lambda) + " x" + std::to_string(sq[1].multiplicity));
    const auto hex = flat_eigenvalues({0.5, std::sqrt(3.0) / 2.0}, 2);
    check(rep, "flat.hexagonal_first", std::abs(hex[1].lambda - 4.0 * fp2 / 3.0) <= 1e-9 * fp2 && hex[1].multiplicity == 6,
          "lambda_1 = " + fmt(hex[1].lambda) + " x" + std::to_string(hex[1].multiplicity));
    write_text(dir + "/flat_square.csv", flat_csv(sq), rep);

    const auto s5 = enumerate_SR(5.0);
    check(rep, "count.S5", s5.size() == 5, "|S_5| = " + std::to_string(s5.size()));
    long bad = -1;
    for (long R = 2; R <= sieve_limit && bad < 0; ++R)
        if (long(enumerate_SR(double(R)).size()) != count_SR_sieve(double(R))) bad = R;
    check(rep, "count.dual_oracle", bad < 0, bad < 0 ? "agree for R <= " + std::to_string(sieve_limit) : "differ at R = " + std::to_string(bad));
    std::vector<DoublingCount> rows;
    for (int g : {51, 101, 201, 401}) rows.push_back(count_doublings(g));
    write_text(dir + "/count_genus.csv", count_csv_genus(rows, false), rep);
}

void verify_sweep(VerifyReport& rep) {
    double worst = 0.0;
    int tested = 0;
    for (auto [a, b] : {std::pair{2, 3}, std::pair{1, 3}, std::pair{3, 4}})
        for (int k : {1, 2})
            for (int m : {6, 12, 24}) {
                DoublingConfig cfg;
                try {
                    cfg = validate_config(a, b, k, m);
                } catch (const Error&) {
                    continue;
                }
                const SingularSet L = build_singular_set(cfg);
                worst = std::max(worst, max_kernel_sum(L) / double(L.points.size()));
                ++tested;
            }
    check(rep, "spectral.kernel_triviality_sweep", worst <= 1e-10, std::to_string(tested) + " configs, max |sum|/|L| = " + fmt(worst));

    const DoublingConfig c3 = validate_config(2, 3, 4, 8, Variant::ThreePoint);
    const LDSolution l0(c3, 0), l1(c3, 1), l2(c3, 2);
    const BalanceReport br = newton_balance_three({&l0, &l1, &l2}, c3);
    double res = 0.0;
    for (double r : br.residuals) res = std::max(res, std::abs(r));
    check(rep, "balancing.three_point_newton", br.iterations <= 15 && res <= 1e-8,
          std::to_string(br.iterations) + " iterations, residual = " + fmt(res) + ", sigma = (" + fmt(br.sigma[0]) + ", " + fmt(br.sigma[1]) + ")");
}

}  // namespace

VerifyReport run_verify(bool full, const std::string& output_dir) {
    std::filesystem::create_directories(output_dir);
    VerifyReport rep;
    guarded(rep, "reference", [&] { verify_reference(rep, output_dir); });
    guarded(rep, "mesh.bare", [&] { verify_bare(rep, output_dir); });
    guarded(rep, "mesh.m24", [&] { verify_mesh(rep, output_dir, 24, full ? 192 : 96, true); });
    guarded(rep, "flat_count", [&] { verify_flat_and_count(rep, output_dir, full ? 500 : 100); });
    if (full) {
        guarded(rep, "sweep", [&] { verify_sweep(rep); });
        guarded(rep, "mesh.m48", [&] { verify_mesh(rep, output_dir, 48, 384, false); });
    }
    write_text(output_dir + "/verify.txt", rep.text(), rep);
    return rep;
}

}  // namespace cliff
