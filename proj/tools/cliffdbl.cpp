#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>

#include "cliff/balancing.hpp"
#include "cliff/error.hpp"
#include "cliff/flat_spectra.hpp"
#include "cliff/ld_solution.hpp"
#include "cliff/mesh.hpp"
#include "cliff/moduli.hpp"
#include "cliff/run_config.hpp"
#include "cliff/spectrum.hpp"
#include "cliff/verify.hpp"

using namespace cliff;

namespace {

// Flags shared by the pipeline subcommands: a config file plus one override per config key.
struct RunFlags {
    std::string config_file;
    std::map<std::string, std::string> values;
    bool strict = false;

    void attach(CLI::App* sub) {
        sub->add_option("--config", config_file, "key = value config file");
        for (const auto& key : run_config_keys()) {
            if (key == "strict") continue;
            std::string flag = "--" + key;
            std::replace(flag.begin() + 2, flag.end(), '_', '-');
            sub->add_option(flag, values[key], "override " + key);
        }
        sub->add_flag("--strict", strict, "treat m below the minimum as an error");
    }

    RunConfig resolve(CLI::App* sub) const {
        RunConfig rc;
        if (!config_file.empty()) rc = load_config_file(config_file);
        for (const auto& key : run_config_keys()) {
            if (key == "strict") continue;
            std::string flag = "--" + key;
            std::replace(flag.begin() + 2, flag.end(), '_', '-');
            if (sub->count(flag) > 0) apply_key(rc, key, values.at(key));
        }
        if (strict) rc.opts.strict = true;
        return rc;
    }
};

std::string out_path(const RunConfig& rc, const std::string& name) {
    std::filesystem::create_directories(rc.output_dir);
    return (std::filesystem::path(rc.output_dir) / name).string();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::IoError, "cannot open " + path);
    os << text;
    if (!os) throw Error(ErrorKind::IoError, "write failed for " + path);
}

// LD solutions for every orbit class of the variant.
std::vector<std::unique_ptr<LDSolution>> solve_all(const DoublingConfig& cfg) {
    std::vector<std::unique_ptr<LDSolution>> lds;
    const int classes = cfg.variant == Variant::OnePoint ? 1 : 3;
    for (int c = 0; c < classes; ++c) lds.push_back(std::make_unique<LDSolution>(cfg, c));
    return lds;
}

std::vector<const LDSolution*> raw(const std::vector<std::unique_ptr<LDSolution>>& lds) {
    std::vector<const LDSolution*> out;
    for (const auto& l : lds) out.push_back(l.get());
    return out;
}

BalanceReport balance(const DoublingConfig& cfg, const std::vector<const LDSolution*>& lds) {
    BalanceReport br = cfg.variant == Variant::OnePoint ? balanced_zeta(*lds[0])
                                                        : newton_balance_three({lds[0], lds[1], lds[2]}, cfg);
    uniformity_audit(lds, br);
    return br;
}

int cmd_config(const RunConfig& rc) {
    const DoublingConfig cfg = to_doubling(rc);
    std::cout << config_text(rc);
    std::cout.precision(10);
    std::cout << "F = " << cfg.F << "\nr_v = " << cfg.r_v << "\nknot_length = " << cfg.knot_length
              << "\npoints = " << cfg.point_count() << "\ngenus = " << (cfg.variant == Variant::OnePoint ? cfg.km() + 1 : 3 * cfg.km() + 1)
              << "\ndelta = " << cfg.delta() << '\n';
    for (const auto& w : cfg.warnings) std::cout << "warning = " << w << '\n';
    std::cout << "status = valid\n";
    return 0;
}

int cmd_ld_solve(const RunConfig& rc) {
    const DoublingConfig cfg = to_doubling(rc);
    const auto lds = solve_all(cfg);
    std::cout.precision(12);
    if (cfg.variant == Variant::OnePoint) {
        const LDSolution& ld = *lds[0];
        const std::string path = out_path(rc, "phi_prime.ldf1");
        write_ldf1(path, ld.grid_n(), ld.phi_prime_samples());
        std::cout << "grid_n = " << ld.grid_n() << "\nregular_part = " << ld.regular_part({0.0, 0.0})
                  << "\naverage_amplitude = " << ld.average_amplitude() << "\nboundary_value = " << ld.phi_average(0.0)
                  << "\nfield = " << path << '\n';
    } else {
        for (const auto& ld : lds) {
            const std::string path = out_path(rc, "phi_smooth_class" + std::to_string(ld->class_index()) + ".ldf1");
            write_ldf1(path, ld->grid_n(), ld->green().smooth_samples(ld->grid_n()));
            std::cout << "class " << ld->class_index() << " regular_part = " << ld->regular_part(ld->base_point())
                      << "\nfield = " << path << '\n';
        }
    }
    return 0;
}

int cmd_balance(const RunConfig& rc) {
    const DoublingConfig cfg = to_doubling(rc);
    const auto lds = solve_all(cfg);
    const BalanceReport br = balance(cfg, raw(lds));
    write_file(out_path(rc, "balance.txt"), report_text(br));
    write_file(out_path(rc, "balance.json"), report_json(br));
    std::cout << report_text(br);
    return 0;
}

struct Built {
    DoublingConfig cfg;
    std::vector<std::unique_ptr<LDSolution>> lds;
    BalanceReport report;
    SurfaceMesh mesh;
};

Built build_mesh(const RunConfig& rc) {
    Built b;
    b.cfg = to_doubling(rc);
    b.lds = solve_all(b.cfg);
    b.report = balance(b.cfg, raw(b.lds));
    b.mesh = build_initial_surface(b.cfg, raw(b.lds), b.report, rc.mesh_density);
    return b;
}

int cmd_mesh(const RunConfig& rc) {
    const Built b = build_mesh(rc);
    const std::string obj = out_path(rc, "surface.obj"), csv = out_path(rc, "surface.csv");
    write_obj(b.mesh, obj);
    write_csv4d(b.mesh, csv);
    double tau2 = 0.0;
    for (double t : b.report.tau_star) tau2 += t * t;
    const double area = discrete_area(b.mesh);
    std::cout.precision(10);
    std::cout << "vertices = " << b.mesh.vertices.size() << "\ntriangles = " << b.mesh.triangles.size()
              << "\neuler_characteristic = " << euler_characteristic(b.mesh) << "\ngenus = " << b.mesh.expected_genus
              << "\nclosed_oriented = " << (is_closed_oriented_manifold(b.mesh) ? "true" : "false")
              << "\nmin_angle_deg = " << min_angle_degrees(b.mesh) << "\narea = " << area
              << "\narea_deficit = " << 4.0 * std::numbers::pi * std::numbers::pi - area
              << "\npredicted_deficit = " << std::numbers::pi * tau2 << "\nobj = " << obj << "\ncsv4d = " << csv << '\n';
    return 0;
}

int cmd_spectrum(const RunConfig& rc) {
    const Built b = build_mesh(rc);
    const Spectrum sp = laplace_spectrum(b.mesh, rc.eigen_count);
    const std::string path = out_path(rc, "spectrum.csv");
    write_file(path, spectrum_csv(sp));
    const auto cr = coordinate_rayleigh(b.mesh);
    const auto odd = odd_invariant_spectrum(b.mesh, 1);
    std::cout.precision(10);
    std::cout << spectrum_csv(sp) << "coordinate_rayleigh = " << cr[0] << ' ' << cr[1] << ' ' << cr[2] << ' ' << cr[3]
              << "\nodd_invariant_restricted = " << (odd.empty() ? NAN : odd[0]) << "\nmax_residual = " << sp.max_residual
              << "\nspectrum = " << path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Doublings of the Clifford torus: LD solutions, balancing, meshes, spectra, counts"};
    app.require_subcommand(1);

    RunFlags config_flags, ld_flags, balance_flags, mesh_flags, spectrum_flags;
    auto* sc_config = app.add_subcommand("config", "validate a configuration and print derived constants");
    config_flags.attach(sc_config);
    auto* sc_ld = app.add_subcommand("ld-solve", "assemble the LD solution and write its field");
    ld_flags.attach(sc_ld);
    auto* sc_balance = app.add_subcommand("balance", "solve the balancing conditions");
    balance_flags.attach(sc_balance);
    auto* sc_mesh = app.add_subcommand("mesh", "mesh the initial doubled surface");
    mesh_flags.attach(sc_mesh);
    auto* sc_spectrum = app.add_subcommand("spectrum", "Laplace spectrum of the doubled surface");
    spectrum_flags.attach(sc_spectrum);

    double lat_a = 0.0, lat_b = 1.0;
    int flat_count = 10;
    std::string flat_out = "flat_spectrum.csv";
    auto* sc_flat = app.add_subcommand("flat-spectrum", "exact spectrum of a flat torus");
    sc_flat->add_option("--lat-a", lat_a, "lattice parameter a");
    sc_flat->add_option("--lat-b", lat_b, "lattice parameter b");
    sc_flat->add_option("--count", flat_count, "number of distinct eigenvalues");
    sc_flat->add_option("--out", flat_out, "CSV path");

    std::vector<int> genera;
    std::vector<double> radii;
    double count_factor = 10.0;
    bool count_raw = false;
    std::string count_out = "count.csv";
    auto* sc_count = app.add_subcommand("count", "count coprime slopes and doublings of given genus");
    sc_count->add_option("--genus", genera, "genera to count");
    sc_count->add_option("--R", radii, "radii for |S_R|");
    sc_count->add_option("--m-min-factor", count_factor, "minimum m / |v|");
    sc_count->add_flag("--raw", count_raw, "keep slopes whose k = 1 triple is excluded");
    sc_count->add_option("--out", count_out, "CSV path");

    bool quick = false, full = false;
    std::string verify_dir = "verify_out";
    auto* sc_verify = app.add_subcommand("verify", "run the invariant suite");
    sc_verify->add_flag("--quick", quick, "reference configuration only (default)");
    sc_verify->add_flag("--full", full, "configuration sweep and finer meshes");
    sc_verify->add_option("--output-dir", verify_dir, "artifact directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sc_config->parsed()) return cmd_config(config_flags.resolve(sc_config));
        if (sc_ld->parsed()) return cmd_ld_solve(ld_flags.resolve(sc_ld));
        if (sc_balance->parsed()) return cmd_balance(balance_flags.resolve(sc_balance));
        if (sc_mesh->parsed()) return cmd_mesh(mesh_flags.resolve(sc_mesh));
        if (sc_spectrum->parsed()) return cmd_spectrum(spectrum_flags.resolve(sc_spectrum));
        if (sc_flat->parsed()) {
            const auto levels = flat_eigenvalues({lat_a, lat_b}, flat_count);
            write_file(flat_out, flat_csv(levels));
            std::cout << flat_csv(levels);
            return 0;
        }
        if (sc_count->parsed()) {
            std::string text;
            if (!radii.empty()) {
                std::vector<std::pair<double, long>> rows;
                for (double R : radii) rows.emplace_back(R, long(enumerate_SR(R).size()));
                text += count_csv_R(rows);
            }
            if (!genera.empty()) {
                std::vector<DoublingCount> rows;
                for (int g : genera) rows.push_back(count_doublings(g, count_factor));
                text += count_csv_genus(rows, count_raw);
            }
            if (text.empty()) throw Error(ErrorKind::ConfigError, "count needs --genus or --R");
            write_file(count_out, text);
            std::cout << text;
            return 0;
        }
        if (sc_verify->parsed()) {
            const VerifyReport rep = run_verify(full && !quick, verify_dir);
            std::cout << rep.text();
            return rep.all_pass() ? 0 : 3;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
