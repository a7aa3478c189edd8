#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>

#include "cliff/error.hpp"
#include "cliff/ld_solution.hpp"

using namespace cliff;
using std::numbers::pi;

namespace {

const LDSolution& ld_236() {
    static const LDSolution ld(validate_config(2, 3, 1, 6));
    return ld;
}

// Richardson-extrapolated five-point (Delta + 4) f.
double jacobi_fd(const std::function<double(ChartPoint)>& f, ChartPoint q) {
    auto lap = [&](double h) {
        return (f({q.x + h, q.y}) + f({q.x - h, q.y}) + f({q.x, q.y + h}) + f({q.x, q.y - h}) - 4 * f(q)) / (h * h);
    };
    const double h = 2e-3;
    return (4 * lap(h / 2) - lap(h)) / 3 + 4 * f(q);
}

}  // namespace

TEST_CASE("default grid is a power of two large enough for m") {
    for (int m : {6, 24, 64, 100}) {
        const int n = default_grid_n(validate_config(2, 3, 1, m));
        CHECK(n >= 256);
        CHECK(n >= 16 * m);
        CHECK((n & (n - 1)) == 0);
    }
}

TEST_CASE("Phi solves the Jacobi equation away from the singular set") {
    const LDSolution& ld = ld_236();
    auto f = [&](ChartPoint q) { return ld.phi(q); };
    int tested = 0;
    for (int i = 0; i < 40 && tested < 8; ++i) {
        const ChartPoint q = reduce({0.731 * i + 0.2, 1.913 * i + 0.1});
        if (ld.green().nearest_distance(q) < 0.3) continue;
        ++tested;
        CHECK(std::abs(jacobi_fd(f, q)) <= 1e-5);
    }
    CHECK(tested == 8);
}

TEST_CASE("Phi has a unit logarithmic singularity with a well defined regular part") {
    const LDSolution& ld = ld_236();
    for (const auto& p : ld.class_points()) {
        const double eps = 1e-3;
        double avg = 0.0;
        for (int j = 0; j < 4; ++j) {
            const double a = 0.3 + j * pi / 2;
            avg += ld.phi({p.x + eps * std::cos(a), p.y + eps * std::sin(a)}) - std::log(eps);
        }
        CHECK(avg / 4 == doctest::Approx(ld.regular_part(p)).epsilon(1e-5));
    }
}

TEST_CASE("Phi is invariant under the symmetry group") {
    const LDSolution& ld = ld_236();
    const auto gens = group_generators(ld.config());
    for (int i = 0; i < 6; ++i) {
        const ChartPoint q = reduce({0.41 * i + 0.13, 0.77 * i + 0.52});
        if (ld.green().nearest_distance(q) < 0.05) continue;
        for (const auto& g : gens) CHECK(ld.phi(g.apply(q)) == doctest::Approx(ld.phi(q)).epsilon(1e-9));
    }
}

TEST_CASE("fast evaluation and the closed-form decomposition agree with the exact sum") {
    const LDSolution& ld = ld_236();
    for (int i = 0; i < 10; ++i) {
        const ChartPoint q = reduce({0.291 * i + 0.05, 0.613 * i + 0.31});
        if (ld.green().nearest_distance(q) < 0.02) continue;
        const double exact = ld.phi(q);
        // Quintic interpolation of the smooth part on the default grid.
        CHECK(std::abs(ld.phi_fast(q) - exact) <= 1e-7 * std::max(1.0, std::abs(exact)));
        CHECK(std::abs(ld.ghat(q) + ld.phihat(q) + ld.phi_prime(q) - exact) <= 1e-8 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("parallel average follows the closed form and its slope jump") {
    const LDSolution& ld = ld_236();
    const DoublingConfig& cfg = ld.config();
    const double theta = cfg.theta();
    for (int i = 0; i <= 16; ++i) {
        const double s = -theta / 2 + theta * i / 16.0;
        const double d = std::abs(s - theta * std::round(s / theta));
        CHECK(std::abs(ld.phi_average(s) - ld.closed_form_average(d)) <= 1e-6);
    }
    // Flux balance: the slope jump across a line equals 2 pi times its point density.
    const double C = ld.average_amplitude();
    const double density = cfg.k * cfg.m * theta / (2 * pi * pi);
    CHECK(4 * C * std::sin(theta) == doctest::Approx(2 * pi * density).epsilon(1e-12));
    // The average solves f'' + 4 f = 0 between lines.
    const double s0 = theta / 3, h = 1e-3;
    const double f2 = (ld.phi_average(s0 + h) - 2 * ld.phi_average(s0) + ld.phi_average(s0 - h)) / (h * h);
    CHECK(std::abs(f2 + 4 * ld.phi_average(s0)) <= 1e-4);
}

TEST_CASE("decomposed pieces need the one-point variant") {
    const DoublingConfig c3 = validate_config(2, 3, 1, 6, Variant::ThreePoint);
    const LDSolution ld(c3, 1);
    CHECK(ld.class_points().size() == 6);
    CHECK_THROWS_AS(ld.ghat({0.1, 0.2}), Error);
    CHECK_THROWS_AS(ld.source_field(), Error);
}

TEST_CASE("source field is symmetric and free of kernel content") {
    const SpectralField src = ld_236().source_field();
    CHECK(kernel_component(src) <= 1e-10);
}

TEST_CASE("LDF1 round trip") {
    const std::vector<double> s{1.0, -2.5, 3.25, 1e-300};
    const std::string path = "ldf1_roundtrip.bin";
    write_ldf1(path, 2, s);
    int n = 0;
    CHECK(read_ldf1(path, n) == s);
    CHECK(n == 2);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_ldf1("missing_file.ldf1", n), Error);
}
