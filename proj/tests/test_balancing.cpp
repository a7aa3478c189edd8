#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <numbers>

#include "cliff/balancing.hpp"
#include "cliff/error.hpp"

using namespace cliff;
using std::numbers::pi;

namespace {

const LDSolution& ld_236() {
    static const LDSolution ld(validate_config(2, 3, 1, 6));
    return ld;
}

}  // namespace

TEST_CASE("tau scales follow their closed forms") {
    const DoublingConfig cfg = validate_config(2, 3, 1, 24);
    for (double z : {-1.0, 0.0, 0.7})
        CHECK(tau_of_zeta(cfg, z) == doctest::Approx(std::exp(z - 24.0 / (2 * cfg.F)) / 24.0).epsilon(1e-14));
    const DoublingConfig c3 = validate_config(2, 3, 2, 8, Variant::ThreePoint);
    CHECK(tau_three_point(c3, 0.3) == doctest::Approx(std::exp(0.3 - 3.0 * 16 / (4 * pi)) / 8.0).epsilon(1e-14));
}

TEST_CASE("mismatch is linear in zeta with unit slope") {
    const LDSolution& ld = ld_236();
    for (const auto& p : ld.class_points())
        for (double z : {-0.5, 0.25, 2.0})
            CHECK(std::abs(normalized_mismatch(ld, z, p) - normalized_mismatch(ld, 0.0, p) - z) <= 1e-12);
}

TEST_CASE("one-point balancing zeroes every mismatch") {
    const LDSolution& ld = ld_236();
    const BalanceReport r = balanced_zeta(ld);
    CHECK(r.genus == 7);
    REQUIRE(r.residuals.size() == 6);
    for (double x : r.residuals) CHECK(std::abs(x) <= 1e-10);
    for (double t : r.tau_star) CHECK(t == doctest::Approx(tau_of_zeta(ld.config(), r.zeta_star)));
    // The fitted mismatch on a small annulus agrees with the evaluated one.
    const double rho1 = std::min(2 * r.tau_base, ld.green().outer_radius() / 8);
    CHECK(std::abs(extracted_mismatch(ld, r.zeta_star, {0.0, 0.0}, rho1)) <= 1e-4);
    CHECK(r.cliff_area.has_value());
    CHECK(*r.cliff_area < 2 * 2 * pi * pi);
    CHECK_THROWS_AS(balanced_zeta(LDSolution(validate_config(2, 3, 1, 6, Variant::ThreePoint), 0)), Error);
}

TEST_CASE("three-point Newton recovers a planted solution") {
    // Build A so that (zeta, s1, s2) = (0.4, -0.1, 0.2) solves the system exactly.
    ThreePointSystem sys;
    sys.log_half_tau_unit = -3.0;
    // Weak couplings keep the root near the origin unique.
    sys.coupling = {{{0.0, 0.03, -0.02}, {0.01, 0.0, 0.025}, {-0.015, 0.005, 0.0}}};
    const double zeta = 0.4, s1 = -0.1, s2 = 0.2;
    const std::array<double, 3> s{-s1 - s2, s1, s2};
    for (int i = 0; i < 3; ++i) {
        double c = 0.0;
        for (int j = 0; j < 3; ++j)
            if (j != i) c += std::exp(s[j] - s[i]) * sys.coupling[i][j];
        sys.A[i] = -s[i] - zeta - sys.log_half_tau_unit - c;
    }
    const ThreePointSolution sol = solve_three_point(sys);
    CHECK(sol.zeta == doctest::Approx(zeta).epsilon(1e-9));
    CHECK(sol.s1 == doctest::Approx(s1).epsilon(1e-8));
    CHECK(sol.s2 == doctest::Approx(s2).epsilon(1e-8));
    CHECK(sol.residual <= 1e-8);
    CHECK(sol.iterations <= 10);
    CHECK_THROWS_AS(solve_three_point(sys, 1, 1e-30), Error);
}

TEST_CASE("report serializations carry the same fields") {
    const BalanceReport r = balanced_zeta(ld_236());
    const auto j = nlohmann::json::parse(report_json(r));
    CHECK(j["genus"] == 7);
    CHECK(j["variant"] == "one-point");
    CHECK(j["zeta_star"].get<double>() == doctest::Approx(r.zeta_star));
    CHECK(j["tau_star"].size() == 6);
    const std::string t = report_text(r);
    CHECK(t.find("genus = 7") != std::string::npos);
    CHECK(t.find("zeta_star = ") != std::string::npos);
}
