#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cliff/ld_solution.hpp"

namespace cliff {

struct BalanceReport {
    Variant variant = Variant::OnePoint;
    double zeta_star = 0.0;
    std::array<double, 2> sigma{0.0, 0.0};
    double tau_base = 0.0;            // tau(zeta*) before the class factors exp(sigma_i)
    std::array<double, 3> tau_class{};  // per orbit class
    std::vector<double> tau_star;     // per singular point, aligned with build_singular_set
    double F = 0.0;
    int genus = 0;
    double area_leading = 0.0;
    std::optional<double> cliff_area;  // one-point variant only
    bool in_box = false;
    std::vector<double> residuals;
    int iterations = 0;
    std::map<std::string, bool> uniformity_flags;
    std::map<std::string, double> uniformity_values;
};

// tau(zeta) = exp(zeta) exp(-m / (2F)) / m.
double tau_of_zeta(const DoublingConfig& cfg, double zeta);
// tau(zeta) = exp(zeta) exp(-3km / (4 pi)) / m for the three-point family.
double tau_three_point(const DoublingConfig& cfg, double zeta);

// A_p + log(tau(zeta) / 2).
double normalized_mismatch(const LDSolution& ld, double zeta, ChartPoint p);
// Same quantity from a least-squares fit of Phi - log d_p on a small annulus around p.
double extracted_mismatch(const LDSolution& ld, double zeta, ChartPoint p, double annulus_inner);

BalanceReport balanced_zeta(const LDSolution& ld);

// mu_i = e^{s_i} [A_i + s_i + zeta + log(tau_unit / 2)] + sum_{j != i} e^{s_j} coupling[i][j],
// with s = (-s1 - s2, s1, s2) and tau_unit the zeta = 0 value of the base scale.
struct ThreePointSystem {
    std::array<double, 3> A{};
    std::array<std::array<double, 3>, 3> coupling{};
    double log_half_tau_unit = 0.0;
    std::array<double, 3> residual(double zeta, double s1, double s2) const;
};

struct ThreePointSolution {
    double zeta = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    int iterations = 0;
    double residual = 0.0;
    std::vector<std::array<double, 3>> iterates;  // (zeta, s1, s2) per step
};

ThreePointSolution solve_three_point(const ThreePointSystem& sys, int max_iter = 50, double tol = 1e-8);
ThreePointSystem three_point_system(const std::array<const LDSolution*, 3>& lds);
BalanceReport newton_balance_three(const std::array<const LDSolution*, 3>& lds, const DoublingConfig& cfg);

struct AreaEstimate {
    double area_leading;
    std::optional<double> cliff_area;
};
AreaEstimate area_estimate(const DoublingConfig& cfg, const BalanceReport& report);

// Sup-norm audit of the uniformity bounds for phi = sum tau_i Phi_i.
void uniformity_audit(const std::vector<const LDSolution*>& lds, BalanceReport& report, int samples = 256);

std::string report_text(const BalanceReport& r);
std::string report_json(const BalanceReport& r);

}  // namespace cliff
