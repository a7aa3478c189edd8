#include "cliff/balancing.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "cliff/error.hpp"

namespace cliff {

double tau_of_zeta(const DoublingConfig& cfg, double zeta) {
    return std::exp(zeta - cfg.m / (2.0 * cfg.F)) / cfg.m;
}

double tau_three_point(const DoublingConfig& cfg, double zeta) {
    return std::exp(zeta - 3.0 * cfg.km() / (4.0 * std::numbers::pi)) / cfg.m;
}

double normalized_mismatch(const LDSolution& ld, double zeta, ChartPoint p) {
    return ld.regular_part(p) + std::log(tau_of_zeta(ld.config(), zeta) / 2.0);
}

double extracted_mismatch(const LDSolution& ld, double zeta, ChartPoint p, double annulus_inner) {
    ld.regular_part(p);  // membership check
    const int nr = 8, na = 16;
    // Even expansion of Phi - log r about a point of reflection symmetry, through order r^4.
    Eigen::MatrixXd A(nr * na, 10);
    Eigen::VectorXd y(nr * na);
    for (int i = 0; i < nr; ++i) {
        const double r = annulus_inner * (1.0 + i / double(nr - 1));
        for (int k = 0; k < na; ++k) {
            const double a = 2.0 * std::numbers::pi * (k + 0.5) / na;
            const ChartPoint q = reduce({p.x + r * std::cos(a), p.y + r * std::sin(a)});
            const int row = i * na + k;
            const double r2 = r * r;
            const double r4 = r2 * r2, lr = std::log(r);
            A.row(row) << 1.0, r2 * lr, r2, r2 * std::cos(2 * a), r2 * std::sin(2 * a), r4 * lr, r4,
                r4 * std::cos(2 * a), r4 * std::sin(2 * a), r4 * std::cos(4 * a);
            y(row) = ld.phi(q) - std::log(r);
        }
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    return c(0) + std::log(tau_of_zeta(ld.config(), zeta) / 2.0);
}

AreaEstimate area_estimate(const DoublingConfig& cfg, const BalanceReport& r) {
    double sum = 0.0;
    for (double t : r.tau_star) sum += t * t;
    AreaEstimate a{2.0 * kTorusArea - std::numbers::pi * sum, std::nullopt};
    if (r.variant == Variant::OnePoint)
        a.cliff_area = 2.0 * kTorusArea - std::exp(2.0 * r.zeta_star - cfg.m / cfg.F) / cfg.m;
    return a;
}

BalanceReport balanced_zeta(const LDSolution& ld) {
    const DoublingConfig& cfg = ld.config();
    if (cfg.variant != Variant::OnePoint) throw Error(ErrorKind::DomainError, "balanced_zeta needs the one-point variant");
    BalanceReport r;
    r.variant = cfg.variant;
    r.F = cfg.F;
    r.zeta_star = -normalized_mismatch(ld, 0.0, {0.0, 0.0});
    r.tau_base = tau_of_zeta(cfg, r.zeta_star);
    r.tau_class = {r.tau_base, 0.0, 0.0};
    r.genus = cfg.km() + 1;
    for (ChartPoint p : ld.singular_set().points) {
        r.tau_star.push_back(r.tau_base);
        r.residuals.push_back(normalized_mismatch(ld, r.zeta_star, p));
    }
    r.in_box = std::abs(r.zeta_star) <= cfg.c_bar;
    AreaEstimate a = area_estimate(cfg, r);
    r.area_leading = a.area_leading;
    r.cliff_area = a.cliff_area;
    return r;
}

std::array<double, 3> ThreePointSystem::residual(double zeta, double s1, double s2) const {
    const std::array<double, 3> s{-s1 - s2, s1, s2};
    std::array<double, 3> mu{};
    for (int i = 0; i < 3; ++i) {
        mu[i] = std::exp(s[i]) * (A[i] + s[i] + zeta + log_half_tau_unit);
        for (int j = 0; j < 3; ++j)
            if (j != i) mu[i] += std::exp(s[j]) * coupling[i][j];
    }
    return mu;
}

ThreePointSolution solve_three_point(const ThreePointSystem& sys, int max_iter, double tol) {
    ThreePointSolution sol;
    Eigen::Vector3d x(0.0, 0.0, 0.0);
    auto resid = [&](const Eigen::Vector3d& v) {
        auto mu = sys.residual(v(0), v(1), v(2));
        return Eigen::Vector3d(mu[0], mu[1], mu[2]);
    };
    Eigen::Vector3d f = resid(x);
    sol.iterates.push_back({x(0), x(1), x(2)});
    const Eigen::Matrix<double, 3, 2> ds = (Eigen::Matrix<double, 3, 2>() << -1, -1, 1, 0, 0, 1).finished();
    while (f.cwiseAbs().maxCoeff() > tol) {
        if (sol.iterations >= max_iter) throw Error(ErrorKind::NoConvergence, "three-point Newton did not converge");
        const std::array<double, 3> s{-x(1) - x(2), x(1), x(2)};
        Eigen::Matrix3d dmu_ds;
        for (int i = 0; i < 3; ++i)
            for (int l = 0; l < 3; ++l)
                dmu_ds(i, l) = l == i ? std::exp(s[i]) * (sys.A[i] + s[i] + x(0) + sys.log_half_tau_unit + 1.0)
                                      : std::exp(s[l]) * sys.coupling[i][l];
        Eigen::Matrix3d J;
        for (int i = 0; i < 3; ++i) J(i, 0) = std::exp(s[i]);
        J.rightCols<2>() = dmu_ds * ds;
        const Eigen::Vector3d step = J.fullPivLu().solve(-f);
        double t = 1.0;
        Eigen::Vector3d xn = x + step, fn = resid(xn);
        for (int h = 0; h < 30 && fn.norm() > f.norm(); ++h) {
            t *= 0.5;
            xn = x + t * step;
            fn = resid(xn);
        }
        x = xn;
        f = fn;
        ++sol.iterations;
        sol.iterates.push_back({x(0), x(1), x(2)});
    }
    sol.zeta = x(0);
    sol.s1 = x(1);
    sol.s2 = x(2);
    sol.residual = f.cwiseAbs().maxCoeff();
    return sol;
}

ThreePointSystem three_point_system(const std::array<const LDSolution*, 3>& lds) {
    ThreePointSystem sys;
    const DoublingConfig& cfg = lds[0]->config();
    sys.log_half_tau_unit = std::log(tau_three_point(cfg, 0.0) / 2.0);
    for (int i = 0; i < 3; ++i) {
        const ChartPoint pi = lds[i]->base_point();
        sys.A[i] = lds[i]->regular_part(pi);
        for (int j = 0; j < 3; ++j)
            if (j != i) sys.coupling[i][j] = lds[j]->phi(pi);
    }
    return sys;
}

BalanceReport newton_balance_three(const std::array<const LDSolution*, 3>& lds, const DoublingConfig& cfg) {
    if (cfg.variant != Variant::ThreePoint) throw Error(ErrorKind::DomainError, "newton_balance_three needs the three-point variant");
    for (int i = 0; i < 3; ++i)
        if (lds[i]->class_index() != i) throw Error(ErrorKind::DomainError, "LD solutions must be ordered by class");
    const ThreePointSystem sys = three_point_system(lds);
    const ThreePointSolution sol = solve_three_point(sys);
    BalanceReport r;
    r.variant = cfg.variant;
    r.F = cfg.F;
    r.zeta_star = sol.zeta;
    r.sigma = {sol.s1, sol.s2};
    r.iterations = sol.iterations;
    r.tau_base = tau_three_point(cfg, sol.zeta);
    const std::array<double, 3> s{-sol.s1 - sol.s2, sol.s1, sol.s2};
    for (int i = 0; i < 3; ++i) r.tau_class[i] = std::exp(s[i]) * r.tau_base;
    const SingularSet& L = lds[0]->singular_set();
    for (int c : L.class_index) r.tau_star.push_back(r.tau_class[c]);
    auto mu = sys.residual(sol.zeta, sol.s1, sol.s2);
    r.residuals.assign(mu.begin(), mu.end());
    r.genus = 3 * cfg.km() + 1;
    const double sb = cfg.c_bar / cfg.km();
    r.in_box = std::abs(sol.zeta) <= cfg.c_bar && std::abs(sol.s1) <= sb && std::abs(sol.s2) <= sb;
    AreaEstimate a = area_estimate(cfg, r);
    r.area_leading = a.area_leading;
    r.cliff_area = a.cliff_area;
    return r;
}

void uniformity_audit(const std::vector<const LDSolution*>& lds, BalanceReport& r, int samples) {
    const DoublingConfig& cfg = lds.front()->config();
    const double alpha = cfg.alpha;
    const double dl = cfg.delta();
    double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
    for (double t : r.tau_star) {
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    auto phi = [&](ChartPoint q) {
        double s = 0.0;
        for (const auto* ld : lds) s += r.tau_class[ld->class_index()] * ld->phi_fast(q);
        return s;
    };

    bool window = true;
    for (double t : r.tau_star) window = window && 9.0 * std::pow(t, alpha) < std::pow(t, alpha / 100.0) && std::pow(t, alpha / 100.0) < dl;
    r.uniformity_flags["scale_window"] = window;
    r.uniformity_values["scale_window_9delta_prime"] = 9.0 * std::pow(tmin, alpha);
    r.uniformity_values["scale_window_tau_pow"] = std::pow(tmin, alpha / 100.0);
    r.uniformity_values["scale_window_delta"] = dl;

    r.uniformity_flags["tau_ratio"] = tmax <= std::pow(tmin, 1.0 - alpha / 100.0);
    r.uniformity_values["tau_ratio_tau_max"] = tmax;
    r.uniformity_values["tau_ratio_bound"] = std::pow(tmin, 1.0 - alpha / 100.0);

    // Scaled sup of |phi| on the circles of radius delta around each class base point.
    bool decay = true;
    double decay_worst = 0.0;
    for (const auto* ld : lds) {
        const ChartPoint p = ld->base_point();
        const double t = r.tau_class[ld->class_index()];
        double sup = 0.0;
        for (int k = 0; k < 64; ++k) {
            const double a = 2.0 * std::numbers::pi * k / 64.0;
            sup = std::max(sup, std::abs(phi(reduce({p.x + dl * std::cos(a), p.y + dl * std::sin(a)}))));
        }
        const double lhs = sup / (dl * dl);
        decay = decay && lhs <= std::pow(t, 1.0 - alpha / 9.0);
        decay_worst = std::max(decay_worst, lhs);
    }
    r.uniformity_flags["circle_decay"] = decay;
    r.uniformity_values["circle_decay_worst"] = decay_worst;

    // Sup and min of phi outside the disks of radius tau^alpha.
    double sup = 0.0, inf = std::numeric_limits<double>::infinity();
    const double h = kPeriod / samples;
    for (int iy = 0; iy < samples; ++iy)
        for (int ix = 0; ix < samples; ++ix) {
            const ChartPoint q{(ix + 0.5) * h, (iy + 0.5) * h};
            bool inside = false;
            for (const auto* ld : lds)
                inside = inside || ld->green().nearest_distance(q) < std::pow(r.tau_class[ld->class_index()], alpha);
            if (inside) continue;
            const double v = phi(q);
            sup = std::max(sup, std::abs(v));
            inf = std::min(inf, v);
        }
    r.uniformity_flags["outer_sup"] = sup <= std::pow(tmin, 8.0 / 9.0);
    r.uniformity_values["outer_sup_value"] = sup;
    r.uniformity_values["outer_sup_bound"] = std::pow(tmin, 8.0 / 9.0);
    r.uniformity_flags["outer_min"] = std::pow(tmax, 1.0 + alpha / 5.0) <= inf;
    r.uniformity_values["outer_min_value"] = inf;
    r.uniformity_values["outer_min_bound"] = std::pow(tmax, 1.0 + alpha / 5.0);
}

std::string report_text(const BalanceReport& r) {
    std::ostringstream os;
    os << std::setprecision(15);
    os << "variant = " << (r.variant == Variant::OnePoint ? "one-point" : "three-point") << "\n";
    os << "zeta_star = " << r.zeta_star << "\n";
    os << "sigma1 = " << r.sigma[0] << "\n";
    os << "sigma2 = " << r.sigma[1] << "\n";
    os << "tau_base = " << r.tau_base << "\n";
    for (int i = 0; i < (r.variant == Variant::OnePoint ? 1 : 3); ++i)
        os << "tau_class" << i << " = " << r.tau_class[i] << "\n";
    os << "F = " << r.F << "\n";
    os << "genus = " << r.genus << "\n";
    os << "area_leading = " << r.area_leading << "\n";
    if (r.cliff_area) os << "cliff_area = " << *r.cliff_area << "\n";
    os << "in_box = " << (r.in_box ? "true" : "false") << "\n";
    os << "iterations = " << r.iterations << "\n";
    double worst = 0.0;
    for (double v : r.residuals) worst = std::max(worst, std::abs(v));
    os << "max_residual = " << worst << "\n";
    for (const auto& [k, v] : r.uniformity_flags) os << "uniformity_" << k << " = " << (v ? "true" : "false") << "\n";
    for (const auto& [k, v] : r.uniformity_values) os << "audit_" << k << " = " << v << "\n";
    return os.str();
}

std::string report_json(const BalanceReport& r) {
    nlohmann::ordered_json j;
    j["variant"] = r.variant == Variant::OnePoint ? "one-point" : "three-point";
    j["zeta_star"] = r.zeta_star;
    j["sigma"] = {r.sigma[0], r.sigma[1]};
    j["tau_star"] = r.tau_star;
    j["F"] = r.F;
    j["genus"] = r.genus;
    j["area_estimate"] = r.area_leading;
    j["cliff_area"] = r.cliff_area ? nlohmann::ordered_json(*r.cliff_area) : nlohmann::ordered_json(nullptr);
    j["in_box"] = r.in_box;
    j["residuals"] = r.residuals;
    j["iterations"] = r.iterations;
    j["uniformity_flags"] = r.uniformity_flags;
    j["uniformity_values"] = r.uniformity_values;
    return j.dump(2) + "\n";
}

}  // namespace cliff
