#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cliff/green_sum.hpp"
#include "cliff/spectral_field.hpp"
#include "cliff/torus.hpp"

namespace cliff {

struct LDOptions {
    GreenSumOptions green;
    int interp_n = 0;  // grid for fast evaluation of the smooth part; 0 picks one from the mode range, < 0 disables
};

// Grid size used when the config does not fix one: a power of two >= max(256, 16 m).
int default_grid_n(const DoublingConfig& cfg);

// Unit-weight LD solution with singular set one orbit class: Phi with (Delta + 4) Phi = 2 pi sum delta_p.
// In the one-point variant Phi = Ghat + Phihat + PhiPrime with Ghat and Phihat in closed form.
class LDSolution {
public:
    LDSolution(const DoublingConfig& cfg, int cls = 0, const LDOptions& opts = {});

    const DoublingConfig& config() const { return cfg_; }
    const SingularSet& singular_set() const { return L_; }
    const GreenSum& green() const { return *green_; }
    int class_index() const { return cls_; }
    int grid_n() const { return grid_n_; }
    double delta() const { return cfg_.delta(); }
    double tau_unit() const { return 1.0; }
    // Points of the singular class carried by this solution.
    std::vector<ChartPoint> class_points() const;
    ChartPoint base_point() const;

    double phi(ChartPoint q) const { return green_->value(q); }
    double phi_fast(ChartPoint q) const { return green_->value_fast(q); }
    double phi_average(double s) const { return green_->average(s); }

    // Closed-form pieces (one-point variant only).
    double ghat(ChartPoint q) const;
    double phihat(ChartPoint q) const;
    double phi_prime(ChartPoint q) const;
    // -L(Ghat + Phihat) / m^2, analytic.
    double e_prime(ChartPoint q) const;

    // Phi - log d_p at p: the regular part A_p.
    double regular_part(ChartPoint p) const;

    double closed_form_average(double d) const;  // C cos(theta - 2 d)
    double average_amplitude() const;            // C
    double correction_amplitude() const;         // m / (sqrt8 |v|)

    // PhiPrime sampled at the grid_n x grid_n chart grid.
    std::vector<double> phi_prime_samples() const;
    SpectralField phi_prime_field() const;
    // m^2 E' sampled on the grid, then symmetrized.
    SpectralField source_field() const;

private:
    bool decomposed() const { return cfg_.variant == Variant::OnePoint; }
    void require_decomposed() const;

    DoublingConfig cfg_;
    int cls_;
    int grid_n_;
    SingularSet L_;
    std::shared_ptr<GreenSum> green_;
};

// Binary field file: "LDF1", u32 n, n^2 f64 samples (little endian, x fastest).
void write_ldf1(const std::string& path, int n, const std::vector<double>& samples);
std::vector<double> read_ldf1(const std::string& path, int& n);

}  // namespace cliff
