#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "cliff/error.hpp"
#include "cliff/spectrum.hpp"

using namespace cliff;
using std::numbers::pi;

TEST_CASE("Lanczos agrees with a dense generalized eigensolver") {
    // Weighted path-graph Laplacian plus a few random chords.
    const int n = 300;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::vector<Eigen::Triplet<double>> trip;
    auto edge = [&](int i, int j, double w) {
        trip.emplace_back(i, i, w);
        trip.emplace_back(j, j, w);
        trip.emplace_back(i, j, -w);
        trip.emplace_back(j, i, -w);
    };
    for (int i = 0; i + 1 < n; ++i) edge(i, i + 1, u(rng));
    for (int c = 0; c < 40; ++c) edge(int(rng() % n), int(rng() % n), 0.01 * u(rng));
    Eigen::SparseMatrix<double> K(n, n);
    K.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd mass(n);
    for (int i = 0; i < n; ++i) mass(i) = u(rng);

    const EigenResult r = smallest_generalized(K, mass, 10);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> dense(Eigen::MatrixXd(K), Eigen::MatrixXd(mass.asDiagonal()));
    for (int i = 0; i < 10; ++i) CHECK(std::abs(r.values(i) - dense.eigenvalues()(i)) <= 1e-9 * std::max(1.0, dense.eigenvalues()(i)));
    CHECK(r.max_residual <= 1e-8);
    const Eigen::MatrixXd G = r.vectors.transpose() * mass.asDiagonal() * r.vectors;
    CHECK((G - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("bare Clifford torus has first eigenvalue 2 with multiplicity 4") {
    const SurfaceMesh m = build_bare_torus(48);
    const Spectrum s = laplace_spectrum(m, 6);
    CHECK(std::abs(s.entries[0].value) <= 1e-9);
    for (int i = 1; i <= 4; ++i) {
        CHECK(s.entries[i].value == doctest::Approx(2.0).epsilon(0.01));
        CHECK(s.entries[i].coordinate_alignment >= 0.99);
    }
    CHECK(s.entries[5].value > 2.5);
    for (double q : coordinate_rayleigh(m)) CHECK(q == doctest::Approx(2.0).epsilon(0.01));
    const std::string csv = spectrum_csv(s);
    CHECK(csv.rfind("index,eigenvalue,parity,group_invariant\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("doubled surface spectrum") {
    const DoublingConfig cfg = validate_config(2, 3, 1, 24);
    const LDSolution ld(cfg);
    const BalanceReport rep = balanced_zeta(ld);
    const SurfaceMesh m = build_initial_surface(cfg, {&ld}, rep, 96);
    const Spectrum s = laplace_spectrum(m, 8);
    CHECK(std::abs(s.entries[0].value) <= 1e-8);
    CHECK(s.entries[0].parity == Parity::Even);
    CHECK(s.entries[0].group_invariant);
    int near_two = 0;
    for (const auto& e : s.entries)
        if (e.value >= 1.9 && e.value <= 2.06 && e.coordinate_alignment >= 0.95) ++near_two;
    CHECK(near_two == 4);
    for (size_t i = 1; i < s.entries.size(); ++i) CHECK(s.entries[i].value >= s.entries[i - 1].value);
    // The restricted problem is a Galerkin projection onto odd invariant functions.
    const auto odd = odd_invariant_spectrum(m, 3);
    REQUIRE(odd.size() == 3);
    CHECK(odd[0] > 0.0);
    CHECK(odd[0] <= odd[1]);
    CHECK(odd[0] > 2.5);
}

TEST_CASE("parity names") {
    CHECK(std::string(parity_name(Parity::Even)) == "even");
    CHECK(std::string(parity_name(Parity::Odd)) == "odd");
    CHECK(std::string(parity_name(Parity::Mixed)) == "mixed");
}
