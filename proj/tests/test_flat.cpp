#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cliff/error.hpp"
#include "cliff/flat_spectra.hpp"

using namespace cliff;
using std::numbers::pi;

namespace {

// Brute force: all (p, q) in a box, sorted and grouped.
std::vector<std::pair<double, int>> brute_levels(const FlatLattice& lat, int count) {
    std::vector<double> all;
    for (long q = -40; q <= 40; ++q)
        for (long p = -40; p <= 40; ++p) {
            const double x = (p - q * lat.a) / lat.b;
            all.push_back(4 * pi * pi * (q * q + x * x));
        }
    std::sort(all.begin(), all.end());
    std::vector<std::pair<double, int>> out;
    for (double v : all) {
        if (!out.empty() && std::abs(v - out.back().first) <= 1e-9 * std::max(1.0, v))
            ++out.back().second;
        else if (int(out.size()) == count)
            break;
        else
            out.push_back({v, 1});
    }
    return out;
}

}  // namespace

TEST_CASE("flat levels match brute-force enumeration") {
    const FlatLattice lats[] = {{0.0, 1.0}, {0.5, std::sqrt(3.0) / 2}, {0.3, 1.7}, {0.1, 1.05}};
    for (const auto& lat : lats) {
        const auto levels = flat_eigenvalues(lat, 20);
        const auto oracle = brute_levels(lat, 20);
        REQUIRE(levels.size() == 20);
        for (int i = 0; i < 20; ++i) {
            CHECK(levels[i].lambda == doctest::Approx(oracle[i].first).epsilon(1e-12));
            CHECK(levels[i].multiplicity == oracle[i].second);
            // One witness per +-(p, q) pair, and (0, 0) on its own.
            int from_witnesses = 0;
            for (auto [p, q] : levels[i].witnesses) {
                CHECK((q > 0 || (q == 0 && p >= 0)));
                CHECK(flat_eigenvalue(lat, p, q) == doctest::Approx(levels[i].lambda).epsilon(1e-12));
                from_witnesses += (p == 0 && q == 0) ? 1 : 2;
            }
            CHECK(from_witnesses == levels[i].multiplicity);
        }
    }
}

TEST_CASE("square and hexagonal tori") {
    const auto sq = flat_eigenvalues({0.0, 1.0}, 5);
    const double l0 = 4 * pi * pi;
    const std::pair<double, int> sq_expected[] = {{0, 1}, {l0, 4}, {2 * l0, 4}, {4 * l0, 4}, {5 * l0, 8}};
    for (int i = 0; i < 5; ++i) {
        CHECK(sq[i].lambda == doctest::Approx(sq_expected[i].first).epsilon(1e-12));
        CHECK(sq[i].multiplicity == sq_expected[i].second);
    }
    const auto hex = flat_eigenvalues({0.5, std::sqrt(3.0) / 2}, 3);
    CHECK(hex[1].lambda == doctest::Approx(16 * pi * pi / 3).epsilon(1e-12));
    CHECK(hex[1].multiplicity == 6);
    CHECK(hex[2].multiplicity == 6);
}

TEST_CASE("counting function follows the area law for large lambda") {
    for (const FlatLattice lat : {FlatLattice{0.0, 1.0}, FlatLattice{0.5, std::sqrt(3.0) / 2}, FlatLattice{0.2, 2.0}}) {
        const double lambda = 4000.0;
        const double weyl = lat.b * lambda / (4 * pi);
        CHECK(std::abs(flat_counting_function(lat, lambda) - weyl) <= 0.05 * weyl);
        long total = 0;
        for (const auto& lv : flat_eigenvalues(lat, 10)) total += lv.multiplicity;
        CHECK(flat_counting_function(lat, flat_eigenvalues(lat, 10).back().lambda) == total);
    }
}

TEST_CASE("lattice validation and normalization") {
    CHECK_THROWS_AS(validate_lattice({0.6, 1.0}), Error);
    CHECK_THROWS_AS(validate_lattice({0.2, 0.5}), Error);
    CHECK_THROWS_AS(validate_lattice({0.2, -1.0}), Error);
    CHECK_NOTHROW(validate_lattice({0.5, std::sqrt(3.0) / 2}));
    double shortest = 0;
    FlatLattice l = normalize_lattice(1, 0, 3, 1, &shortest);
    CHECK(l.a == doctest::Approx(0.0));
    CHECK(l.b == doctest::Approx(1.0));
    CHECK(shortest == doctest::Approx(1.0));
    l = normalize_lattice(0, 2, -4, 1, &shortest);
    CHECK(shortest == doctest::Approx(2.0));
    CHECK(l.a == doctest::Approx(0.5));
    CHECK(l.b == doctest::Approx(2.0));
    // Same lattice from a skewed basis, mirrored.
    const FlatLattice h1 = normalize_lattice(1, 0, 0.5, std::sqrt(3.0) / 2);
    const FlatLattice h2 = normalize_lattice(3.5, std::sqrt(3.0) / 2, 1, 0);
    CHECK(h1.a == doctest::Approx(h2.a));
    CHECK(h1.b == doctest::Approx(h2.b));
}

TEST_CASE("quotient lattice of a doubling configuration") {
    const QuotientLattice q = quotient_lattice(validate_config(2, 3, 1, 6));
    CHECK_NOTHROW(validate_lattice(q.lattice));
    CHECK(q.shorter_side > 0);
    CHECK(q.shorter_side_scaled == doctest::Approx(6 * q.shorter_side));
    // The group has 2 k m translations' worth of fundamental domain: area matches torus area / (k m).
    CHECK(q.lattice.b * q.shorter_side * q.shorter_side == doctest::Approx(2 * pi * pi / 6).epsilon(1e-12));
}

TEST_CASE("flat csv") {
    const std::string csv = flat_csv(flat_eigenvalues({0.0, 1.0}, 2));
    CHECK(csv.rfind("lambda,multiplicity,witnesses\n", 0) == 0);
    CHECK(csv.find("1:0;0:1") != std::string::npos);
}
