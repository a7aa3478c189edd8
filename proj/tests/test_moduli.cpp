#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "cliff/error.hpp"
#include "cliff/moduli.hpp"

using namespace cliff;

TEST_CASE("S_5 has five slopes") {
    const auto s = enumerate_SR(5.0);
    const std::vector<std::pair<long, long>> expected{{1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4}};
    CHECK(s == expected);
    CHECK(count_SR_sieve(5.0) == 5);
}

TEST_CASE("enumeration, sieve and brute force agree") {
    for (double R : {1.0, 2.5, 7.0, 10.0, 31.6, 60.0}) {
        long brute = 0;
        for (long b = 1; b <= long(R) + 1; ++b)
            for (long a = 1; a < b; ++a)
                if (std::gcd(a, b) == 1 && double(a * a + b * b) <= R * R + 1e-9) ++brute;
        CHECK(long(enumerate_SR(R).size()) == brute);
        CHECK(count_SR_sieve(R) == brute);
    }
}

TEST_CASE("S_R density tends to 3 / (4 pi)") {
    const double R = 300.0;
    const double ratio = double(count_SR_sieve(R)) / (R * R);
    CHECK(ratio == doctest::Approx(3.0 / (4 * std::numbers::pi)).epsilon(0.01));
}

TEST_CASE("euclid gcd matches std::gcd") {
    for (long a = 0; a < 60; ++a)
        for (long b = 0; b < 60; ++b) CHECK(euclid_gcd(a, b) == std::gcd(a, b));
}

TEST_CASE("doubling counts") {
    CHECK_THROWS_AS(count_doublings(2), Error);
    const DoublingCount c = count_doublings(51);
    CHECK(c.m == 50);
    CHECK(c.R == doctest::Approx(5.0));
    CHECK(c.raw == 5);
    CHECK(c.constructible == 4);
    const DoublingCount small = count_doublings(3);
    CHECK(small.raw == 0);
    CHECK(small.constructible == 0);
    CHECK(count_csv_genus({c}, false) == "genus,count\n51,4\n");
    CHECK(count_csv_genus({c}, true) == "genus,count\n51,5\n");
    CHECK(count_csv_R({{5.0, 5}}).rfind("R,count\n", 0) == 0);
}
