#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cliff {

// Pairs (a, b) with 1 <= a < b, gcd(a, b) = 1 and a^2 + b^2 <= R^2, sorted by (b, a).
std::vector<std::pair<long, long>> enumerate_SR(double R);

// |S_R| by a Moebius-sieve count over b, independent of the enumeration above.
long count_SR_sieve(double R);

struct DoublingCount {
    int genus = 0;
    int m = 0;
    double R = 0.0;
    long raw = 0;            // |S_R|
    long constructible = 0;  // excluding slopes whose k = 1 triple is excluded
};

// Non-isometric one-point doublings of genus m + 1 with k = 1: one per admissible slope |v| <= m / m_min_factor.
DoublingCount count_doublings(int genus, double m_min_factor = 10.0);

// Euclid's algorithm, kept separate from std::gcd for cross-checking.
long euclid_gcd(long a, long b);

std::string count_csv_R(const std::vector<std::pair<double, long>>& rows);
std::string count_csv_genus(const std::vector<DoublingCount>& rows, bool raw);

}  // namespace cliff
