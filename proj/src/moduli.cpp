#include "cliff/moduli.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "cliff/error.hpp"

namespace cliff {

namespace {

// Largest integer x >= 0 with x^2 <= n.
long isqrt(long n) {
    if (n < 0) return -1;
    long x = long(std::sqrt(double(n)));
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return x;
}

long radius_squared_floor(double R) { return long(std::floor(R * R + 1e-9)); }

}  // namespace

long euclid_gcd(long a, long b) {
    a = std::labs(a);
    b = std::labs(b);
    while (b != 0) {
        const long r = a % b;
        a = b;
        b = r;
    }
    return a;
}

std::vector<std::pair<long, long>> enumerate_SR(double R) {
    std::vector<std::pair<long, long>> out;
    const long r2 = radius_squared_floor(R);
    for (long b = 2; b * b <= r2; ++b)
        for (long a = 1; a < b && a * a + b * b <= r2; ++a)
            if (std::gcd(a, b) == 1) out.emplace_back(a, b);
    return out;
}

long count_SR_sieve(double R) {
    const long r2 = radius_squared_floor(R);
    const long bmax = isqrt(r2);
    if (bmax < 2) return 0;
    // Moebius function by a linear sieve.
    std::vector<int> mu(size_t(bmax + 1), 1);
    std::vector<char> composite(size_t(bmax + 1), 0);
    std::vector<long> primes;
    for (long i = 2; i <= bmax; ++i) {
        if (!composite[size_t(i)]) {
            primes.push_back(i);
            mu[size_t(i)] = -1;
        }
        for (long p : primes) {
            if (i * p > bmax) break;
            composite[size_t(i * p)] = 1;
            if (i % p == 0) {
                mu[size_t(i * p)] = 0;
                break;
            }
            mu[size_t(i * p)] = -mu[size_t(i)];
        }
    }
    long total = 0;
    for (long b = 2; b <= bmax; ++b) {
        const long amax = std::min(b - 1, isqrt(r2 - b * b));
        // Integers in [1, amax] coprime to b: sum over squarefree divisors d of b of mu(d) floor(amax / d).
        for (long d = 1; d * d <= b; ++d) {
            if (b % d != 0) continue;
            total += mu[size_t(d)] * (amax / d);
            const long e = b / d;
            if (e != d) total += mu[size_t(e)] * (amax / e);
        }
    }
    return total;
}

DoublingCount count_doublings(int genus, double m_min_factor) {
    if (genus < 3) throw Error(ErrorKind::GenusTooSmall, "genus must be at least 3");
    if (!(m_min_factor > 0.0)) throw Error(ErrorKind::ConfigError, "m_min_factor must be positive");
    DoublingCount c;
    c.genus = genus;
    c.m = genus - 1;
    c.R = c.m / m_min_factor;
    const auto pairs = enumerate_SR(c.R);
    c.raw = long(pairs.size());
    c.constructible = c.raw;
    for (const auto& [a, b] : pairs)
        if (a == 1 && b == 2) --c.constructible;  // (1, 2, k = 1) is excluded
    return c;
}

std::string count_csv_R(const std::vector<std::pair<double, long>>& rows) {
    std::ostringstream os;
    os << "R,count\n";
    for (const auto& [R, n] : rows) os << R << ',' << n << '\n';
    return os.str();
}

std::string count_csv_genus(const std::vector<DoublingCount>& rows, bool raw) {
    std::ostringstream os;
    os << "genus,count\n";
    for (const auto& r : rows) os << r.genus << ',' << (raw ? r.raw : r.constructible) << '\n';
    return os.str();
}

}  // namespace cliff
