#ifndef BQFMOM_TESTS_ORACLES_HPP
#define BQFMOM_TESTS_ORACLES_HPP

// Independent brute-force oracles for the test suite. Everything here avoids
// the library's sieved/multiplicative fast paths: series come from literal
// polynomial products, arithmetic functions from trial division, sums from
// per-term evaluation.

#include <cmath>
#include <numeric>
#include <vector>

#include "bqfmom/eigenforms.hpp"
#include "bqfmom/qforms.hpp"

namespace oracles {

// prod_{n=1..P} (1 - q^n) by direct polynomial multiplication
inline std::vector<long long> eta_product_brute(long long P) {
    std::vector<long long> poly(P + 1, 0);
    poly[0] = 1;
    for (long long n = 1; n <= P; ++n)
        for (long long i = P; i >= n; --i) poly[i] -= poly[i - n];
    return poly;
}

// full eta-quotient expansion by repeated multiplication with (1 - q^(m n)),
// exponent times; int64 is exact for the small precisions used in tests
inline std::vector<long long> eta_quotient_brute(const bqfmom::eigenforms::EtaQuotient& spec,
                                                 long long P) {
    std::vector<long long> poly(P, 0);  // series in q before the leading q^1
    poly[0] = 1;
    for (const auto& f : spec.factors)
        for (int r = 0; r < f.exponent; ++r)
            for (long long n = f.scale; n < P; n += f.scale)
                for (long long i = P - 1; i >= n; --i) poly[i] -= poly[i - n];
    std::vector<long long> a(P + 1, 0);
    for (long long n = 1; n <= P; ++n) a[n] = poly[n - 1];
    return a;
}

inline bool squarefree_trial(long long n) {
    for (long long p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0) return false;
    return true;
}

inline int omega_trial(long long n) {
    int count = 0;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        ++count;
        while (n % p == 0) n /= p;
    }
    return count + (n > 1 ? 1 : 0);
}

inline long long divisor_count(long long n) {
    long long d = 0;
    for (long long i = 1; i * i <= n; ++i) {
        if (n % i != 0) continue;
        d += (i * i == n) ? 1 : 2;
    }
    return d;
}

// Euler criterion a^((p-1)/2) mod p for odd prime p
inline int legendre_euler(long long a, long long p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    long long result = 1, base = a, e = (p - 1) / 2;
    while (e > 0) {
        if (e & 1) result = (__int128)result * base % p;
        base = (__int128)base * base % p;
        e >>= 1;
    }
    return result == 1 ? 1 : (result == p - 1 ? -1 : 0);
}

// per-term evaluation of S*(X), no sieve
inline double sum_S_brute(const bqfmom::eigenforms::EigenformEntry& entry, long long D,
                          long long X) {
    long double acc = 0.0L;
    for (long long n = 1; n <= X; ++n) {
        if (!squarefree_trial(n) || std::gcd(n, entry.level) != 1) continue;
        acc += (long double)entry.lam(n) * (long double)bqfmom::qforms::r_star(n, D);
    }
    return (double)acc;
}

inline double sum_E_brute(int eta, long long D, long long N, long long X) {
    long double acc = 0.0L;
    for (long long n = 1; n <= X; ++n) {
        if (!squarefree_trial(n) || std::gcd(n, N) != 1) continue;
        acc += std::pow((long double)eta, omega_trial(n)) *
               (long double)bqfmom::qforms::r_star(n, D);
    }
    return (double)acc;
}

// closed-form I_1(u) = int_0^u (u-t)(2 - alpha(t)) dt/t by piecewise logs:
// each branch contributes (2 - alpha_m) [u ln(hi/lo) - (hi - lo)]
inline double I1_closed_form(double u) {
    const double pi = std::acos(-1.0);
    double total = 0.0;
    if (u > 1.0) total += 4.0 * (u * std::log(u) - (u - 1.0));  // (1, u], alpha = -2
    for (long long m = 1; m <= 2000000; ++m) {
        double hi = std::min(1.0 / (double)m, u);
        double lo = 1.0 / (double)(m + 1);
        if (hi <= lo) continue;
        double w = 2.0 - 2.0 * std::cos(pi / (double)(m + 1));
        double piece = w * (u * std::log(hi / lo) - (hi - lo));
        total += piece;
        if (m > 100 && piece < 1e-15) break;
    }
    return total;
}

}  // namespace oracles

#endif
