#ifndef BQFMOM_EIGENFORMS_HPP
#define BQFMOM_EIGENFORMS_HPP

// Exact q-expansions of a fixed catalog of eta-quotient newforms, the
// normalisation a(n) = lambda(n) * n^((k-1)/2), Hecke-relation checks, and
// the Hecke/Satake machinery at prime powers.
//
// Coefficients are exact 128-bit integers. For every catalog form the bound
// |a(n)| <= tau(n) * n^((k-1)/2) gives |a(n)| < 2^121 up to n = 2^21, and the
// same bound applies to every intermediate eta-power series we keep, so
// signed __int128 never overflows at the supported depths. expand_eta_quotient
// enforces a hard ceiling and throws past it.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bqfmom/int128_io.hpp"

namespace bqfmom::eigenforms {

using Coeff = int128;

struct EtaFactor {
    long long scale;  // m in eta(m*tau)
    int exponent;     // r_m, positive for the catalog
};

// Product of eta(m*tau)^r factors. A valid cusp-form catalog entry has
// weight k = (1/2) * sum r, sum m*r = 24 (leading term q^1), squarefree N.
struct EtaQuotient {
    std::vector<EtaFactor> factors;
    long long level = 0;
    int weight = 0;
    std::string label;

    long long q_power_offset() const;  // sum m*r (in 24ths of the q-power)
    void validate() const;             // throws std::domain_error on violation
};

// Coefficients of prod_{n>=1} (1 - q^n) up to q^precision (index 0..precision),
// by Euler's pentagonal-number theorem. All values in {-1, 0, 1}.
std::vector<int> eta_series(long long precision);

// Exact a(n) for 1 <= n <= precision. Throws std::domain_error if the
// quotient is not a normalised cusp-form entry (offset != 24), and
// std::length_error past the 128-bit safe depth.
std::vector<Coeff> expand_eta_quotient(const EtaQuotient& spec, long long precision);

// lambda(n) = a(n) / n^((k-1)/2); requires a[1] = 1. Arrays are 1-indexed.
std::vector<double> normalize(const std::vector<Coeff>& a, int weight);

struct EigenformEntry {
    long long level = 0;
    int weight = 0;
    std::string label;
    EtaQuotient quotient;
    std::vector<Coeff> a;        // 1-indexed; a[0] unused
    std::vector<double> lambda;  // 1-indexed

    long long depth() const { return (long long)a.size() - 1; }
    Coeff coeff(long long n) const;
    double lam(long long n) const;
};

// The four catalog quotients: (N=1,k=12) eta^24, (N=2,k=8) eta^8 eta(2t)^8,
// (N=5,k=4) eta^4 eta(5t)^4, (N=11,k=2) eta^2 eta(11t)^2.
const std::vector<EtaQuotient>& catalog_specs();
const EtaQuotient* find_spec(std::string_view label);

EigenformEntry make_entry(const EtaQuotient& spec, long long precision);
std::vector<EigenformEntry> catalog(long long precision);

// Exact integer Hecke relation a(m)a(n) = sum_{d | gcd(m,n)} d^(k-1) a(mn/d^2).
// Requires gcd(mn, N) = 1 and mn within the cache.
bool hecke_check(const EigenformEntry& entry, long long m, long long n);

// lambda(p^(j+1)) = lambda(p) lambda(p^j) - lambda(p^(j-1)) for p not dividing N,
// lambda(p^j) = lambda(p)^j for p | N, extended multiplicatively to n <= X.
// Throws std::invalid_argument if a prime <= X is missing from the input.
std::vector<double> extend_by_hecke(const std::map<long long, double>& prime_lambdas,
                                    long long N, long long X);

struct SatakeAngle {
    double theta = 0.0;  // in [0, pi], lambda(p) = 2 cos(theta)
};

// Throws std::domain_error past |lambda_p| > 2 + 1e-9 (a Deligne violation
// signals a coefficient bug upstream).
SatakeAngle satake(double lambda_p);

// sin((m+1)theta)/sin(theta), with the limits m+1 at theta = 0 and
// (-1)^m (m+1) at theta = pi.
double lambda_power(const SatakeAngle& angle, int m);

// Coefficient cache files: newline-delimited "n,a(n)" records, decimal.
std::string coeff_cache_filename(long long level, int weight);
void write_coeff_csv(const EigenformEntry& entry, const std::string& path);

// Loads and validates (a(1) = 1, plus the Hecke relation on a deterministic
// ~1% sample of coprime pairs). Throws std::runtime_error on corruption.
EigenformEntry load_coeff_csv(const EtaQuotient& spec, const std::string& path,
                              uint64_t sample_seed = 1);

}  // namespace bqfmom::eigenforms

#endif
