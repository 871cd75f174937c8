#ifndef BQFMOM_SIEVES_HPP
#define BQFMOM_SIEVES_HPP

// Sieved coefficient tables: mu^2(n), omega(n), gcd-with-N indicator,
// r*_Q(n) and lambda(n) up to X_max, packaged for the summatory modules.
// Build is single-threaded and deterministic; finished tables are immutable.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bqfmom/eigenforms.hpp"

namespace bqfmom::sieves {

std::vector<long long> primes_up_to(long long x);

// Smallest prime factor for 2..x (spf[0] = spf[1] = 0).
std::vector<int32_t> spf_sieve(long long x);

// bit[n] = 1 iff n is squarefree (bit[0] = 0).
std::vector<bool> moebius_squarefree_sieve(long long x);

// Costs about 13 bytes per index: two packed bit arrays, one byte of omega,
// four bytes of r*, and the 8-byte lambda.
struct CoefficientTable {
    long long x_max = 0;
    long long level = 0;
    int weight = 0;
    long long disc = 0;
    std::string label;

    std::vector<bool> mu_sq;       // squarefree indicator
    std::vector<uint8_t> omega;    // number of distinct prime factors
    std::vector<bool> coprime_N;   // gcd(n, N) = 1
    std::vector<int32_t> r_star;   // sum_{d|n} chi_D(d)
    std::vector<double> lambda;    // normalised eigenvalues

    // exact integer coefficients, for authoritative sign decisions
    std::shared_ptr<const eigenforms::EigenformEntry> form;
};

// Fills all arrays with one smallest-prime-factor sieve; r* is assembled
// multiplicatively from chi_D at prime powers (r*(p^e) = sum_{j<=e} chi(p)^j).
// Requires h(D) = 1 and an entry cache at least X_max deep.
CoefficientTable build_table(std::shared_ptr<const eigenforms::EigenformEntry> form,
                             long long D, long long x_max);

// Versioned little-endian binary dump (format documented in sieves.cpp).
void dump_table(const CoefficientTable& table, const std::string& path);
CoefficientTable load_table(const std::string& path,
                            std::shared_ptr<const eigenforms::EigenformEntry> form);

}  // namespace bqfmom::sieves

#endif
