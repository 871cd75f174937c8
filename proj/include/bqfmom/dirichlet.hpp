#ifndef BQFMOM_DIRICHLET_HPP
#define BQFMOM_DIRICHLET_HPP

// Euler products and Dirichlet-series identities. Local factors live as
// small real polynomials in x = p^{-s}:
//
//   L_p(s, f):        1/(1 - lam x)          for p | N
//                     1/(1 - lam x + x^2)    for p not dividing N
//   L_p(s, f ox chi): 1/(1 - lam chi x)      for p | N
//                     1                      for p | |D|, p not dividing N
//                     1/(1 - lam chi x + x^2) otherwise
//
// G(s) is assembled definitionally from the factorisation
//   L(f, Q; s) = L(s, f) L(s, f ox chi_D) G(s),
// i.e. G_p = (1 + lam (1 + chi) x)^[p not | N] * L_p(f)^{-1} * L_p(twist)^{-1},
// which is a polynomial of degree <= 5. A separately coded five-term
// expansion of that polynomial (g_poly_display) is kept for cross-checks;
// it only applies at chi(p) = +-1.

#include <complex>
#include <vector>

#include "bqfmom/eigenforms.hpp"

namespace bqfmom::dirichlet {

using cplx = std::complex<double>;

struct LocalFactor {
    long long p = 0;
    std::vector<double> poly;  // poly[j] multiplies p^{-js}; poly[0] = 1
    bool inverted = false;     // factor value is 1/poly(p^{-s})

    cplx eval(cplx s) const;
};

LocalFactor lfactor_hecke(long long p, double lambda_p, bool in_level);
LocalFactor lfactor_twist(long long p, double lambda_p, int chi_p, bool in_level);

// G_p as an explicit polynomial (the definitional ratio form).
std::vector<double> g_poly_ratio(double lambda_p, int chi_p, bool in_level);

// The five-term expansion for p not dividing N, valid for chi_p = +-1:
//   1 + (2 - 2 lam^2 - lam^2 chi) x^2 + lam (1+chi)(1 + lam^2 chi) x^3
//     + (1 - 2 lam^2 (1+chi)) x^4 + lam (1+chi) x^5
std::vector<double> g_poly_display(double lambda_p, int chi_p);

// Value of G_p(s). Throws std::domain_error for Re(s) <= 1/2.
cplx local_G(long long p, int chi_p, double lambda_p, bool in_level, cplx s);

// Expands prod_p L_p(f) L_p(twist) G_p as a Dirichlet series to n_max and
// compares coefficients with mu^2(n) lambda(n) r*(n) [gcd(n,N)=1].
// Returns the maximum absolute deviation.
double coefficient_identity_check(const eigenforms::EigenformEntry& entry, long long D,
                                  long long n_max);

// Same for D(s) = zeta^eta L(s,chi)^eta P(s) against mu^2 eta^omega r* [gcd=1].
double D_series_check(int eta, long long D, long long N, long long n_max);

struct EulerProductValue {
    cplx s;
    cplx value;
    long long p_cut = 0;
    double tail_bound = 0.0;  // bound on |log P - log P_truncated|
};

// Truncated Euler product for P(s) (the compensator in D(s)); local factors
//   p | N:   [(1 - x)(1 - chi x)]^eta
//   p !| N:  (1 - x)^eta (1 - chi x)^eta (1 + eta (1 + chi) x)
// The log of each p-not-dividing-N factor is O(p^{-2 Re s}); the tail bound
// uses |log factor| <= C p^{-2 Re s} with C = 4 (eta + 2 eta^2) and
// sum_{p > P} p^{-2 sigma} <= P^{1-2 sigma}/(2 sigma - 1).
EulerProductValue P_euler(cplx s, long long D, long long N, int eta, long long p_cut);

enum class L1Method { DirectSum, ClassNumberFormula };

// L(1, chi_D). DirectSum: sum_{n<=M} chi(n)/n with Abel tail bound |D|/M.
// ClassNumberFormula (fundamental D only): 2 pi h(D) / (w_D sqrt|D|).
double L1_chi(long long D, L1Method method, long long M = 10'000'000);
double L1_tail_bound(long long D, long long M);

}  // namespace bqfmom::dirichlet

#endif
