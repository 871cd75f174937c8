#ifndef BQFMOM_QFORMS_HPP
#define BQFMOM_QFORMS_HPP

// Binary quadratic forms Q(x) = a*x1^2 + b*x1*x2 + c*x2^2 with discriminant
// D = b^2 - 4ac < 0: reduction, class-number enumeration, the Kronecker
// character chi_D = (D/.), and representation counts.
//
// Two independent routes to r_Q(n) are kept side by side:
//   r_Q(n) = w_D * sum_{d|n} chi_D(d)      (divisor formula, h(D) = 1 only)
//   lattice_count(f, n)                    (exact enumeration over Z^2)
// The lattice count is the oracle that guards the formula, including the
// non-fundamental discriminants -12, -16, -27, -28.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bqfmom::qforms {

struct QuadForm {
    long long a = 0;
    long long b = 0;
    long long c = 0;

    long long disc() const { return b * b - 4 * a * c; }
    bool positive_definite() const { return a > 0 && disc() < 0; }
    bool primitive() const;
    // |b| <= a <= c, with b >= 0 when |b| = a or a = c.
    bool reduced() const;

    bool operator==(const QuadForm&) const = default;
};

// D < 0 and D = 0 or 1 mod 4.
bool is_valid_discriminant(long long D);
bool is_fundamental(long long D);

// Unit count w_D: 6 for D = -3, 4 for D = -4, 2 for D < -4.
int unit_count(long long D);

// Unique reduced form equivalent to f. Throws std::domain_error unless f is
// positive definite and primitive.
QuadForm reduce_form(QuadForm f);

// All primitive reduced forms of discriminant D, ordered by (a, b).
// Throws std::domain_error if D is not a valid negative discriminant.
std::vector<QuadForm> enumerate_reduced_forms(long long D);

int class_number(long long D);

// Full Kronecker symbol (a/n) for n >= 0, including the (a/2) supplement.
int kronecker(long long a, long long n);

// chi_D(d) = (D/d) for d >= 1.
int chi_D(long long D, long long d);

// r*_Q(n) = sum_{d|n} chi_D(d), computed by divisor enumeration.
long long r_star(long long n, long long D);

// r_Q(n) = w_D * r*_Q(n). Throws std::domain_error when h(D) != 1 (the
// divisor formula is only asserted for class number one).
long long r_Q(long long n, long long D);

// Exact number of (x1, x2) in Z^2 with Q(x) = n, by bounded enumeration in
// integer arithmetic. Independent of the divisor formula.
long long lattice_count(const QuadForm& f, long long n);

// One witness (x1, x2) with Q(x) = n, if any.
std::optional<std::pair<long long, long long>> find_representation(const QuadForm& f,
                                                                   long long n);

// The 13 class-number-one discriminants handled by the divisor formula
// (9 fundamental + the non-fundamental -12, -16, -27, -28).
inline constexpr std::array<long long, 13> kClassNumberOneDiscs = {
    -3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163};

}  // namespace bqfmom::qforms

#endif
