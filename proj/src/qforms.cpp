#include "bqfmom/qforms.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bqfmom::qforms {

bool QuadForm::primitive() const {
    return std::gcd(std::gcd(std::llabs(a), std::llabs(b)), std::llabs(c)) == 1;
}

bool QuadForm::reduced() const {
    if (!(std::llabs(b) <= a && a <= c)) return false;
    if ((std::llabs(b) == a || a == c) && b < 0) return false;
    return true;
}

bool is_valid_discriminant(long long D) {
    if (D >= 0) return false;
    long long r = ((D % 4) + 4) % 4;
    return r == 0 || r == 1;
}

bool is_fundamental(long long D) {
    if (!is_valid_discriminant(D)) return false;
    auto squarefree = [](long long n) {
        for (long long p = 2; p * p <= n; ++p)
            if (n % (p * p) == 0) return false;
        return true;
    };
    long long r = ((D % 4) + 4) % 4;
    if (r == 1) return squarefree(-D);
    long long m = D / 4;  // D = 4m, need m = 2 or 3 mod 4 and squarefree
    long long mr = ((m % 4) + 4) % 4;
    return (mr == 2 || mr == 3) && squarefree(std::llabs(m));
}

int unit_count(long long D) {
    if (!is_valid_discriminant(D)) throw std::domain_error("unit_count: invalid discriminant");
    if (D == -3) return 6;
    if (D == -4) return 4;
    return 2;
}

QuadForm reduce_form(QuadForm f) {
    if (!f.positive_definite()) throw std::domain_error("reduce_form: form not positive definite");
    if (!f.primitive()) throw std::domain_error("reduce_form: form not primitive");
    for (;;) {
        // normalize b into (-a, a]
        if (f.b > f.a || f.b <= -f.a) {
            long long k = (f.a - f.b) / (2 * f.a);  // floor division toward the window
            long long b2 = f.b + 2 * f.a * k;
            while (b2 > f.a) b2 -= 2 * f.a;
            while (b2 <= -f.a) b2 += 2 * f.a;
            f.c += (b2 * b2 - f.b * f.b) / (4 * f.a);
            f.b = b2;
        }
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        break;
    }
    if ((f.a == f.c || f.b == -f.a) && f.b < 0) f.b = -f.b;
    return f;
}

std::vector<QuadForm> enumerate_reduced_forms(long long D) {
    if (!is_valid_discriminant(D))
        throw std::domain_error("enumerate_reduced_forms: D must be negative and 0 or 1 mod 4");
    std::vector<QuadForm> forms;
    // reduced => b^2 <= a^2 <= ac = (b^2 - D)/4, so 3a^2 <= -D
    for (long long a = 1; 3 * a * a <= -D; ++a) {
        for (long long b = -a + 1; b <= a; ++b) {
            long long num = b * b - D;
            if (num % (4 * a) != 0) continue;
            long long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            QuadForm f{a, b, c};
            if (!f.primitive()) continue;
            forms.push_back(f);
        }
    }
    return forms;
}

int class_number(long long D) { return (int)enumerate_reduced_forms(D).size(); }

int kronecker(long long a, long long n) {
    if (n < 0) throw std::domain_error("kronecker: n must be >= 0");
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int s = 1;
    // strip factors of 2 from n via the supplement (a/2)
    if (n % 2 == 0) {
        if (a % 2 == 0) return 0;
        int t = 0;
        while (n % 2 == 0) {
            n /= 2;
            ++t;
        }
        long long a8 = ((a % 8) + 8) % 8;
        if ((t & 1) && (a8 == 3 || a8 == 5)) s = -s;
    }
    // now n odd >= 1; the symbol depends only on a mod n
    a %= n;
    if (a < 0) a += n;
    // standard Jacobi loop
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            long long n8 = n % 8;
            if (n8 == 3 || n8 == 5) s = -s;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) s = -s;
        a %= n;
    }
    return n == 1 ? s : 0;
}

int chi_D(long long D, long long d) {
    if (d < 1) throw std::domain_error("chi_D: d must be >= 1");
    return kronecker(D, d);
}

long long r_star(long long n, long long D) {
    if (n < 1) throw std::domain_error("r_star: n must be >= 1");
    long long sum = 0;
    for (long long d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        sum += chi_D(D, d);
        long long q = n / d;
        if (q != d) sum += chi_D(D, q);
    }
    return sum;
}

long long r_Q(long long n, long long D) {
    if (class_number(D) != 1)
        throw std::domain_error("r_Q: divisor formula requires class number h(D) = 1");
    return unit_count(D) * r_star(n, D);
}

namespace {

// floor(sqrt(x)) with integer fixup
long long isqrt_ll(long long x) {
    if (x < 0) return -1;
    long long r = (long long)std::sqrt((double)x);
    while (r > 0 && r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

// 4a*Q(x) = (2a*x1 + b*x2)^2 + |D|*x2^2, so x2 is bounded by sqrt(4an/|D|)
// and x1 solves a quadratic with integer discriminant.
template <typename Visit>
void enumerate_representations(const QuadForm& f, long long n, Visit&& visit) {
    if (n < 0) return;
    if (n == 0) {
        visit(0, 0);
        return;
    }
    long long absD = -f.disc();
    long long x2max = isqrt_ll(4 * f.a * n / absD);
    for (long long x2 = -x2max; x2 <= x2max; ++x2) {
        long long s = 4 * f.a * n - absD * x2 * x2;
        if (s < 0) continue;
        long long t = isqrt_ll(s);
        if (t * t != s) continue;
        // 2a*x1 = +-t - b*x2
        for (int sign = 0; sign < (t == 0 ? 1 : 2); ++sign) {
            long long num = (sign == 0 ? t : -t) - f.b * x2;
            if (num % (2 * f.a) != 0) continue;
            if (!visit(num / (2 * f.a), x2)) return;
        }
    }
}

}  // namespace

long long lattice_count(const QuadForm& f, long long n) {
    if (!f.positive_definite()) throw std::domain_error("lattice_count: form not positive definite");
    long long count = 0;
    enumerate_representations(f, n, [&](long long, long long) {
        ++count;
        return true;
    });
    return count;
}

std::optional<std::pair<long long, long long>> find_representation(const QuadForm& f,
                                                                   long long n) {
    std::optional<std::pair<long long, long long>> result;
    enumerate_representations(f, n, [&](long long x1, long long x2) {
        result = {x1, x2};
        return false;
    });
    return result;
}

}  // namespace bqfmom::qforms
