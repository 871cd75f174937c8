#include "bqfmom/dirichlet.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bqfmom/qforms.hpp"
#include "bqfmom/sieves.hpp"

namespace bqfmom::dirichlet {

namespace {

// polynomial product truncated to degree deg
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b,
                             size_t deg) {
    std::vector<double> out(std::min(a.size() + b.size() - 1, deg + 1), 0.0);
    for (size_t i = 0; i < a.size() && i < out.size(); ++i)
        for (size_t j = 0; j < b.size() && i + j < out.size(); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

// series inverse of a polynomial with constant term 1, to degree deg
std::vector<double> series_inverse(const std::vector<double>& a, size_t deg) {
    std::vector<double> inv(deg + 1, 0.0);
    inv[0] = 1.0;
    for (size_t n = 1; n <= deg; ++n) {
        double acc = 0.0;
        for (size_t j = 1; j <= n && j < a.size(); ++j) acc += a[j] * inv[n - j];
        inv[n] = -acc;
    }
    return inv;
}

// (1 - c x)^{-eta} to degree deg: coefficients binom(j+eta-1, eta-1) c^j
std::vector<double> geometric_power(double c, int eta, size_t deg) {
    std::vector<double> out(deg + 1, 0.0);
    out[0] = 1.0;
    for (size_t j = 1; j <= deg; ++j) out[j] = out[j - 1] * c * (double)(j + eta - 1) / (double)j;
    return out;
}

std::vector<double> poly_pow(std::vector<double> base, int e, size_t deg) {
    std::vector<double> out{1.0};
    for (int i = 0; i < e; ++i) out = poly_mul(out, base, deg);
    return out;
}

// multiplicative merge: given local coefficient series c_p[j] for all primes
// p <= n_max, returns c(n) = prod c_p[v_p(n)] for n = 1..n_max
std::vector<double> merge_local_series(
    long long n_max, const std::vector<long long>& primes,
    const std::vector<std::vector<double>>& local) {
    auto spf = sieves::spf_sieve(n_max);
    std::vector<int32_t> pindex(n_max + 1, -1);
    for (size_t i = 0; i < primes.size(); ++i) pindex[primes[i]] = (int32_t)i;
    std::vector<double> c(n_max + 1, 0.0);
    c[1] = 1.0;
    for (long long n = 2; n <= n_max; ++n) {
        long long p = spf[n];
        long long m = n;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        const auto& lp = local[pindex[p]];
        c[n] = (e < (int)lp.size() ? lp[e] : 0.0) * c[m];
    }
    return c;
}

}  // namespace

cplx LocalFactor::eval(cplx s) const {
    cplx x = std::pow(cplx((double)p, 0.0), -s);
    cplx v = 0.0;
    for (size_t j = poly.size(); j-- > 0;) v = v * x + poly[j];
    return inverted ? 1.0 / v : v;
}

LocalFactor lfactor_hecke(long long p, double lambda_p, bool in_level) {
    if (in_level) return {p, {1.0, -lambda_p}, true};
    return {p, {1.0, -lambda_p, 1.0}, true};
}

LocalFactor lfactor_twist(long long p, double lambda_p, int chi_p, bool in_level) {
    if (in_level) return {p, {1.0, -lambda_p * chi_p}, true};
    if (chi_p == 0) return {p, {1.0}, true};  // degenerate factor at p | |D|
    return {p, {1.0, -lambda_p * chi_p, 1.0}, true};
}

std::vector<double> g_poly_ratio(double lam, int chi, bool in_level) {
    if (in_level) {
        // (1 - lam x)(1 - lam chi x)
        return poly_mul({1.0, -lam}, {1.0, -lam * (double)chi}, 2);
    }
    std::vector<double> g = poly_mul({1.0, lam * (1.0 + chi)}, {1.0, -lam, 1.0}, 5);
    if (chi != 0) g = poly_mul(g, {1.0, -lam * (double)chi, 1.0}, 5);
    return g;
}

std::vector<double> g_poly_display(double lam, int chi) {
    double l2 = lam * lam;
    return {1.0,
            0.0,
            2.0 - 2.0 * l2 - l2 * chi,
            lam * (1.0 + chi) * (1.0 + l2 * chi),
            1.0 - 2.0 * l2 * (1.0 + chi),
            lam * (1.0 + chi)};
}

cplx local_G(long long p, int chi_p, double lambda_p, bool in_level, cplx s) {
    if (s.real() <= 0.5)
        throw std::domain_error("local_G: outside the half plane of convergence Re(s) > 1/2");
    auto g = g_poly_ratio(lambda_p, chi_p, in_level);
    cplx x = std::pow(cplx((double)p, 0.0), -s);
    cplx v = 0.0;
    for (size_t j = g.size(); j-- > 0;) v = v * x + g[j];
    return v;
}

double coefficient_identity_check(const eigenforms::EigenformEntry& entry, long long D,
                                  long long n_max) {
    if (n_max < 1 || n_max > entry.depth())
        throw std::out_of_range("coefficient_identity_check: n_max outside cache");
    auto primes = sieves::primes_up_to(n_max);
    std::vector<std::vector<double>> local(primes.size());
    for (size_t i = 0; i < primes.size(); ++i) {
        long long p = primes[i];
        size_t deg = (size_t)(std::log((double)n_max) / std::log((double)p) + 1e-9);
        bool in_level = entry.level % p == 0;
        int chi = qforms::chi_D(D, p);
        double lam = entry.lam(p);
        // honest series product: invert the local polynomials, multiply by G_p
        auto Lf = series_inverse(lfactor_hecke(p, lam, in_level).poly, deg);
        auto Lt = series_inverse(lfactor_twist(p, lam, chi, in_level).poly, deg);
        local[i] = poly_mul(poly_mul(Lf, Lt, deg), g_poly_ratio(lam, chi, in_level), deg);
    }
    auto c = merge_local_series(n_max, primes, local);

    auto sq = sieves::moebius_squarefree_sieve(n_max);
    double max_dev = 0.0;
    for (long long n = 1; n <= n_max; ++n) {
        double expect = (sq[n] && std::gcd(n, entry.level) == 1)
                            ? entry.lam(n) * (double)qforms::r_star(n, D)
                            : 0.0;
        max_dev = std::max(max_dev, std::abs(c[n] - expect));
    }
    return max_dev;
}

double D_series_check(int eta, long long D, long long N, long long n_max) {
    if (eta < 1) throw std::domain_error("D_series_check: eta must be >= 1");
    if (n_max < 1) throw std::domain_error("D_series_check: n_max must be >= 1");
    auto primes = sieves::primes_up_to(n_max);
    std::vector<std::vector<double>> local(primes.size());
    for (size_t i = 0; i < primes.size(); ++i) {
        long long p = primes[i];
        size_t deg = (size_t)(std::log((double)n_max) / std::log((double)p) + 1e-9);
        int chi = qforms::chi_D(D, p);
        auto zeta_p = geometric_power(1.0, eta, deg);
        auto L_p = geometric_power((double)chi, eta, deg);
        std::vector<double> P_p;
        if (N % p == 0) {
            P_p = poly_pow(poly_mul({1.0, -1.0}, {1.0, -(double)chi}, deg), eta, deg);
        } else {
            P_p = poly_mul(poly_pow({1.0, -1.0}, eta, deg),
                           poly_pow({1.0, -(double)chi}, eta, deg), deg);
            P_p = poly_mul(P_p, {1.0, (double)eta * (1.0 + chi)}, deg);
        }
        local[i] = poly_mul(poly_mul(zeta_p, L_p, deg), P_p, deg);
    }
    auto c = merge_local_series(n_max, primes, local);

    auto sq = sieves::moebius_squarefree_sieve(n_max);
    auto spf = sieves::spf_sieve(n_max);
    double max_dev = 0.0;
    for (long long n = 1; n <= n_max; ++n) {
        double expect = 0.0;
        if (sq[n] && std::gcd(n, N) == 1) {
            int om = 0;
            long long m = n;
            while (m > 1) {
                long long p = spf[m];
                while (m % p == 0) m /= p;
                ++om;
            }
            expect = std::pow((double)eta, om) * (double)qforms::r_star(n, D);
        }
        max_dev = std::max(max_dev, std::abs(c[n] - expect));
    }
    return max_dev;
}

EulerProductValue P_euler(cplx s, long long D, long long N, int eta, long long p_cut) {
    if (s.real() <= 0.5)
        throw std::domain_error("P_euler: outside the half plane of convergence Re(s) > 1/2");
    if (eta < 1) throw std::domain_error("P_euler: eta must be >= 1");
    cplx value = 1.0;
    for (long long p : sieves::primes_up_to(p_cut)) {
        cplx x = std::pow(cplx((double)p, 0.0), -s);
        int chi = qforms::chi_D(D, p);
        cplx f;
        if (N % p == 0) {
            f = std::pow((1.0 - x) * (1.0 - (double)chi * x), eta);
        } else {
            f = std::pow(1.0 - x, eta) * std::pow(1.0 - (double)chi * x, eta) *
                (1.0 + (double)eta * (1.0 + chi) * x);
        }
        value *= f;
    }
    double sigma = s.real();
    double C = 4.0 * (eta + 2.0 * eta * eta);
    double tail = C * std::pow((double)p_cut, 1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0);
    return {s, value, p_cut, tail};
}

double L1_tail_bound(long long D, long long M) { return (double)(-D) / (double)M; }

double L1_chi(long long D, L1Method method, long long M) {
    if (!qforms::is_valid_discriminant(D)) throw std::domain_error("L1_chi: invalid discriminant");
    if (method == L1Method::ClassNumberFormula) {
        if (!qforms::is_fundamental(D))
            throw std::domain_error("L1_chi: class number formula needs a fundamental discriminant");
        const double pi = std::acos(-1.0);
        return 2.0 * pi * qforms::class_number(D) /
               (qforms::unit_count(D) * std::sqrt((double)-D));
    }
    long long q = -D;
    std::vector<int> chi(q);
    for (long long r = 0; r < q; ++r) chi[r] = qforms::kronecker(D, r);
    double sum = 0.0, comp = 0.0;  // Kahan
    for (long long n = 1; n <= M; ++n) {
        int c = chi[n % q];
        if (c == 0) continue;
        double term = (double)c / (double)n;
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace bqfmom::dirichlet
