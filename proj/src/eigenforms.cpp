#include "bqfmom/eigenforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace bqfmom::eigenforms {

namespace {

// Sparse series with few terms and small coefficients:
//   eta   = sum_{k in Z} (-1)^k q^(k(3k-1)/2)        (pentagonal numbers)
//   eta^3 = sum_{k >= 0} (-1)^k (2k+1) q^(k(k+1)/2)  (Jacobi)
// Dense multiplication by one of these costs O(L * sqrt(L)) coefficient
// mul-adds, which is what makes exact expansions to 2^20 practical.
struct SparseTerm {
    long long exp;
    long long coeff;
};

std::vector<SparseTerm> eta_terms(long long scale, long long limit) {
    std::vector<SparseTerm> t;
    t.push_back({0, 1});
    for (long long k = 1;; ++k) {
        long long e1 = scale * (k * (3 * k - 1) / 2);
        long long e2 = scale * (k * (3 * k + 1) / 2);
        long long s = (k & 1) ? -1 : 1;
        if (e1 > limit) break;
        t.push_back({e1, s});
        if (e2 <= limit) t.push_back({e2, s});
    }
    std::sort(t.begin(), t.end(), [](auto& x, auto& y) { return x.exp < y.exp; });
    return t;
}

std::vector<SparseTerm> eta3_terms(long long scale, long long limit) {
    std::vector<SparseTerm> t;
    for (long long k = 0;; ++k) {
        long long e = scale * (k * (k + 1) / 2);
        if (e > limit) break;
        t.push_back({e, (k & 1) ? -(2 * k + 1) : (2 * k + 1)});
    }
    return t;
}

// dense <- dense * sparse, in place. Iterating the output index downward is
// safe because every read is at an index <= the write index, and those still
// hold the input values.
void mul_sparse(std::vector<Coeff>& dense, const std::vector<SparseTerm>& terms) {
    const long long L = (long long)dense.size();
    bool unit_coeffs = true;
    for (const auto& t : terms)
        if (t.coeff != 1 && t.coeff != -1) {
            unit_coeffs = false;
            break;
        }
    if (unit_coeffs) {
        // pentagonal series: pure adds/subtracts
        std::vector<long long> plus, minus;
        for (const auto& t : terms) (t.coeff > 0 ? plus : minus).push_back(t.exp);
        const Coeff* d = dense.data();
        for (long long i = L - 1; i >= 0; --i) {
            Coeff acc = 0;
            for (long long e : plus) {
                if (e > i) break;
                acc += d[i - e];
            }
            for (long long e : minus) {
                if (e > i) break;
                acc -= d[i - e];
            }
            dense[i] = acc;
        }
        return;
    }
    for (long long i = L - 1; i >= 0; --i) {
        Coeff acc = 0;
        for (const auto& t : terms) {
            if (t.exp > i) break;
            acc += (Coeff)t.coeff * dense[i - t.exp];
        }
        dense[i] = acc;
    }
}

void check_coeff_bound(const std::vector<Coeff>& dense) {
    static const Coeff kBound = (Coeff)1 << 124;
    for (const Coeff& c : dense)
        if (c > kBound || c < -kBound)
            throw std::overflow_error("expand_eta_quotient: coefficient beyond 128-bit safety margin");
}

}  // namespace

long long EtaQuotient::q_power_offset() const {
    long long off = 0;
    for (const auto& f : factors) off += f.scale * f.exponent;
    return off;
}

void EtaQuotient::validate() const {
    if (factors.empty()) throw std::domain_error("eta quotient: no factors");
    long long rsum = 0;
    for (const auto& f : factors) {
        if (f.scale < 1) throw std::domain_error("eta quotient: scale must be positive");
        if (f.exponent <= 0)
            throw std::domain_error("eta quotient: only positive exponents are supported");
        rsum += f.exponent;
    }
    if (rsum % 2 != 0 || rsum / 2 != weight)
        throw std::domain_error("eta quotient: weight must equal (1/2) sum of exponents");
    if (q_power_offset() % 24 != 0)
        throw std::domain_error("eta quotient: sum m*r must be divisible by 24");
    if (level < 1) throw std::domain_error("eta quotient: invalid level");
}

std::vector<int> eta_series(long long precision) {
    if (precision < 1) throw std::domain_error("eta_series: precision must be >= 1");
    std::vector<int> out(precision + 1, 0);
    for (const auto& t : eta_terms(1, precision)) out[t.exp] = (int)t.coeff;
    return out;
}

std::vector<Coeff> expand_eta_quotient(const EtaQuotient& spec, long long precision) {
    spec.validate();
    if (spec.q_power_offset() != 24)
        throw std::domain_error("expand_eta_quotient: not a normalised cusp form (q-offset != 24)");
    if (precision < 1) throw std::domain_error("expand_eta_quotient: precision must be >= 1");
    // |a(n)| <= tau(n) n^((k-1)/2) <= 2^121 for n <= 2^21 at weight 12; the
    // mul_sparse partial sums stay within ~2^12 of that. Guarded below anyway.
    if (precision > (3LL << 20))
        throw std::length_error("expand_eta_quotient: beyond supported 128-bit depth");

    const long long L = precision;  // indices 0..L-1 of the product series
    std::vector<std::vector<SparseTerm>> plan;
    for (const auto& f : spec.factors) {
        auto e3 = eta3_terms(f.scale, L - 1);
        for (int i = 0; i < f.exponent / 3; ++i) plan.push_back(e3);
        if (f.exponent % 3) {
            auto e1 = eta_terms(f.scale, L - 1);
            for (int i = 0; i < f.exponent % 3; ++i) plan.push_back(e1);
        }
    }
    std::vector<Coeff> dense(L, 0);
    for (const auto& t : plan.front()) dense[t.exp] = t.coeff;  // unit impulse
    for (size_t i = 1; i < plan.size(); ++i) {
        mul_sparse(dense, plan[i]);
        check_coeff_bound(dense);
    }
    // leading q^1 from the eta prefactors: a(n) = dense[n-1]
    std::vector<Coeff> a(precision + 1, 0);
    for (long long n = 1; n <= precision; ++n) a[n] = dense[n - 1];
    if (a[1] != 1) throw std::logic_error("expand_eta_quotient: a(1) != 1");
    return a;
}

std::vector<double> normalize(const std::vector<Coeff>& a, int weight) {
    if (a.size() < 2 || a[1] != 1) throw std::domain_error("normalize: requires a(1) = 1");
    std::vector<double> lam(a.size(), 0.0);
    const double e = 0.5 * (weight - 1);
    for (size_t n = 1; n < a.size(); ++n) lam[n] = (double)a[n] / std::pow((double)n, e);
    return lam;
}

Coeff EigenformEntry::coeff(long long n) const {
    if (n < 1 || n > depth()) throw std::out_of_range("EigenformEntry: n outside coefficient cache");
    return a[n];
}

double EigenformEntry::lam(long long n) const {
    if (n < 1 || n > depth()) throw std::out_of_range("EigenformEntry: n outside coefficient cache");
    return lambda[n];
}

const std::vector<EtaQuotient>& catalog_specs() {
    static const std::vector<EtaQuotient> specs = {
        {{{1, 24}}, 1, 12, "delta"},
        {{{1, 8}, {2, 8}}, 2, 8, "d2k8"},
        {{{1, 4}, {5, 4}}, 5, 4, "d5k4"},
        {{{1, 2}, {11, 2}}, 11, 2, "d11k2"},
    };
    return specs;
}

const EtaQuotient* find_spec(std::string_view label) {
    for (const auto& s : catalog_specs())
        if (s.label == label) return &s;
    return nullptr;
}

EigenformEntry make_entry(const EtaQuotient& spec, long long precision) {
    EigenformEntry e;
    e.level = spec.level;
    e.weight = spec.weight;
    e.label = spec.label;
    e.quotient = spec;
    e.a = expand_eta_quotient(spec, precision);
    e.lambda = normalize(e.a, spec.weight);
    return e;
}

std::vector<EigenformEntry> catalog(long long precision) {
    std::vector<EigenformEntry> out;
    for (const auto& s : catalog_specs()) out.push_back(make_entry(s, precision));
    return out;
}

bool hecke_check(const EigenformEntry& entry, long long m, long long n) {
    if (m < 1 || n < 1) throw std::domain_error("hecke_check: m, n must be >= 1");
    if (std::gcd(m * n, entry.level) != 1)
        throw std::domain_error("hecke_check: requires gcd(mn, N) = 1");
    if (m * n > entry.depth()) throw std::out_of_range("hecke_check: mn outside coefficient cache");
    Coeff lhs = entry.a[m] * entry.a[n];
    Coeff rhs = 0;
    long long g = std::gcd(m, n);
    for (long long d = 1; d <= g; ++d) {
        if (g % d != 0) continue;
        Coeff dk = 1;
        for (int i = 0; i < entry.weight - 1; ++i) dk *= d;
        rhs += dk * entry.a[(m / d) * (n / d)];
    }
    return lhs == rhs;
}

std::vector<double> extend_by_hecke(const std::map<long long, double>& prime_lambdas,
                                    long long N, long long X) {
    if (X < 1) throw std::domain_error("extend_by_hecke: X must be >= 1");
    std::vector<int32_t> spf(X + 1, 0);
    for (long long i = 2; i <= X; ++i) {
        if (spf[i] == 0)
            for (long long j = i; j <= X; j += i)
                if (spf[j] == 0) spf[j] = (int32_t)i;
    }
    std::vector<double> lam(X + 1, 0.0);
    lam[1] = 1.0;
    for (long long n = 2; n <= X; ++n) {
        long long p = spf[n];
        long long m = n;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        double lp;
        if (auto it = prime_lambdas.find(p); it != prime_lambdas.end())
            lp = it->second;
        else
            throw std::invalid_argument("extend_by_hecke: missing prime " + std::to_string(p));
        double lpe;
        if (N % p == 0) {
            lpe = 1.0;
            for (int i = 0; i < e; ++i) lpe *= lp;
        } else {
            // Chebyshev recurrence from the Euler factor 1 - lambda(p) x + x^2
            double prev = 1.0, cur = lp;
            for (int i = 1; i < e; ++i) {
                double next = lp * cur - prev;
                prev = cur;
                cur = next;
            }
            lpe = (e == 0) ? 1.0 : cur;
        }
        lam[n] = lpe * lam[m];
    }
    return lam;
}

SatakeAngle satake(double lambda_p) {
    if (std::abs(lambda_p) > 2.0 + 1e-9)
        throw std::domain_error("satake: |lambda(p)| > 2, Deligne bound violated");
    double x = std::clamp(lambda_p / 2.0, -1.0, 1.0);
    return SatakeAngle{std::acos(x)};
}

double lambda_power(const SatakeAngle& angle, int m) {
    if (m < 0) throw std::domain_error("lambda_power: m must be >= 0");
    const double pi = std::acos(-1.0);
    double s = std::sin(angle.theta);
    if (s < 1e-6) {
        // removable singularities at theta = 0 and theta = pi
        if (angle.theta < pi / 2) return m + 1;
        return (m % 2 == 0) ? (m + 1) : -(m + 1.0);
    }
    return std::sin((m + 1) * angle.theta) / s;
}

std::string coeff_cache_filename(long long level, int weight) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "coeffs_N%lld_k%d.csv", level, weight);
    return buf;
}

void write_coeff_csv(const EigenformEntry& entry, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_coeff_csv: cannot open " + path);
    for (long long n = 1; n <= entry.depth(); ++n)
        out << n << ',' << to_string_i128(entry.a[n]) << '\n';
    if (!out) throw std::runtime_error("write_coeff_csv: write failed for " + path);
}

EigenformEntry load_coeff_csv(const EtaQuotient& spec, const std::string& path,
                              uint64_t sample_seed) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_coeff_csv: cannot open " + path);
    std::vector<Coeff> a;
    a.push_back(0);  // index 0 unused
    std::string line;
    long long expect = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("load_coeff_csv: malformed record in " + path);
        long long n = std::stoll(line.substr(0, comma));
        if (n != expect)
            throw std::runtime_error("load_coeff_csv: record " + std::to_string(expect) +
                                     " missing or out of order in " + path);
        a.push_back(parse_i128(std::string_view(line).substr(comma + 1)));
        ++expect;
    }
    if (a.size() < 2 || a[1] != 1)
        throw std::runtime_error("load_coeff_csv: cache fails a(1) = 1 in " + path);

    EigenformEntry e;
    e.level = spec.level;
    e.weight = spec.weight;
    e.label = spec.label;
    e.quotient = spec;
    e.a = std::move(a);
    e.lambda = normalize(e.a, spec.weight);

    // Hecke relation on a deterministic ~1% sample of admissible (m, n) pairs,
    // plus a few fixed small pairs so shallow corruption is always caught.
    const long long depth = e.depth();
    const long long cap = std::min<long long>(depth, 10000);
    std::vector<std::pair<long long, long long>> pairs;
    for (long long m = 2; m * m <= cap; ++m)
        for (long long n = m; m * n <= cap; ++n)
            if (std::gcd(m * n, e.level) == 1) pairs.push_back({m, n});
    std::mt19937_64 rng(sample_seed);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    size_t take = std::max<size_t>(pairs.size() / 100, std::min<size_t>(pairs.size(), 25));
    pairs.resize(take);
    for (long long m : {2, 3, 2, 5})
        for (long long n : {3, 5, 7})
            if (m != n && m * n <= depth && std::gcd(m * n, e.level) == 1)
                pairs.push_back({m, n});
    for (auto [m, n] : pairs)
        if (!hecke_check(e, m, n))
            throw std::runtime_error("load_coeff_csv: Hecke relation fails at (" +
                                     std::to_string(m) + "," + std::to_string(n) + ") in " + path);
    return e;
}

}  // namespace bqfmom::eigenforms
