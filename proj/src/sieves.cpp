#include "bqfmom/sieves.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "bqfmom/qforms.hpp"

namespace bqfmom::sieves {

std::vector<long long> primes_up_to(long long x) {
    std::vector<long long> primes;
    if (x < 2) return primes;
    std::vector<bool> comp(x + 1, false);
    for (long long i = 2; i <= x; ++i) {
        if (comp[i]) continue;
        primes.push_back(i);
        for (long long j = i * i; j <= x; j += i) comp[j] = true;
    }
    return primes;
}

std::vector<int32_t> spf_sieve(long long x) {
    std::vector<int32_t> spf(x + 1, 0);
    for (long long i = 2; i <= x; ++i) {
        if (spf[i] != 0) continue;
        for (long long j = i; j <= x; j += i)
            if (spf[j] == 0) spf[j] = (int32_t)i;
    }
    return spf;
}

std::vector<bool> moebius_squarefree_sieve(long long x) {
    std::vector<bool> sq(x + 1, true);
    sq[0] = false;
    for (long long p = 2; p * p <= x; ++p) {
        // p composite is fine: its square multiples were already cleared
        long long pp = p * p;
        for (long long j = pp; j <= x; j += pp) sq[j] = false;
    }
    return sq;
}

CoefficientTable build_table(std::shared_ptr<const eigenforms::EigenformEntry> form,
                             long long D, long long x_max) {
    if (!form) throw std::invalid_argument("build_table: null form");
    if (x_max < 1) throw std::domain_error("build_table: x_max must be >= 1");
    if (form->depth() < x_max)
        throw std::out_of_range("build_table: coefficient cache shallower than x_max");
    if (qforms::class_number(D) != 1)
        throw std::domain_error("build_table: discriminant must have class number 1");

    CoefficientTable t;
    t.x_max = x_max;
    t.level = form->level;
    t.weight = form->weight;
    t.disc = D;
    t.label = form->label;
    t.form = form;

    auto spf = spf_sieve(x_max);
    t.mu_sq.assign(x_max + 1, false);
    t.omega.assign(x_max + 1, 0);
    t.coprime_N.assign(x_max + 1, false);
    t.r_star.assign(x_max + 1, 0);
    t.lambda.assign(x_max + 1, 0.0);

    t.mu_sq[1] = true;
    t.coprime_N[1] = true;
    t.r_star[1] = 1;
    t.lambda[1] = form->lambda[1];

    for (long long n = 2; n <= x_max; ++n) {
        long long p = spf[n];
        long long m = n;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        int chi = qforms::chi_D(D, p);
        // r*(p^e) = sum_{j<=e} chi(p)^j
        int32_t rp = (chi == 1) ? (int32_t)(e + 1) : (chi == 0 ? 1 : (e % 2 == 0 ? 1 : 0));
        t.r_star[n] = rp * t.r_star[m];
        t.omega[n] = (uint8_t)(t.omega[m] + 1);
        t.mu_sq[n] = (e == 1) && t.mu_sq[m];
        t.coprime_N[n] = (t.level % p != 0) && t.coprime_N[m];
        t.lambda[n] = form->lambda[n];
    }
    return t;
}

// Binary dump layout (all little-endian):
//   magic "BQFT", uint32 version = 1
//   int64 x_max, int64 level, int32 weight, int64 disc
//   uint32 label length, label bytes
//   mu_sq      as x_max+1 uint8
//   omega      as x_max+1 uint8
//   coprime_N  as x_max+1 uint8
//   r_star     as x_max+1 int32
//   lambda     as x_max+1 double
void dump_table(const CoefficientTable& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("dump_table: cannot open " + path);
    auto put = [&](const void* p, size_t n) { out.write((const char*)p, (std::streamsize)n); };
    put("BQFT", 4);
    uint32_t version = 1;
    put(&version, 4);
    int64_t x = t.x_max, lv = t.level, d = t.disc;
    int32_t w = t.weight;
    put(&x, 8);
    put(&lv, 8);
    put(&w, 4);
    put(&d, 8);
    uint32_t len = (uint32_t)t.label.size();
    put(&len, 4);
    put(t.label.data(), len);
    auto put_bits = [&](const std::vector<bool>& v) {
        std::vector<uint8_t> raw(v.size());
        for (size_t i = 0; i < v.size(); ++i) raw[i] = v[i] ? 1 : 0;
        put(raw.data(), raw.size());
    };
    put_bits(t.mu_sq);
    put(t.omega.data(), t.omega.size());
    put_bits(t.coprime_N);
    put(t.r_star.data(), t.r_star.size() * 4);
    put(t.lambda.data(), t.lambda.size() * 8);
    if (!out) throw std::runtime_error("dump_table: write failed for " + path);
}

CoefficientTable load_table(const std::string& path,
                            std::shared_ptr<const eigenforms::EigenformEntry> form) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_table: cannot open " + path);
    auto get = [&](void* p, size_t n) {
        in.read((char*)p, (std::streamsize)n);
        if (!in) throw std::runtime_error("load_table: truncated file " + path);
    };
    char magic[4];
    get(magic, 4);
    if (std::memcmp(magic, "BQFT", 4) != 0) throw std::runtime_error("load_table: bad magic");
    uint32_t version = 0;
    get(&version, 4);
    if (version != 1) throw std::runtime_error("load_table: unsupported version");
    CoefficientTable t;
    int64_t x, lv, d;
    int32_t w;
    get(&x, 8);
    get(&lv, 8);
    get(&w, 4);
    get(&d, 8);
    t.x_max = x;
    t.level = lv;
    t.weight = w;
    t.disc = d;
    uint32_t len = 0;
    get(&len, 4);
    t.label.resize(len);
    get(t.label.data(), len);
    auto get_bits = [&](std::vector<bool>& v) {
        std::vector<uint8_t> raw(x + 1);
        get(raw.data(), raw.size());
        v.resize(x + 1);
        for (size_t i = 0; i < raw.size(); ++i) v[i] = raw[i] != 0;
    };
    get_bits(t.mu_sq);
    t.omega.resize(x + 1);
    get(t.omega.data(), t.omega.size());
    get_bits(t.coprime_N);
    t.r_star.resize(x + 1);
    get(t.r_star.data(), t.r_star.size() * 4);
    t.lambda.resize(x + 1);
    get(t.lambda.data(), t.lambda.size() * 8);
    t.form = std::move(form);
    return t;
}

}  // namespace bqfmom::sieves
