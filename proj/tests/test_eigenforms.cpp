#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "bqfmom/eigenforms.hpp"
#include "bqfmom/sieves.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace bqfmom;
using namespace bqfmom::eigenforms;

TEST_CASE("eta series matches the brute-force product") {
    auto fast = eta_series(300);
    auto brute = oracles::eta_product_brute(300);
    for (long long n = 0; n <= 300; ++n) {
        CHECK(fast[n] == brute[n]);
        CHECK(std::abs(fast[n]) <= 1);
    }
    CHECK(fast[0] == 1);
    CHECK(fast[1] == -1);
    CHECK(fast[2] == -1);
    CHECK(fast[3] == 0);
    CHECK(fast[5] == 1);
    CHECK(fast[7] == 1);
}

TEST_CASE("eta quotient invariants are enforced") {
    EtaQuotient bad_offset{{{1, 48}}, 1, 24, "x"};
    CHECK_THROWS_AS(expand_eta_quotient(bad_offset, 10), std::domain_error);
    EtaQuotient bad_weight{{{1, 24}}, 1, 11, "x"};
    CHECK_THROWS_AS(expand_eta_quotient(bad_weight, 10), std::domain_error);
    EtaQuotient negative{{{1, 26}, {2, -1}}, 2, 12, "x"};
    CHECK_THROWS_AS(expand_eta_quotient(negative, 10), std::domain_error);
}

TEST_CASE("catalog expansions match the brute-force quotient products") {
    for (const auto& spec : catalog_specs()) {
        auto a = expand_eta_quotient(spec, 120);
        auto brute = oracles::eta_quotient_brute(spec, 120);
        for (long long n = 1; n <= 120; ++n) CHECK(a[n] == (Coeff)brute[n]);
        CHECK(a[1] == 1);
    }
}

TEST_CASE("catalog contains the four newforms with pinned coefficients") {
    auto specs = catalog_specs();
    REQUIRE(specs.size() == 4);
    CHECK(specs[0].level == 1);
    CHECK(specs[0].weight == 12);
    auto delta = helpers::entry("delta", 1000);
    CHECK(delta->a[2] == -24);
    CHECK(delta->a[3] == 252);
    CHECK(delta->a[4] == -1472);
    CHECK(delta->a[6] == -6048);
    auto d11 = helpers::entry("d11k2", 1000);
    CHECK(d11->a[2] == -2);
    CHECK(d11->a[3] == -1);
    for (const auto& spec : specs) {
        auto e = helpers::entry(spec.label, 1000);
        CHECK(e->lambda[1] == 1.0);
    }
}

TEST_CASE("catalog builder returns all four entries normalised") {
    auto entries = catalog(200);
    REQUIRE(entries.size() == 4);
    for (const auto& e : entries) {
        CHECK(e.lambda[1] == 1.0);
        CHECK(e.depth() == 200);
    }
}

TEST_CASE("normalisation") {
    auto delta = helpers::entry("delta", 100);
    CHECK(delta->lam(1) == 1.0);
    CHECK(delta->lam(2) == doctest::Approx(-24.0 / std::pow(2.0, 5.5)).epsilon(1e-12));
    CHECK(delta->lam(2) == doctest::Approx(-0.5303).epsilon(1e-4));
    auto d11 = helpers::entry("d11k2", 100);
    CHECK(d11->lam(2) == doctest::Approx(-2.0 / std::sqrt(2.0)).epsilon(1e-12));
    std::vector<Coeff> unnormalised{0, 2};
    CHECK_THROWS_AS(normalize(unnormalised, 2), std::domain_error);
}

TEST_CASE("Hecke relation on exact coefficients") {
    auto delta = helpers::entry("delta", 10000);
    CHECK(hecke_check(*delta, 2, 3));
    CHECK(hecke_check(*delta, 2, 2));  // a(2)^2 = a(4) + 2^11 a(1)
    CHECK(delta->a[2] * delta->a[2] == delta->a[4] + ((Coeff)1 << 11));
    for (long long n = 1; n <= 100; ++n) CHECK(hecke_check(*delta, 1, n));

    // every coprime-to-level pair with mn <= 10^4, all four forms
    for (const auto& spec : catalog_specs()) {
        auto e = helpers::entry(spec.label, 10000);
        for (long long m = 2; m * m <= 10000; ++m)
            for (long long n = m; m * n <= 10000; ++n)
                if (std::gcd(m * n, e->level) == 1) CHECK(hecke_check(*e, m, n));
    }

    auto d11 = helpers::entry("d11k2", 10000);
    CHECK_THROWS_AS(hecke_check(*d11, 11, 2), std::domain_error);
    CHECK_THROWS_AS(hecke_check(*delta, 101, 101), std::out_of_range);
}

TEST_CASE("Deligne bound at primes and the divisor bound") {
    for (const auto& spec : catalog_specs()) {
        auto e = helpers::entry(spec.label, 100000);
        for (long long p : sieves::primes_up_to(100000)) {
            if (e->level % p == 0) continue;
            CHECK(std::abs(e->lam(p)) <= 2.0 + 1e-9);
        }
        for (long long n = 1; n <= 2000; ++n)
            CHECK(std::abs(e->lam(n)) <= (double)oracles::divisor_count(n) + 1e-9);
    }
}

TEST_CASE("level primes have eigenvalue lambda(p)^2 = 1/p") {
    for (const auto& spec : catalog_specs()) {
        if (spec.level == 1) continue;
        auto e = helpers::entry(spec.label, 1000);
        double lp = e->lam(spec.level);  // catalog levels are prime
        CHECK(lp * lp == doctest::Approx(1.0 / spec.level).epsilon(1e-12));
    }
}

TEST_CASE("extend_by_hecke reproduces the expansion") {
    const long long X = 10000;
    for (const auto& spec : catalog_specs()) {
        auto e = helpers::entry(spec.label, X);
        std::map<long long, double> plams;
        for (long long p : sieves::primes_up_to(X)) plams[p] = e->lam(p);
        auto lam = extend_by_hecke(plams, e->level, X);
        for (long long n = 1; n <= X; ++n) {
            double ref = e->lam(n);
            if (std::abs(ref) > 1e-300)
                CHECK(std::abs(lam[n] - ref) <= 1e-10 * std::abs(ref));
            else
                CHECK(std::abs(lam[n] - ref) <= 1e-12);
        }
    }
    // level prime rule: lambda(121) = lambda(11)^2 for the level-11 form
    auto d11 = helpers::entry("d11k2", 15000);
    std::map<long long, double> plams;
    for (long long p : sieves::primes_up_to(15000)) plams[p] = d11->lam(p);
    auto lam = extend_by_hecke(plams, 11, 15000);
    CHECK(lam[121] == doctest::Approx(d11->lam(11) * d11->lam(11)).epsilon(1e-12));
    CHECK(lam[121] == doctest::Approx(d11->lam(121)).epsilon(1e-10));

    std::map<long long, double> missing{{2, 1.0}};
    CHECK_THROWS_AS(extend_by_hecke(missing, 1, 10), std::invalid_argument);
}

TEST_CASE("Satake angles and prime-power eigenvalues") {
    CHECK(lambda_power(satake(2.0), 3) == doctest::Approx(4.0));
    CHECK(lambda_power(satake(0.0), 2) == doctest::Approx(-1.0));
    CHECK(lambda_power(satake(-2.0), 2) == doctest::Approx(3.0));
    CHECK(lambda_power(satake(-2.0), 3) == doctest::Approx(-4.0));
    CHECK_THROWS_AS(satake(2.1), std::domain_error);

    auto delta = helpers::entry("delta", 10000);
    for (long long p : {2LL, 3LL, 5LL, 7LL}) {
        auto theta = satake(delta->lam(p));
        for (int m = 2; ; ++m) {
            long long pm = 1;
            for (int i = 0; i < m; ++i) pm *= p;
            if (pm > 10000) break;
            CHECK(lambda_power(theta, m) == doctest::Approx(delta->lam(pm)).epsilon(1e-9));
        }
    }
}

TEST_CASE("coefficient cache round trip and corruption detection") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "bqfmom_test_cache";
    fs::create_directories(dir);
    const auto* spec = find_spec("delta");
    auto path = (dir / coeff_cache_filename(1, 12)).string();
    CHECK(coeff_cache_filename(1, 12) == "coeffs_N1_k12.csv");

    auto e = make_entry(*spec, 500);
    write_coeff_csv(e, path);
    auto loaded = load_coeff_csv(*spec, path);
    CHECK(loaded.depth() == 500);
    for (long long n = 1; n <= 500; ++n) CHECK(loaded.a[n] == e.a[n]);

    // tamper with a(6): the fixed Hecke pair (2,3) must catch it
    {
        std::ifstream in(path);
        std::string all, line;
        while (std::getline(in, line)) {
            if (line.rfind("6,", 0) == 0) line = "6,-6049";
            all += line + "\n";
        }
        std::ofstream out(path, std::ios::binary);
        out << all;
    }
    CHECK_THROWS_WITH_AS(load_coeff_csv(*spec, path), doctest::Contains("Hecke"),
                         std::runtime_error);
    fs::remove_all(dir);
}
