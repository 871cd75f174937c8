#include "doctest.h"

#include <cmath>

#include "bqfmom/dirichlet.hpp"
#include "bqfmom/moments.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace bqfmom;
using namespace bqfmom::moments;

TEST_CASE("S sum at tiny checkpoints") {
    auto t = helpers::table("delta", -4, 100);
    std::vector<long long> cps{1, 2, 10};
    auto rep = sum_S(t, cps);
    CHECK(rep.checkpoints[0].value == doctest::Approx(1.0));
    double lam2 = t.form->lam(2);
    CHECK(rep.checkpoints[1].value == doctest::Approx(1.0 + lam2).epsilon(1e-14));
    CHECK(rep.w_d_scaled[1] == doctest::Approx(4.0 * (1.0 + lam2)).epsilon(1e-14));
}

TEST_CASE("sums match the sieve-free per-term evaluator") {
    const long long X = 10000;
    for (const char* label : {"delta", "d11k2"})
        for (long long D : {-4LL, -3LL, -163LL}) {
            auto t = helpers::table(label, D, X);
            std::vector<long long> cps{100, 1234, X};
            auto s = sum_S(t, cps);
            for (size_t i = 0; i < cps.size(); ++i)
                CHECK(std::abs(s.checkpoints[i].value -
                               oracles::sum_S_brute(*t.form, D, cps[i])) < 1e-8);
            auto e2 = sum_E(t, 2, cps);
            for (size_t i = 0; i < cps.size(); ++i)
                CHECK(std::abs(e2.checkpoints[i].value -
                               oracles::sum_E_brute(2, D, t.level, cps[i])) < 1e-8);
        }
}

TEST_CASE("E by hand for X = 10") {
    // eta = 2, D = -3, N = 1: squarefree n <= 10 with r* > 0 are 1, 3, 7
    auto t = helpers::table("delta", -3, 10);
    std::vector<long long> cps{10};
    auto rep = sum_E(t, 2, cps);
    double expect = 1.0 + 2.0 * 1.0 + 2.0 * 2.0;  // n=1; n=3 (r*=1); n=7 (r*=2)
    CHECK(rep.checkpoints[0].value == doctest::Approx(expect));
    CHECK(rep.eta == 2);
}

TEST_CASE("E is monotone nondecreasing in X") {
    auto t = helpers::table("d5k4", -4, 5000);
    auto cps = dyadic_checkpoints(1, 5000);
    for (int eta : {1, 2, 3}) {
        auto rep = sum_E(t, eta, cps);
        for (size_t i = 1; i < rep.checkpoints.size(); ++i)
            CHECK(rep.checkpoints[i].value >= rep.checkpoints[i - 1].value);
    }
}

TEST_CASE("threaded sums equal sequential sums exactly") {
    auto t = helpers::table("delta", -4, 50000);
    auto cps = dyadic_checkpoints(1024, 50000);
    auto seq = sum_S(t, cps, 1);
    auto par = sum_S(t, cps, 4);
    for (size_t i = 0; i < seq.checkpoints.size(); ++i)
        CHECK(seq.checkpoints[i].value == par.checkpoints[i].value);
}

TEST_CASE("main term evaluation") {
    double P1 = dirichlet::P_euler({1.0, 0.0}, -4, 1, 1, 100000).value.real();
    double L1 = dirichlet::L1_chi(-4, dirichlet::L1Method::DirectSum);
    CHECK(main_term_E(1, -4, 1, 1e4, 100000) ==
          doctest::Approx(P1 * L1 * 1e4).epsilon(1e-12));
    double e = std::exp(1.0);
    double P2 = dirichlet::P_euler({1.0, 0.0}, -4, 1, 2, 100000).value.real();
    CHECK(main_term_E(2, -4, 1, e, 100000) ==
          doctest::Approx(P2 * L1 * L1 * e).epsilon(1e-10));
    CHECK_THROWS_AS(main_term_E(1, -4, 1, 1.0), std::domain_error);
}

TEST_CASE("E_1/X settles for D = -4") {
    const long long X = 1 << 17;
    auto t = helpers::table("delta", -4, X);
    auto cps = dyadic_checkpoints(1 << 10, X);
    auto rep = sum_E(t, 1, cps);
    size_t k = rep.checkpoints.size();
    double r1 = rep.checkpoints[k - 3].value / rep.checkpoints[k - 3].x;
    double r2 = rep.checkpoints[k - 2].value / rep.checkpoints[k - 2].x;
    double r3 = rep.checkpoints[k - 1].value / rep.checkpoints[k - 1].x;
    CHECK(std::abs(r1 - r2) / r2 < 0.01);
    CHECK(std::abs(r2 - r3) / r3 < 0.01);
    CHECK(std::abs(r1 - r3) / r3 < 0.01);
}

TEST_CASE("slope fit on synthetic power laws") {
    SumReport rep;
    for (int k = 10; k <= 20; ++k) rep.checkpoints.push_back({1LL << k, (double)(1LL << k)});
    CHECK(fit_slope(rep) == doctest::Approx(1.0).epsilon(1e-9));
    SumReport rep2;
    for (int k = 10; k <= 20; ++k)
        rep2.checkpoints.push_back({1LL << k, std::sqrt((double)(1LL << k))});
    CHECK(fit_slope(rep2) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fit_slope(rep2, 1 << 14, 1 << 20) == doctest::Approx(0.5).epsilon(1e-9));

    SumReport tiny;
    for (int k = 0; k < 6; ++k) tiny.checkpoints.push_back({1LL << k, 2.0});
    CHECK_THROWS_AS(fit_slope(tiny), std::runtime_error);  // < 8 checkpoints
    SumReport zeros;
    for (int k = 10; k <= 20; ++k) zeros.checkpoints.push_back({1LL << k, 0.0});
    CHECK_THROWS_AS(fit_slope(zeros), std::runtime_error);
    SumReport small;  // nonzero but all |value| < 1: no usable points
    for (int k = 10; k <= 20; ++k) small.checkpoints.push_back({1LL << k, 0.25});
    CHECK_THROWS_AS(fit_slope(small), std::runtime_error);
}

TEST_CASE("checkpoint validation") {
    auto t = helpers::table("delta", -4, 100);
    std::vector<long long> beyond{200};
    CHECK_THROWS_AS(sum_S(t, beyond), std::out_of_range);
    std::vector<long long> unsorted{50, 20};
    CHECK_THROWS_AS(sum_S(t, unsorted), std::domain_error);
}

TEST_CASE("dyadic checkpoints") {
    auto cps = dyadic_checkpoints(1024, 1 << 20);
    CHECK(cps.front() == 1024);
    CHECK(cps.back() == 1 << 20);
    CHECK(cps.size() == 11);
    auto cps2 = dyadic_checkpoints(1024, 1000000);
    CHECK(cps2.back() == 1000000);
}
