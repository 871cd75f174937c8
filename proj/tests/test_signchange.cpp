#include "doctest.h"

#include <cmath>

#include "bqfmom/qforms.hpp"
#include "bqfmom/signchange.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace bqfmom;
using namespace bqfmom::signchange;

static const StepKernel K;
static const double pi = std::acos(-1.0);

TEST_CASE("alpha step values") {
    CHECK(alpha_eval(K, 0.0) == 2.0);
    CHECK(alpha_eval(K, 0.75) == doctest::Approx(0.0));          // m = 1
    CHECK(alpha_eval(K, 1.0) == doctest::Approx(0.0));           // right-closed at 1/1
    CHECK(alpha_eval(K, 0.4) == doctest::Approx(1.0));           // m = 2
    CHECK(alpha_eval(K, 0.5) == doctest::Approx(1.0));           // boundary 1/2 in (1/3, 1/2]
    CHECK(alpha_eval(K, 0.25) == doctest::Approx(2 * std::cos(pi / 5)));
    CHECK(alpha_eval(K, 1.2) == -2.0);
    CHECK(alpha_eval(K, 1e-12) == 2.0);
    CHECK_THROWS_AS(alpha_eval(K, -0.1), std::domain_error);
    // nonincreasing on [0, 1], range within [-2, 2]
    double prev = 2.0;
    for (double t = 1e-4; t <= 1.0; t += 1e-4) {
        double a = alpha_eval(K, t);
        CHECK(a <= prev + 1e-15);
        CHECK(a <= 2.0);
        CHECK(a >= -2.0);
        prev = a;
    }
}

TEST_CASE("h_Y values") {
    CHECK(h_Y(1, 100.0, 1, K) == 1.0);
    CHECK(h_Y(97, 97.0, 1, K) == doctest::Approx(0.0));   // p = Y: alpha(1) = 0
    CHECK(h_Y(101, 100.0, 1, K) == -2.0);                 // p > Y
    CHECK(h_Y(22, 100.0, 11, K) == 0.0);                  // p | N
    double h6 = h_Y(6, 100.0, 1, K);
    CHECK(h6 == doctest::Approx(alpha_eval(K, std::log(2) / std::log(100)) *
                                alpha_eval(K, std::log(3) / std::log(100))));
    CHECK_THROWS_AS(h_Y(12, 100.0, 1, K), std::domain_error);  // not squarefree
    // |h_Y(n)| <= tau(n) on squarefree n
    for (long long n = 1; n <= 3000; ++n) {
        if (!oracles::squarefree_trial(n)) continue;
        CHECK(std::abs(h_Y(n, 50.0, 1, K)) <= (double)oracles::divisor_count(n) + 1e-12);
    }
}

TEST_CASE("minorant sum against a 100-term brute force") {
    auto t = helpers::table("delta", -4, 2000);
    double impl = minorant_sum(t, 100.0, 1.0, K);
    double brute = 0.0;
    for (long long n = 1; n <= 100; ++n) {
        if (!oracles::squarefree_trial(n)) continue;
        brute += h_Y(n, 100.0, 1, K) * (double)qforms::r_star(n, -4);
    }
    CHECK(impl == doctest::Approx(brute).epsilon(1e-12));
    // only n = 1 below the first prime
    CHECK(minorant_sum(t, 1.9, 0.5, K) == doctest::Approx(1.0));
    CHECK_THROWS_AS(minorant_sum(t, 2000.0, 2.0, K), std::out_of_range);
}

TEST_CASE("sigma march basics") {
    auto sol = sigma_march(K, 4.0 / 3.0, 1e-3);
    CHECK(sol.method == "march");
    CHECK(sol.step <= 1e-3 + 1e-15);
    // pinned by the u -> 0 asymptotic sigma ~ u
    CHECK(sol.value_at(0.01) / 0.01 == doctest::Approx(1.0).epsilon(1e-3));
    // alpha < alpha0 on (0,1] pulls sigma strictly below u away from 0
    CHECK(sol.value_at(0.5) < 0.40);
    CHECK(sol.value_at(1.0) < 0.30);
    // continuity across the grid
    double max_jump = 0.0;
    for (size_t i = 1; i < sol.values.size(); ++i)
        max_jump = std::max(max_jump, std::abs(sol.values[i] - sol.values[i - 1]));
    CHECK(max_jump <= 10.0 * sol.step);
    CHECK_THROWS_AS(sigma_march(K, 3.0, 1e-3), std::domain_error);
    CHECK_THROWS_AS(sigma_march(K, 1.0, 1e-2), std::domain_error);
}

TEST_CASE("sigma march is stable under step halving") {
    auto a = sigma_march(K, 4.0 / 3.0, 1e-3);
    auto b = sigma_march(K, 4.0 / 3.0, 5e-4);
    for (double u : {0.5, 1.0, 1.2, 4.0 / 3.0})
        CHECK(std::abs(a.value_at(u) - b.value_at(u)) < 1e-4);
}

TEST_CASE("I_1 quadrature against the closed form") {
    for (double u : {0.5, 1.0, 1.2, 4.0 / 3.0})
        CHECK(sigma_series_term(K, u, 1, 1e-3) ==
              doctest::Approx(oracles::I1_closed_form(u)).epsilon(2e-4));
}

TEST_CASE("sigma march and series agree") {
    auto march = sigma_march(K, 4.0 / 3.0, 1e-3);
    for (double u : {0.25, 0.5, 1.0, 1.05, 1.1, 1.15, 1.2, 1.25, 1.3, 4.0 / 3.0})
        CHECK(std::abs(march.value_at(u) - sigma_series(K, u, 4, 1e-3)) < 1e-3);
}

TEST_CASE("sigma(4/3) is positive by both methods") {
    auto march = sigma_march(K, 4.0 / 3.0, 1e-3);
    double m = march.value_at(4.0 / 3.0);
    double s = sigma_series(K, 4.0 / 3.0, 4, 1e-3);
    // the two independent routes pin sigma(4/3) near 0.008
    CHECK(m > 0.005);
    CHECK(m < 0.012);
    CHECK(s > 0.005);
    CHECK(s < 0.012);
}

TEST_CASE("series input validation") {
    CHECK_THROWS_AS(sigma_series(K, 1.5, 4, 1e-3), std::domain_error);
    CHECK_THROWS_AS(sigma_series(K, 1.0, 7, 1e-3), std::domain_error);
    CHECK(sigma_series(K, 1.0, 0, 1e-3) == doctest::Approx(1.0));  // bare leading term
}

TEST_CASE("satake step property") {
    // m = 1: nonnegative lambda(p) trivially implies lambda(p) >= 0
    CHECK(satake_step_property(1, 1e-4));
    // m = 2 boundary: theta = pi/3 has U_1 = 1 = 2cos(pi/3), U_2 = 0
    CHECK(satake_step_property(2, 1e-5));
    for (int m = 1; m <= 10; ++m) CHECK(satake_step_property(m, 1e-4));
    CHECK_THROWS_AS(satake_step_property(0, 1e-4), std::domain_error);
}

TEST_CASE("g convolution check") {
    auto t = helpers::table("delta", -4, 100000);
    auto rep = g_convolution_check(t, 1000.0);
    // lambda(2) < 0 and 2 is represented, so the real form fails the
    // hypothesis and the synthetic lambda = 2cos(pi/4) kicks in
    CHECK_FALSE(rep.lambda_hypothesis_holds);
    CHECK(rep.used_synthetic);
    CHECK(rep.sum_inequality);
    // 2cos(pi/4) < alpha(t) for t <= 1/4, so the per-prime bound fails at
    // p <= Y^(1/4); the check reports that honestly
    CHECK_FALSE(rep.prime_nonneg);
    CHECK_FALSE(rep.pass());

    // unrepresented primes contribute g(p) = 0 regardless of lambda
    CHECK(t.r_star[3] == 0);
    // p > Y represented: h_Y(p) r*(p) = -4 and g(p) = lambda(p) r*(p) + 4 >= 0
    long long p = 1009;  // prime, 1 mod 4, above Y = 1000
    CHECK(t.r_star[p] == 2);
    CHECK(alpha_eval(K, std::log((double)p) / std::log(1000.0)) == -2.0);
    CHECK(t.lambda[p] * t.r_star[p] + 4.0 >= 0.0);
}

TEST_CASE("first sign changes for the delta instances") {
    auto t4 = helpers::table("delta", -4, 100000);
    auto rec = first_sign_change(t4);
    CHECK(rec.found);
    CHECK(rec.n_first == 2);
    CHECK(rec.lambda_value < 0.0);
    CHECK(rec.witness_x1 * rec.witness_x1 + rec.witness_x2 * rec.witness_x2 == 2);
    CHECK(rec.bound == doctest::Approx(std::pow(1.0 * 144.0 * 16.0, 0.75)));
    CHECK(rec.ratio <= 1.0);

    auto t3 = helpers::table("delta", -3, 100000);
    auto rec3 = first_sign_change(t3);
    CHECK(rec3.found);
    CHECK(rec3.n_first == 7);
    // witness solves x^2 + xy + y^2 = 7
    long long x = rec3.witness_x1, y = rec3.witness_x2;
    CHECK(x * x + x * y + y * y == 7);
    CHECK(rec3.ratio <= 1.0);
}

TEST_CASE("no sign change within range yields a not-found report") {
    auto t = helpers::table("delta", -4, 1);  // only n = 1 in range
    auto rec = first_sign_change(t);
    CHECK_FALSE(rec.found);
    CHECK(rec.scan_bound == 1);
    CHECK(rec.n_first == 0);
}

TEST_CASE("march runs to the u_max = 2 boundary") {
    auto sol = sigma_march(K, 2.0, 1e-3);
    CHECK(std::isfinite(sol.value_at(2.0)));
    CHECK(std::abs(sol.value_at(4.0 / 3.0) -
                   sigma_march(K, 4.0 / 3.0, 1e-3).value_at(4.0 / 3.0)) < 1e-6);
}

TEST_CASE("sign change records satisfy the definitional invariants") {
    for (const char* label : {"delta", "d2k8", "d5k4", "d11k2"})
        for (long long D : {-3LL, -4LL, -8LL, -12LL, -27LL, -67LL}) {
            auto t = helpers::table(label, D, 20000);
            auto rec = first_sign_change(t);
            REQUIRE(rec.found);
            long long n = rec.n_first;
            CHECK(std::gcd(n, t.level) == 1);
            CHECK(t.mu_sq[n]);
            auto form = qforms::enumerate_reduced_forms(D)[0];
            CHECK(qforms::lattice_count(form, n) > 0);
            long long wq = rec.witness_x1 * rec.witness_x1 * form.a +
                           rec.witness_x1 * rec.witness_x2 * form.b +
                           rec.witness_x2 * rec.witness_x2 * form.c;
            CHECK(wq == n);
            CHECK(t.form->a[n] < 0);  // exact integer sign
            // every smaller truly represented squarefree coprime m has lambda >= 0
            for (long long m = 1; m < n; ++m) {
                if (!t.mu_sq[m] || !t.coprime_N[m]) continue;
                if (qforms::lattice_count(form, m) == 0) continue;
                CHECK(t.form->a[m] >= 0);
            }
            CHECK(rec.ratio == doctest::Approx(n / rec.bound));
        }
}
