#ifndef BQFMOM_MOMENTS_HPP
#define BQFMOM_MOMENTS_HPP

// Checkpointed summatory functions over squarefree represented integers:
//   S*(X) = sum_{n<=X} mu^2(n) [gcd(n,N)=1] lambda(n) r*(n)
//   E_eta(X) = sum_{n<=X} mu^2(n) [gcd(n,N)=1] eta^omega(n) r*(n)
// plus the E_eta main term and log-log slope fits. S* cancels heavily, so
// all accumulation is Kahan-compensated.

#include <climits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bqfmom/sieves.hpp"

namespace bqfmom::moments {

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    void merge(const KahanSum& o) {
        add(o.sum);
        add(-o.comp);
    }
    double value() const { return sum; }
};

struct Checkpoint {
    long long x = 0;
    double value = 0.0;
};

struct SumReport {
    std::string label;
    long long level = 0;
    int weight = 0;
    long long disc = 0;
    int eta = 0;  // 0 for the S-sum

    std::vector<Checkpoint> checkpoints;  // S*(X) or E_eta(X)
    std::vector<double> w_d_scaled;       // w_D * value, per checkpoint
    std::vector<double> main_term;        // E-sums only, filled by the caller
    std::optional<double> fitted_slope;
    std::optional<double> bound_constant;  // max |S*| X^{-1/2} / (N k^2 |D|)^{1/2}
};

// Powers of two in [from, to], clamped to to.
std::vector<long long> dyadic_checkpoints(long long from, long long to);

// Single pass with running compensated partial sums, emitted at checkpoints
// (strictly increasing, max <= x_max). With threads > 1 the inter-checkpoint
// segments are accumulated concurrently and merged in checkpoint order, so
// the result does not depend on the thread count.
SumReport sum_S(const sieves::CoefficientTable& table, std::span<const long long> checkpoints,
                int threads = 1);
SumReport sum_E(const sieves::CoefficientTable& table, int eta,
                std::span<const long long> checkpoints, int threads = 1);

// P(1) L(1,chi_D)^eta / Gamma(eta) * X (log X)^(eta-1), X > 1.
double main_term_E(int eta, long long D, long long N, double X, long long p_cut = 1'000'000);

// Least-squares slope of log|value| against log X over the checkpoints with
// x_min <= X <= x_max, skipping |value| < 1. Requires >= 8 checkpoints in the
// report and >= 4 usable points (throws std::runtime_error otherwise).
double fit_slope(const SumReport& report, long long x_min = 0, long long x_max = LLONG_MAX);

}  // namespace bqfmom::moments

#endif
