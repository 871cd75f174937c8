#ifndef BQFMOM_SIGNCHANGE_HPP
#define BQFMOM_SIGNCHANGE_HPP

// The step kernel alpha, the multiplicative minorant h_Y, the sigma(u) delay
// integral equation solved two independent ways, the convolution minorisation
// properties, and the first sign change of lambda over squarefree represented
// integers with the associated bound ratio.
//
// alpha on [0, 1] follows the display
//   alpha(0) = 2,  alpha(t) = 2 cos(pi/(m+1)) on (1/(m+1), 1/m],
// and is extended by alpha(t) = -2 for t > 1, which is exactly the value
// h_Y assigns to primes p > Y; the sigma equation on u > 1 relies on the
// extension.

#include <string>
#include <vector>

#include "bqfmom/sieves.hpp"

namespace bqfmom::signchange {

struct StepKernel {
    double alpha0 = 2.0;
};

// Step value at t >= 0 (right-closed intervals). Throws for t < 0.
double alpha_eval(const StepKernel& kernel, double t);

// Multiplicative over p | n: alpha(log p/log Y) for p <= Y coprime to N,
// -2 for p > Y coprime to N, 0 for p | N. Throws if n is not squarefree.
double h_Y(long long n, double Y, long long N, const StepKernel& kernel);

// sum over squarefree n <= Y^u coprime to N of h_Y(n) r*(n).
double minorant_sum(const sieves::CoefficientTable& table, double Y, double u,
                    const StepKernel& kernel);

struct SigmaSolution {
    std::vector<double> grid_u;   // 0, h, 2h, ..., u_max
    std::vector<double> values;   // sigma at the grid points
    double step = 0.0;
    std::string method;

    double value_at(double u) const;  // linear interpolation
};

// Volterra march for u sigma(u) = int_0^u sigma(t) alpha(u-t) dt, seeded by
// the u -> 0+ behaviour sigma(u) ~ u^(alpha0-1) on the first grid cell. The
// integrand is split exactly at the alpha jump points u - 1/m. Requires
// u_max <= 2, step <= 1e-3.
SigmaSolution sigma_march(const StepKernel& kernel, double u_max, double step);

// Truncated series sigma(u) ~ u^(alpha0-1) + sum_{j<=j_max} ((-1)^j/j!) I_j(u)
// where I_j integrates (u - sum t_i)^(alpha0-1) prod (alpha0-alpha(t_i))/t_i
// over the simplex; evaluated by iterated one-dimensional quadrature.
// Requires u <= 4/3, j_max <= 4.
double sigma_series(const StepKernel& kernel, double u, int j_max, double step = 1e-3);

// I_j(u) alone (exposed for quadrature cross-checks).
double sigma_series_term(const StepKernel& kernel, double u, int j, double step = 1e-3);

// Sweeps theta over (0, pi): whenever sin((j+1)theta)/sin(theta) >= 0 for all
// j = 1..m, checks 2cos(theta) >= 2cos(pi/(m+1)) - 4*resolution.
bool satake_step_property(int m, double theta_resolution);

struct GConvolutionReport {
    bool lambda_hypothesis_holds = false;  // lambda(p) >= 0 at represented p <= Y coprime to N
    bool used_synthetic = false;
    bool prime_nonneg = false;    // g(p) = (lambda(p) - h_Y(p)) r*(p) >= 0 for p <= table range
    bool sum_inequality = false;  // sum lambda r* >= sum h_Y r* over the table

    bool pass() const { return prime_nonneg && sum_inequality; }
};

// Verifies the convolution minorisation. The hypothesis is tested first; if
// the real form violates it, the check reruns on a synthetic multiplicative
// lambda with lambda(p) = 2 cos(pi/4) at every prime.
GConvolutionReport g_convolution_check(const sieves::CoefficientTable& table, double Y);

struct SignChangeRecord {
    std::string label;
    long long level = 0;
    int weight = 0;
    long long disc = 0;

    bool found = false;
    long long n_first = 0;
    long long witness_x1 = 0, witness_x2 = 0;
    double lambda_value = 0.0;
    double bound = 0.0;      // (N k^2 |D|^2)^(3/4)
    double ratio = 0.0;      // n_first / bound
    long long scan_bound = 0;
};

// First squarefree n coprime to N, represented by Q (r_Q(n) > 0), with
// lambda(n) < 0. Negativity means lambda(n) < -1e-12, with the exact integer
// sign of a(n) as the authoritative tie-break below that threshold.
SignChangeRecord first_sign_change(const sieves::CoefficientTable& table);

}  // namespace bqfmom::signchange

#endif
