#include "bqfmom/signchange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bqfmom/moments.hpp"
#include "bqfmom/qforms.hpp"

namespace bqfmom::signchange {

namespace {

const double kPi = std::acos(-1.0);

}  // namespace

double alpha_eval(const StepKernel& kernel, double t) {
    if (t < 0.0) throw std::domain_error("alpha_eval: t must be >= 0");
    if (t == 0.0) return kernel.alpha0;
    if (t > 1.0) return -2.0;
    // 2 cos(pi/(m+1)) is 2.0 to double precision once m ~ 3e8
    if (t < 1e-9) return kernel.alpha0;
    long long m = (long long)std::floor(1.0 / t);
    while (m > 1 && t * (double)m > 1.0) --m;   // ensure t <= 1/m
    while (t * (double)(m + 1) <= 1.0) ++m;     // ensure t > 1/(m+1)
    return 2.0 * std::cos(kPi / (double)(m + 1));
}

double h_Y(long long n, double Y, long long N, const StepKernel& kernel) {
    if (n < 1) throw std::domain_error("h_Y: n must be >= 1");
    if (Y <= 1.0) throw std::domain_error("h_Y: Y must be > 1");
    double prod = 1.0;
    long long m = n;
    const double logY = std::log(Y);
    for (long long p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        m /= p;
        if (m % p == 0) throw std::domain_error("h_Y: n must be squarefree");
        if (N % p == 0)
            prod = 0.0;
        else
            prod *= alpha_eval(kernel, std::log((double)p) / logY);
    }
    if (m > 1) {
        if (N % m == 0)
            prod = 0.0;
        else
            prod *= alpha_eval(kernel, std::log((double)m) / logY);
    }
    return prod;
}

double minorant_sum(const sieves::CoefficientTable& table, double Y, double u,
                    const StepKernel& kernel) {
    if (Y <= 1.0 || u <= 0.0) throw std::domain_error("minorant_sum: need Y > 1 and u > 0");
    long long limit = (long long)std::floor(std::pow(Y, u) * (1.0 + 1e-12));
    if (limit > table.x_max) throw std::out_of_range("minorant_sum: Y^u beyond table range");

    auto spf = sieves::spf_sieve(limit);
    const double logY = std::log(Y);
    std::vector<double> alpha_p(limit + 1, 0.0);
    for (long long p = 2; p <= limit; ++p)
        if (spf[p] == p) alpha_p[p] = alpha_eval(kernel, std::log((double)p) / logY);

    moments::KahanSum acc;
    acc.add(1.0);  // n = 1
    for (long long n = 2; n <= limit; ++n) {
        if (!table.mu_sq[n] || !table.coprime_N[n] || table.r_star[n] == 0) continue;
        double h = 1.0;
        long long m = n;
        while (m > 1) {
            long long p = spf[m];
            h *= alpha_p[p];
            m /= p;
        }
        acc.add(h * (double)table.r_star[n]);
    }
    return acc.value();
}

// ---------------------------------------------------------------------------
// sigma(u): Volterra march.
//
// The equation u sigma(u) = int_0^u sigma(t) alpha(u-t) dt holds on all of
// (0, u_max]; the solution is pinned by sigma(u)/u^(alpha0-1) -> 1 as u -> 0+
// (only the alpha0 branch is active in the limit), so the march seeds
// sigma = u^(alpha0-1) on the first grid cell, where the deviation is
// O(step^3), and solves the equation at every later grid point. Freezing
// sigma = u^(alpha0-1) on all of (0, 1] instead is not consistent with the
// equation (alpha < alpha0 on (0, 1]) and fails the cross-check against the
// series solution by ~0.2.
//
// On the uniform grid the cumulative integral I(t) = int_0^t sigma is kept as
// exact trapezoid values; alpha(u - t) is piecewise constant in t, so the
// right-hand side integral is a finite combination of I evaluations at the
// jump points u - 1/m. Pieces finer than 1/M_TAIL are merged into an alpha0
// piece (alpha0 - alpha < pi^2/M_TAIL^2 there). The evaluation at points
// inside the cell being marched is linear in the unknown sigma_i, so each
// step solves u sigma_i = A + B sigma_i.
// ---------------------------------------------------------------------------

SigmaSolution sigma_march(const StepKernel& kernel, double u_max, double step) {
    if (!(u_max > 0.0) || u_max > 2.0) throw std::domain_error("sigma_march: need 0 < u_max <= 2");
    if (!(step > 0.0) || step > 1e-3 * (1.0 + 1e-12))
        throw std::domain_error("sigma_march: step too coarse for the breakpoint spacing");

    const long long n = (long long)std::ceil(u_max / step - 1e-9);
    const double h = u_max / (double)n;
    SigmaSolution sol;
    sol.step = h;
    sol.method = "march";
    sol.grid_u.resize(n + 1);
    sol.values.resize(n + 1);
    for (long long i = 0; i <= n; ++i) sol.grid_u[i] = (double)i * h;

    const long long M_TAIL = std::max<long long>(1000, (long long)(4.0 / step));
    std::vector<double> alpha_m(M_TAIL + 1, 0.0);
    for (long long m = 1; m <= M_TAIL; ++m) alpha_m[m] = 2.0 * std::cos(kPi / (double)(m + 1));

    std::vector<double> I(n + 1, 0.0);  // cumulative integral at grid points
    sol.values[0] = 0.0;
    for (long long i = 1; i <= n; ++i) {
        const double u = sol.grid_u[i];
        if (i == 1) {
            sol.values[i] = std::pow(u, kernel.alpha0 - 1.0);  // seed cell
        } else {
            // I(t) = known + ci * sigma_i  (ci != 0 only inside the last cell)
            auto I_at = [&](double t) -> std::pair<double, double> {
                t = std::clamp(t, 0.0, u);
                long long j = std::min((long long)(t / h), i - 1);
                double dt = t - sol.grid_u[j];
                if (j < i - 1) {
                    double slope = (sol.values[j + 1] - sol.values[j]) / h;
                    return {I[j] + dt * sol.values[j] + 0.5 * dt * dt * slope, 0.0};
                }
                double known = I[j] + dt * sol.values[j] - 0.5 * dt * dt / h * sol.values[j];
                return {known, 0.5 * dt * dt / h};
            };
            double A = 0.0, B = 0.0;
            auto add_piece = [&](double alpha_value, double lo, double hi) {
                lo = std::max(lo, 0.0);
                hi = std::min(hi, u);
                if (hi <= lo) return;
                auto [k1, c1] = I_at(lo);
                auto [k2, c2] = I_at(hi);
                A += alpha_value * (k2 - k1);
                B += alpha_value * (c2 - c1);
            };
            add_piece(-2.0, 0.0, u - 1.0);
            for (long long m = 1; m < M_TAIL; ++m)
                add_piece(alpha_m[m], u - 1.0 / (double)m, u - 1.0 / (double)(m + 1));
            add_piece(kernel.alpha0, u - 1.0 / (double)M_TAIL, u);
            sol.values[i] = A / (u - B);
        }
        I[i] = I[i - 1] + 0.5 * h * (sol.values[i - 1] + sol.values[i]);
    }
    return sol;
}

double SigmaSolution::value_at(double u) const {
    if (grid_u.empty() || u < 0.0 || u > grid_u.back() + 1e-12)
        throw std::out_of_range("SigmaSolution: u outside grid");
    u = std::min(u, grid_u.back());
    size_t j = std::min((size_t)(u / step), grid_u.size() - 2);
    double w = (u - grid_u[j]) / step;
    return values[j] * (1.0 - w) + values[j + 1] * w;
}

// ---------------------------------------------------------------------------
// sigma(u): simplex series via iterated convolution. With
//   g(t) = (alpha0 - alpha(t))/t   (bounded: g = O(t) near 0, g <= 4),
// the term I_j satisfies I_j(u) = int_0^u g(t) I_{j-1}(u-t) dt, I_0(s) = s.
// Each level is integrated piecewise-Simpson between the alpha breakpoints
// 1/m and the grid knots; below 1/M_KNOT the integrand is dropped
// (g < pi^2 t there, contributing O(1/M_KNOT^2)).
// ---------------------------------------------------------------------------

namespace {

struct SeriesGrid {
    double h = 0.0;
    std::vector<double> knots;  // ascending, within (0, u]
};

double interp(const std::vector<double>& v, double h, double x) {
    if (x <= 0.0) return 0.0;
    size_t j = std::min((size_t)(x / h), v.size() - 2);
    double w = (x - (double)j * h) / h;
    return v[j] * (1.0 - w) + v[j + 1] * w;
}

std::vector<double> convolve_level(const StepKernel& kernel, const SeriesGrid& grid,
                                   long long n, const std::vector<double>& prev) {
    std::vector<double> next(n + 1, 0.0);
    for (long long i = 1; i <= n; ++i) {
        double s = (double)i * grid.h;
        double acc = 0.0;
        double a = grid.knots.front();
        for (size_t k = 1; k < grid.knots.size() && a < s; ++k) {
            double b = std::min(grid.knots[k], s);
            if (b <= a) continue;
            double mid = 0.5 * (a + b);
            // alpha is constant on the piece interior; take the branch at
            // the midpoint so the endpoint values do not jump branches
            double w = kernel.alpha0 - alpha_eval(kernel, mid);
            double fa = w / a * interp(prev, grid.h, s - a);
            double fm = w / mid * interp(prev, grid.h, s - mid);
            double fb = w / b * interp(prev, grid.h, s - b);
            acc += (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            a = b;
        }
        next[i] = acc;
    }
    return next;
}

}  // namespace

double sigma_series_term(const StepKernel& kernel, double u, int j, double step) {
    if (!(u > 0.0) || u > 4.0 / 3.0 + 1e-12)
        throw std::domain_error("sigma_series: need 0 < u <= 4/3");
    if (j < 1 || j > 4) throw std::domain_error("sigma_series: j must be in 1..4");

    const long long n = (long long)std::ceil(u / step - 1e-9);
    SeriesGrid grid;
    grid.h = u / (double)n;
    const long long M_KNOT = 2000;
    for (long long m = M_KNOT; m >= 1; --m) grid.knots.push_back(1.0 / (double)m);
    for (long long i = 1; i <= n; ++i) grid.knots.push_back((double)i * grid.h);
    std::sort(grid.knots.begin(), grid.knots.end());
    grid.knots.erase(std::unique(grid.knots.begin(), grid.knots.end()), grid.knots.end());

    std::vector<double> J(n + 1);
    for (long long i = 0; i <= n; ++i)
        J[i] = std::pow((double)i * grid.h, kernel.alpha0 - 1.0);
    for (int level = 1; level <= j; ++level) J = convolve_level(kernel, grid, n, J);
    return J[n];
}

double sigma_series(const StepKernel& kernel, double u, int j_max, double step) {
    if (j_max < 0 || j_max > 4) throw std::domain_error("sigma_series: j_max must be in 0..4");
    double value = std::pow(u, kernel.alpha0 - 1.0);
    double factorial = 1.0;
    for (int j = 1; j <= j_max; ++j) {
        factorial *= j;
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        value += sign / factorial * sigma_series_term(kernel, u, j, step);
    }
    return value;
}

bool satake_step_property(int m, double theta_resolution) {
    if (m < 1 || m > 20) throw std::domain_error("satake_step_property: m must be in 1..20");
    if (!(theta_resolution > 0.0)) throw std::domain_error("satake_step_property: bad resolution");
    const double threshold = 2.0 * std::cos(kPi / (double)(m + 1)) - 4.0 * theta_resolution;
    for (double theta = theta_resolution; theta < kPi; theta += theta_resolution) {
        double two_cos = 2.0 * std::cos(theta);
        bool hypothesis = true;
        double prev = 1.0, cur = two_cos;  // U_0, U_1 of 2cos(theta)
        for (int j = 1; j <= m; ++j) {
            if (cur < 0.0) {
                hypothesis = false;
                break;
            }
            double next = two_cos * cur - prev;
            prev = cur;
            cur = next;
        }
        if (hypothesis && two_cos < threshold) return false;
    }
    return true;
}

GConvolutionReport g_convolution_check(const sieves::CoefficientTable& table, double Y) {
    if (Y <= 1.0) throw std::domain_error("g_convolution_check: Y must be > 1");
    GConvolutionReport rep;
    StepKernel kernel;
    const double logY = std::log(Y);
    auto spf = sieves::spf_sieve(table.x_max);

    // hypothesis: lambda(p) >= 0 (exact coefficient sign) at represented
    // primes p <= Y coprime to N
    rep.lambda_hypothesis_holds = true;
    for (long long p = 2; p <= std::min((long long)Y, table.x_max); ++p) {
        if (spf[p] != p || !table.coprime_N[p] || table.r_star[p] == 0) continue;
        if (table.form->a[p] < 0) {
            rep.lambda_hypothesis_holds = false;
            break;
        }
    }
    rep.used_synthetic = !rep.lambda_hypothesis_holds;
    const double synthetic_lp = 2.0 * std::cos(kPi / 4.0);
    auto lam_p = [&](long long p) {
        return rep.used_synthetic ? synthetic_lp : table.lambda[p];
    };

    rep.prime_nonneg = true;
    for (long long p = 2; p <= table.x_max; ++p) {
        if (spf[p] != p || !table.coprime_N[p]) continue;
        double g = (lam_p(p) - alpha_eval(kernel, std::log((double)p) / logY)) *
                   (double)table.r_star[p];
        if (g < -1e-9) {
            rep.prime_nonneg = false;
            break;
        }
    }

    moments::KahanSum lam_sum, h_sum;
    for (long long n = 1; n <= table.x_max; ++n) {
        if (!table.mu_sq[n] || !table.coprime_N[n] || table.r_star[n] == 0) continue;
        double lam = 1.0, h = 1.0;
        long long m = n;
        while (m > 1) {
            long long p = spf[m];
            lam *= lam_p(p);
            h *= alpha_eval(kernel, std::log((double)p) / logY);
            m /= p;
        }
        lam_sum.add(lam * (double)table.r_star[n]);
        h_sum.add(h * (double)table.r_star[n]);
    }
    rep.sum_inequality = lam_sum.value() >= h_sum.value() - 1e-9;
    return rep;
}

SignChangeRecord first_sign_change(const sieves::CoefficientTable& table) {
    SignChangeRecord rec;
    rec.label = table.label;
    rec.level = table.level;
    rec.weight = table.weight;
    rec.disc = table.disc;
    rec.scan_bound = table.x_max;
    rec.bound = std::pow((double)table.level * table.weight * table.weight *
                             (double)(table.disc * table.disc),
                         0.75);
    auto form = qforms::enumerate_reduced_forms(table.disc).at(0);
    for (long long n = 2; n <= table.x_max; ++n) {
        if (!table.mu_sq[n] || !table.coprime_N[n] || table.r_star[n] <= 0) continue;
        double lam = table.lambda[n];
        bool negative;
        if (lam < -1e-12)
            negative = true;
        else if (lam <= 1e-12)
            negative = table.form->a[n] < 0;  // exact sign breaks the tie
        else
            negative = false;
        if (!negative) continue;
        // r* > 0 is only a pre-filter: for non-fundamental discriminants it
        // can be positive at conductor-sharing n that the form does not
        // actually represent, so the witness search is authoritative
        auto w = qforms::find_representation(form, n);
        if (!w) continue;
        rec.found = true;
        rec.n_first = n;
        rec.lambda_value = lam;
        rec.ratio = (double)n / rec.bound;
        rec.witness_x1 = w->first;
        rec.witness_x2 = w->second;
        return rec;
    }
    return rec;
}

}  // namespace bqfmom::signchange
