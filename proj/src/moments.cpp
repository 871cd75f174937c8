#include "bqfmom/moments.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "bqfmom/dirichlet.hpp"
#include "bqfmom/qforms.hpp"

namespace bqfmom::moments {

namespace {

void validate_checkpoints(std::span<const long long> cps, long long x_max) {
    if (cps.empty()) throw std::domain_error("sum: no checkpoints");
    long long prev = 0;
    for (long long x : cps) {
        if (x <= prev) throw std::domain_error("sum: checkpoints must be strictly increasing");
        prev = x;
    }
    if (prev > x_max) throw std::out_of_range("sum: checkpoint beyond table range");
}

// weight(n) summed over squarefree coprime n, checkpointed
template <typename Weight>
SumReport checkpointed_sum(const sieves::CoefficientTable& table,
                           std::span<const long long> cps, int threads, Weight&& weight) {
    validate_checkpoints(cps, table.x_max);
    auto segment = [&](long long lo, long long hi) {  // (lo, hi]
        KahanSum acc;
        for (long long n = lo + 1; n <= hi; ++n)
            if (table.mu_sq[n] && table.coprime_N[n]) acc.add(weight(n));
        return acc;
    };

    std::vector<KahanSum> partial(cps.size());
    if (threads <= 1) {
        long long lo = 0;
        for (size_t i = 0; i < cps.size(); ++i) {
            partial[i] = segment(lo, cps[i]);
            lo = cps[i];
        }
    } else {
        std::vector<std::future<KahanSum>> jobs;
        long long lo = 0;
        for (size_t i = 0; i < cps.size(); ++i) {
            jobs.push_back(std::async(std::launch::async, segment, lo, cps[i]));
            lo = cps[i];
        }
        for (size_t i = 0; i < cps.size(); ++i) partial[i] = jobs[i].get();
    }

    SumReport rep;
    rep.label = table.label;
    rep.level = table.level;
    rep.weight = table.weight;
    rep.disc = table.disc;
    int w_d = qforms::unit_count(table.disc);
    KahanSum running;
    for (size_t i = 0; i < cps.size(); ++i) {
        running.merge(partial[i]);
        rep.checkpoints.push_back({cps[i], running.value()});
        rep.w_d_scaled.push_back(w_d * running.value());
    }
    return rep;
}

}  // namespace

std::vector<long long> dyadic_checkpoints(long long from, long long to) {
    std::vector<long long> cps;
    for (long long x = 1; x <= to && x > 0; x *= 2)
        if (x >= from) cps.push_back(x);
    if (!cps.empty() && cps.back() != to && to > from) cps.push_back(to);
    if (cps.empty()) cps.push_back(to);
    return cps;
}

SumReport sum_S(const sieves::CoefficientTable& table, std::span<const long long> cps,
                int threads) {
    return checkpointed_sum(table, cps, threads, [&](long long n) {
        return table.lambda[n] * (double)table.r_star[n];
    });
}

SumReport sum_E(const sieves::CoefficientTable& table, int eta,
                std::span<const long long> cps, int threads) {
    if (eta < 1) throw std::domain_error("sum_E: eta must be >= 1");
    double pow_eta[16];
    pow_eta[0] = 1.0;
    for (int i = 1; i < 16; ++i) pow_eta[i] = pow_eta[i - 1] * eta;
    auto rep = checkpointed_sum(table, cps, threads, [&](long long n) {
        return pow_eta[table.omega[n]] * (double)table.r_star[n];
    });
    rep.eta = eta;
    return rep;
}

double main_term_E(int eta, long long D, long long N, double X, long long p_cut) {
    if (eta < 1) throw std::domain_error("main_term_E: eta must be >= 1");
    if (X <= 1.0) throw std::domain_error("main_term_E: X must exceed 1");
    double P1 = dirichlet::P_euler({1.0, 0.0}, D, N, eta, p_cut).value.real();
    double L1 = dirichlet::L1_chi(D, dirichlet::L1Method::DirectSum);
    return P1 * std::pow(L1, eta) / std::tgamma((double)eta) * X *
           std::pow(std::log(X), eta - 1);
}

double fit_slope(const SumReport& report, long long x_min, long long x_max) {
    if (report.checkpoints.size() < 8)
        throw std::runtime_error("fit_slope: need at least 8 checkpoints");
    std::vector<double> xs, ys;
    bool any_nonzero = false;
    for (const auto& cp : report.checkpoints) {
        if (cp.x < x_min || cp.x > x_max) continue;
        if (cp.value != 0.0) any_nonzero = true;
        if (std::abs(cp.value) < 1.0) continue;  // log-singularity guard
        xs.push_back(std::log((double)cp.x));
        ys.push_back(std::log(std::abs(cp.value)));
    }
    if (!any_nonzero) throw std::runtime_error("fit_slope: all values zero");
    if (xs.size() < 4) throw std::runtime_error("fit_slope: fewer than 4 usable points");
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

}  // namespace bqfmom::moments
