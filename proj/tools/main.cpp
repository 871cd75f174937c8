// bqfmom: verification runs for Hecke-eigenvalue sums over binary quadratic
// form values. Subcommands produce deterministic CSV/JSON reports; `verify`
// runs the whole gate suite and exits nonzero on any failure.
//
// Exit codes: 0 pass, 1 gate or runtime failure, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bqfmom/dirichlet.hpp"
#include "bqfmom/eigenforms.hpp"
#include "bqfmom/int128_io.hpp"
#include "bqfmom/moments.hpp"
#include "bqfmom/qforms.hpp"
#include "bqfmom/sieves.hpp"
#include "bqfmom/signchange.hpp"
#include "bqfmom/version.hpp"
#include "verify_suite.hpp"

using nlohmann::ordered_json;
using namespace bqfmom;

namespace {

std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << text;
}

bool is_catalog_disc(long long D) {
    for (long long d : qforms::kClassNumberOneDiscs)
        if (d == D) return true;
    return false;
}

struct FormArgs {
    std::string form = "delta";
    long long disc = -4;
    long long x_max = 1000000;
    std::string cache_dir;
    std::string out;
    uint64_t seed = 1;
    int threads = 1;
    bool force = false;
};

void add_form_options(CLI::App* cmd, FormArgs& a, bool with_disc = true) {
    cmd->add_option("--form", a.form, "catalog form label (delta, d2k8, d5k4, d11k2)");
    if (with_disc) cmd->add_option("--disc", a.disc, "negative discriminant");
    cmd->add_option("--xmax", a.x_max, "table depth / largest checkpoint");
    cmd->add_option("--cache-dir", a.cache_dir, "coefficient cache directory");
    cmd->add_option("--out", a.out, "output file (default stdout)");
    cmd->add_option("--seed", a.seed, "seed for sampled validation");
    cmd->add_option("--threads", a.threads, "worker threads for checkpointed sums")
        ->check(CLI::Range(1, 256));
    cmd->add_flag("--force", a.force, "allow discriminants outside the catalog list");
}

sieves::CoefficientTable make_table(const FormArgs& a) {
    const auto* spec = eigenforms::find_spec(a.form);
    if (!spec) throw CLI::ValidationError("--form", "unknown form label " + a.form);
    if (!is_catalog_disc(a.disc) && !a.force)
        throw CLI::ValidationError("--disc",
                                   "discriminant outside the class-number-one catalog "
                                   "(use --force to override)");
    if (a.x_max < 1 || a.x_max > (3LL << 20))
        throw CLI::ValidationError("--xmax", "supported range is 1 .. 3*2^20");
    auto entry = verify::load_or_build_entry(*spec, a.x_max, a.cache_dir, a.seed);
    return sieves::build_table(entry, a.disc, a.x_max);
}

ordered_json config_json(const FormArgs& a, bool with_disc = true) {
    ordered_json c{{"form", a.form}, {"xmax", a.x_max}, {"threads", a.threads},
                   {"seed", a.seed}};
    if (with_disc) c["disc"] = a.disc;
    return c;
}

// ---- subcommands -----------------------------------------------------------

int cmd_catalog(bool as_json) {
    if (as_json) {
        ordered_json j;
        j["version"] = std::string(kVersion);
        j["forms"] = ordered_json::array();
        for (const auto& s : eigenforms::catalog_specs()) {
            ordered_json f{{"label", s.label}, {"level", s.level}, {"weight", s.weight}};
            ordered_json factors = ordered_json::array();
            for (const auto& fac : s.factors)
                factors.push_back({{"scale", fac.scale}, {"exponent", fac.exponent}});
            f["eta_factors"] = factors;
            j["forms"].push_back(f);
        }
        j["discriminants"] = ordered_json::array();
        for (long long D : qforms::kClassNumberOneDiscs) {
            auto form = qforms::enumerate_reduced_forms(D).at(0);
            j["discriminants"].push_back({{"D", D},
                                          {"reduced_form", {form.a, form.b, form.c}},
                                          {"w_D", qforms::unit_count(D)},
                                          {"fundamental", qforms::is_fundamental(D)}});
        }
        std::fputs((j.dump(2) + "\n").c_str(), stdout);
        return 0;
    }
    std::printf("catalog forms:\n");
    for (const auto& s : eigenforms::catalog_specs()) {
        std::printf("  %-6s level %2lld, weight %2d, eta quotient", s.label.c_str(), s.level,
                    s.weight);
        for (const auto& f : s.factors) std::printf(" (%lld)^%d", f.scale, f.exponent);
        std::printf("\n");
    }
    std::printf("class-number-one discriminants:\n");
    for (long long D : qforms::kClassNumberOneDiscs) {
        auto f = qforms::enumerate_reduced_forms(D).at(0);
        std::printf("  D = %-5lld reduced form (%lld, %lld, %lld), w_D = %d%s\n", D, f.a, f.b,
                    f.c, qforms::unit_count(D),
                    qforms::is_fundamental(D) ? "" : "  (non-fundamental)");
    }
    return 0;
}

int cmd_coeffs(const FormArgs& a) {
    const auto* spec = eigenforms::find_spec(a.form);
    if (!spec) throw CLI::ValidationError("--form", "unknown form label " + a.form);
    auto entry = verify::load_or_build_entry(*spec, a.x_max, a.cache_dir, a.seed);
    std::string path = a.out;
    if (path.empty())
        path = eigenforms::coeff_cache_filename(spec->level, spec->weight);
    eigenforms::write_coeff_csv(*entry, path);
    std::printf("wrote %lld coefficients for %s to %s\n", entry->depth(), a.form.c_str(),
                path.c_str());
    return 0;
}

int cmd_sum(const FormArgs& a, long long from, bool eta_mean, int eta) {
    auto table = make_table(a);
    auto cps = moments::dyadic_checkpoints(from, a.x_max);
    moments::SumReport rep = eta_mean ? moments::sum_E(table, eta, cps, a.threads)
                                      : moments::sum_S(table, cps, a.threads);
    double P1 = 0.0, L1 = 0.0;
    if (eta_mean) {
        P1 = dirichlet::P_euler({1.0, 0.0}, a.disc, table.level, eta, 1000000).value.real();
        L1 = dirichlet::L1_chi(a.disc, dirichlet::L1Method::DirectSum);
    }
    std::string csv = "X,S_star,w_D_S,main_term,ratio\n";
    for (size_t i = 0; i < rep.checkpoints.size(); ++i) {
        auto& cp = rep.checkpoints[i];
        csv += std::to_string(cp.x) + "," + fmt_g(cp.value) + "," + fmt_g(rep.w_d_scaled[i]);
        if (eta_mean) {
            double mt = P1 * std::pow(L1, eta) / std::tgamma((double)eta) * (double)cp.x *
                        std::pow(std::log((double)cp.x), eta - 1);
            csv += "," + fmt_g(mt) + "," + fmt_g(cp.value / mt);
        } else {
            csv += ",,";
        }
        csv += "\n";
    }
    write_text(a.out, csv);
    return 0;
}

int cmd_slope(const FormArgs& a, long long fit_min, long long fit_max) {
    fit_max = std::min(fit_max, a.x_max);
    auto table = make_table(a);
    auto cps = moments::dyadic_checkpoints(1 << 10, a.x_max);
    auto rep = moments::sum_S(table, cps, a.threads);
    double slope = moments::fit_slope(rep, fit_min, fit_max);
    double conductor = std::sqrt((double)table.level * table.weight * table.weight *
                                 std::llabs(table.disc));
    ordered_json j;
    j["version"] = std::string(kVersion);
    j["config"] = config_json(a);
    j["config"]["fit_min"] = fit_min;
    j["config"]["fit_max"] = fit_max;
    j["checkpoints"] = ordered_json::array();
    double bound_constant = 0.0;
    for (auto& cp : rep.checkpoints) {
        double c = std::abs(cp.value) / std::sqrt((double)cp.x) / conductor;
        bound_constant = std::max(bound_constant, c);
        j["checkpoints"].push_back(
            {{"X", cp.x}, {"S_star", cp.value}, {"theorem1_constant", c}});
    }
    j["fitted_slope"] = slope;
    j["bound_constant"] = bound_constant;
    write_text(a.out, j.dump(2) + "\n");
    return 0;
}

int cmd_sigma(double u_max, double step, int j_max, const std::string& out,
              const std::string& csv_out) {
    signchange::StepKernel kernel;
    auto march = signchange::sigma_march(kernel, u_max, step);
    ordered_json j;
    j["version"] = std::string(kVersion);
    j["config"] = {{"umax", u_max}, {"step", step}, {"jmax", j_max}};
    ordered_json grid = ordered_json::array();
    double series_max_gap = 0.0;
    for (double u = 0.05; u <= u_max + 1e-12; u += 0.05) {
        double uu = std::min(u, u_max);
        double m = march.value_at(uu);
        double s = uu <= 4.0 / 3.0 + 1e-12
                       ? signchange::sigma_series(kernel, std::min(uu, 4.0 / 3.0), j_max, step)
                       : std::numeric_limits<double>::quiet_NaN();
        if (!std::isnan(s)) series_max_gap = std::max(series_max_gap, std::abs(m - s));
        grid.push_back({{"u", uu}, {"sigma_march", m}, {"sigma_series", s}});
    }
    j["grid"] = grid;
    if (u_max >= 4.0 / 3.0 - 1e-12) {
        j["sigma_4_3_march"] = march.value_at(4.0 / 3.0);
        j["sigma_4_3_series"] = signchange::sigma_series(kernel, 4.0 / 3.0, j_max, step);
        j["sigma_4_3_positive"] = march.value_at(4.0 / 3.0) > 0.0;
    }
    j["march_step"] = march.step;
    j["cross_method_max_gap"] = series_max_gap;
    if (!csv_out.empty()) {
        std::string csv = "u,sigma_march,sigma_series\n";
        for (const auto& row : grid) {
            csv += fmt_g(row["u"].get<double>()) + "," + fmt_g(row["sigma_march"].get<double>());
            csv += ",";
            if (!row["sigma_series"].is_null()) csv += fmt_g(row["sigma_series"].get<double>());
            csv += "\n";
        }
        write_text(csv_out, csv);
    }
    write_text(out, j.dump(2) + "\n");
    return 0;
}

int cmd_sign_change(const FormArgs& a) {
    auto table = make_table(a);
    auto rec = signchange::first_sign_change(table);
    ordered_json j;
    j["version"] = std::string(kVersion);
    j["config"] = config_json(a);
    j["label"] = rec.label;
    j["level"] = rec.level;
    j["weight"] = rec.weight;
    j["disc"] = rec.disc;
    j["found"] = rec.found;
    if (rec.found) {
        j["n_first"] = rec.n_first;
        j["witness"] = {rec.witness_x1, rec.witness_x2};
        j["lambda_value"] = rec.lambda_value;
        j["bound"] = rec.bound;
        j["ratio"] = rec.ratio;
    }
    j["scan_bound"] = rec.scan_bound;
    write_text(a.out, j.dump(2) + "\n");
    return rec.found ? 0 : 1;
}

int cmd_eta_mean(const FormArgs& a, int eta) { return cmd_sum(a, 1 << 10, true, eta); }

int cmd_verify(verify::VerifyConfig cfg, const std::string& report_path,
               const std::string& records_path) {
    std::printf("%s verify\n", std::string(kVersion).c_str());
    std::vector<ordered_json> records;
    auto gates = verify::run_gates(cfg, records_path.empty() ? nullptr : &records);
    bool all = true;
    for (const auto& g : gates) all = all && g.pass;
    auto j = verify::gates_to_json(cfg, gates);
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        out << j.dump(2) << "\n";
        std::printf("report written to %s\n", report_path.c_str());
    }
    if (!records_path.empty()) {
        std::ofstream out(records_path, std::ios::binary);
        for (const auto& r : records) out << r.dump() << "\n";
        std::printf("%zu check records written to %s\n", records.size(), records_path.c_str());
    }
    if (!all) {
        for (const auto& g : gates)
            if (!g.pass) std::printf("FAILED gate: %s\n", g.name.c_str());
    }
    std::printf("verify: %s\n", all ? "PASS" : "FAIL");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " - Hecke eigenvalue sums over binary quadratic form values"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a key=value file");

    // catalog
    bool catalog_json = false;
    auto* catalog = app.add_subcommand("catalog", "list catalog forms and discriminants");
    catalog->add_flag("--json", catalog_json, "machine-readable output");

    // verify
    auto* ver = app.add_subcommand("verify", "run the verification gate suite");
    bool quick = false;
    long long ver_xmax = 100000;
    std::string ver_cache, ver_report;
    uint64_t ver_seed = 1;
    int ver_threads = 1;
    ver->add_flag("--quick", quick, "reduced ranges, finishes in seconds");
    ver->add_option("--xmax", ver_xmax, "table depth for scans");
    ver->add_option("--cache-dir", ver_cache, "coefficient cache directory");
    ver->add_option("--report", ver_report, "write a JSON gate report here");
    std::string ver_records;
    ver->add_option("--records", ver_records, "write per-check JSON lines here");
    ver->add_option("--seed", ver_seed, "seed for sampled validation");
    ver->add_option("--threads", ver_threads, "worker threads")->check(CLI::Range(1, 256));

    // coeffs
    FormArgs coeffs_args;
    coeffs_args.x_max = 100000;
    auto* coeffs = app.add_subcommand("coeffs", "compute or refresh a coefficient cache");
    coeffs->add_option("--form", coeffs_args.form, "catalog form label");
    coeffs->add_option("--prec", coeffs_args.x_max, "number of coefficients");
    coeffs->add_option("--cache-dir", coeffs_args.cache_dir, "cache directory to reuse");
    coeffs->add_option("--out", coeffs_args.out, "output CSV path");
    coeffs->add_option("--seed", coeffs_args.seed, "seed for sampled validation");

    // sum
    FormArgs sum_args;
    long long sum_from = 1 << 10;
    auto* sum = app.add_subcommand("sum", "checkpointed S*(X) sums");
    add_form_options(sum, sum_args);
    sum->add_option("--from", sum_from, "first dyadic checkpoint");

    // eta-mean
    FormArgs eta_args;
    int eta = 1;
    auto* etac = app.add_subcommand("eta-mean", "E_eta(X) against its main term");
    add_form_options(etac, eta_args);
    etac->add_option("--eta", eta, "weight eta^omega(n)")->check(CLI::Range(1, 8));

    // sigma
    double u_max = 4.0 / 3.0, sigma_step = 1e-3;
    int j_max = 4;
    std::string sigma_out, sigma_csv;
    auto* sigma = app.add_subcommand("sigma", "delay-equation solution by two methods");
    sigma->add_option("--umax", u_max, "right end of the u grid");
    sigma->add_option("--step", sigma_step, "march grid step");
    sigma->add_option("--jmax", j_max, "series truncation order")->check(CLI::Range(0, 4));
    sigma->add_option("--out", sigma_out, "output JSON path");
    sigma->add_option("--csv", sigma_csv, "also write a (u, sigma_march, sigma_series) CSV");

    // sign-change
    FormArgs sc_args;
    sc_args.x_max = 100000;
    auto* sc = app.add_subcommand("sign-change", "first sign change record");
    add_form_options(sc, sc_args);

    // slope
    FormArgs slope_args;
    slope_args.x_max = 1 << 20;
    long long fit_min = 1 << 14, fit_max = 1LL << 62;  // clamped to xmax
    auto* slope = app.add_subcommand("slope", "log-log slope of |S*(X)|");
    add_form_options(slope, slope_args);
    slope->add_option("--fit-min", fit_min, "smallest checkpoint used in the fit");
    slope->add_option("--fit-max", fit_max, "largest checkpoint used in the fit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (*catalog) return cmd_catalog(catalog_json);
        if (*ver) {
            verify::VerifyConfig cfg;
            if (quick) cfg = verify::VerifyConfig::quick();
            if (ver->count("--xmax")) cfg.x_max = ver_xmax;
            cfg.cache_dir = ver_cache;
            cfg.seed = ver_seed;
            cfg.threads = ver_threads;
            return cmd_verify(cfg, ver_report, ver_records);
        }
        if (*coeffs) return cmd_coeffs(coeffs_args);
        if (*sum) return cmd_sum(sum_args, sum_from, false, 1);
        if (*etac) return cmd_eta_mean(eta_args, eta);
        if (*sigma) return cmd_sigma(u_max, sigma_step, j_max, sigma_out, sigma_csv);
        if (*sc) return cmd_sign_change(sc_args);
        if (*slope) return cmd_slope(slope_args, fit_min, fit_max);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
