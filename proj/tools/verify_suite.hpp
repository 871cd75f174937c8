#ifndef BQFMOM_VERIFY_SUITE_HPP
#define BQFMOM_VERIFY_SUITE_HPP

// The `verify` command's gate suite: representation-formula oracle equality,
// the exact Hecke suite with the Deligne bound, the two Dirichlet-series
// factorisation identities, L(1, chi_D) by two methods, the sigma(u)
// cross-check, and the first-sign-change records.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

namespace bqfmom::verify {

struct VerifyConfig {
    long long x_max = 100000;        // table depth for sign-change scans
    long long qforms_n_max = 100000; // representation oracle range
    long long hecke_mn_max = 10000;
    long long deligne_p_max = 100000;
    long long identity_n_max = 2000;
    long long l1_terms = 10000000;
    std::string cache_dir;  // when set, coefficient caches are reused
    uint64_t seed = 1;
    int threads = 1;

    static VerifyConfig quick() {
        VerifyConfig c;
        c.x_max = 10000;
        c.qforms_n_max = 10000;
        c.hecke_mn_max = 10000;
        c.deligne_p_max = 10000;
        c.identity_n_max = 500;
        return c;
    }
};

struct GateResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

}  // namespace bqfmom::verify

namespace bqfmom::eigenforms {
struct EtaQuotient;
struct EigenformEntry;
}

namespace bqfmom::verify {

// Reuses a CSV coefficient cache under cache_dir when present and deep
// enough, rebuilding (and rewriting the cache) otherwise.
std::shared_ptr<const eigenforms::EigenformEntry> load_or_build_entry(
    const eigenforms::EtaQuotient& spec, long long depth, const std::string& cache_dir,
    uint64_t seed);

// Runs all gates, printing one line per gate to stdout. Returns the results;
// overall pass iff every gate passed. When `records` is non-null, one JSON
// object per Dirichlet-series check ({check, params, deviation or value,
// tail_bound}) is appended to it.
std::vector<GateResult> run_gates(const VerifyConfig& config,
                                  std::vector<nlohmann::ordered_json>* records = nullptr);

nlohmann::ordered_json gates_to_json(const VerifyConfig& config,
                                     const std::vector<GateResult>& gates);

}  // namespace bqfmom::verify

#endif
