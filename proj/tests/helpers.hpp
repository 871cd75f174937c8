#ifndef BQFMOM_TESTS_HELPERS_HPP
#define BQFMOM_TESTS_HELPERS_HPP

// Shared catalog entries for the test binary, cached per label at the deepest
// depth requested so far.

#include <map>
#include <memory>
#include <string>

#include "bqfmom/eigenforms.hpp"
#include "bqfmom/sieves.hpp"

namespace helpers {

inline std::shared_ptr<const bqfmom::eigenforms::EigenformEntry> entry(
    const std::string& label, long long depth) {
    static std::map<std::string, std::shared_ptr<const bqfmom::eigenforms::EigenformEntry>>
        cache;
    auto it = cache.find(label);
    if (it == cache.end() || it->second->depth() < depth) {
        const auto* spec = bqfmom::eigenforms::find_spec(label);
        if (!spec) throw std::invalid_argument("unknown test form " + label);
        cache[label] = std::make_shared<bqfmom::eigenforms::EigenformEntry>(
            bqfmom::eigenforms::make_entry(*spec, depth));
        it = cache.find(label);
    }
    return it->second;
}

inline bqfmom::sieves::CoefficientTable table(const std::string& label, long long D,
                                              long long x_max) {
    return bqfmom::sieves::build_table(entry(label, x_max), D, x_max);
}

}  // namespace helpers

#endif
