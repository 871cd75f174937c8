#ifndef BQFMOM_VERSION_HPP
#define BQFMOM_VERSION_HPP

#include <string_view>

namespace bqfmom {

inline constexpr std::string_view kVersion = "bqfmom 0.1.0";

}

#endif
