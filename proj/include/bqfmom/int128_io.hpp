#ifndef BQFMOM_INT128_IO_HPP
#define BQFMOM_INT128_IO_HPP

// Decimal conversion helpers for __int128 coefficients.
// Coefficient magnitudes in this project stay far below 2^127 (see
// eigenforms.hpp for the bound), but the cache file format is plain decimal,
// so we need exact string round-trips.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bqfmom {

using int128 = __int128;

inline std::string to_string_i128(int128 x) {
    if (x == 0) return "0";
    bool neg = x < 0;
    unsigned __int128 v = neg ? -(unsigned __int128)x : (unsigned __int128)x;
    char buf[48];
    int i = 48;
    while (v) {
        buf[--i] = char('0' + (int)(v % 10));
        v /= 10;
    }
    if (neg) buf[--i] = '-';
    return std::string(buf + i, 48 - i);
}

inline int128 parse_i128(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("parse_i128: empty string");
    bool neg = false;
    size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("parse_i128: no digits");
    unsigned __int128 v = 0;
    const unsigned __int128 limit = ((unsigned __int128)1) << 127;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c < '0' || c > '9')
            throw std::invalid_argument("parse_i128: bad digit in '" + std::string(s) + "'");
        v = v * 10 + (unsigned)(c - '0');
        if (v > limit) throw std::out_of_range("parse_i128: overflow");
    }
    if (!neg && v == limit) throw std::out_of_range("parse_i128: overflow");
    return neg ? -(int128)v : (int128)v;
}

}  // namespace bqfmom

// Stream output for tests and diagnostics.
inline std::ostream& operator<<(std::ostream& os, __int128 x) {
    return os << bqfmom::to_string_i128(x);
}

#endif
