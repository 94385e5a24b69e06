#pragma once

#include <algorithm>
#include <charconv>
#include <string>
#include <string_view>

#include "hartigan/errors.hpp"
#include "hartigan/rational.hpp"

namespace hartigan {

// The scalar field is fixed per computation context: either the exact
// rational field (no rounding ever) or binary64. Generic code selects
// behavior through these traits.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double from_int(long v) { return static_cast<double>(v); }
    static double to_double(double v) { return v; }
    static double parse(std::string_view text) {
        double out = 0;
        const char* first = text.data();
        const char* last = text.data() + text.size();
        if (text.size() > 0 && text.front() == '+') ++first;  // from_chars rejects leading '+'
        auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc() || ptr != last)
            throw ParseError(0, 0, "not a numeric literal: '" + std::string(text) + "'");
        return out;
    }
    // Shortest decimal that round-trips.
    static std::string str(double v) {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        (void)ec;
        return std::string(buf, ptr);
    }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational from_int(long v) { return Rational(v); }
    static double to_double(const Rational& v) { return v.to_double(); }
    static Rational parse(std::string_view text) { return Rational::parse(text); }
    static std::string str(const Rational& v) { return v.str(); }
};

// Minimum gain for a search move to count as improving. Exact mode demands
// strict decrease; float mode needs a margin so rounding noise cannot keep
// a run alive forever.
template <class S>
inline S improvement_threshold(const S& current_potential) {
    if constexpr (scalar_traits<S>::exact) {
        (void)current_potential;
        return S(0);
    } else {
        return 1e-12 * std::max(1.0, current_potential);
    }
}

}  // namespace hartigan
