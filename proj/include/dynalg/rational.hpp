#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace dynalg {

// Exact rational scalar. GMP keeps the invariants we need: canonical
// num/den with gcd 1, positive denominator, 0 == 0/1.
using Rational = mpq_class;

inline Rational rat(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_positive(const Rational& r) { return sgn(r) > 0; }
inline bool is_negative(const Rational& r) { return sgn(r) < 0; }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

// r^e for e >= 0.
inline Rational rat_pow(const Rational& base, unsigned long e) {
    Rational acc(1), b = base;
    while (e) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

// "7", "-3/4". Returns nullopt on malformed input instead of GMP's abort.
inline std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t i = 0;
    if (text[i] == '+' || text[i] == '-') ++i;
    if (i == text.size()) return std::nullopt;
    bool seen_slash = false;
    for (std::size_t j = i; j < text.size(); ++j) {
        if (text[j] == '/') {
            if (seen_slash || j + 1 == text.size()) return std::nullopt;
            seen_slash = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(text[j]))) return std::nullopt;
    }
    Rational r;
    if (r.set_str(text, 10) != 0) return std::nullopt;
    if (r.get_den() == 0) return std::nullopt;
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace dynalg
