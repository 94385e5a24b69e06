#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <ostream>
#include <string>
#include <string_view>

#include "hartigan/errors.hpp"

namespace hartigan {

/// Arbitrary-precision rational scalar.
///
/// Thin value wrapper around GMP's mpq_class. Every instance is kept in
/// canonical form (fully reduced, positive denominator), so equality is a
/// plain field comparison and there is no rounding anywhere. Decimal
/// literals ("-0.25", "1e-3") and fraction literals ("22/7") parse exactly.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    Rational(long num, long den) {
        if (den == 0) throw InvariantViolation("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    /// Exact parse of "123", "-4.56", "7.2e-3" or "num/den".
    static Rational parse(std::string_view text);

    double to_double() const { return v_.get_d(); }
    bool is_integer() const { return v_.get_den() == 1; }

    /// "n" for integers, "n/d" otherwise.
    std::string str() const {
        if (is_integer()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }
    std::string num_str() const { return v_.get_num().get_str(); }
    std::string den_str() const { return v_.get_den().get_str(); }

    int sign() const { return sgn(v_); }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.v_ == 0) throw InvariantViolation("Rational: division by zero");
        return Rational(mpq_class(a.v_ / b.v_));
    }
    Rational operator-() const { return Rational(mpq_class(-v_)); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend Rational abs(const Rational& a) { return Rational(mpq_class(::abs(a.v_))); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class v_;
};

inline Rational Rational::parse(std::string_view text) {
    auto fail = [&]() -> Rational {
        throw ParseError(0, 0, "not a numeric literal: '" + std::string(text) + "'");
    };
    if (text.empty()) return fail();

    // Fraction form.
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::string num(text.substr(0, slash));
        std::string den(text.substr(slash + 1));
        try {
            mpz_class num_z(num, 10);
            mpz_class den_z(den, 10);
            if (den_z == 0) return fail();
            mpq_class v{num_z, den_z};
            v.canonicalize();
            return Rational(std::move(v));
        } catch (const std::invalid_argument&) {
            return fail();
        }
    }

    // Decimal form: [+-]digits[.digits][(e|E)[+-]digits]
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = (text[i] == '-');
        ++i;
    }
    std::string digits;
    long frac_len = 0;
    bool seen_digit = false, seen_dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++frac_len;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (!seen_digit) return fail();
    long exp10 = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_neg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            exp_neg = (text[i] == '-');
            ++i;
        }
        if (i == text.size()) return fail();
        long e = 0;
        for (; i < text.size(); ++i) {
            if (text[i] < '0' || text[i] > '9') return fail();
            e = e * 10 + (text[i] - '0');
            if (e > 100000) return fail();
        }
        exp10 = exp_neg ? -e : e;
    }
    if (i != text.size()) return fail();

    mpz_class mantissa(digits.empty() ? "0" : digits, 10);  // base 10: "025" is not octal
    if (negative) mantissa = -mantissa;
    long net = exp10 - frac_len;
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
    mpq_class v = (net >= 0) ? mpq_class(mantissa * pow10) : mpq_class(mantissa, pow10);
    v.canonicalize();
    return Rational(std::move(v));
}

}  // namespace hartigan
