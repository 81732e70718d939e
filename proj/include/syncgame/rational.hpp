#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "syncgame/errors.hpp"

namespace syncgame {

/// Exact rational number, always kept in lowest terms with a positive denominator.
class Rational {
public:
    Rational() : value_(0) {}
    Rational(long n) : value_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(long n, long d) {
        if (d == 0) throw InputError("zero denominator");
        value_ = mpq_class(n, d);
        value_.canonicalize();
    }
    explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

    /// Parses "n" or "n/d" with optional leading sign on n.
    static Rational parse(std::string_view text) {
        std::string s(text);
        auto valid = [](const std::string& part, bool allow_sign) {
            if (part.empty()) return false;
            std::size_t i = 0;
            if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
            if (i == part.size()) return false;
            for (; i < part.size(); ++i)
                if (part[i] < '0' || part[i] > '9') return false;
            return true;
        };
        auto slash = s.find('/');
        std::string num = slash == std::string::npos ? s : s.substr(0, slash);
        std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
        if (!valid(num, true) || !valid(den, false))
            throw InputError("malformed rational \"" + s + "\"");
        if (num[0] == '+') num.erase(0, 1);
        mpz_class n(num, 10), d(den, 10);
        if (d == 0) throw InputError("zero denominator in \"" + s + "\"");
        return Rational(mpq_class(n, d));
    }

    /// Always "num/den", including "1/1" and "0/1".
    std::string str() const {
        return value_.get_num().get_str() + "/" + value_.get_den().get_str();
    }

    const mpq_class& raw() const { return value_; }
    bool is_zero() const { return sgn(value_) == 0; }
    bool is_positive() const { return sgn(value_) > 0; }
    bool is_one() const { return value_ == 1; }
    double to_double() const { return value_.get_d(); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw InvariantError("division by zero");
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

    std::size_t hash() const {
        std::size_t h = mpz_get_ui(value_.get_num_mpz_t());
        h = h * 1000003u ^ mpz_get_ui(value_.get_den_mpz_t());
        return sgn(value_) < 0 ? ~h : h;
    }

private:
    mpq_class value_;
};

inline Rational pow(const Rational& base, unsigned long exponent) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.raw().get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.raw().get_den_mpz_t(), exponent);
    return Rational(mpq_class(num, den));
}

}  // namespace syncgame
