#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace advsel {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational number, always normalized to lowest terms with a positive
// denominator.  Representativeness statistics are ratios of integers bounded
// by n^3 k^2, so arbitrary precision keeps every comparison and aggregate
// exact no matter the population size.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}

    Rational(long long value) : num_(value), den_(1) {}

    Rational(BigInt numerator, BigInt denominator)
        : num_(std::move(numerator)), den_(std::move(denominator)) {
        if (den_ == 0) {
            throw std::invalid_argument("Rational: zero denominator");
        }
        normalize();
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    // Parses "3", "-0.25", "1/3" or "2.5e-3".  Decimal inputs convert to the
    // exact fraction they denote, with no floating point rounding.
    static Rational parse(std::string_view text);

    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    Rational& operator+=(const Rational& o) {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
        normalize();
        return *this;
    }
    Rational& operator-=(const Rational& o) { return *this += -o; }
    Rational& operator*=(const Rational& o) {
        num_ *= o.num_;
        den_ *= o.den_;
        normalize();
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0) {
            throw std::invalid_argument("Rational: division by zero");
        }
        num_ *= o.den_;
        den_ *= o.num_;
        normalize();
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        // Denominators are positive, so cross multiplication preserves order.
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

    double to_double() const;

    // Decimal string with the given number of significant digits, rounded
    // half away from zero, e.g. 10/243 -> "0.0411522633745".
    std::string to_decimal_string(int significant_digits = 12) const;

    // "num/den", or just "num" when the denominator is 1.
    std::string to_fraction_string() const;

  private:
    void normalize();

    BigInt num_;
    BigInt den_;
};

}  // namespace advsel
