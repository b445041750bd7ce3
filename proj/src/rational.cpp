#include "advsel/rational.hpp"

#include <cctype>

namespace advsel {

namespace {

// cpp_int's string constructor follows C++ literal rules, so a leading zero
// would flip it into octal.  Parse digit strings as decimal explicitly.
BigInt decimal_bigint(const std::string& text) {
    if (text.empty()) {
        throw std::invalid_argument("Rational: empty number");
    }
    std::size_t i = 0;
    bool negative = false;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        i = 1;
    }
    if (i == text.size()) {
        throw std::invalid_argument("Rational: malformed number '" + text + "'");
    }
    BigInt value = 0;
    for (; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            throw std::invalid_argument("Rational: malformed number '" + text + "'");
        }
        value = value * 10 + (text[i] - '0');
    }
    return negative ? BigInt(-value) : value;
}

}  // namespace

void Rational::normalize() {
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

double Rational::to_double() const {
    return num_.convert_to<double>() / den_.convert_to<double>();
}

std::string Rational::to_decimal_string(int significant_digits) const {
    if (significant_digits < 1) {
        throw std::invalid_argument("Rational: need at least one significant digit");
    }
    if (num_ == 0) {
        return "0";
    }
    BigInt abs_num = num_ < 0 ? BigInt(-num_) : num_;

    // Scale the fraction so the integer quotient carries exactly the digits
    // we keep.  exponent10 counts how many places the decimal point sits to
    // the right of the first significant digit.
    int exponent10 = 0;
    BigInt scaled_num = abs_num;
    BigInt scaled_den = den_;
    while (scaled_num < scaled_den) {
        scaled_num *= 10;
        --exponent10;
    }
    while (scaled_num >= scaled_den * 10) {
        scaled_den *= 10;
        ++exponent10;
    }
    // Now 1 <= scaled_num/scaled_den < 10.
    for (int i = 1; i < significant_digits; ++i) {
        scaled_num *= 10;
    }
    BigInt q = scaled_num / scaled_den;
    BigInt r = scaled_num - q * scaled_den;
    if (2 * r >= scaled_den) {
        ++q;
    }
    std::string digits = q.str();
    if (static_cast<int>(digits.size()) > significant_digits) {
        // Rounding up crossed a power of ten (e.g. 9.99 -> 10.0).
        digits.pop_back();
        ++exponent10;
    }

    std::string out;
    if (num_ < 0) {
        out += '-';
    }
    if (exponent10 >= significant_digits - 1) {
        // Integer value, pad with zeros.
        out += digits;
        out.append(exponent10 - (significant_digits - 1), '0');
    } else if (exponent10 >= 0) {
        out += digits.substr(0, exponent10 + 1);
        out += '.';
        out += digits.substr(exponent10 + 1);
    } else {
        out += "0.";
        out.append(-exponent10 - 1, '0');
        out += digits;
    }
    // Trim trailing zeros after a decimal point; keep at least one digit.
    if (out.find('.') != std::string::npos) {
        while (out.back() == '0') {
            out.pop_back();
        }
        if (out.back() == '.') {
            out.pop_back();
        }
    }
    return out;
}

std::string Rational::to_fraction_string() const {
    if (den_ == 1) {
        return num_.str();
    }
    return num_.str() + "/" + den_.str();
}

Rational Rational::parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) {
        throw std::invalid_argument("Rational: empty string");
    }
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt n = decimal_bigint(s.substr(0, slash));
        BigInt d = decimal_bigint(s.substr(slash + 1));
        return Rational(n, d);
    }

    bool negative = false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') {
        negative = s[i] == '-';
        ++i;
    }
    std::string mantissa;
    long long frac_digits = 0;
    bool seen_point = false;
    bool seen_digit = false;
    for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
        if (s[i] == '.') {
            if (seen_point) {
                throw std::invalid_argument("Rational: malformed number '" + s + "'");
            }
            seen_point = true;
        } else {
            mantissa += s[i];
            seen_digit = true;
            if (seen_point) {
                ++frac_digits;
            }
        }
    }
    if (!seen_digit) {
        throw std::invalid_argument("Rational: malformed number '" + s + "'");
    }
    long long exponent = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i >= s.size()) {
            throw std::invalid_argument("Rational: malformed exponent in '" + s + "'");
        }
        std::size_t consumed = 0;
        exponent = std::stoll(s.substr(i), &consumed);
        i += consumed;
    }
    if (i != s.size()) {
        throw std::invalid_argument("Rational: trailing characters in '" + s + "'");
    }

    BigInt n = decimal_bigint(mantissa);
    if (negative) {
        n = -n;
    }
    BigInt d = 1;
    long long shift = exponent - frac_digits;
    for (long long p = 0; p < shift; ++p) {
        n *= 10;
    }
    for (long long p = 0; p < -shift; ++p) {
        d *= 10;
    }
    return Rational(n, d);
}

}  // namespace advsel
