#include "advsel/stats.hpp"

#include <cstdlib>
#include <stdexcept>

namespace advsel {

namespace {

void check_same_support(const Cdf& fx, const Cdf& fy) {
    if (fx.counts.size() != fy.counts.size()) {
        throw std::invalid_argument("stats: CDFs have mismatched support sizes");
    }
}

// Signed integer gap at support point i, scaled by nk:
//   cx[i] * k - cy[i] * n.
// Counts are bounded by n and k respectively, so |gap| <= 2nk; callers keep
// n * k well inside 63 bits.
inline long long gap(const Cdf& fx, const Cdf& fy, std::size_t i) {
    return fx.counts[i] * fy.denominator - fy.counts[i] * fx.denominator;
}

BigInt from_u128(unsigned __int128 v) {
    BigInt hi = static_cast<std::uint64_t>(v >> 64);
    BigInt lo = static_cast<std::uint64_t>(v);
    return (hi << 64) | lo;
}

}  // namespace

Rational ks_from_cdfs(const Cdf& fx, const Cdf& fy) {
    check_same_support(fx, fy);
    long long worst = 0;
    for (std::size_t i = 0; i < fx.counts.size(); ++i) {
        long long g = std::llabs(gap(fx, fy, i));
        if (g > worst) {
            worst = g;
        }
    }
    return Rational(BigInt(worst), BigInt(fx.denominator) * fy.denominator);
}

Rational l1_from_cdfs(const Cdf& fx, const Cdf& fy) {
    check_same_support(fx, fy);
    unsigned __int128 total = 0;
    for (std::size_t i = 0; i < fx.counts.size(); ++i) {
        total += static_cast<unsigned long long>(std::llabs(gap(fx, fy, i)));
    }
    BigInt den = BigInt(fx.denominator) * fx.denominator * fy.denominator;
    return Rational(from_u128(total), den);
}

Rational cvm_from_cdfs(const Cdf& fx, const Cdf& fy) {
    check_same_support(fx, fy);
    unsigned __int128 total = 0;
    for (std::size_t i = 0; i < fx.counts.size(); ++i) {
        unsigned long long g = std::llabs(gap(fx, fy, i));
        total += static_cast<unsigned __int128>(g) * g;
    }
    BigInt den = BigInt(fx.denominator) * fx.denominator * fx.denominator;
    den *= BigInt(fy.denominator) * fy.denominator;
    return Rational(from_u128(total), den);
}

Rational ks_stat(const Population& pop, const Sample& sample) {
    return ks_from_cdfs(population_cdf(pop), sample_cdf(pop, sample));
}

Rational l1_stat(const Population& pop, const Sample& sample) {
    return l1_from_cdfs(population_cdf(pop), sample_cdf(pop, sample));
}

Rational cvm_stat(const Population& pop, const Sample& sample) {
    return cvm_from_cdfs(population_cdf(pop), sample_cdf(pop, sample));
}

QuantileClosedForms quantile_closed_forms(long long n, long long k, long long m) {
    if (k < 1 || m < 0 || n != (2 * m + 1) * k) {
        throw std::invalid_argument("quantile closed forms require n = (2m+1)k, k >= 1, m >= 0");
    }
    QuantileClosedForms f;
    f.ks = Rational(BigInt(m), BigInt(n));
    f.l1 = Rational(BigInt(m) * (m + 1), BigInt(n) * (2 * m + 1));
    f.cvm = Rational(BigInt(m) * (m + 1), 3 * BigInt(n) * n);
    return f;
}

}  // namespace advsel
