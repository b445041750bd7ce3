#pragma once

#include "advsel/core.hpp"
#include "advsel/rational.hpp"

namespace advsel {

// Representativeness statistics: exact distances between the sample CDF F_y
// and the population CDF F_x, evaluated over the n support points.  All three
// are 0 exactly when the sample reproduces the population's level frequencies
// and grow as it skews.
//
// With cx[i] = n * F_x(i) and cy[i] = k * F_y(i) as integer counts:
//   ks  = max_i |cx[i] k - cy[i] n| / (n k)          (largest gap)
//   l1  = sum_i |cx[i] k - cy[i] n| / (n^2 k)        (average gap)
//   cvm = sum_i (cx[i] k - cy[i] n)^2 / (n^3 k^2)    (average squared gap)
//
// Results are exact rationals; no floating point is involved, so equalities
// in tests and oracle comparisons are meaningful.
Rational ks_stat(const Population& pop, const Sample& sample);
Rational l1_stat(const Population& pop, const Sample& sample);
Rational cvm_stat(const Population& pop, const Sample& sample);

// Same statistics computed from already built CDFs (population and sample
// over the same support).  Useful inside enumeration loops that maintain
// counts incrementally.
Rational ks_from_cdfs(const Cdf& fx, const Cdf& fy);
Rational l1_from_cdfs(const Cdf& fx, const Cdf& fy);
Rational cvm_from_cdfs(const Cdf& fx, const Cdf& fy);

// Closed forms for the equilibrium sample of the quantile mechanism on a
// strictly ranked population with n = (2m+1)k: the sample sits at positions
// m+1, m+1+(2m+1), ..., so per period the gap |F_x - F_y| walks 1/n, 2/n,
// ..., m/n, m/n, (m-1)/n, ..., 0.  Hence
//   ks  = m/n
//   l1  = m(m+1) / (n(2m+1))
//   cvm = m(m+1) / (3 n^2)
// Each of these is pinned to the brute force oracle by tests.
struct QuantileClosedForms {
    Rational ks;
    Rational l1;
    Rational cvm;
};

QuantileClosedForms quantile_closed_forms(long long n, long long k, long long m);

}  // namespace advsel
