#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace satlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Exact binomial coefficient; 0 when k is outside [0, n].
inline BigInt big_binomial(long long n, long long k) {
  if (k < 0 || k > n || n < 0) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;  // exact: prefix products of binomial rows divide evenly
  }
  return r;
}

/// Exact 2^k as a big integer.
inline BigInt big_pow2(int k) { return BigInt(1) << k; }

}  // namespace satlab
