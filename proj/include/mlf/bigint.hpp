#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <vector>

#include "mlf/errors.hpp"

namespace mlf {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int pow_int(const Int& b, long e) {
  Int r = 1, x = b;
  long n = e;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

inline Int mod_reduce(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

inline Int mod_pow(Int b, Int e, const Int& m) {
  Int r = 1;
  b = mod_reduce(b, m);
  while (e > 0) {
    if ((e & 1) != 0) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

// g = gcd(a,b) = x*a + y*b
inline Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
  if (b == 0) {
    x = (a >= 0) ? 1 : -1;
    y = 0;
    return a >= 0 ? a : Int(-a);
  }
  Int x1, y1;
  Int g = ext_gcd(b, mod_reduce(a, b), x1, y1);
  x = y1;
  y = x1 - ((a - mod_reduce(a, b)) / b) * y1;
  return g;
}

inline Int inv_mod(const Int& a, const Int& m) {
  Int x, y;
  Int g = ext_gcd(mod_reduce(a, m), m, x, y);
  require(g == 1, errc::not_a_unit, "inv_mod of non-invertible element");
  return mod_reduce(x, m);
}

inline Int gcd_int(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm_int(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

// Exact p-valuation of a nonzero integer.
inline long val_p(Int a, const Int& p) {
  if (a == 0) fail(errc::internal, "val_p(0)");
  if (a < 0) a = -a;
  long v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::pair<Int, long>> factorize(Int n) {
  std::vector<std::pair<Int, long>> out;
  for (Int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      long e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      out.emplace_back(d, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

// Multiplicative order of a modulo m; requires gcd(a,m)=1.
inline long mult_order(const Int& a, const Int& m) {
  require(gcd_int(mod_reduce(a, m), m) == 1, errc::internal, "mult_order: not a unit");
  Int x = mod_reduce(a, m);
  Int y = x;
  long ord = 1;
  while (y != 1) {
    y = y * x % m;
    ++ord;
    if (ord > 4 * 1000 * 1000) fail(errc::bound_exceeded, "mult_order runaway");
  }
  return ord;
}

inline long to_long(const Int& a) {
  require(a >= std::numeric_limits<long>::min() && a <= std::numeric_limits<long>::max(),
          errc::bound_exceeded, "integer does not fit in long");
  return static_cast<long>(a);
}

}  // namespace mlf
