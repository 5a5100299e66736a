#pragma once

// Residue-field arithmetic: F_p[x] utilities and F_q = F_p[w]/(g) contexts.

#include <cstdint>
#include <vector>

#include "mlf/bigint.hpp"
#include "mlf/errors.hpp"

namespace mlf {

using FpPoly = std::vector<long>;  // little-endian by degree, coeffs in [0,p)

inline void fppoly_trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline FpPoly fppoly_mul(const FpPoly& a, const FpPoly& b, long p) {
  if (a.empty() || b.empty()) return {};
  FpPoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  fppoly_trim(c);
  return c;
}

// Remainder of a modulo monic g.
inline FpPoly fppoly_mod(FpPoly a, const FpPoly& g, long p) {
  fppoly_trim(a);
  const size_t dg = g.size() - 1;
  while (a.size() > dg) {
    long lead = a.back();
    size_t sh = a.size() - 1 - dg;
    for (size_t i = 0; i < dg; ++i) {
      a[sh + i] = (a[sh + i] - lead * g[i]) % p;
      if (a[sh + i] < 0) a[sh + i] += p;
    }
    a.pop_back();
    fppoly_trim(a);
  }
  return a;
}

inline FpPoly fppoly_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& g, long p) {
  return fppoly_mod(fppoly_mul(a, b, p), g, p);
}

inline FpPoly fppoly_powmod(FpPoly base, Int e, const FpPoly& g, long p) {
  FpPoly r{1};
  base = fppoly_mod(std::move(base), g, p);
  while (e > 0) {
    if ((e & 1) != 0) r = fppoly_mulmod(r, base, g, p);
    base = fppoly_mulmod(base, base, g, p);
    e >>= 1;
  }
  return r;
}

inline FpPoly fppoly_gcd(FpPoly a, FpPoly b, long p) {
  fppoly_trim(a);
  fppoly_trim(b);
  while (!b.empty()) {
    // make b monic
    long inv = to_long(inv_mod(b.back(), p));
    for (auto& c : b) c = c * inv % p;
    a = fppoly_mod(std::move(a), b, p);
    std::swap(a, b);
  }
  return a;
}

// Rabin's test for a monic polynomial of degree f over F_p.
inline bool fppoly_irreducible(const FpPoly& g, long p) {
  const long f = static_cast<long>(g.size()) - 1;
  if (f < 1) return false;
  if (f == 1) return true;
  FpPoly x{0, 1};
  // x^(p^f) == x mod g
  FpPoly xq = fppoly_powmod(x, pow_int(p, f), g, p);
  FpPoly diff = xq;
  diff.resize(std::max<size_t>(diff.size(), 2), 0);
  diff[1] = (diff[1] - 1 + p) % p;
  fppoly_trim(diff);
  if (!diff.empty()) return false;
  for (auto& [ell, mult] : factorize(Int(f))) {
    long fl = f / to_long(ell);
    FpPoly xr = fppoly_powmod(x, pow_int(p, fl), g, p);
    FpPoly d = xr;
    d.resize(std::max<size_t>(d.size(), 2), 0);
    d[1] = (d[1] - 1 + p) % p;
    fppoly_trim(d);
    FpPoly gc = fppoly_gcd(g, d, p);
    if (gc.size() != 1) return false;
  }
  return true;
}

// Lexicographically smallest monic irreducible of degree f over F_p
// (on the coefficient tuple (c_0, ..., c_{f-1})).
inline FpPoly canonical_irreducible(long p, int f) {
  require(f >= 1, errc::internal, "degree must be >= 1");
  if (f == 1) return FpPoly{0, 1};  // x
  std::vector<long> c(f, 0);
  for (;;) {
    FpPoly g(c.begin(), c.end());
    g.push_back(1);
    if (fppoly_irreducible(g, p)) return g;
    int i = 0;
    while (i < f && c[i] == p - 1) c[i++] = 0;
    require(i < f, errc::internal, "no irreducible polynomial found");
    ++c[i];
  }
}

// F_q = F_p[w]/(g) context; elements are coefficient vectors of length f.
struct FqCtx {
  long p;
  int f;
  FpPoly g;  // monic, degree f

  using Elt = std::vector<long>;

  Elt zero() const { return Elt(f, 0); }
  Elt one() const {
    Elt e(f, 0);
    e[0] = 1;
    return e;
  }
  bool is_zero(const Elt& a) const {
    for (long c : a)
      if (c != 0) return false;
    return true;
  }
  Elt add(const Elt& a, const Elt& b) const {
    Elt c(f);
    for (int i = 0; i < f; ++i) c[i] = (a[i] + b[i]) % p;
    return c;
  }
  Elt sub(const Elt& a, const Elt& b) const {
    Elt c(f);
    for (int i = 0; i < f; ++i) c[i] = (a[i] - b[i] + p) % p;
    return c;
  }
  Elt mul(const Elt& a, const Elt& b) const {
    FpPoly r = fppoly_mulmod(FpPoly(a.begin(), a.end()), FpPoly(b.begin(), b.end()), g, p);
    r.resize(f, 0);
    return Elt(r.begin(), r.end());
  }
  Elt pow(Elt a, Int e) const {
    Elt r = one();
    while (e > 0) {
      if ((e & 1) != 0) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  Elt inv(const Elt& a) const {
    require(!is_zero(a), errc::not_a_unit, "inverse of 0 in residue field");
    return pow(a, pow_int(p, f) - 2);
  }
  Int order() const { return pow_int(p, f); }
  // Element with the given base-p digit index (enumeration helper).
  Elt from_index(Int idx) const {
    Elt e(f, 0);
    for (int i = 0; i < f; ++i) {
      e[i] = static_cast<long>(idx % p);
      idx /= p;
    }
    return e;
  }
  // Multiplicative order of a nonzero element.
  Int elt_order(const Elt& a) const {
    Int q1 = order() - 1;
    Int ord = q1;
    for (auto& [ell, mult] : factorize(q1)) {
      while (ord % ell == 0 && is_zero(sub(pow(a, ord / ell), one())) ) ord /= ell;
    }
    return ord;
  }
};

}  // namespace mlf
