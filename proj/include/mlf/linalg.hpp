#pragma once

// Exact integer / Z-p^N linear algebra used by the p-adic layer.

#include <optional>
#include <vector>

#include "mlf/bigint.hpp"
#include "mlf/errors.hpp"

namespace mlf {

using IMat = std::vector<std::vector<Int>>;

// Fraction-free determinant (Bareiss). Exact over Z.
inline Int bareiss_det(IMat m) {
  const size_t n = m.size();
  if (n == 0) return 1;
  Int sign = 1, prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

struct PadicLinSolve {
  std::vector<Int> x;  // solution mod p^(N - loss)
  long loss = 0;       // total pivot valuation spent
};

// Solve A x = b over Z/p^N where A is square, invertible over Q_p at precision.
// Pivots by minimal p-valuation; the solution is valid mod p^(N - loss).
inline PadicLinSolve solve_mod_pn(IMat a, std::vector<Int> b, const Int& p, long n_prec) {
  const size_t n = a.size();
  require(n > 0 && a[0].size() == n && b.size() == n, errc::internal, "solve_mod_pn shape");
  const Int pn = pow_int(p, n_prec);
  std::vector<size_t> colperm(n);
  for (size_t i = 0; i < n; ++i) colperm[i] = i;
  long loss = 0;

  auto valp = [&](const Int& v) -> long {
    if (v == 0) return n_prec;  // indistinguishable from 0 at precision
    return std::min<long>(n_prec, val_p(v, p));
  };

  for (size_t k = 0; k < n; ++k) {
    long best = n_prec + 1;
    size_t bi = k, bj = k;
    for (size_t i = k; i < n; ++i)
      for (size_t j = k; j < n; ++j) {
        long v = valp(a[i][j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    require(best <= n_prec, errc::precision_too_low, "matrix singular at precision");
    if (bi != k) {
      std::swap(a[bi], a[k]);
      std::swap(b[bi], b[k]);
    }
    if (bj != k) {
      for (size_t i = 0; i < n; ++i) std::swap(a[i][bj], a[i][k]);
      std::swap(colperm[bj], colperm[k]);
    }
    const long v = best;
    loss += v;  // conservative: each valuation-v pivot costs v digits
    Int punit = a[k][k] / pow_int(p, v);
    Int punit_inv = inv_mod(punit, pn);
    for (size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      require(valp(a[i][k]) >= v, errc::internal, "pivot was not minimal");
      Int mult = mod_reduce(a[i][k] / pow_int(p, v) * punit_inv, pn);
      for (size_t j = k; j < n; ++j) a[i][j] = mod_reduce(a[i][j] - mult * a[k][j], pn);
      b[i] = mod_reduce(b[i] - mult * b[k], pn);
    }
  }

  // Back substitution; divides by pivots p^v * unit.
  std::vector<Int> y(n, 0);
  for (size_t k = n; k-- > 0;) {
    Int rhs = b[k];
    for (size_t j = k + 1; j < n; ++j) rhs = mod_reduce(rhs - a[k][j] * y[j], pn);
    long v = valp(a[k][k]);
    if (v > 0) {
      require(rhs % pow_int(p, v) == 0, errc::precision_too_low,
              "no integral solution at precision");
      rhs /= pow_int(p, v);
    }
    Int punit = a[k][k] / pow_int(p, v);
    y[k] = mod_reduce(rhs * inv_mod(punit, pn), pn);
  }
  PadicLinSolve out;
  out.x.assign(n, 0);
  for (size_t k = 0; k < n; ++k) out.x[colperm[k]] = y[k];
  out.loss = loss;
  return out;
}

// p-valuations of the elementary divisors of an integer matrix, capped at `cap`
// (columns = vectors). Used for rank decisions at precision.
inline std::vector<long> pivot_valuations(IMat a, const Int& p, long cap) {
  size_t rows = a.size();
  if (rows == 0) return {};
  size_t cols = a[0].size();
  const Int pcap = pow_int(p, cap);
  for (auto& r : a)
    for (auto& x : r) x = mod_reduce(x, pcap);
  std::vector<long> vals;
  size_t k = 0;
  for (size_t col = 0; col < cols && k < rows; ++col) {
    long best = cap + 1;
    size_t bi = k;
    size_t bj = col;
    for (size_t i = k; i < rows; ++i)
      for (size_t j = col; j < cols; ++j) {
        if (a[i][j] == 0) continue;
        long v = std::min<long>(cap, val_p(a[i][j], p));
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best > cap) break;
    std::swap(a[bi], a[k]);
    for (size_t i = 0; i < rows; ++i) std::swap(a[i][bj], a[i][col]);
    Int punit_inv = inv_mod(a[k][col] / pow_int(p, best), pcap);
    for (size_t i = k + 1; i < rows; ++i) {
      if (a[i][col] == 0) continue;
      Int mult = mod_reduce(a[i][col] / pow_int(p, best) * punit_inv, pcap);
      for (size_t j = col; j < cols; ++j) a[i][j] = mod_reduce(a[i][j] - mult * a[k][j], pcap);
    }
    vals.push_back(best);
    ++k;
  }
  return vals;
}

}  // namespace mlf
