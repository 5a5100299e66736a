#pragma once

// Finite(ly presented) abelian groups: Smith/Hermite normal forms, subgroups
// of products of cyclic groups, and the abstract invariants of profinite
// abelian groups used by the reconstruction layer.

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "mlf/bigint.hpp"
#include "mlf/errors.hpp"
#include "mlf/linalg.hpp"

namespace mlf {

// ---- Smith normal form ----

struct SnfResult {
  IMat u, v;              // u * a * v = diag
  IMat vinv;              // inverse of v (for coordinate changes)
  std::vector<Int> diag;  // d_1 | d_2 | ... (non-negative)
  size_t rows = 0, cols = 0;
};

inline SnfResult snf(IMat a) {
  const size_t m = a.size();
  const size_t n = m ? a[0].size() : 0;
  SnfResult r;
  r.rows = m;
  r.cols = n;
  r.u.assign(m, std::vector<Int>(m, 0));
  r.v.assign(n, std::vector<Int>(n, 0));
  r.vinv.assign(n, std::vector<Int>(n, 0));
  for (size_t i = 0; i < m; ++i) r.u[i][i] = 1;
  for (size_t j = 0; j < n; ++j) r.v[j][j] = r.vinv[j][j] = 1;

  auto row_sub = [&](size_t i1, size_t i2, const Int& q) {  // row i1 -= q*row i2
    for (size_t j = 0; j < n; ++j) a[i1][j] -= q * a[i2][j];
    for (size_t j = 0; j < m; ++j) r.u[i1][j] -= q * r.u[i2][j];
  };
  auto col_sub = [&](size_t j1, size_t j2, const Int& q) {
    for (size_t i = 0; i < m; ++i) a[i][j1] -= q * a[i][j2];
    for (size_t i = 0; i < n; ++i) r.v[i][j1] -= q * r.v[i][j2];
    for (size_t c = 0; c < n; ++c) r.vinv[j2][c] += q * r.vinv[j1][c];
  };
  auto row_swap = [&](size_t i1, size_t i2) {
    std::swap(a[i1], a[i2]);
    std::swap(r.u[i1], r.u[i2]);
  };
  auto col_swap = [&](size_t j1, size_t j2) {
    for (size_t i = 0; i < m; ++i) std::swap(a[i][j1], a[i][j2]);
    for (size_t i = 0; i < n; ++i) std::swap(r.v[i][j1], r.v[i][j2]);
    std::swap(r.vinv[j1], r.vinv[j2]);
  };
  auto row_neg = [&](size_t i) {
    for (size_t j = 0; j < n; ++j) a[i][j] = -a[i][j];
    for (size_t j = 0; j < m; ++j) r.u[i][j] = -r.u[i][j];
  };

  size_t k = 0;
  while (k < m && k < n) {
    // smallest absolute nonzero entry, ties by position
    bool found = false;
    size_t pi = k, pj = k;
    Int best = 0;
    for (size_t i = k; i < m; ++i)
      for (size_t j = k; j < n; ++j) {
        if (a[i][j] == 0) continue;
        Int v = a[i][j] < 0 ? Int(-a[i][j]) : a[i][j];
        if (!found || v < best) {
          found = true;
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (!found) break;
    if (pi != k) row_swap(k, pi);
    if (pj != k) col_swap(k, pj);
    if (a[k][k] < 0) row_neg(k);

    bool clean = true;
    for (size_t i = k + 1; i < m; ++i) {
      if (a[i][k] == 0) continue;
      Int q = a[i][k] / a[k][k];
      row_sub(i, k, q);
      if (a[i][k] != 0) clean = false;
    }
    for (size_t j = k + 1; j < n; ++j) {
      if (a[k][j] == 0) continue;
      Int q = a[k][j] / a[k][k];
      col_sub(j, k, q);
      if (a[k][j] != 0) clean = false;
    }
    if (!clean) continue;
    // force divisibility of the remaining block
    bool divides = true;
    for (size_t i = k + 1; i < m && divides; ++i)
      for (size_t j = k + 1; j < n && divides; ++j)
        if (a[i][j] % a[k][k] != 0) {
          row_sub(k, i, Int(-1));  // row k += row i
          divides = false;
        }
    if (divides) ++k;
  }
  r.diag.assign(std::min(m, n), 0);
  for (size_t i = 0; i < r.diag.size(); ++i) r.diag[i] = a[i][i];
  return r;
}

// ---- finitely presented abelian groups ----

struct FinAbPresentation {
  long ngens = 0;
  IMat relations;  // rows are relators
};

// Nontrivial invariant factors (ascending divisibility chain), then one 0 per
// free generator.
inline std::vector<Int> invariant_factors(const FinAbPresentation& pres) {
  IMat rel = pres.relations;
  if (rel.empty()) rel.assign(1, std::vector<Int>(pres.ngens, 0));
  for (auto& row : rel)
    require(static_cast<long>(row.size()) == pres.ngens, errc::inconsistent_inputs,
            "relation width mismatch");
  auto s = snf(rel);
  std::vector<Int> inv;
  size_t nz = 0;
  for (auto& d : s.diag)
    if (d != 0) ++nz;
  for (auto& d : s.diag)
    if (d > 1) inv.push_back(d);
  for (long j = nz; j < pres.ngens; ++j) inv.push_back(0);
  return inv;
}

// ---- abstract invariants of the profinite modules ----

struct ProfinInvariants {
  long zhat_rank = 0;
  std::vector<std::pair<Int, long>> extra_ranks;  // prime -> additional free rank
  std::vector<Int> torsion;                       // invariant factor chain

  bool operator==(const ProfinInvariants& o) const {
    return zhat_rank == o.zhat_rank && extra_ranks == o.extra_ranks && torsion == o.torsion;
  }
};

inline long pro_ell_rank(const ProfinInvariants& inv, const Int& ell) {
  long r = inv.zhat_rank;
  for (auto& [p, extra] : inv.extra_ranks)
    if (p == ell) r += extra;
  return r;
}

// ---- subgroups of an ambient product of cyclic groups ----

struct AbAmbient {
  std::vector<Int> moduli;  // all >= 1
  size_t rank() const { return moduli.size(); }
  Int order() const {
    Int o = 1;
    for (auto& m : moduli) o *= m;
    return o;
  }
  std::vector<Int> reduce(std::vector<Int> v) const {
    for (size_t i = 0; i < moduli.size(); ++i) v[i] = mod_reduce(v[i], moduli[i]);
    return v;
  }
};

// Canonical upper-triangular basis (HNF) of an integer lattice given by rows;
// assumes the lattice has full rank n (always true once the moduli rows are
// appended).
inline IMat hnf(IMat rows, size_t n) {
  size_t r = 0;
  for (size_t col = 0; col < n; ++col) {
    // sweep: gcd the column into one row
    for (;;) {
      size_t best = rows.size();
      Int bv = 0;
      for (size_t i = r; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        Int v = rows[i][col] < 0 ? Int(-rows[i][col]) : rows[i][col];
        if (best == rows.size() || v < bv) {
          best = i;
          bv = v;
        }
      }
      if (best == rows.size()) break;  // column clear below r
      std::swap(rows[r], rows[best]);
      bool others = false;
      for (size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        Int q = rows[i][col] / rows[r][col];
        for (size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[r][j];
        if (rows[i][col] != 0) others = true;
      }
      if (!others) break;
    }
    if (r < rows.size() && rows[r][col] != 0) {
      if (rows[r][col] < 0)
        for (size_t j = 0; j < n; ++j) rows[r][j] = -rows[r][j];
      for (size_t i = 0; i < r; ++i) {
        Int q = rows[i][col] / rows[r][col];
        if (rows[i][col] - q * rows[r][col] < 0) q -= 1;  // floored reduction
        if (q != 0)
          for (size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[r][j];
      }
      ++r;
    }
  }
  rows.resize(r);
  return rows;
}

class Subgroup {
 public:
  AbAmbient amb;
  IMat basis;  // HNF, full rank = amb.rank()

  static Subgroup from_gens(const AbAmbient& amb, IMat gens) {
    for (size_t i = 0; i < amb.rank(); ++i) {
      std::vector<Int> row(amb.rank(), 0);
      row[i] = amb.moduli[i];
      gens.push_back(row);
    }
    Subgroup s;
    s.amb = amb;
    s.basis = hnf(std::move(gens), amb.rank());
    require(s.basis.size() == amb.rank(), errc::internal, "subgroup lattice rank deficient");
    return s;
  }

  static Subgroup zero(const AbAmbient& amb) { return from_gens(amb, {}); }
  static Subgroup full(const AbAmbient& amb) {
    IMat id(amb.rank(), std::vector<Int>(amb.rank(), 0));
    for (size_t i = 0; i < amb.rank(); ++i) id[i][i] = 1;
    return from_gens(amb, id);
  }

  Int order() const {
    Int det = 1;
    for (size_t i = 0; i < basis.size(); ++i) det *= basis[i][i];
    return amb.order() / det;
  }

  Int index() const {
    Int det = 1;
    for (size_t i = 0; i < basis.size(); ++i) det *= basis[i][i];
    return det;
  }

  bool contains(std::vector<Int> v) const {
    // reduce v by the triangular basis
    for (size_t col = 0, r = 0; col < amb.rank(); ++col) {
      if (r >= basis.size() || basis[r][col] == 0) continue;
      // find the pivot row for this column (triangular: row r pivots at some col)
      if (basis[r][col] != 0) {
        Int q = v[col] / basis[r][col];
        if (v[col] - q * basis[r][col] < 0) q -= 1;
        for (size_t j = 0; j < amb.rank(); ++j) v[j] -= q * basis[r][j];
        if (v[col] != 0) return false;
        ++r;
      }
    }
    for (auto& x : v)
      if (x != 0) return false;
    return true;
  }

  bool contains_subgroup(const Subgroup& other) const {
    for (auto& row : other.basis)
      if (!contains(row)) return false;
    return true;
  }

  bool operator==(const Subgroup& o) const { return basis == o.basis; }

  Subgroup sum(const Subgroup& o) const {
    IMat rows = basis;
    for (auto& r : o.basis) rows.push_back(r);
    return from_gens(amb, rows);
  }

  Subgroup intersect(const Subgroup& o) const {
    // rows (x,y) with x*B1 = y*B2: kernel of [B1; -B2]
    const size_t n = amb.rank();
    IMat stacked;
    for (auto& r : basis) stacked.push_back(r);
    for (auto& r : o.basis) {
      std::vector<Int> neg(n);
      for (size_t j = 0; j < n; ++j) neg[j] = -r[j];
      stacked.push_back(neg);
    }
    auto s = snf(stacked);
    IMat gens;
    for (size_t i = 0; i < stacked.size(); ++i) {
      bool zero_row = (i >= s.diag.size()) || (s.diag[i] == 0);
      if (!zero_row) continue;
      // kernel row i of u: x-part times B1
      std::vector<Int> g(n, 0);
      for (size_t a = 0; a < basis.size(); ++a)
        for (size_t j = 0; j < n; ++j) g[j] += s.u[i][a] * basis[a][j];
      gens.push_back(std::move(g));
    }
    return from_gens(amb, gens);
  }

  // image under a homomorphism given by a matrix (row vector * mat), into amb2
  Subgroup image(const AbAmbient& amb2, const IMat& mat) const {
    IMat gens;
    for (auto& r : basis) {
      std::vector<Int> g(amb2.rank(), 0);
      for (size_t i = 0; i < amb.rank(); ++i)
        for (size_t j = 0; j < amb2.rank(); ++j) g[j] += r[i] * mat[i][j];
      gens.push_back(std::move(g));
    }
    return from_gens(amb2, gens);
  }

  // preimage of this subgroup under a map amb1 -> amb (matrix rows indexed by amb1)
  Subgroup preimage(const AbAmbient& amb1, const IMat& mat) const {
    const size_t n1 = amb1.rank(), n2 = amb.rank();
    IMat stacked;  // rows: [mat rows] then [-basis rows]; kernel x-parts
    for (size_t i = 0; i < n1; ++i) stacked.push_back(mat[i]);
    for (auto& r : basis) {
      std::vector<Int> neg(n2);
      for (size_t j = 0; j < n2; ++j) neg[j] = -r[j];
      stacked.push_back(neg);
    }
    auto s = snf(stacked);
    IMat gens;
    for (size_t i = 0; i < stacked.size(); ++i) {
      bool zero_row = (i >= s.diag.size()) || (s.diag[i] == 0);
      if (!zero_row) continue;
      std::vector<Int> g(n1, 0);
      for (size_t a = 0; a < n1; ++a) g[a] = s.u[i][a];
      gens.push_back(std::move(g));
    }
    return from_gens(amb1, gens);
  }

  // the subgroup of n-th powers (multiples) n*this
  Subgroup multiples(const Int& n) const {
    IMat gens;
    for (auto& r : basis) {
      std::vector<Int> g(r);
      for (auto& x : g) x *= n;
      gens.push_back(std::move(g));
    }
    return from_gens(amb, gens);
  }

  // n-torsion of this subgroup: {x in S : n x = 0 in ambient}
  Subgroup torsion(const Int& n) const {
    // ambient n-torsion has generators (m_i/gcd(n,m_i)) e_i
    IMat tg;
    for (size_t i = 0; i < amb.rank(); ++i) {
      std::vector<Int> g(amb.rank(), 0);
      g[i] = amb.moduli[i] / gcd_int(n, amb.moduli[i]);
      tg.push_back(std::move(g));
    }
    return intersect(from_gens(amb, tg));
  }

  // invariant factors of this subgroup as an abstract group
  std::vector<Int> group_invariants() const {
    // S = L / mZ^n: relations of the generators (rows of basis) are the
    // solutions x with x*basis in mZ^n
    const size_t n = amb.rank();
    IMat stacked;
    for (auto& r : basis) stacked.push_back(r);
    for (size_t i = 0; i < n; ++i) {
      std::vector<Int> row(n, 0);
      row[i] = -amb.moduli[i];
      stacked.push_back(row);
    }
    auto s = snf(stacked);
    IMat rel;
    for (size_t i = 0; i < stacked.size(); ++i) {
      bool zero_row = (i >= s.diag.size()) || (s.diag[i] == 0);
      if (!zero_row) continue;
      std::vector<Int> g(basis.size(), 0);
      for (size_t a = 0; a < basis.size(); ++a) g[a] = s.u[i][a];
      rel.push_back(std::move(g));
    }
    FinAbPresentation pr{static_cast<long>(basis.size()), rel};
    auto inv = invariant_factors(pr);
    for (auto& d : inv) require(d != 0, errc::internal, "finite subgroup with free part");
    return inv;
  }
};

// Solve sum x_i rows[i] = target modulo the ambient moduli; nullopt when the
// target is outside the span.
inline std::optional<std::vector<Int>> express_in_gens(const IMat& rows, const AbAmbient& amb,
                                                       const std::vector<Int>& target) {
  const size_t k = rows.size();
  const size_t n = amb.rank();
  IMat m;  // (k + n) x n
  for (auto& r : rows) m.push_back(r);
  for (size_t i = 0; i < n; ++i) {
    std::vector<Int> row(n, 0);
    row[i] = amb.moduli[i];
    m.push_back(row);
  }
  auto s = snf(m);
  // z * m = t  <=>  (z u^{-1}) d = t v
  std::vector<Int> tv(n, 0);
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < n; ++i) tv[j] += target[i] * s.v[i][j];
  std::vector<Int> w(k + n, 0);
  for (size_t j = 0; j < n; ++j) {
    Int d = (j < s.diag.size()) ? s.diag[j] : Int(0);
    if (d == 0) {
      if (tv[j] != 0) return std::nullopt;
      continue;
    }
    if (tv[j] % d != 0) return std::nullopt;
    w[j] = tv[j] / d;
  }
  std::vector<Int> z(k + n, 0);
  for (size_t i = 0; i < k + n; ++i)
    for (size_t j = 0; j < k + n; ++j) z[i] += w[j] * s.u[j][i];
  return std::vector<Int>(z.begin(), z.begin() + k);
}

// All subgroups of exact index n (enumerated as Hermite forms of sublattices).
inline std::vector<Subgroup> subgroups_of_index(const AbAmbient& amb, const Int& n,
                                                const Int& bound = 64) {
  require(n >= 1 && n <= bound, errc::bound_exceeded, "index out of bounds");
  const size_t g = amb.rank();
  std::vector<Subgroup> out;

  // enumerate diagonal factorizations of n, then the above-diagonal entries
  std::vector<Int> diag(g, 1);
  std::function<void(size_t, Int)> rec_diag = [&](size_t pos, Int rem) {
    if (pos == g) {
      if (rem != 1) return;
      // entries H[i][j], i<j, 0 <= H[i][j] < diag[j] (row i, column j)
      IMat h(g, std::vector<Int>(g, 0));
      for (size_t i = 0; i < g; ++i) h[i][i] = diag[i];
      std::vector<std::pair<size_t, size_t>> slots;
      for (size_t i = 0; i < g; ++i)
        for (size_t j = i + 1; j < g; ++j)
          if (diag[j] > 1) slots.emplace_back(i, j);
      std::function<void(size_t)> rec_off = [&](size_t s) {
        if (s == slots.size()) {
          Subgroup sg = Subgroup::from_gens(amb, h);
          if (sg.index() == n) {
            if (std::find(out.begin(), out.end(), sg) == out.end()) out.push_back(sg);
          }
          return;
        }
        auto [i, j] = slots[s];
        for (Int v = 0; v < diag[j]; ++v) {
          h[i][j] = v;
          rec_off(s + 1);
        }
        h[i][j] = 0;
      };
      rec_off(0);
      return;
    }
    for (Int d = 1; d <= rem; ++d) {
      if (rem % d != 0) continue;
      diag[pos] = d;
      rec_diag(pos + 1, rem / d);
    }
    diag[pos] = 1;
  };
  rec_diag(0, n);
  return out;
}

}  // namespace mlf
