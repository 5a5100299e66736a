#pragma once

// Brute-force finite group machinery on permutation generators: derived
// series, solvable quotients, transfer, center, subgroup lattices, and the
// finite-level checks on solvable tower quotients.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "mlf/abelian.hpp"
#include "mlf/errors.hpp"

namespace mlf {

using Perm = std::vector<int>;

inline Perm perm_mul(const Perm& a, const Perm& b) {  // (a*b)(x) = a(b(x))
  Perm c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
  return c;
}

inline Perm perm_inv(const Perm& a) {
  Perm c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[a[i]] = static_cast<int>(i);
  return c;
}

inline Perm perm_id(int n) {
  Perm c(n);
  std::iota(c.begin(), c.end(), 0);
  return c;
}

class FiniteGroup {
 public:
  int npoints = 0;
  std::vector<Perm> gens;
  std::vector<Perm> elements;  // elements[0] = identity
  std::map<Perm, int> index;
  std::vector<std::vector<int>> mult;  // multiplication table
  std::vector<int> inverse;

  static FiniteGroup generate(int npoints, std::vector<Perm> generators, long bound = 400) {
    FiniteGroup g;
    g.npoints = npoints;
    g.gens = std::move(generators);
    for (auto& p : g.gens)
      require(static_cast<int>(p.size()) == npoints, errc::inconsistent_inputs,
              "generator degree mismatch");
    g.elements.push_back(perm_id(npoints));
    g.index[g.elements[0]] = 0;
    for (size_t head = 0; head < g.elements.size(); ++head) {
      for (auto& s : g.gens) {
        Perm q = perm_mul(g.elements[head], s);
        if (!g.index.count(q)) {
          require(static_cast<long>(g.elements.size()) < bound, errc::bound_exceeded,
                  "group order exceeds bound");
          g.index[q] = static_cast<int>(g.elements.size());
          g.elements.push_back(std::move(q));
        }
      }
    }
    const int n = static_cast<int>(g.elements.size());
    g.mult.assign(n, std::vector<int>(n));
    g.inverse.assign(n, 0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) g.mult[i][j] = g.index.at(perm_mul(g.elements[i], g.elements[j]));
      g.inverse[i] = g.index.at(perm_inv(g.elements[i]));
    }
    return g;
  }

  long order() const { return static_cast<long>(elements.size()); }

  int op(int a, int b) const { return mult[a][b]; }
  int inv(int a) const { return inverse[a]; }
  int commutator(int a, int b) const { return mult[mult[a][b]][mult[inverse[a]][inverse[b]]]; }

  std::vector<int> gen_indices() const {
    std::vector<int> out;
    for (auto& s : gens) out.push_back(index.at(s));
    return out;
  }
};

// Subgroups are sorted element-index vectors.
using ElemSet = std::vector<int>;

inline ElemSet closure(const FiniteGroup& g, std::vector<int> seed) {
  std::set<int> have{0};
  std::vector<int> queue{0};
  for (int s : seed)
    if (have.insert(s).second) queue.push_back(s);
  for (size_t head = 0; head < queue.size(); ++head) {
    for (int s : seed) {
      int q = g.op(queue[head], s);
      if (have.insert(q).second) queue.push_back(q);
      q = g.op(s, queue[head]);
      if (have.insert(q).second) queue.push_back(q);
    }
  }
  // seed may not include inverses; close under them as well
  for (;;) {
    bool changed = false;
    std::vector<int> cur(have.begin(), have.end());
    for (int a : cur)
      for (int b : cur) {
        int q = g.op(a, b);
        if (have.insert(q).second) changed = true;
      }
    if (!changed) break;
  }
  return ElemSet(have.begin(), have.end());
}

inline ElemSet whole_group(const FiniteGroup& g) {
  ElemSet s(g.order());
  std::iota(s.begin(), s.end(), 0);
  return s;
}

inline bool contains_elem(const ElemSet& h, int x) {
  return std::binary_search(h.begin(), h.end(), x);
}

inline bool is_normal(const FiniteGroup& g, const ElemSet& h) {
  for (int x = 0; x < g.order(); ++x)
    for (int e : h)
      if (!contains_elem(h, g.mult[g.mult[x][e]][g.inverse[x]])) return false;
  return true;
}

inline ElemSet derived_subgroup(const FiniteGroup& g, const ElemSet& h) {
  std::vector<int> comms;
  for (int a : h)
    for (int b : h) comms.push_back(g.commutator(a, b));
  std::sort(comms.begin(), comms.end());
  comms.erase(std::unique(comms.begin(), comms.end()), comms.end());
  return closure(g, comms);
}

inline std::vector<ElemSet> derived_series(const FiniteGroup& g) {
  std::vector<ElemSet> out{whole_group(g)};
  for (;;) {
    ElemSet next = derived_subgroup(g, out.back());
    if (next == out.back()) break;
    out.push_back(next);
    if (next.size() == 1) break;
  }
  return out;
}

inline bool is_solvable(const FiniteGroup& g) { return derived_series(g).back().size() == 1; }

// length of the derived series down to the trivial group
inline int m_of(const FiniteGroup& g) {
  auto ds = derived_series(g);
  require(ds.back().size() == 1, errc::not_solvable, "group is not solvable");
  return static_cast<int>(ds.size()) - 1;
}

inline ElemSet center(const FiniteGroup& g) {
  ElemSet out;
  for (int x = 0; x < g.order(); ++x) {
    bool central = true;
    for (int y = 0; y < g.order() && central; ++y) central = g.mult[x][y] == g.mult[y][x];
    if (central) out.push_back(x);
  }
  return out;
}

// the m-th term of the derived series (trivial once the series stabilizes)
inline ElemSet derived_term(const FiniteGroup& g, int m) {
  auto ds = derived_series(g);
  if (m < static_cast<int>(ds.size())) return ds[m];
  return ds.back();
}

struct QuotientGroup {
  FiniteGroup group;            // the quotient as a permutation group on cosets
  std::vector<int> proj;        // element index in g -> element index in quotient
};

// G/N acting on the left cosets of N.
inline QuotientGroup quotient_group(const FiniteGroup& g, const ElemSet& n) {
  require(is_normal(g, n), errc::not_normal, "quotient by a non-normal subgroup");
  const long ord = g.order();
  std::vector<int> coset_of(ord, -1);
  std::vector<int> reps;
  for (int x = 0; x < ord; ++x) {
    if (coset_of[x] != -1) continue;
    int c = static_cast<int>(reps.size());
    reps.push_back(x);
    for (int e : n) coset_of[g.mult[x][e]] = c;
  }
  const int ncosets = static_cast<int>(reps.size());
  std::vector<Perm> qgens;
  for (auto& s : g.gens) {
    int si = g.index.at(s);
    Perm q(ncosets);
    for (int c = 0; c < ncosets; ++c) q[c] = coset_of[g.mult[si][reps[c]]];
    qgens.push_back(std::move(q));
  }
  QuotientGroup out{FiniteGroup::generate(ncosets, qgens, std::max<long>(400, ord + 1)), {}};
  out.proj.assign(ord, 0);
  for (int x = 0; x < ord; ++x) {
    Perm q(ncosets);
    for (int c = 0; c < ncosets; ++c) q[c] = coset_of[g.mult[x][reps[c]]];
    out.proj[x] = out.group.index.at(q);
  }
  return out;
}

// G/G^[m] with its projection
inline QuotientGroup solvable_quotient(const FiniteGroup& g, int m) {
  return quotient_group(g, derived_term(g, m));
}

// subgroup as a group in its own right (points unchanged)
inline FiniteGroup subgroup_as_group(const FiniteGroup& g, const ElemSet& h) {
  std::vector<Perm> gens;
  for (int e : h) gens.push_back(g.elements[e]);
  return FiniteGroup::generate(g.npoints, gens, g.order() + 1);
}

// Transfer (Verlagerung) G -> H^ab: returns for each element of G the index
// (within H) of a representative of Ver(g), together with the derived
// subgroup of H for coset comparison.
struct TransferMap {
  ElemSet h;          // subgroup
  ElemSet h_derived;  // [H,H] as element indices in g
  std::vector<int> value;  // g-element index -> h-element index (rep of the H^ab class)
};

inline TransferMap transfer(const FiniteGroup& g, const ElemSet& h, long index_bound = 64) {
  const long ord = g.order();
  const long hord = static_cast<long>(h.size());
  require(ord % hord == 0, errc::internal, "subgroup order does not divide");
  require(ord / hord <= index_bound, errc::bound_exceeded, "transfer index exceeds bound");

  // left transversal
  std::vector<int> coset_of(ord, -1);
  std::vector<int> reps;
  for (int x = 0; x < ord; ++x) {
    if (coset_of[x] != -1) continue;
    int c = static_cast<int>(reps.size());
    reps.push_back(x);
    for (int e : h) coset_of[g.mult[x][e]] = c;
  }
  // [H,H] as element indices in g
  ElemSet hder;
  {
    FiniteGroup hg = subgroup_as_group(g, h);
    for (int e : derived_subgroup(hg, whole_group(hg))) hder.push_back(g.index.at(hg.elements[e]));
    std::sort(hder.begin(), hder.end());
  }

  TransferMap out;
  out.h = h;
  out.h_derived = hder;
  out.value.assign(ord, 0);
  for (int x = 0; x < ord; ++x) {
    int acc = 0;  // product in H (read in H^ab, so order does not matter)
    for (int rep : reps) {
      int moved = g.mult[x][rep];
      int target = reps[coset_of[moved]];
      int hcomp = g.mult[g.inverse[target]][moved];  // target^{-1} x rep in H
      require(contains_elem(h, hcomp), errc::internal, "transfer component not in H");
      acc = g.mult[acc][hcomp];
    }
    out.value[x] = acc;
  }
  return out;
}

inline bool same_hab_class(const FiniteGroup& g, const TransferMap& t, int a, int b) {
  return contains_elem(t.h_derived, g.mult[a][g.inverse[b]]);
}

// all subgroups (as sorted element sets)
inline std::vector<ElemSet> all_subgroups(const FiniteGroup& g, size_t cap = 20000) {
  std::set<ElemSet> seen;
  std::vector<ElemSet> queue;
  ElemSet triv{0};
  seen.insert(triv);
  queue.push_back(triv);
  for (size_t head = 0; head < queue.size(); ++head) {
    ElemSet cur = queue[head];
    for (int x = 1; x < g.order(); ++x) {
      if (contains_elem(cur, x)) continue;
      std::vector<int> seed = cur;
      seed.push_back(x);
      ElemSet bigger = closure(g, seed);
      if (seen.insert(bigger).second) {
        require(seen.size() < cap, errc::bound_exceeded, "subgroup lattice too large");
        queue.push_back(std::move(bigger));
      }
    }
  }
  return queue;
}

// ---- Lemma 1.6 (1) finite-level check ----

struct Lemma16Report {
  struct Entry {
    ElemSet h;       // subgroup of Gamma^{m+n} (element indices in the quotient)
    bool pass;
    long tilde_card;  // |Htilde^n|
    long quot_card;   // |H^n|
  };
  std::vector<Entry> entries;
  bool all_pass = true;
};

// For every subgroup H of Gamma^{m+n} containing Gamma^[m]/Gamma^[m+n],
// checks that (preimage of H in Gamma)^n -> H^n is an isomorphism.
inline Lemma16Report lemma16_check(const FiniteGroup& gamma, int m, int n, long bound = 20000) {
  Lemma16Report rep;
  QuotientGroup qmn = solvable_quotient(gamma, m + n);
  ElemSet gm = derived_term(gamma, m);
  // image of Gamma^[m] in Gamma^{m+n}
  std::vector<int> img;
  for (int e : gm) img.push_back(qmn.proj[e]);
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  ElemSet km = closure(qmn.group, img);

  auto subs = all_subgroups(qmn.group, bound);
  for (auto& h : subs) {
    bool contains_km = true;
    for (int e : km)
      if (!contains_elem(h, e)) {
        contains_km = false;
        break;
      }
    if (!contains_km) continue;
    // preimage of h in gamma
    ElemSet pre;
    for (int x = 0; x < gamma.order(); ++x)
      if (contains_elem(h, qmn.proj[x])) pre.push_back(x);
    FiniteGroup htilde = subgroup_as_group(gamma, pre);
    FiniteGroup hq = subgroup_as_group(qmn.group, h);
    long tn = solvable_quotient(htilde, n).group.order();
    long hn = solvable_quotient(hq, n).group.order();
    bool pass = (tn == hn);  // the natural surjection is injective iff orders match
    rep.entries.push_back({h, pass, tn, hn});
    rep.all_pass = rep.all_pass && pass;
  }
  return rep;
}

}  // namespace mlf
