#pragma once

// Local class field theory at finite truncation: principal-unit
// presentations with discrete logarithms by filtration peeling, the
// truncated Artin module Z/M + Z/(q-1) + Z/p^a + (Z/p^c)^d with
// unit-filtration tags, norm-subgroup directories, Galois actions and
// transfer matrices on cyclotomic towers, and cyclotomic character values.

#include <array>
#include <map>
#include <vector>

#include "mlf/abelian.hpp"
#include "mlf/cyclotomic.hpp"
#include "mlf/herbrand.hpp"

namespace mlf {

// ---- principal-unit presentation of U(0)/U(n) ----

class UnitPresentation {
 public:
  FieldPtr F;
  int depth = 0;  // n

  KElem teich_gen;               // canonical generator of mu_{q-1}
  FqCtx::Elt teich_res;          // its residue
  std::vector<KElem> gens;       // principal generators 1 + w^j pi^m
  std::vector<long> gen_level;   // fundamental level of each generator

  struct Pivot {
    int gen;                 // index into gens
    long k;                  // contribution gens[gen]^(p^k)
    KElem value;             // the power itself
    KElem value_inv;
    std::vector<long> lead;  // leading residue vector in F_p^f
  };
  std::vector<std::vector<Pivot>> table;  // level -> f pivots (levels 1..n-1)

  IMat principal_relations;  // rows: relations among gens
  Int order() const {
    Int o = F->q - 1;
    return o * pow_int(F->p, static_cast<long>(F->f) * (depth - 1));
  }

  // ---- construction ----

  static UnitPresentation build(const FieldPtr& F, int n) {
    require(n >= 1, errc::inconsistent_inputs, "depth must be >= 1");
    require(static_cast<long>(n) + 2 * F->e <= F->ne, errc::precision_too_low,
            "depth exceeds the precision budget");
    UnitPresentation up;
    up.F = F;
    up.depth = n;

    // canonical Teichmueller generator: first residue element of order q-1
    {
      bool found = F->q == 2;
      if (found) {
        up.teich_gen = KElem::one(F);
        up.teich_res = F->res.from_index(1);
      }
      for (Int idx = 1; idx < F->q && !found; ++idx) {
        FqCtx::Elt r = F->res.from_index(idx);
        if (F->res.is_zero(r)) continue;
        if (F->res.elt_order(r) == F->q - 1) {
          OVec v = F->o_zero();
          for (int j = 0; j < F->f; ++j) v[j] = r[j];
          up.teich_gen = teichmuller(KElem(F, v, 0, F->ne));
          up.teich_res = r;
          found = true;
        }
      }
      require(found, errc::internal, "no residue generator found");
    }

    struct Walk {
      int gen;
      long k;
      KElem value;
      long level;
    };
    std::vector<Walk> active;
    struct Pending {
      int gen;
      long k;
      KElem value;  // gens[gen]^(p^k), to peel once the table is complete
      long level;
    };
    std::vector<Pending> pending;

    auto lead_of = [&](const KElem& u, long m) -> std::vector<long> {
      KElem z = (u - KElem::one(F)) * KElem::uniformizer(F).inverse().pow(m);
      require(z.t == 0, errc::internal, "leading vector extraction failed");
      auto r = F->o_residue(z.c);
      return std::vector<long>(r.begin(), r.end());
    };
    auto advance = [&](int gen, long k, const KElem& val) {
      KElem nxt = val.pow(F->p);
      KElem z = nxt - KElem::one(F);
      long lvl = z.ord_or(n);  // anything >= n is "done"
      if (lvl >= n) {
        pending.push_back({gen, k + 1, nxt, lvl});
      } else {
        active.push_back({gen, k + 1, nxt, lvl});
      }
    };

    up.table.assign(n, {});
    const long pl = to_long(F->p);
    for (long m = 1; m < n; ++m) {
      // candidates at this level, in creation order
      std::vector<Walk> here;
      for (auto& w : active)
        if (w.level == m) here.push_back(w);
      std::sort(here.begin(), here.end(), [](const Walk& a, const Walk& b) {
        return a.gen != b.gen ? a.gen < b.gen : a.k < b.k;
      });
      active.erase(std::remove_if(active.begin(), active.end(),
                                  [&](const Walk& w) { return w.level == m; }),
                   active.end());

      auto& pivots = up.table[m];
      // echelonized copy of the accepted leads; a candidate is dependent
      // exactly when it reduces to zero against it
      std::vector<std::vector<long>> ech;  // rows with distinct lead positions
      auto reduce = [&](std::vector<long> vec) {
        for (auto& row : ech) {
          int lp = -1;
          for (int j = 0; j < F->f; ++j)
            if (row[j] != 0) {
              lp = j;
              break;
            }
          if (lp < 0 || vec[lp] == 0) continue;
          long factor = (vec[lp] * to_long(inv_mod(row[lp], F->p))) % pl;
          for (int j = 0; j < F->f; ++j) vec[j] = ((vec[j] - factor * row[j]) % pl + pl) % pl;
        }
        return vec;
      };
      auto accept_ech = [&]() {
        // rebuild the reduced echelon form of all accepted leads
        std::vector<std::vector<long>> rows;
        for (auto& pv : pivots) rows.push_back(pv.lead);
        size_t rank = 0;
        for (int col = 0; col < F->f && rank < rows.size(); ++col) {
          size_t sel = rows.size();
          for (size_t i = rank; i < rows.size(); ++i)
            if (rows[i][col] % pl != 0) {
              sel = i;
              break;
            }
          if (sel == rows.size()) continue;
          std::swap(rows[rank], rows[sel]);
          long inv = to_long(inv_mod(rows[rank][col], F->p));
          for (size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || rows[i][col] % pl == 0) continue;
            long fac = (rows[i][col] * inv) % pl;
            for (int j = 0; j < F->f; ++j)
              rows[i][j] = ((rows[i][j] - fac * rows[rank][j]) % pl + pl) % pl;
          }
          ++rank;
        }
        require(rank == pivots.size(), errc::internal, "pivot leads became dependent");
        rows.resize(rank);
        ech = std::move(rows);
      };
      auto is_zero_vec = [&](const std::vector<long>& v) {
        for (long x : v)
          if (x != 0) return false;
        return true;
      };

      for (auto& w : here) {
        auto lv = lead_of(w.value, m);
        if (is_zero_vec(reduce(lv))) {
          pending.push_back({w.gen, w.k, w.value, m});  // dependent: stop this walk
        } else {
          pivots.push_back({w.gen, w.k, w.value, w.value.inverse(), lv});
          accept_ech();
          advance(w.gen, w.k, w.value);
        }
      }
      // fill the rank with fresh fundamental generators 1 + w^j pi^m
      for (int j = 0; j < F->f && static_cast<int>(pivots.size()) < F->f; ++j) {
        KElem om = (j == 0) ? KElem::one(F) : KElem::omega(F).pow(j);
        KElem g = KElem::one(F) + om * KElem::uniformizer(F).pow(m);
        auto lv = lead_of(g, m);
        if (is_zero_vec(reduce(lv))) continue;
        int gi = static_cast<int>(up.gens.size());
        up.gens.push_back(g);
        up.gen_level.push_back(m);
        pivots.push_back({gi, 0, g, g.inverse(), lv});
        accept_ech();
        advance(gi, 0, g);
      }
      require(static_cast<int>(pivots.size()) == F->f, errc::peeling_stuck,
              "level rank deficient during construction");
    }
    // leftover walks that never hit a level below n
    for (auto& w : active) pending.push_back({w.gen, w.k, w.value, w.level});

    // relations: p^k e_gen - dlog(value), peeled over the completed table
    const size_t r = up.gens.size();
    for (auto& pd : pending) {
      std::vector<Int> row(r, 0);
      row[pd.gen] = pow_int(F->p, pd.k);
      auto rest = up.peel_principal(pd.value);
      for (size_t i = 0; i < r; ++i) row[i] -= rest[i];
      up.principal_relations.push_back(std::move(row));
    }
    // sanity: the presentation has the right order
    {
      FinAbPresentation pres{static_cast<long>(r), up.principal_relations};
      auto inv = invariant_factors(pres);
      Int ord = 1;
      for (auto& d : inv) {
        require(d != 0, errc::peeling_stuck, "presentation has a free part");
        ord *= d;
      }
      require(ord == pow_int(F->p, static_cast<long>(F->f) * (n - 1)), errc::peeling_stuck,
              "presentation order mismatch");
    }
    return up;
  }

  // exponent vector of a principal unit over gens (mod U(depth))
  std::vector<Int> peel_principal(KElem u) const {
    std::vector<Int> exps(gens.size(), 0);
    const long pl = to_long(F->p);
    for (int guard = 0; guard < 8 * depth * F->f + 16; ++guard) {
      KElem z = u - KElem::one(F);
      long m = z.ord_or(depth);
      if (m >= depth) return exps;
      require(m >= 1, errc::peeling_stuck, "not a principal unit");
      KElem zz = z * KElem::uniformizer(F).inverse().pow(m);
      require(zz.t == 0, errc::peeling_stuck, "leading extraction failed");
      auto res = F->o_residue(zz.c);
      std::vector<long> target(res.begin(), res.end());

      // express target over the pivot leads at level m (gaussian over F_p)
      const auto& pivots = table[m];
      require(!pivots.empty(), errc::peeling_stuck, "no pivots at level");
      std::vector<std::vector<long>> basis;
      for (auto& pv : pivots) basis.push_back(pv.lead);
      std::vector<std::vector<long>> combo(pivots.size(), std::vector<long>(pivots.size(), 0));
      for (size_t i = 0; i < pivots.size(); ++i) combo[i][i] = 1;
      std::vector<int> lead_col(pivots.size(), -1);
      size_t rank = 0;
      for (int col = 0; col < F->f && rank < basis.size(); ++col) {
        size_t sel = basis.size();
        for (size_t i = rank; i < basis.size(); ++i)
          if (basis[i][col] % pl != 0) {
            sel = i;
            break;
          }
        if (sel == basis.size()) continue;
        std::swap(basis[rank], basis[sel]);
        std::swap(combo[rank], combo[sel]);
        long inv = to_long(inv_mod(basis[rank][col], F->p));
        for (size_t i = 0; i < basis.size(); ++i) {
          if (i == rank || basis[i][col] % pl == 0) continue;
          long fac = (basis[i][col] * inv) % pl;
          for (int j = 0; j < F->f; ++j)
            basis[i][j] = ((basis[i][j] - fac * basis[rank][j]) % pl + pl) % pl;
          for (size_t j = 0; j < pivots.size(); ++j)
            combo[i][j] = ((combo[i][j] - fac * combo[rank][j]) % pl + pl) % pl;
        }
        lead_col[rank] = col;
        ++rank;
      }
      std::vector<long> sol(pivots.size(), 0);
      for (size_t i = 0; i < rank; ++i) {
        int col = lead_col[i];
        if (target[col] % pl == 0) continue;
        long fac = (target[col] * to_long(inv_mod(basis[i][col], F->p))) % pl;
        for (int j = 0; j < F->f; ++j)
          target[j] = ((target[j] - fac * basis[i][j]) % pl + pl) % pl;
        for (size_t j = 0; j < pivots.size(); ++j) sol[j] = (sol[j] + fac * combo[i][j]) % pl;
      }
      for (int j = 0; j < F->f; ++j)
        require(target[j] % pl == 0, errc::peeling_stuck, "leading vector outside pivot span");
      for (size_t i = 0; i < pivots.size(); ++i) {
        if (sol[i] == 0) continue;
        exps[pivots[i].gen] += Int(sol[i]) * pow_int(F->p, pivots[i].k);
        u = u * pivots[i].value_inv.pow(sol[i]);
      }
    }
    fail(errc::peeling_stuck, "peeling did not terminate");
  }

  // residue-field discrete log to the canonical generator
  Int teich_dlog(const FqCtx::Elt& r) const {
    require(!F->res.is_zero(r), errc::not_a_unit, "dlog of zero residue");
    FqCtx::Elt acc = F->res.one();
    for (Int s = 0; s < F->q - 1; ++s) {
      if (acc == r) return s;
      acc = F->res.mul(acc, teich_res);
    }
    fail(errc::internal, "residue dlog failed");
  }

  // full dlog on U(0): (teich exponent, principal exponents)
  std::pair<Int, std::vector<Int>> dlog_unit(const KElem& u) const {
    require(u.ord() && *u.ord() == 0, errc::not_a_unit, "dlog of a non-unit");
    Int s = teich_dlog(u.residue());
    KElem u1 = u * teich_gen.inverse().pow(s);
    return {s, peel_principal(u1)};
  }
};

// ---- the truncated Artin module ----

class ArtinModule {
 public:
  FieldPtr field;  // empty in label-stripped form
  Int mfrob = 1;   // frob part Z/M
  int a = 0;       // wild torsion exponent
  int c = 1;       // principal exponent
  int rank_d = 0;  // number of principal summands
  int depth = 0;   // unit filtration depth n

  AbAmbient amb;  // [M, q-1, p^a, p^c x d]
  UnitPresentation up;
  IMat to_model;       // (principal gens) x (1 + d): column 0 = wild coord, then principal
  std::vector<Subgroup> tags;  // tags[0..depth]
  long class_prec = 0;  // coordinates determine unit classes modulo U(class_prec)

  Int q_minus_1() const { return amb.moduli[1]; }
  size_t rank() const { return amb.rank(); }

  // module coordinates of a field element
  std::vector<Int> dlog(const KElem& x) const {
    auto o = x.ord();
    require(o.has_value(), errc::zero_at_precision, "dlog of zero");
    const FieldPtr& F = up.F;
    KElem u = x * KElem::uniformizer(F).pow(-*o);
    auto [s, exps] = up.dlog_unit(u);
    std::vector<Int> out(amb.rank(), 0);
    out[0] = mod_reduce(Int(*o), mfrob);
    out[1] = mod_reduce(s, amb.moduli[1]);
    for (size_t g = 0; g < exps.size(); ++g)
      for (size_t j = 0; j < static_cast<size_t>(rank_d) + 1; ++j)
        out[2 + j] += exps[g] * to_model[g][j];
    for (size_t j = 0; j < static_cast<size_t>(rank_d) + 1; ++j)
      out[2 + j] = mod_reduce(out[2 + j], amb.moduli[2 + j]);
    return out;
  }

  // a field representative of each module generator
  std::vector<KElem> gen_reps;  // [pi, teich, wild-rep, principal reps...]

  ProfinInvariants invariants() const {
    ProfinInvariants inv;
    inv.zhat_rank = 1;
    inv.extra_ranks = {{up.F ? up.F->p : Int(0), rank_d}};
    Int t = (q_minus_1()) * pow_int(inv.extra_ranks[0].first, a);
    if (t > 1) inv.torsion = {t};
    return inv;
  }
};

struct ArtinParams {
  int c = 6;        // principal exponent
  Int mfrob = 12600;  // 2^3 * 3^2 * 5^2 * 7: covers degrees <= 8 and ell^nu <= 25
  int depth = 0;    // 0: derive from c
};

inline ArtinModule artin_module(const FieldPtr& F, ArtinParams par = {}) {
  ArtinModule mod;
  mod.field = F;
  mod.mfrob = par.mfrob;
  mod.c = par.c;
  const long pl = to_long(F->p);
  long n0 = F->e / (pl - 1) + 1;
  int n = par.depth > 0 ? par.depth : static_cast<int>(n0 + F->e * (par.c + 1));
  mod.depth = n;
  mod.a = roots_of_unity(F, F->p, par.c - 1);
  require(mod.a < par.c, errc::precision_too_low, "principal exponent must exceed the torsion");
  mod.up = UnitPresentation::build(F, n);
  mod.rank_d = F->d;

  // split U(1)/U(n) as Z/p^a + (Z/p^c)^d via the Smith form
  const size_t r = mod.up.gens.size();
  IMat rel = mod.up.principal_relations;
  if (rel.empty()) rel.assign(1, std::vector<Int>(r, 0));
  auto s = snf(rel);
  std::vector<std::pair<Int, size_t>> factors;  // (order, column)
  for (size_t j = 0; j < r; ++j) {
    Int dj = (j < s.diag.size() && s.diag[j] != 0) ? s.diag[j] : Int(0);
    require(dj != 0, errc::internal, "principal part has a free factor");
    if (dj > 1) factors.emplace_back(dj, j);
  }
  std::sort(factors.begin(), factors.end());
  Int pa = pow_int(F->p, mod.a);
  Int pc = pow_int(F->p, mod.c);
  require(static_cast<int>(factors.size()) == F->d + (mod.a > 0 ? 1 : 0),
          errc::precision_too_low, "unexpected unit group shape at this depth");
  if (mod.a > 0)
    require(factors.front().first == pa, errc::precision_too_low,
            "torsion factor does not match the root-of-unity count");
  for (size_t i = (mod.a > 0 ? 1 : 0); i < factors.size(); ++i)
    require(factors[i].first % pc == 0, errc::precision_too_low,
            "free factor shallower than the principal exponent");

  // to_model: exponent vector -> (wild, principal...) via x -> x*V truncated
  mod.to_model.assign(r, std::vector<Int>(F->d + 1, 0));
  for (size_t g = 0; g < r; ++g) {
    if (mod.a > 0) mod.to_model[g][0] = mod_reduce(s.v[g][factors.front().second], pa);
    for (int j = 0; j < F->d; ++j) {
      size_t col = factors[(mod.a > 0 ? 1 : 0) + j].second;
      mod.to_model[g][j + 1] = mod_reduce(s.v[g][col], pc);
    }
  }

  mod.amb.moduli = {mod.mfrob, F->q - 1, pa};
  for (int j = 0; j < F->d; ++j) mod.amb.moduli.push_back(pc);

  // generator representatives: pi, teich, then the Smith-basis units
  mod.gen_reps.push_back(KElem::uniformizer(F));
  mod.gen_reps.push_back(mod.up.teich_gen);
  auto rep_of_column = [&](size_t col) {
    KElem acc = KElem::one(F);
    for (size_t g = 0; g < r; ++g) {
      const Int& e = s.vinv[col][g];
      if (e != 0) acc = acc * mod.up.gens[g].pow(e);
    }
    return acc;
  };
  if (mod.a > 0)
    mod.gen_reps.push_back(rep_of_column(factors.front().second));
  else
    mod.gen_reps.push_back(KElem::one(F));
  for (int j = 0; j < F->d; ++j)
    mod.gen_reps.push_back(rep_of_column(factors[(mod.a > 0 ? 1 : 0) + j].second));

  // the level to which module coordinates pin down unit classes: the
  // truncated exponents re-enter at the level of rep^modulus
  mod.class_prec = n;
  for (size_t i = 1; i < mod.gen_reps.size(); ++i) {
    if (mod.amb.moduli[i] <= 1) continue;
    KElem z = mod.gen_reps[i].pow(mod.amb.moduli[i]) - KElem::one(F);
    mod.class_prec = std::min(mod.class_prec, z.ord_or(n));
  }

  // filtration tags: images of the elementary units of each level
  std::vector<IMat> level_gens(n);  // level m -> dlogs of 1 + w^j pi^m
  for (int m = 1; m < n; ++m)
    for (int j = 0; j < F->f; ++j) {
      KElem om = (j == 0) ? KElem::one(F) : KElem::omega(F).pow(j);
      KElem u = KElem::one(F) + om * KElem::uniformizer(F).pow(m);
      level_gens[m].push_back(mod.dlog(u));
    }
  mod.tags.reserve(n + 1);
  for (int lvl = 0; lvl <= n; ++lvl) {
    IMat gens;
    if (lvl == 0) gens.push_back(mod.dlog(mod.up.teich_gen));
    for (int m = std::max(1, lvl); m < n; ++m)
      for (auto& g : level_gens[m]) gens.push_back(g);
    mod.tags.push_back(gens.empty() ? Subgroup::zero(mod.amb)
                                    : Subgroup::from_gens(mod.amb, gens));
  }
  return mod;
}

// ---- norm subgroups: the class-field directory ----

struct NormSubgroup {
  Subgroup sub;
  Int index = 1;
  Int f_rel = 1;  // index of the value-part image
  Int e_rel = 1;  // unit-part index
};

inline NormSubgroup make_norm_subgroup(const ArtinModule& mod, Subgroup sub) {
  NormSubgroup out;
  out.index = mod.amb.order() / sub.order();
  // value-part image: projection to the frob coordinate
  AbAmbient frob_amb{{mod.mfrob}};
  IMat proj(mod.amb.rank(), std::vector<Int>(1, 0));
  proj[0][0] = 1;
  Subgroup img = sub.image(frob_amb, proj);
  out.f_rel = frob_amb.order() / img.order();
  const Subgroup& u0 = mod.tags[0];
  out.e_rel = u0.order() / u0.intersect(sub).order();
  out.sub = std::move(sub);
  require(out.e_rel * out.f_rel == out.index, errc::infinite_index_at_truncation,
          "value/unit split does not refine the index");
  return out;
}

inline std::vector<NormSubgroup> directory(const ArtinModule& mod, int degree_bound) {
  require(degree_bound >= 1 && degree_bound <= 8, errc::bound_exceeded,
          "directory bound out of range");
  std::vector<NormSubgroup> out;
  for (int n = 1; n <= degree_bound; ++n)
    for (auto& s : subgroups_of_index(mod.amb, n)) out.push_back(make_norm_subgroup(mod, s));
  return out;
}

// ---- the Artin map into a cyclotomic Galois group ----

// zeta_M -> zeta_M^k for the image of x under Art_K, with the arithmetic
// Frobenius normalization: q^{ord x} on the prime-to-p part, and the inverse
// of the normalized norm on the p-part (Lubin-Tate formula, imported).
inline Int artin_exponent(const CycloAdjunction& adj, const KElem& x) {
  const FieldPtr& K = adj.base;
  require(x.F->same_as(*K), errc::field_mismatch, "element not in the base field");
  Int M = adj.M;
  Int mp = 1;  // p-part of M
  Int m = M;
  while (m % K->p == 0) {
    m /= K->p;
    mp *= K->p;
  }
  auto o = x.ord();
  require(o.has_value(), errc::zero_at_precision, "artin exponent of zero");
  Int k_tame = mod_pow(K->q, Int(*o), m == 1 ? Int(1) : m);
  Int k_wild = 1;
  if (mp > 1) {
    QpValue nx = norm_to_qp(x);
    require(pow_int(K->p, nx.unit_prec) >= mp, errc::precision_too_low,
            "norm unit part too shallow for the p-part");
    k_wild = inv_mod(mod_reduce(nx.unit, mp), mp);
  }
  // CRT combine
  Int k = 0;
  if (m == 1) {
    k = k_wild;
  } else if (mp == 1) {
    k = k_tame;
  } else {
    Int t = mod_reduce((k_wild - k_tame) * inv_mod(m, mp), mp);
    k = mod_reduce(k_tame + m * t, M);
  }
  k = mod_reduce(k, M);
  require(std::find(adj.galois_exponents.begin(), adj.galois_exponents.end(), k) !=
              adj.galois_exponents.end(),
          errc::internal, "artin exponent not a Galois automorphism");
  return k;
}

// multiplicative group (Z/M)^x decomposed into explicit cyclic factors,
// with discrete logs by per-component enumeration
struct UnitGroupZM {
  Int M = 1;
  AbAmbient amb;                           // cyclic factor orders
  std::vector<Int> comp_modulus;           // prime power component of each factor
  std::vector<Int> comp_generator;

  static UnitGroupZM build(const Int& M) {
    UnitGroupZM u;
    u.M = M;
    for (auto& [q, a] : factorize(M)) {
      Int qa = pow_int(q, a);
      if (q == 2) {
        if (a == 1) continue;  // trivial component
        if (a == 2) {
          u.amb.moduli.push_back(Int(2));
          u.comp_modulus.push_back(qa);
          u.comp_generator.push_back(Int(3));
        } else {
          u.amb.moduli.push_back(Int(2));
          u.comp_modulus.push_back(qa);
          u.comp_generator.push_back(qa - 1);  // -1
          u.amb.moduli.push_back(pow_int(Int(2), a - 2));
          u.comp_modulus.push_back(qa);
          u.comp_generator.push_back(Int(5));
        }
        continue;
      }
      // odd q: cyclic; brute-force a primitive root
      Int phi = qa - qa / q;
      Int g = 2;
      for (;; ++g) {
        if (gcd_int(g, qa) != 1) continue;
        if (mult_order(g, qa) == to_long(phi)) break;
      }
      u.amb.moduli.push_back(phi);
      u.comp_modulus.push_back(qa);
      u.comp_generator.push_back(g);
    }
    if (u.amb.moduli.empty()) u.amb.moduli.push_back(Int(1));
    return u;
  }

  std::vector<Int> dlog(const Int& x) const {
    require(gcd_int(mod_reduce(x, M), M) == 1, errc::not_a_unit, "dlog of a non-unit mod M");
    std::vector<Int> out(amb.rank(), 0);
    if (comp_modulus.empty()) return out;
    // components sharing a modulus (the 2-part pair) are solved jointly
    for (size_t i = 0; i < comp_modulus.size();) {
      Int qa = comp_modulus[i];
      size_t j = i;
      while (j < comp_modulus.size() && comp_modulus[j] == qa) ++j;
      Int target = mod_reduce(x, qa);
      bool found = false;
      std::vector<Int> digits(j - i, 0);
      std::function<bool(size_t, Int)> rec = [&](size_t pos, Int cur) {
        if (pos == j - i) return cur == target;
        for (Int d = 0; d < amb.moduli[i + pos]; ++d) {
          if (rec(pos + 1, cur)) {
            digits[pos] = d;
            return true;
          }
          cur = cur * comp_generator[i + pos] % qa;
        }
        return false;
      };
      found = rec(0, Int(1));
      require(found, errc::internal, "dlog enumeration failed");
      for (size_t k2 = 0; k2 < j - i; ++k2) out[i + k2] = digits[k2];
      i = j;
    }
    return out;
  }
};

// norm subgroup of the adjunction: kernel of x -> artin_exponent(x)
inline NormSubgroup norm_subgroup_of(const ArtinModule& mod, const CycloAdjunction& adj) {
  UnitGroupZM zm = UnitGroupZM::build(adj.M);
  const size_t r = mod.amb.rank();
  IMat hom(r, std::vector<Int>(zm.amb.rank(), 0));
  for (size_t i = 0; i < r; ++i) {
    Int k = artin_exponent(adj, mod.gen_reps[i]);
    require(mod_pow(k, mod.amb.moduli[i], adj.M) == 1, errc::not_in_catalog,
            "module truncation does not support this Galois group");
    auto cs = zm.dlog(k);
    for (size_t jj = 0; jj < zm.amb.rank(); ++jj) hom[i][jj] = cs[jj];
  }
  Subgroup ker = Subgroup::zero(zm.amb).preimage(mod.amb, hom);
  return make_norm_subgroup(mod, ker);
}

// ---- transfer and Galois action matrices on towers ----

// rows: module coordinates in L of each K-module generator
inline IMat ver_matrix(const ArtinModule& mk, const ArtinModule& ml, const CycloAdjunction& adj) {
  require(mk.field && ml.field, errc::inconsistent_inputs, "modules must carry fields");
  require(mk.field->same_as(*adj.base) && ml.field->same_as(*adj.ext), errc::field_mismatch,
          "adjunction does not connect the modules");
  IMat out;
  for (auto& rep : mk.gen_reps) out.push_back(ml.dlog(adj.embed.apply(rep)));
  return out;
}

// one matrix per base-module generator: the action of Art_K(gen) on A_L
inline std::vector<IMat> galois_action_matrices(const ArtinModule& mk, const ArtinModule& ml,
                                                const CycloAdjunction& adj) {
  std::vector<IMat> out;
  for (auto& rep : mk.gen_reps) {
    Int k = artin_exponent(adj, rep);
    IMat m;
    for (auto& lrep : ml.gen_reps) m.push_back(ml.dlog(adj.apply_galois(k, lrep)));
    out.push_back(std::move(m));
  }
  return out;
}

// the action matrix of a single automorphism (by exponent) on A_L
inline IMat action_matrix_of(const ArtinModule& ml, const CycloAdjunction& adj, const Int& k) {
  IMat m;
  for (auto& lrep : ml.gen_reps) m.push_back(ml.dlog(adj.apply_galois(k, lrep)));
  return m;
}

// ---- ground-truth cyclotomic character on module elements ----

// chi^(ell) mod ell^nu evaluated on a module element given by coordinates.
inline Int cyclo_char_value(const ArtinModule& mod, const Int& ell, int nu,
                            const std::vector<Int>& coords) {
  const FieldPtr& F = mod.field;
  require(static_cast<bool>(F), errc::inconsistent_inputs, "label-stripped module");
  Int lnu = pow_int(ell, nu);
  require(nu >= 1, errc::inconsistent_inputs, "nu must be >= 1");
  // character value on each generator representative
  auto chi_gen = [&](const KElem& rep) -> Int {
    auto o = rep.ord();
    require(o.has_value(), errc::zero_at_precision, "chi of zero");
    if (ell != F->p) {
      return mod_pow(F->q, Int(*o), lnu);  // arithmetic Frobenius on mu_{ell^nu}
    }
    QpValue nx = norm_to_qp(rep);
    require(pow_int(F->p, nx.unit_prec) >= lnu, errc::precision_too_low, "norm too shallow");
    return inv_mod(mod_reduce(nx.unit, lnu), lnu);
  };
  // well-definedness: the frob coordinate is mod M, so chi(pi)^M must be 1
  Int chi_pi = chi_gen(mod.gen_reps[0]);
  require(mod_pow(chi_pi, mod.mfrob, lnu) == 1, errc::not_in_catalog,
          "frob modulus does not support this character");
  Int val = 1;
  for (size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == 0) continue;
    val = val * mod_pow(chi_gen(mod.gen_reps[i]), coords[i], lnu) % lnu;
  }
  return val;
}

// ---- reciprocity: upper filtration of Gal(L/K) from the unit tags ----

struct GalQuotSub {  // subgroup of A_K/N presented as S + N inside A_K
  Subgroup s;   // contains N
  Int n_order;
  Int order() const { return s.order() / n_order; }
  bool operator==(const GalQuotSub& o) const { return s == o.s; }
};

// G(v) = image of U(ceil v): jump at integer j carries (tags[j] + N)/N
inline Filtration<GalQuotSub> unit_filtration_of_quotient(const ArtinModule& mod,
                                                          const NormSubgroup& n) {
  Filtration<GalQuotSub> f;
  Int nord = n.sub.order();
  for (int j = 0; j <= mod.depth; ++j) {
    Subgroup s = mod.tags[j].sum(n.sub);
    f.jumps.push_back({Rat(j), GalQuotSub{std::move(s), nord}});
  }
  f.canonicalize();
  return f;
}

}  // namespace mlf
