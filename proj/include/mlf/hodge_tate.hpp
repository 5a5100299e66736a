#pragma once

// Locally algebraic abelian characters valued in a declared Galois
// extension E: evaluation through the Artin module, Hodge-Tate profiles by
// embedding multiplicities, the uniformizing test, and the canonical
// uniformizing construction (unit part of the multiplicative inclusion).

#include <optional>
#include <vector>

#include "mlf/artin.hpp"

namespace mlf {

class CharacterSpec {
 public:
  const ArtinModule* mod = nullptr;  // base module (owned by the session)
  FieldPtr target;                   // E
  std::vector<FieldHom> embs;        // embeddings(K, E), deterministic order
  std::vector<Int> alg_type;         // n_sigma: deep units map to prod sigma(u)^{n_sigma}
  long n0 = 1;                       // purely algebraic beyond this unit level
  std::vector<KElem> gen_values;     // value on each module generator

  bool locally_algebraic() const { return alg_type.size() == embs.size(); }

  // values on module classes are defined modulo the image of U(class_prec)
  long value_prec() const {
    return mod->class_prec * (target->e / mod->field->e);
  }

  KElem eval_coords(const std::vector<Int>& coords) const {
    require(coords.size() == mod->amb.rank(), errc::precision_mismatch, "coordinate width");
    KElem acc = KElem::one(target);
    for (size_t i = 0; i < coords.size(); ++i) {
      if (coords[i] == 0) continue;
      acc = acc * gen_values[i].pow(coords[i]);
    }
    acc.aprec = std::min(acc.aprec, value_prec());
    acc.normalize();
    return acc;
  }

  KElem eval_elem(const KElem& x) const { return eval_coords(mod->dlog(x)); }

  // the algebraic part alone, evaluated on a unit of K
  KElem alg_value(const KElem& u) const {
    KElem acc = KElem::one(target);
    for (size_t s = 0; s < embs.size(); ++s) {
      if (alg_type[s] == 0) continue;
      acc = acc * embs[s].apply(u).pow(alg_type[s]);
    }
    return acc;
  }
};

struct HTProfile {
  std::vector<std::pair<Int, Int>> mult;  // weight i -> d^i (only nonzero entries)
  Int total = 0;
  bool hodge_tate = false;

  Int at(const Int& i) const {
    for (auto& [w, m] : mult)
      if (w == i) return m;
    return 0;
  }
  bool operator==(const HTProfile& o) const { return mult == o.mult && total == o.total; }
};

// d^i = [E:K] * #{ sigma : n_sigma = i }; total [E:Q_p]
inline HTProfile ht_numbers(const CharacterSpec& s) {
  require(s.locally_algebraic(), errc::not_locally_algebraic,
          "character has no complete algebraic type");
  const FieldPtr& K = s.mod->field;
  require(static_cast<bool>(K), errc::inconsistent_inputs, "label-stripped module");
  Int rel = Int(s.target->d) / K->d;
  HTProfile out;
  std::vector<Int> weights = s.alg_type;
  std::sort(weights.begin(), weights.end());
  for (size_t i = 0; i < weights.size();) {
    size_t j = i;
    while (j < weights.size() && weights[j] == weights[i]) ++j;
    out.mult.emplace_back(weights[i], rel * Int(j - i));
    i = j;
  }
  out.total = Int(s.target->d);
  Int sum = 0;
  for (auto& [w, m] : out.mult) sum += m;
  out.hodge_tate = (sum == out.total);
  return out;
}

// The Prop 4.5 profile for a uniformizing character of K inside E.
inline HTProfile uniformizing_profile(const FieldPtr& K, const FieldPtr& E) {
  HTProfile out;
  Int rel = Int(E->d) / K->d;
  Int d0 = rel * (K->d - 1);
  if (d0 > 0) out.mult.emplace_back(0, d0);
  out.mult.emplace_back(1, rel);
  std::sort(out.mult.begin(), out.mult.end());
  out.total = Int(E->d);
  out.hodge_tate = true;
  return out;
}

struct UniformizingVerdict {
  bool uniformizing = false;
  int witness_embedding = -1;  // index into embeddings(K, E)
  long witness_level = -1;
};

// true iff some embedding iota and level n have eval == iota on all
// generators of tags(n)
inline UniformizingVerdict is_uniformizing(const CharacterSpec& s, const ArtinModule& mod) {
  UniformizingVerdict out;
  const FieldPtr& K = mod.field;
  require(static_cast<bool>(K), errc::inconsistent_inputs, "label-stripped module");
  if (s.embs.empty()) return out;
  const long pl = to_long(K->p);
  long nmin = K->e / (pl - 1) + 1;
  long mcap = std::min<long>(mod.depth, mod.class_prec);  // meaningful test levels
  require(nmin + 1 < mcap, errc::precision_too_low, "no testable unit levels");
  for (size_t cand = 0; cand < s.embs.size(); ++cand) {
    for (long n = nmin; n + 2 < mcap; ++n) {
      bool ok = true;
      for (int m = static_cast<int>(n); m < mcap && ok; ++m)
        for (int j = 0; j < K->f && ok; ++j) {
          KElem om = (j == 0) ? KElem::one(K) : KElem::omega(K).pow(j);
          KElem u = KElem::one(K) + om * KElem::uniformizer(K).pow(m);
          KElem lhs = s.eval_elem(u);
          KElem rhs = s.embs[cand].apply(u);
          ok = (lhs - rhs).ord_or(s.target->ne) >= std::min<long>(lhs.aprec, rhs.aprec);
        }
      if (ok) {
        out.uniformizing = true;
        out.witness_embedding = static_cast<int>(cand);
        out.witness_level = n;
        return out;
      }
    }
  }
  return out;
}

// Example 4.4: the unit part of the multiplicative inclusion K^x -> E^x.
inline CharacterSpec canonical_uniformizing(const ArtinModule& mod, const FieldPtr& E) {
  const FieldPtr& K = mod.field;
  require(static_cast<bool>(K), errc::inconsistent_inputs, "label-stripped module");
  CharacterSpec s;
  s.mod = &mod;
  s.target = E;
  s.embs = embeddings(K, E);
  require(!s.embs.empty(), errc::no_embedding, "E does not contain a copy of K");
  const FieldHom& inc = s.embs.front();
  s.alg_type.assign(s.embs.size(), 0);
  s.alg_type[0] = 1;
  s.n0 = 1;
  KElem piE = KElem::uniformizer(E);
  for (auto& rep : mod.gen_reps) {
    KElem img = inc.apply(rep);
    auto o = img.ord();
    require(o.has_value(), errc::zero_at_precision, "generator image vanishes");
    s.gen_values.push_back(img * piE.pow(-*o));  // unit part: frob component discarded
  }
  return s;
}

// A purely algebraic character with the given exponent vector.
inline CharacterSpec algebraic_character(const ArtinModule& mod, const FieldPtr& E,
                                         const std::vector<Int>& alg_type) {
  const FieldPtr& K = mod.field;
  require(static_cast<bool>(K), errc::inconsistent_inputs, "label-stripped module");
  CharacterSpec s;
  s.mod = &mod;
  s.target = E;
  s.embs = embeddings(K, E);
  require(alg_type.size() == s.embs.size(), errc::inconsistent_inputs, "exponent count");
  s.alg_type = alg_type;
  s.n0 = 1;
  for (auto& rep : mod.gen_reps) {
    // evaluate on the unit part of the representative
    KElem img = s.alg_value(rep * KElem::uniformizer(K).pow(-rep.ord_or(0)));
    s.gen_values.push_back(img);
  }
  return s;
}

// A finite-order character: values are roots of unity chosen per generator.
inline CharacterSpec finite_order_character(const ArtinModule& mod, const FieldPtr& E,
                                            const std::vector<KElem>& root_values) {
  CharacterSpec s;
  s.mod = &mod;
  s.target = E;
  s.embs = embeddings(mod.field, E);
  s.alg_type.assign(s.embs.size(), 0);
  s.n0 = mod.depth;
  require(root_values.size() == mod.amb.rank(), errc::inconsistent_inputs, "value count");
  s.gen_values = root_values;
  return s;
}

// twist: multiply generator values (adds finite parts, sums algebraic types)
inline CharacterSpec twist(const CharacterSpec& a, const CharacterSpec& b) {
  require(a.mod == b.mod && a.target->same_as(*b.target), errc::inconsistent_inputs,
          "twist across different modules");
  CharacterSpec s = a;
  for (size_t i = 0; i < s.gen_values.size(); ++i)
    s.gen_values[i] = s.gen_values[i] * b.gen_values[i];
  for (size_t i = 0; i < s.alg_type.size() && i < b.alg_type.size(); ++i)
    s.alg_type[i] += b.alg_type[i];
  s.n0 = std::max(a.n0, b.n0);
  return s;
}

// ---- Cor 4.6 transport along a filtered module isomorphism ----

struct TransportedCharacter {
  const CharacterSpec* source = nullptr;
  const ArtinModule* target_mod = nullptr;
  IMat iso_inv;  // coordinates of target module -> source module

  KElem eval_coords(const std::vector<Int>& coords) const {
    std::vector<Int> back(source->mod->amb.rank(), 0);
    for (size_t i = 0; i < coords.size(); ++i)
      for (size_t j = 0; j < back.size(); ++j) back[j] += coords[i] * iso_inv[i][j];
    for (size_t j = 0; j < back.size(); ++j)
      back[j] = mod_reduce(back[j], source->mod->amb.moduli[j]);
    KElem v = source->eval_coords(back);
    long cap = std::min<long>(source->value_prec(),
                              target_mod->depth * (source->target->e / target_mod->field->e));
    v.aprec = std::min(v.aprec, cap);
    v.normalize();
    return v;
  }
};

// checks that the isomorphism respects the filtration tags
inline void require_filtered_iso(const ArtinModule& m1, const ArtinModule& m2, const IMat& iso) {
  require(m1.depth == m2.depth, errc::incomparable_truncations, "depth mismatch");
  for (int j = 0; j <= m1.depth; ++j) {
    Subgroup img = m1.tags[j].image(m2.amb, iso);
    require(img == m2.tags[j], errc::not_filtered, "isomorphism does not respect the tags");
  }
}

inline TransportedCharacter cor46_transport(const CharacterSpec& s, const ArtinModule& m2,
                                            const IMat& iso, const IMat& iso_inv) {
  require_filtered_iso(*s.mod, m2, iso);
  TransportedCharacter t;
  t.source = &s;
  t.target_mod = &m2;
  t.iso_inv = iso_inv;
  return t;
}

// uniformizing test for a transported character over the target module
inline UniformizingVerdict is_uniformizing_transported(const TransportedCharacter& t) {
  const ArtinModule& mod = *t.target_mod;
  const FieldPtr& K = mod.field;
  require(static_cast<bool>(K), errc::inconsistent_inputs, "label-stripped module");
  const FieldPtr& E = t.source->target;
  auto embs = embeddings(K, E);
  UniformizingVerdict out;
  const long pl = to_long(K->p);
  long nmin = K->e / (pl - 1) + 1;
  long mcap = std::min<long>(mod.depth, std::min(mod.class_prec, t.source->mod->class_prec));
  require(nmin + 1 < mcap, errc::precision_too_low, "no testable unit levels");
  for (size_t cand = 0; cand < embs.size(); ++cand) {
    for (long n = nmin; n + 2 < mcap; ++n) {
      bool ok = true;
      for (int m = static_cast<int>(n); m < mcap && ok; ++m)
        for (int j = 0; j < K->f && ok; ++j) {
          KElem om = (j == 0) ? KElem::one(K) : KElem::omega(K).pow(j);
          KElem u = KElem::one(K) + om * KElem::uniformizer(K).pow(m);
          KElem lhs = t.eval_coords(mod.dlog(u));
          KElem rhs = embs[cand].apply(u);
          ok = (lhs - rhs).ord_or(E->ne) >= std::min<long>(lhs.aprec, rhs.aprec);
        }
      if (ok) {
        out.uniformizing = true;
        out.witness_embedding = static_cast<int>(cand);
        out.witness_level = n;
        return out;
      }
    }
  }
  return out;
}

}  // namespace mlf
