#pragma once

// Independent lower-numbering oracle on the monogenic catalog: ramification
// groups from i(sigma) = v_L(sigma(x) - x) on a ring generator, then the
// upper-numbering transform by integrating 1/(G_0 : G_u).

#include <algorithm>
#include <vector>

#include "mlf/cyclotomic.hpp"
#include "mlf/herbrand.hpp"

namespace mlf {

// Galois subgroups in the oracle are sets of zeta-exponents.
struct ExpSet {
  std::vector<Int> ks;  // sorted
  Int order() const { return Int(ks.size()); }
  bool operator==(const ExpSet& o) const { return ks == o.ks; }
  bool contains(const Int& k) const { return std::binary_search(ks.begin(), ks.end(), k); }
};

struct RamificationData {
  std::vector<std::pair<Int, long>> i_values;  // exponent k != 1 -> i(sigma_k)
  std::vector<std::pair<long, ExpSet>> lower;  // (first u of each layer, G_u)
  std::vector<long> lower_breaks;              // u with G_u != G_{u+1}
  Filtration<ExpSet> upper;
  HerbrandFn phi;  // lower -> upper
  HerbrandFn psi;  // upper -> lower
};

// Lower/upper ramification data of Gal(L/K') where L = adj.ext = K(zeta_M)
// and K' corresponds to the exponent subgroup `sub` (defaults to the whole
// Galois group of the adjunction). Uses zeta as the monogenic generator.
inline RamificationData lower_numbering_oracle(const CycloAdjunction& adj,
                                               const std::vector<Int>& subgroup_exponents = {}) {
  std::vector<Int> ks = subgroup_exponents.empty() ? adj.galois_exponents : subgroup_exponents;
  std::sort(ks.begin(), ks.end());
  for (auto& k : ks)
    require(std::find(adj.galois_exponents.begin(), adj.galois_exponents.end(),
                      mod_reduce(k, adj.M)) != adj.galois_exponents.end(),
            errc::not_in_catalog, "exponent outside the Galois group");

  RamificationData out;
  long max_i = 0;
  for (auto& k : ks) {
    if (mod_reduce(k, adj.M) == mod_reduce(Int(1), adj.M)) continue;
    KElem diff = adj.apply_galois(k, adj.zeta) - adj.zeta;
    auto o = diff.ord();
    require(o.has_value(), errc::precision_too_low, "i(sigma) undecidable at precision");
    out.i_values.emplace_back(k, *o);
    max_i = std::max(max_i, *o);
  }

  // lower groups G_u = { sigma : i(sigma) >= u + 1 }
  auto lower_group = [&](long u) {
    ExpSet s;
    for (auto& k : ks) {
      bool in = mod_reduce(k, adj.M) == mod_reduce(Int(1), adj.M);
      if (!in)
        for (auto& [kk, iv] : out.i_values)
          if (kk == k && iv >= u + 1) in = true;
      if (in) s.ks.push_back(k);
    }
    return s;
  };
  std::vector<ExpSet> g;  // g[u] for u = 0 .. max_i + 1
  for (long u = 0; u <= max_i + 1; ++u) g.push_back(lower_group(u));
  require(g.back().order() == 1, errc::internal, "lower filtration did not reach 1");

  out.lower.emplace_back(0, g[0]);
  for (long u = 1; u <= max_i + 1; ++u)
    if (!(g[u] == out.lower.back().second)) out.lower.emplace_back(u, g[u]);
  if (out.lower.size() > 1 && out.lower.back().second.order() == 1) out.lower.pop_back();
  for (long u = 0; u <= max_i; ++u)
    if (!(g[u] == g[u + 1])) out.lower_breaks.push_back(u);

  // phi: slope 1/(G_0 : G_{m+1}) on [m, m+1)
  HerbrandFn phi;
  for (long m = 0; m <= max_i; ++m) {
    phi.breaks.push_back(Rat(m));
    phi.slopes.push_back(Rat(g[m + 1].order(), g[0].order()));
  }
  if (phi.breaks.empty()) {
    phi = HerbrandFn::identity();
  } else {
    phi.canonicalize();
  }
  out.phi = phi;
  out.psi = phi.inverse();

  // upper filtration: the layer on (phi(m), phi(m+1)] is g[m+1]
  Filtration<ExpSet> up;
  up.jumps.push_back({Rat(0), g[0]});
  for (long m = 0; m <= max_i; ++m) up.jumps.push_back({phi.eval(Rat(m + 1)), g[m + 1]});
  up.canonicalize();
  out.upper = up;
  return out;
}

}  // namespace mlf
