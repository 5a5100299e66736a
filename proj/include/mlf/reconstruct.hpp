#pragma once

// Group-theoretic reconstruction from label-stripped blobs: invariants,
// the cyclotomic character, inertia and wild inertia, the additive module,
// field recovery through a uniformizing character, the distinguisher, and
// the finite-level checks behind the appendix.

#include <optional>
#include <string>
#include <vector>

#include "mlf/blob.hpp"
#include "mlf/hodge_tate.hpp"

namespace mlf {

// ---- Prop 2.1 ----

struct ReconInvariants {
  Int p = 0;
  long d = 0, e = 0, f = 0;
  bool operator==(const ReconInvariants& o) const {
    return p == o.p && d == o.d && e == o.e && f == o.f;
  }
};

inline ReconInvariants recon_invariants(const ProfinInvariants& inv) {
  require(inv.zhat_rank == 1, errc::not_mlfab_shape, "zhat rank must be 1");
  Int p = 0;
  long extra = 0;
  for (auto& [ell, r] : inv.extra_ranks) {
    if (r == 0) continue;
    require(p == 0, errc::not_mlfab_shape, "multiple rank-excess primes");
    p = ell;
    extra = r;
  }
  require(p != 0, errc::not_mlfab_shape, "no rank-excess prime");
  ReconInvariants out;
  out.p = p;
  out.d = extra;  // pro-p rank is zhat + extra = d + 1
  Int prime_to_p = 1;
  for (auto& t : inv.torsion) {
    Int tt = t;
    while (tt % p == 0) tt /= p;
    prime_to_p *= tt;
  }
  Int qf = prime_to_p + 1;
  long f = 0;
  Int acc = 1;
  while (acc < qf) {
    acc *= p;
    ++f;
  }
  require(acc == qf, errc::not_mlfab_shape, "prime-to-p torsion + 1 is not a power of p");
  out.f = f;
  require(out.d % out.f == 0, errc::not_mlfab_shape, "f does not divide d");
  out.e = out.d / out.f;
  return out;
}

// ---- role recovery on a stripped node ----

struct NodeRoles {
  ReconInvariants inv;
  int frob_coord = -1;
  int wild_coord = -1;  // -1 when the wild torsion is trivial
  long wild_a = 0;      // p-valuation of the torsion chain
};

inline NodeRoles node_roles(const BlobNode& n) {
  NodeRoles roles;
  roles.inv = recon_invariants(n.invariants);
  AbAmbient amb = n.ambient();
  Subgroup t0 = n.tag(0);
  // frob coordinate: the unique modulus > 1 coordinate with trivial tag(0)
  // projection
  for (size_t j = 0; j < amb.rank(); ++j) {
    if (amb.moduli[j] <= 1) continue;
    AbAmbient one{{amb.moduli[j]}};
    IMat proj(amb.rank(), std::vector<Int>(1, 0));
    proj[j][0] = 1;
    if (t0.image(one, proj).order() == 1) {
      require(roles.frob_coord == -1, errc::malformed_blob, "ambiguous frob coordinate");
      roles.frob_coord = static_cast<int>(j);
    }
  }
  require(roles.frob_coord >= 0, errc::malformed_blob, "no frob coordinate");
  // wild coordinate: modulus equal to the p-part of the torsion chain
  Int pa = 1;
  for (auto& t : n.invariants.torsion) {
    Int tt = t;
    long v = 0;
    while (tt % roles.inv.p == 0) {
      tt /= roles.inv.p;
      ++v;
    }
    roles.wild_a += v;
  }
  pa = pow_int(roles.inv.p, roles.wild_a);
  if (pa > 1) {
    for (size_t j = 0; j < amb.rank(); ++j) {
      if (amb.moduli[j] != pa) continue;
      require(roles.wild_coord == -1, errc::malformed_blob, "ambiguous wild coordinate");
      roles.wild_coord = static_cast<int>(j);
    }
    require(roles.wild_coord >= 0, errc::malformed_blob, "no wild coordinate");
  }
  return roles;
}

// ---- Prop 2.2: the cyclotomic character from tower data ----

struct ChiReport {
  std::vector<Int> values;  // per base-module generator, mod ell^nu
  std::vector<std::string> nodes_used;
};

namespace detail {

// generators of each cyclic factor of a subgroup, as ambient elements
inline std::vector<std::pair<Int, std::vector<Int>>> cyclic_decomposition(const Subgroup& s) {
  const size_t n = s.amb.rank();
  IMat stacked;
  for (auto& r : s.basis) stacked.push_back(r);
  for (size_t i = 0; i < n; ++i) {
    std::vector<Int> row(n, 0);
    row[i] = -s.amb.moduli[i];
    stacked.push_back(row);
  }
  auto sn = snf(stacked);
  IMat rel;
  for (size_t i = 0; i < stacked.size(); ++i) {
    bool zero_row = (i >= sn.diag.size()) || (sn.diag[i] == 0);
    if (!zero_row) continue;
    std::vector<Int> g(s.basis.size(), 0);
    for (size_t a2 = 0; a2 < s.basis.size(); ++a2) g[a2] = sn.u[i][a2];
    rel.push_back(std::move(g));
  }
  if (rel.empty()) rel.assign(1, std::vector<Int>(s.basis.size(), 0));
  auto sn2 = snf(rel);
  std::vector<std::pair<Int, std::vector<Int>>> out;  // (order, element)
  for (size_t col = 0; col < s.basis.size(); ++col) {
    Int d = (col < sn2.diag.size() && sn2.diag[col] != 0) ? sn2.diag[col] : Int(0);
    require(d != 0, errc::internal, "cyclic decomposition of an infinite part");
    if (d == 1) continue;
    // generator: sum vinv[col][g] * basis row g
    std::vector<Int> elem(n, 0);
    for (size_t g = 0; g < s.basis.size(); ++g)
      for (size_t j = 0; j < n; ++j) elem[j] += sn2.vinv[col][g] * s.basis[g][j];
    out.emplace_back(d, s.amb.reduce(elem));
  }
  return out;
}

}  // namespace detail

inline ChiReport reconstruct_chi(const MabBlob& blob, const Int& ell, int nu) {
  const BlobNode& base = blob.base();
  Int lnu = pow_int(ell, nu);
  ChiReport rep;
  bool found = false;

  for (auto& node : blob.nodes) {
    NodeRoles roles;
    try {
      roles = node_roles(node);
    } catch (const error&) {
      continue;
    }
    // condition (i): the true ell^nu-torsion of the profinite module is
    // cyclic of full order, i.e. mu_{ell^nu} lies in the node field
    long wtor = 0;
    for (auto& t : node.invariants.torsion) {
      Int tt = t;
      while (tt % ell == 0) {
        tt /= ell;
        ++wtor;
      }
    }
    if (wtor < nu) continue;

    AbAmbient amb = node.ambient();
    std::vector<Int> t_elem;
    if (ell == roles.inv.p) {
      // inside the wild coordinate
      if (roles.wild_coord < 0) continue;
      t_elem.assign(amb.rank(), 0);
      t_elem[roles.wild_coord] = pow_int(ell, roles.wild_a - nu);
    } else {
      // the ell-primary part of tags(0) is the true mu-part
      Subgroup t0 = node.tag(0);
      Int lbig = pow_int(ell, wtor);
      Subgroup tor = t0.torsion(lbig);
      auto dec = detail::cyclic_decomposition(tor);
      if (dec.size() != 1) continue;
      auto& [ord, gen] = dec.front();
      long w = 0;
      Int oo = ord;
      while (oo % ell == 0) {
        oo /= ell;
        ++w;
      }
      if (oo != 1 || w < nu) continue;
      t_elem.assign(amb.rank(), 0);
      for (size_t j = 0; j < amb.rank(); ++j)
        t_elem[j] = mod_reduce(gen[j] * pow_int(ell, w - nu), amb.moduli[j]);
    }

    // the action of each base generator on t must be an exact scalar
    const BlobEdge& e = blob.edge_to(node.id);
    std::vector<Int> vals;
    bool ok = true;
    for (auto& act : e.actions) {
      std::vector<Int> y(amb.rank(), 0);
      for (size_t i = 0; i < amb.rank(); ++i)
        for (size_t j = 0; j < amb.rank(); ++j) y[j] += t_elem[i] * act[i][j];
      for (size_t j = 0; j < amb.rank(); ++j) y[j] = mod_reduce(y[j], amb.moduli[j]);
      // pivot coordinate where t has exact ell-order ell^nu
      int jstar = -1;
      for (size_t j = 0; j < amb.rank(); ++j) {
        if (t_elem[j] == 0) continue;
        Int o = amb.moduli[j] / gcd_int(t_elem[j], amb.moduli[j]);
        if (o == lnu) jstar = static_cast<int>(j);
      }
      if (jstar < 0) {
        ok = false;
        break;
      }
      // solve s * t[jstar] = y[jstar] mod m; t[jstar] = (m/l^nu) * unit
      Int m = amb.moduli[jstar];
      Int step = m / lnu;
      if (y[jstar] % step != 0) {
        ok = false;
        break;
      }
      Int unit = t_elem[jstar] / step;
      require(gcd_int(unit, lnu) == 1, errc::internal, "pivot is not exact");
      Int sval = mod_reduce(y[jstar] / step * inv_mod(unit, lnu), lnu);
      // verify the scalar relation on every coordinate
      for (size_t j = 0; j < amb.rank(); ++j)
        if (mod_reduce(sval * t_elem[j], amb.moduli[j]) != y[j]) {
          ok = false;
          break;
        }
      if (!ok) break;
      vals.push_back(sval);
    }
    if (!ok) continue;
    if (!found) {
      rep.values = vals;
      found = true;
    } else {
      require(rep.values == vals, errc::internal,
              "tower nodes disagree on the cyclotomic character");
    }
    rep.nodes_used.push_back(node.id);
  }
  require(found, errc::no_valid_tower_node, "no node carries full ell^nu torsion");
  return rep;
}

// ---- Lemma 3.1: inertia and wild inertia ----

struct InertiaReport {
  Subgroup inertia;
  Subgroup wild;
  bool exact = false;        // false: upper bound only (directory too shallow)
  bool tame_available = false;
  bool tame_agrees = false;
};

inline InertiaReport inertia_detect(const MabBlob& blob) {
  const BlobNode& base = blob.base();
  AbAmbient amb = base.ambient();
  ReconInvariants binv = recon_invariants(base.invariants);
  Subgroup span0 = base.tag(0);

  Subgroup acc = Subgroup::full(amb);
  bool any = false;
  Subgroup tame_acc = Subgroup::full(amb);
  bool any_tame_ram = false;
  for (auto& entry : blob.directory) {
    ReconInvariants einv = recon_invariants(entry.invariants);
    Subgroup s = entry.gens.empty() ? Subgroup::full(amb) : Subgroup::from_gens(amb, entry.gens);
    if (einv.e == binv.e) {
      acc = acc.intersect(s);
      if (entry.index > 1) any = true;
    }
    require(einv.e % binv.e == 0, errc::malformed_blob, "node e does not refine the base");
    long erel = einv.e / binv.e;
    if (gcd_int(Int(erel), binv.p) == 1) {
      tame_acc = tame_acc.intersect(s);
      if (erel > 1) any_tame_ram = true;
    }
  }
  InertiaReport rep{Subgroup::zero(amb), Subgroup::zero(amb), false, false, false};
  rep.inertia = acc.intersect(span0);
  rep.exact = any;
  long vp = 0;
  {
    Int o = amb.order();
    while (o % binv.p == 0) {
      o /= binv.p;
      ++vp;
    }
  }
  rep.wild = rep.inertia.torsion(pow_int(binv.p, vp));
  if (any_tame_ram) {
    Subgroup tame_cut = tame_acc.intersect(span0);
    rep.tame_available = true;
    rep.tame_agrees = (tame_cut == rep.wild);
    require(tame_cut.contains_subgroup(rep.wild), errc::internal,
            "tame-variant cut lost wild elements");
  }
  return rep;
}

// ---- Props 3.2 / 3.3: the additive module ----

struct AdditiveStage {
  std::string node_id;
  int rank = 0;
  long r = 1;                 // denominator exponent (2 iff p = 2)
  IMat lattice_basis;         // rows: basis of U'(H) in node coordinates
  std::vector<IMat> actions;  // base-generator actions in lattice coordinates
};

struct AdditiveRecon {
  std::vector<AdditiveStage> stages;  // base first
};

namespace detail {

// coordinates of an ambient vector over the rows of a full-rank HNF basis,
// modulo the ambient relations
inline std::vector<Int> coords_over_basis(const Subgroup& s, std::vector<Int> v) {
  std::vector<Int> out(s.basis.size(), 0);
  for (size_t col = 0, r = 0; col < s.amb.rank(); ++col) {
    if (r >= s.basis.size()) break;
    if (s.basis[r][col] == 0) continue;
    Int q = v[col] / s.basis[r][col];
    if (v[col] - q * s.basis[r][col] < 0) q -= 1;
    out[r] = q;
    for (size_t j = 0; j < s.amb.rank(); ++j) v[j] -= q * s.basis[r][j];
    require(v[col] == 0, errc::internal, "vector not in subgroup");
    ++r;
  }
  for (auto& x : v) require(x == 0, errc::internal, "vector not in subgroup");
  return out;
}

}  // namespace detail

inline AdditiveRecon additive_reconstruct(const MabBlob& blob) {
  AdditiveRecon out;
  ReconInvariants binv = recon_invariants(blob.base().invariants);
  long r = (binv.p == 2) ? 2 : 1;
  for (auto& node : blob.nodes) {
    ReconInvariants ninv = recon_invariants(node.invariants);
    long level = r * ninv.e;
    require(level + 2 <= node.depth, errc::depth_too_shallow,
            "filtration tags too shallow for the scale rule");
    AbAmbient amb = node.ambient();
    Subgroup uprime = node.tag(static_cast<int>(level));
    NodeRoles roles = node_roles(node);
    // the deep tag must avoid the frob direction entirely
    for (auto& row : uprime.basis)
      require(row[roles.frob_coord] % amb.moduli[roles.frob_coord] == 0, errc::internal,
              "tag leaks the frob coordinate");

    AdditiveStage st;
    st.node_id = node.id;
    st.r = r;
    auto dec = detail::cyclic_decomposition(uprime);
    st.rank = static_cast<int>(dec.size());
    require(st.rank == ninv.d, errc::depth_too_shallow, "lattice rank does not match d");
    for (auto& [ord, gen] : dec) st.lattice_basis.push_back(gen);

    const BlobEdge& e = blob.edge_to(node.id);
    for (auto& act : e.actions) {
      IMat small(dec.size(), std::vector<Int>(dec.size(), 0));
      for (size_t i = 0; i < dec.size(); ++i) {
        std::vector<Int> y(amb.rank(), 0);
        for (size_t a2 = 0; a2 < amb.rank(); ++a2)
          for (size_t j = 0; j < amb.rank(); ++j) y[j] += st.lattice_basis[i][a2] * act[a2][j];
        for (size_t j = 0; j < amb.rank(); ++j) y[j] = mod_reduce(y[j], amb.moduli[j]);
        auto cs = express_in_gens(st.lattice_basis, amb, y);
        require(cs.has_value(), errc::depth_too_shallow, "action does not preserve the tag");
        for (size_t j = 0; j < dec.size(); ++j) small[i][j] = mod_reduce((*cs)[j], dec[j].first);
      }
      st.actions.push_back(std::move(small));
    }
    out.stages.push_back(std::move(st));
  }
  return out;
}

// ---- Theorem 1.2 scenario: field recovery ----

struct RecoveredField {
  std::vector<Int> minpoly;  // monic, little-endian, over Z mod p^*
  FieldPtr presentation;     // Eisenstein-over-unramified make_field output
};

// rho is given by its values on the base-module generators (in E).
inline RecoveredField recover_field(const MabBlob& blob, const FieldPtr& E,
                                    const std::vector<KElem>& rho_values, int probe_level = -1) {
  const BlobNode& base = blob.base();
  ReconInvariants binv = recon_invariants(base.invariants);
  require(E->p == binv.p, errc::inconsistent_inputs, "residue characteristic mismatch");
  AbAmbient amb = base.ambient();
  require(rho_values.size() == amb.rank(), errc::inconsistent_inputs, "value count");

  long r = (binv.p == 2) ? 2 : 1;
  long level = probe_level > 0 ? probe_level : r * binv.e + 1;
  require(level < base.depth, errc::depth_too_shallow, "probe level beyond the tags");
  Subgroup I = base.tag(static_cast<int>(level));

  long scale = E->e / binv.e;
  long value_cap = base.class_depth * scale;
  auto value_of = [&](const std::vector<Int>& coords) {
    KElem acc = KElem::one(E);
    for (size_t i = 0; i < coords.size(); ++i)
      if (coords[i] != 0) acc = acc * rho_values[i].pow(coords[i]);
    acc.aprec = std::min(acc.aprec, value_cap);
    acc.normalize();
    return acc;
  };

  // span samples: values on basis rows (as classes) and on short products
  IMat class_rows;
  for (auto& row : I.basis) {
    std::vector<Int> r(amb.rank());
    bool nz = false;
    for (size_t k2 = 0; k2 < amb.rank(); ++k2) {
      r[k2] = mod_reduce(row[k2], amb.moduli[k2]);
      nz = nz || r[k2] != 0;
    }
    if (nz) class_rows.push_back(std::move(r));
  }
  std::vector<KElem> samples;
  for (auto& row : class_rows) samples.push_back(value_of(row));
  for (size_t i = 0; i < class_rows.size(); ++i)
    for (size_t j = i; j < class_rows.size(); ++j) {
      std::vector<Int> w(amb.rank());
      for (size_t k2 = 0; k2 < amb.rank(); ++k2)
        w[k2] = mod_reduce(class_rows[i][k2] + class_rows[j][k2], amb.moduli[k2]);
      samples.push_back(value_of(w));
    }
  int rank = additive_span_rank(samples);
  require(rank == binv.d, errc::span_rank_deficient,
          "character values span rank " + std::to_string(rank) + " != d");

  // lattice basis: saturate the sample span inside O_E by valuation-pivot
  // column elimination at the capped precision (transform-free, so the
  // class-precision junk stays bounded)
  const long capd = std::min<long>(E->N, value_cap / E->e);
  std::vector<std::pair<std::vector<Int>, long>> sat;  // (column, valid digits)
  {
    Int pcap = pow_int(E->p, capd);
    IMat m(E->d, std::vector<Int>(samples.size()));
    for (size_t k2 = 0; k2 < samples.size(); ++k2) {
      require(samples[k2].t == 0, errc::not_uniformizing, "non-integral character value");
      for (int i2 = 0; i2 < E->d; ++i2) m[i2][k2] = mod_reduce(samples[k2].c[i2], pcap);
    }
    std::vector<char> col_used(samples.size(), 0), row_used(E->d, 0);
    for (long k2 = 0; k2 < binv.d; ++k2) {
      long best = capd + 1;
      int bi = -1, bj = -1;
      for (int r2 = 0; r2 < E->d; ++r2) {
        if (row_used[r2]) continue;
        for (size_t c2 = 0; c2 < samples.size(); ++c2) {
          if (col_used[c2] || m[r2][c2] == 0) continue;
          long v = val_p(m[r2][c2], E->p);
          if (v < best) {
            best = v;
            bi = r2;
            bj = static_cast<int>(c2);
          }
        }
      }
      require(bi >= 0 && best < capd - 2, errc::span_rank_deficient, "saturation rank");
      row_used[bi] = 1;
      col_used[bj] = 1;
      // divide the pivot column by p^best (defined mod p^(capd - best))
      Int sub_mod = pow_int(E->p, capd - best);
      std::vector<Int> col(E->d);
      for (int r2 = 0; r2 < E->d; ++r2) {
        Int entry = m[r2][bj];
        // entries below the pivot valuation cannot occur; junk-only digits
        // above the cap reduce away
        Int q = (entry % pow_int(E->p, best) == 0) ? entry / pow_int(E->p, best) : Int(0);
        col[r2] = mod_reduce(q, sub_mod);
      }
      sat.emplace_back(col, capd - best);
      // eliminate the pivot row from the remaining columns
      Int pivunit = col[bi];
      Int pivinv = inv_mod(pivunit, sub_mod);
      for (size_t c2 = 0; c2 < samples.size(); ++c2) {
        if (col_used[c2] || m[bi][c2] == 0) continue;
        // subtract (entry / pivot) * pivot-column; entry divisible by p^best
        Int entry = m[bi][c2];
        if (val_p(entry, E->p) < best) continue;  // cannot happen for a minimal pivot
        Int fac = mod_reduce(entry / pow_int(E->p, best) * pivinv, pcap);
        for (int r2 = 0; r2 < E->d; ++r2)
          m[r2][c2] = mod_reduce(m[r2][c2] - fac * col[r2] * pow_int(E->p, best), pcap);
      }
    }
  }
  auto elem_of = [&](const std::vector<Int>& col, long digits) {
    OVec v(E->d);
    for (int i2 = 0; i2 < E->d; ++i2) v[i2] = mod_reduce(col[i2], E->pN);
    return KElem(E, std::move(v), 0, digits * E->e);
  };
  std::vector<KElem> basis;
  for (auto& [col, digits] : sat) basis.push_back(elem_of(col, digits));

  // ring check: products stay in the span
  auto in_span = [&](const KElem& z) {
    std::vector<KElem> test = basis;
    test.push_back(z);
    return additive_span_rank(test) == binv.d;
  };
  for (size_t i2 = 0; i2 < basis.size(); ++i2)
    for (size_t j2 = i2; j2 < basis.size(); ++j2)
      require(in_span(basis[i2] * basis[j2]), errc::not_uniformizing,
              "span is not multiplicatively closed");

  // uniformizer of the recovered subfield: the minimal positive valuation is
  // attained on an F_p-combination of the basis, or on p itself (e_S = 1)
  long g = 0;
  KElem piS = KElem::zero(E);
  std::vector<KElem> cands;
  cands.push_back(KElem::from_int(E, E->p) * basis[0]);
  {
    const long pl = to_long(E->p);
    std::vector<long> digits(basis.size(), 0);
    for (;;) {
      int pos = 0;
      while (pos < static_cast<int>(digits.size()) && digits[pos] == pl - 1) digits[pos++] = 0;
      if (pos == static_cast<int>(digits.size())) break;
      ++digits[pos];
      KElem acc = KElem::zero(E);
      for (size_t i2 = 0; i2 < basis.size(); ++i2)
        if (digits[i2] != 0) acc = acc + KElem::from_int(E, digits[i2]) * basis[i2];
      cands.push_back(acc);
    }
  }
  for (auto& z : cands) {
    auto o = z.ord();
    if (!o || *o <= 0) continue;
    if (g == 0 || *o < g) {
      g = *o;
      piS = z;
    }
  }
  require(g > 0, errc::span_rank_deficient, "no positive-valuation element found");
  require(E->e % g == 0, errc::not_uniformizing,
          "minimal valuation does not divide the ramification");
  long eS = E->e / g;
  require(binv.d % eS == 0, errc::not_uniformizing, "e does not divide d");
  long fS = binv.d / eS;

  // Teichmueller generator of the residue subfield
  KElem omS = KElem::one(E);
  if (fS > 1) {
    Int qS = pow_int(E->p, fS);
    bool found = false;
    for (Int idx = 1; idx < E->q && !found; ++idx) {
      FqCtx::Elt rr = E->res.from_index(idx);
      if (E->res.is_zero(rr)) continue;
      if (E->res.elt_order(rr) == qS - 1) {
        OVec v = E->o_zero();
        for (int j2 = 0; j2 < E->f; ++j2) v[j2] = rr[j2];
        omS = teichmuller(KElem(E, v, 0, E->ne));
        found = true;
      }
    }
    require(found, errc::internal, "no residue generator for the subfield");
    require(in_span(omS), errc::not_uniformizing, "residue subfield not inside the span");
  }

  // Eisenstein polynomial of piS over Z_p[omS]
  const long dS = binv.d;
  IMat bmat(E->d, std::vector<Int>(dS));
  {
    int col = 0;
    KElem pik = KElem::one(E);
    for (long k2 = 0; k2 < eS; ++k2) {
      KElem wj = KElem::one(E);
      for (long j2 = 0; j2 < fS; ++j2) {
        KElem mono = pik * wj;
        require(mono.t == 0, errc::internal, "non-integral monomial");
        for (int r2 = 0; r2 < E->d; ++r2) bmat[r2][col] = mono.c[r2];
        ++col;
        wj = wj * omS;
      }
      pik = pik * piS;
    }
  }
  KElem target = -piS.pow(eS);
  // overdetermined solve: restrict to dS independent rows
  std::vector<int> rows;
  {
    IMat work = bmat;
    std::vector<char> used(E->d, 0);
    for (long k2 = 0; k2 < dS; ++k2) {
      long best = E->N + 1;
      int bi = -1;
      for (int r2 = 0; r2 < E->d; ++r2) {
        if (used[r2] || work[r2][k2] == 0) continue;
        long v = val_p(work[r2][k2], E->p);
        if (v < best) {
          best = v;
          bi = r2;
        }
      }
      require(bi >= 0, errc::precision_too_low, "basis matrix rank deficient");
      used[bi] = 1;
      rows.push_back(bi);
      Int mmod = pow_int(E->p, E->N);
      Int pivinv = inv_mod(work[bi][k2] / pow_int(E->p, best), mmod);
      for (int r2 = 0; r2 < E->d; ++r2) {
        if (r2 == bi || work[r2][k2] == 0) continue;
        if (val_p(work[r2][k2], E->p) < best) continue;
        Int mult = mod_reduce(work[r2][k2] / pow_int(E->p, best) * pivinv, mmod);
        for (long c2 = 0; c2 < dS; ++c2)
          work[r2][c2] = mod_reduce(work[r2][c2] - mult * work[bi][c2], mmod);
      }
    }
  }
  IMat sub(dS, std::vector<Int>(dS));
  std::vector<Int> rhs(dS);
  for (long k2 = 0; k2 < dS; ++k2) {
    for (long c2 = 0; c2 < dS; ++c2) sub[k2][c2] = bmat[rows[k2]][c2];
    rhs[k2] = target.c[rows[k2]];
  }
  const int ncap = static_cast<int>(capd);
  auto sol = solve_mod_pn(sub, rhs, E->p, ncap);
  int n2 = ncap - static_cast<int>(sol.loss) - 1;
  require(n2 >= 3, errc::precision_too_low, "presentation solve lost too much precision");
  Int pn2 = pow_int(E->p, n2);
  std::vector<UVec> eis(eS + 1, UVec(fS, 0));
  for (long k2 = 0; k2 < eS; ++k2)
    for (long j2 = 0; j2 < fS; ++j2) eis[k2][j2] = mod_reduce(sol.x[k2 * fS + j2], pn2);
  eis[eS][0] = 1;
  RecoveredField out;
  out.presentation = make_field(E->p, static_cast<int>(fS), eis, n2);

  // minimal polynomial of a primitive element gamma = omS + piS
  {
    KElem gamma = (fS > 1) ? omS + piS : piS;
    std::vector<KElem> pows{KElem::one(E)};
    for (long k2 = 1; k2 <= dS; ++k2) pows.push_back(pows.back() * gamma);
    IMat gmat(E->d, std::vector<Int>(dS));
    for (long c2 = 0; c2 < dS; ++c2)
      for (int r2 = 0; r2 < E->d; ++r2) gmat[r2][c2] = pows[c2].c[r2];
    std::vector<int> rows2;
    {
      IMat work = gmat;
      std::vector<char> used(E->d, 0);
      for (long k2 = 0; k2 < dS; ++k2) {
        long best = E->N + 1;
        int bi = -1;
        for (int r2 = 0; r2 < E->d; ++r2) {
          if (used[r2] || work[r2][k2] == 0) continue;
          long v = val_p(work[r2][k2], E->p);
          if (v < best) {
            best = v;
            bi = r2;
          }
        }
        require(bi >= 0, errc::precision_too_low, "gamma is not primitive at precision");
        used[bi] = 1;
        rows2.push_back(bi);
        Int mmod = pow_int(E->p, E->N);
        Int pivinv = inv_mod(work[bi][k2] / pow_int(E->p, best), mmod);
        for (int r2 = 0; r2 < E->d; ++r2) {
          if (r2 == bi || work[r2][k2] == 0) continue;
          if (val_p(work[r2][k2], E->p) < best) continue;
          Int mult = mod_reduce(work[r2][k2] / pow_int(E->p, best) * pivinv, mmod);
          for (long c2 = 0; c2 < dS; ++c2)
            work[r2][c2] = mod_reduce(work[r2][c2] - mult * work[bi][c2], mmod);
        }
      }
    }
    IMat sub2(dS, std::vector<Int>(dS));
    std::vector<Int> rhs2(dS);
    for (long k2 = 0; k2 < dS; ++k2) {
      for (long c2 = 0; c2 < dS; ++c2) sub2[k2][c2] = gmat[rows2[k2]][c2];
      rhs2[k2] = pows[dS].c[rows2[k2]];
    }
    auto sol2 = solve_mod_pn(sub2, rhs2, E->p, ncap);
    out.minpoly.assign(dS + 1, 0);
    Int pm = pow_int(E->p, std::max<long>(2, ncap - sol2.loss - 1));
    for (long k2 = 0; k2 < dS; ++k2) out.minpoly[k2] = mod_reduce(-sol2.x[k2], pm);
    out.minpoly[dS] = 1;
  }
  return out;
}

// ---- the distinguisher ----

struct DistinguishReport {
  bool distinguished = false;
  std::string witness_kind;
  std::string lhs, rhs;
};

inline DistinguishReport distinguish(const MabBlob& b1, const MabBlob& b2) {
  const BlobNode& n1 = b1.base();
  const BlobNode& n2 = b2.base();
  // comparable truncations: same moduli shape cannot be required (it may be
  // the witness); but the frob modulus and depth must match
  require(!n1.moduli.empty() && !n2.moduli.empty() && n1.moduli[0] == n2.moduli[0] &&
              n1.depth > 0 && n2.depth > 0,
          errc::incomparable_truncations, "frob moduli differ");

  DistinguishReport rep;
  auto finish = [&](const std::string& kind, const std::string& a, const std::string& b) {
    rep.distinguished = true;
    rep.witness_kind = kind;
    rep.lhs = a;
    rep.rhs = b;
    return rep;
  };

  // 1. profinite invariants
  {
    Json a = invariants_json(n1.invariants), b = invariants_json(n2.invariants);
    if (a.dump() != b.dump()) return finish("profinite_invariants", a.dump(), b.dump());
  }
  // 2. filtration jump profile (orders of the tag subgroups)
  {
    std::vector<Int> p1, p2;
    for (int j = 0; j <= std::min(n1.depth, n2.depth); ++j) {
      p1.push_back(n1.tag(j).order());
      p2.push_back(n2.tag(j).order());
    }
    if (p1 != p2)
      return finish("filtration_profile", ivec_json(p1).dump(), ivec_json(p2).dump());
  }
  // 3. directory invariant multisets
  {
    auto key = [](const BlobDirEntry& d) {
      Json j;
      j["index"] = int_json(d.index);
      j["f_rel"] = int_json(d.f_rel);
      j["e_rel"] = int_json(d.e_rel);
      j["invariants"] = invariants_json(d.invariants);
      return j.dump();
    };
    std::vector<std::string> k1, k2;
    for (auto& d : b1.directory) k1.push_back(key(d));
    for (auto& d : b2.directory) k2.push_back(key(d));
    std::sort(k1.begin(), k1.end());
    std::sort(k2.begin(), k2.end());
    if (k1 != k2) {
      // first difference as witness
      for (size_t i = 0; i < std::max(k1.size(), k2.size()); ++i) {
        std::string a = i < k1.size() ? k1[i] : "(absent)";
        std::string b = i < k2.size() ? k2[i] : "(absent)";
        if (a != b) return finish("directory_multiset", a, b);
      }
    }
  }
  // 4. galois-action conjugacy invariants: elementary divisors of (A - 1)
  {
    auto action_keys = [](const MabBlob& blob) {
      std::vector<std::string> keys;
      for (auto& e : blob.edges) {
        const BlobNode& node = blob.node_by_id(e.to);
        for (auto& act : e.actions) {
          IMat m = act;
          for (size_t i = 0; i < m.size(); ++i) m[i][i] -= 1;
          for (size_t i = 0; i < node.moduli.size(); ++i) {
            std::vector<Int> row(node.moduli.size(), 0);
            row[i] = node.moduli[i];
            m.push_back(row);
          }
          auto s = snf(m);
          std::vector<Int> nontriv;
          for (auto& d : s.diag)
            if (d > 1) nontriv.push_back(d);
          keys.push_back(ivec_json(nontriv).dump());
        }
      }
      std::sort(keys.begin(), keys.end());
      return keys;
    };
    auto k1 = action_keys(b1), k2 = action_keys(b2);
    if (k1 != k2) {
      for (size_t i = 0; i < std::max(k1.size(), k2.size()); ++i) {
        std::string a = i < k1.size() ? k1[i] : "(absent)";
        std::string b = i < k2.size() ? k2[i] : "(absent)";
        if (a != b) return finish("action_conjugacy", a, b);
      }
    }
  }
  return rep;  // indistinguishable at this depth
}

// ---- Appendix A finite-level checks ----

struct AppendixAReport {
  bool ver_kernel_window_trivial = false;  // item (1)
  bool transfer_norm_identity = false;     // item (2)
  bool fixed_points_equal_image = false;   // item (3)
  bool power_intersection_ok = false;      // the final step of Prop A.1
  bool power_order_shrinks = false;
};

inline AppendixAReport appendixA_checks(const ArtinModule& mk, const ArtinModule& ml,
                                        const CycloAdjunction& adj, int window = 4) {
  AppendixAReport rep;
  const FieldPtr& K = mk.field;
  IMat ver = ver_matrix(mk, ml, adj);
  long erel = ml.field->e / K->e;

  // (1) kernel of the transfer, intersected with the window: trivial.
  // The window cuts the inevitable frob wrap-around of the Z/M truncation:
  // kernel elements must sit far out in the frob direction.
  {
    Subgroup ker = Subgroup::zero(ml.amb).preimage(mk.amb, ver);
    Subgroup unit_part = ker.intersect(mk.tags[0]);
    // the unit block may only lose classes past the shared class-precision
    long erel2 = ml.field->e / K->e;
    long wlevel = std::min(mk.class_prec, ml.class_prec / erel2) - 1;
    wlevel = std::max<long>(1, std::min<long>(wlevel, mk.depth));
    bool ok = mk.tags[static_cast<int>(wlevel)].contains_subgroup(unit_part);
    if (ok && ker.order() > unit_part.order()) {
      require(ker.order() <= 4096, errc::window_too_narrow, "kernel too large to enumerate");
      auto dec = detail::cyclic_decomposition(ker);
      std::vector<Int> digits(dec.size(), 0);
      std::function<bool(size_t)> rec = [&](size_t pos) -> bool {
        if (pos == dec.size()) {
          std::vector<Int> v(mk.amb.rank(), 0);
          bool zero = true;
          for (size_t i = 0; i < dec.size(); ++i)
            for (size_t j = 0; j < mk.amb.rank(); ++j) v[j] += digits[i] * dec[i].second[j];
          for (size_t j = 0; j < mk.amb.rank(); ++j) {
            v[j] = mod_reduce(v[j], mk.amb.moduli[j]);
            zero = zero && v[j] == 0;
          }
          if (zero) return true;
          Int fr = v[0];
          if (fr == 0) return true;  // unit-block element: handled by the tag window
          Int m = mk.amb.moduli[0];
          Int dist = std::min(fr, Int(m - fr));
          return dist >= m / (window * erel);
        }
        for (Int t = 0; t < dec[pos].first; ++t) {
          digits[pos] = t;
          if (!rec(pos + 1)) return false;
        }
        digits[pos] = 0;
        return true;
      };
      ok = rec(0);
    }
    rep.ver_kernel_window_trivial = ok;
  }

  // (2) under the Artin labels: norm after transfer is raising to [L:K].
  {
    bool ok = true;
    Int n = Int(adj.galois_exponents.size());
    for (size_t i = 0; i < mk.gen_reps.size() && ok; ++i) {
      KElem z = adj.norm_to_base_side(adj.embed.apply(mk.gen_reps[i]));
      KElem back = hom_preimage(adj.embed, z);
      auto d = mk.dlog(back);
      for (size_t j = 0; j < mk.amb.rank() && ok; ++j) {
        Int expect = (i == j) ? mod_reduce(n, mk.amb.moduli[j]) : Int(0);
        ok = (d[j] == expect);
      }
    }
    rep.transfer_norm_identity = ok;
  }

  // (3) fixed points of the Galois action equal the transfer image, after
  // coarsening the principal block by the declared buffer.
  {
    IMat stacked;
    for (auto& k : adj.galois_exponents) {
      IMat a = action_matrix_of(ml, adj, k);
      for (size_t i = 0; i < a.size(); ++i) a[i][i] -= 1;
      for (auto& row : a) stacked.push_back(row);
    }
    // Fix = kernel of (A - 1) stacked: preimage of zero under the combined map
    AbAmbient multi;
    for (size_t rep2 = 0; rep2 < adj.galois_exponents.size(); ++rep2)
      for (auto& m : ml.amb.moduli) multi.moduli.push_back(m);
    IMat wide(ml.amb.rank(), std::vector<Int>(multi.rank(), 0));
    for (size_t blk = 0; blk < adj.galois_exponents.size(); ++blk) {
      IMat a = action_matrix_of(ml, adj, adj.galois_exponents[blk]);
      for (size_t i = 0; i < ml.amb.rank(); ++i) {
        for (size_t j = 0; j < ml.amb.rank(); ++j) {
          wide[i][blk * ml.amb.rank() + j] = a[i][j] - (i == j ? 1 : 0);
        }
      }
    }
    Subgroup fix = Subgroup::zero(multi).preimage(ml.amb, wide);
    Subgroup img = Subgroup::full(mk.amb).image(ml.amb, ver);
    // coarsen: reduce the principal block by p^window
    AbAmbient coarse = ml.amb;
    Int pw = pow_int(K->p, window);
    for (size_t j = 3; j < coarse.moduli.size(); ++j)
      coarse.moduli[j] = coarse.moduli[j] / gcd_int(coarse.moduli[j], pw);
    IMat idm(ml.amb.rank(), std::vector<Int>(ml.amb.rank(), 0));
    for (size_t i = 0; i < ml.amb.rank(); ++i) idm[i][i] = 1;
    Subgroup cf = fix.image(coarse, idm);
    Subgroup ci = img.image(coarse, idm);
    rep.fixed_points_equal_image = (cf == ci);
  }

  // power intersection on the base module
  {
    Subgroup acc = Subgroup::full(mk.amb);
    Int l = 1;
    const int N = 8;
    for (int n = 1; n <= N; ++n) {
      acc = acc.intersect(Subgroup::full(mk.amb).multiples(n));
      l = lcm_int(l, n);
    }
    Subgroup direct = Subgroup::full(mk.amb).multiples(l);
    rep.power_intersection_ok = (acc == direct);
    // relative order shrinks as the truncation deepens
    Rat ratio1(direct.order(), mk.amb.order());
    AbAmbient deeper = mk.amb;
    for (size_t j = 2; j < deeper.moduli.size(); ++j) deeper.moduli[j] *= K->p;
    Subgroup d2 = Subgroup::full(deeper).multiples(l);
    Rat ratio2(d2.order(), deeper.order());
    rep.power_order_shrinks = ratio2 < ratio1;
  }
  return rep;
}

}  // namespace mlf
