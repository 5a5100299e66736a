#pragma once

// K(zeta_M) towers: unramified part by enlarging the inertia layer, wild part
// by a ladder of degree-p Kummer steps, plus the Galois action realized as
// exponent maps zeta -> zeta^k with explicit coordinate matrices.

#include <map>
#include <vector>

#include "mlf/extension.hpp"

namespace mlf {

class CycloAdjunction {
 public:
  FieldPtr base, ext;
  Int M = 1;
  KElem zeta;                         // primitive M-th root of unity in ext
  FieldHom embed;                     // base -> ext
  std::vector<Int> galois_exponents;  // all k in [0,M) giving automorphisms over base
  int rel_deg = 1;

  // expansion machinery: columns of basis_mat are embed(mono_src) * zeta^t
  IMat basis_mat;
  IMat basis_inv;
  long inv_prec = 0;  // basis_inv valid mod p^inv_prec

  const IMat& sigma_matrix(const Int& k) const {
    auto it = sigma_cache_.find(mod_reduce(k, M));
    require(it != sigma_cache_.end(), errc::inconsistent_inputs,
            "exponent is not a Galois automorphism of this adjunction");
    return it->second;
  }

  KElem apply_galois(const Int& k, const KElem& x) const {
    const IMat& S = sigma_matrix(k);
    const Int mod = pow_int(ext->p, inv_prec);
    OVec v(ext->d, 0);
    for (int r = 0; r < ext->d; ++r) {
      Int acc = 0;
      for (int c = 0; c < ext->d; ++c)
        if (x.c[c] != 0) acc += S[r][c] * x.c[c];
      v[r] = mod_reduce(acc, mod);
    }
    long prec = std::min<long>(x.aprec, inv_prec * ext->e);
    KElem y(ext, std::move(v), 0, prec);
    if (x.t > 0) {
      KElem pimg = apply_galois_integral(k, KElem::uniformizer(ext));
      y = y * pimg.inverse().pow(x.t);
    }
    return y;
  }

  KElem norm_to_base_side(const KElem& x) const {  // product of all conjugates, in ext
    KElem acc = KElem::one(ext);
    for (auto& k : galois_exponents) acc = acc * apply_galois(k, x);
    return acc;
  }

  void finalize();  // computes exponents + matrices after fields are set

 private:
  KElem apply_galois_integral(const Int& k, const KElem& x) const {
    const IMat& S = sigma_matrix(k);
    const Int mod = pow_int(ext->p, inv_prec);
    OVec v(ext->d, 0);
    for (int r = 0; r < ext->d; ++r) {
      Int acc = 0;
      for (int c = 0; c < ext->d; ++c)
        if (x.c[c] != 0) acc += S[r][c] * x.c[c];
      v[r] = mod_reduce(acc, mod);
    }
    return KElem(ext, std::move(v), 0, std::min<long>(x.aprec, inv_prec * ext->e));
  }

  std::map<Int, IMat> sigma_cache_;
};

inline void CycloAdjunction::finalize() {
  const FieldPtr& K = base;
  const FieldPtr& L = ext;
  rel_deg = L->d / K->d;
  const int n = rel_deg;
  const int dL = L->d;

  std::vector<KElem> zpow(to_long(M) + 1, KElem::one(L));
  for (long t = 1; t <= to_long(M); ++t) zpow[t] = zpow[t - 1] * zeta;
  require(zpow[to_long(M)].eq(KElem::one(L)), errc::internal, "zeta^M != 1");
  for (auto& [ell, mult] : factorize(M))
    require(!zpow[to_long(M / ell)].eq(KElem::one(L)), errc::internal,
            "zeta is not primitive at precision");

  // basis columns embed(mono) * zeta^t
  std::vector<KElem> cols;
  cols.reserve(dL);
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < K->e; ++i)
      for (int j = 0; j < K->f; ++j) cols.push_back(embed.mono_image(i, j) * zpow[t]);
  basis_mat.assign(dL, std::vector<Int>(dL));
  for (int c = 0; c < dL; ++c) {
    require(cols[c].t == 0, errc::internal, "non-integral basis column");
    for (int r = 0; r < dL; ++r) basis_mat[r][c] = cols[c].c[r];
  }

  // invert the basis matrix column by column
  long loss = 0;
  basis_inv.assign(dL, std::vector<Int>(dL, 0));
  for (int c = 0; c < dL; ++c) {
    std::vector<Int> rhs(dL, 0);
    rhs[c] = 1;
    auto sol = solve_mod_pn(basis_mat, rhs, L->p, L->N);
    loss = std::max(loss, sol.loss);
    for (int r = 0; r < dL; ++r) basis_inv[r][c] = sol.x[r];
  }
  inv_prec = L->N - loss;
  require(inv_prec >= 2, errc::precision_too_low, "zeta-power basis too degenerate");
  const Int mod = pow_int(L->p, inv_prec);
  for (auto& row : basis_inv)
    for (auto& x : row) x = mod_reduce(x, mod);

  auto expand = [&](const KElem& x) {
    require(x.t == 0, errc::internal, "expand: non-integral");
    std::vector<Int> out(dL, 0);
    for (int r = 0; r < dL; ++r) {
      Int acc = 0;
      for (int c = 0; c < dL; ++c)
        if (x.c[c] != 0) acc += basis_inv[r][c] * x.c[c];
      out[r] = mod_reduce(acc, mod);
    }
    return out;
  };

  // candidate exponents: zeta -> zeta^k must send zeta^n to the value the
  // linear extension predicts
  std::vector<Int> zn_coeffs = expand(zpow[static_cast<size_t>(n % to_long(M))] *
                                      KElem::one(L));  // zeta^n
  galois_exponents.clear();
  const long Ml = to_long(M);
  for (long k = 0; k < Ml; ++k) {
    if (gcd_int(Int(k == 0 ? M : k), M) != 1 && !(M == 1 && k == 0)) continue;
    // predicted sigma(zeta^n)
    KElem pred = KElem::zero(L);
    for (int t = 0; t < n; ++t)
      for (int i = 0; i < K->e; ++i)
        for (int j = 0; j < K->f; ++j) {
          const Int& cf = zn_coeffs[static_cast<size_t>(t) * K->d + i * K->f + j];
          if (cf != 0)
            pred = pred + embed.mono_image(i, j) * zpow[(static_cast<long>(t) * k) % Ml] *
                              KElem::from_int(L, cf);
        }
    KElem actual = zpow[(static_cast<long>(n) * k) % Ml];
    KElem diff = pred - actual;
    if (diff.ord_or(L->ne) >= std::min<long>(L->ne, inv_prec * L->e) - L->e) {
      galois_exponents.push_back(k);
    }
  }
  require(static_cast<int>(galois_exponents.size()) == n, errc::internal,
          "wrong number of Galois automorphisms found");

  // sigma matrices: sigma(column-basis of L) via the expansion of each
  // standard monomial of L
  std::vector<std::vector<Int>> mono_coeffs(dL);
  for (int mcol = 0; mcol < dL; ++mcol) {
    OVec v = L->o_zero();
    v[mcol] = 1;
    mono_coeffs[mcol] = expand(KElem(L, std::move(v), 0, L->ne));
  }
  for (auto& k : galois_exponents) {
    IMat S(dL, std::vector<Int>(dL, 0));
    for (int mcol = 0; mcol < dL; ++mcol) {
      KElem img = KElem::zero(L);
      for (int t = 0; t < n; ++t)
        for (int i = 0; i < K->e; ++i)
          for (int j = 0; j < K->f; ++j) {
            const Int& cf = mono_coeffs[mcol][static_cast<size_t>(t) * K->d + i * K->f + j];
            if (cf != 0)
              img = img + embed.mono_image(i, j) * zpow[(static_cast<long>(t) * to_long(k)) % Ml] *
                              KElem::from_int(L, cf);
          }
      for (int r = 0; r < dL; ++r) S[r][mcol] = mod_reduce(img.c[r], mod);
    }
    sigma_cache_.emplace(k, std::move(S));
  }
}

// degree of Q_p(zeta_M) over Q_p (closed form)
inline long cyclotomic_degree_over_qp(const Int& p, Int m) {
  long s = 0;
  while (m % p == 0) {
    m /= p;
    ++s;
  }
  Int wild = (s == 0) ? Int(1) : pow_int(p, s - 1) * (p - 1);
  if (p == 2 && s == 1) wild = 1;
  long tame = (m > 1) ? mult_order(p, m) : 1;
  return tame * to_long(wild);
}

// ---- the cyclotomic tower builder ----

struct CycloOptions {
  int max_abs_degree = 64;
};

inline CycloAdjunction adjoin_cyclotomic(const FieldPtr& K, const Int& M,
                                         CycloOptions opts = {}) {
  require(M >= 1, errc::inconsistent_inputs, "M must be >= 1");
  CycloAdjunction adj;
  adj.base = K;
  adj.M = M;

  long s = 0;
  Int m = M;
  while (m % K->p == 0) {
    m /= K->p;
    ++s;
  }

  FieldPtr C = K;
  FieldHom total = FieldHom::identity(K);
  KElem zeta_m = KElem::one(K);
  KElem zeta_w = KElem::one(K);

  // closed-form degree over Q_p, to refuse hopeless towers before building
  {
    Int phis = (s == 0) ? Int(1) : pow_int(K->p, s - 1) * (K->p - 1);
    if (K->p == 2 && s == 1) phis = 1;
    long rr = (m > 1) ? mult_order(Int(K->p), m) : 1;
    require(Int(rr) * phis * K->d <= opts.max_abs_degree * K->d &&
                Int(rr) * phis <= opts.max_abs_degree,
            errc::bound_exceeded, "cyclotomic degree bound exceeded");
  }
  if (m > 1) {
    long r = mult_order(K->q, m);
    require(K->d * r <= opts.max_abs_degree, errc::bound_exceeded, "degree bound exceeded");
    ExtensionStep step = unram_enlarge(K, K->f * static_cast<int>(r));
    C = step.ext;
    total = step.embed;
    zeta_w = total.apply(zeta_w);
    // canonical primitive m-th root: first residue element of exact order m
    bool found = false;
    for (Int idx = 1; idx < C->q && !found; ++idx) {
      FqCtx::Elt rr = C->res.from_index(idx);
      if (C->res.is_zero(rr)) continue;
      if (C->res.elt_order(rr) == m) {
        OVec v = C->o_zero();
        for (int j = 0; j < C->f; ++j) v[j] = rr[j];
        zeta_m = teichmuller(KElem(C, v, 0, C->ne));
        found = true;
      }
    }
    require(found, errc::internal, "no primitive residue root found");
  }

  for (long j = 1; j <= s; ++j) {
    if (K->p == 2 && j == 1) {
      zeta_w = KElem::from_int(C, -1);
      continue;
    }
    KPoly h;
    if (j == 1) {
      std::vector<Int> cs(to_long(K->p), 1);  // Phi_p = 1 + x + ... + x^{p-1}
      h = kpoly_from_ints(C, cs);
    } else {
      h.assign(to_long(K->p) + 1, KElem::zero(C));
      h[0] = -zeta_w;
      h[to_long(K->p)] = KElem::one(C);
    }
    // mu_{p^j} needs phi(p^j) | e; skip the root search when impossible
    Int phij = pow_int(K->p, j - 1) * (K->p - 1);
    std::vector<KElem> rts;
    if (Int(C->e) % phij == 0) rts = integral_roots(h, C);
    if (!rts.empty()) {
      std::sort(rts.begin(), rts.end(), [](const KElem& a, const KElem& b) { return a.c < b.c; });
      zeta_w = rts.front();
      continue;
    }
    require(C->d * (static_cast<int>(h.size()) - 1) <= opts.max_abs_degree, errc::bound_exceeded,
            "degree bound exceeded");
    ExtensionStep step = tot_ram_adjoin(C, h);
    zeta_m = step.embed.apply(zeta_m);
    zeta_w = step.adjoined;
    total = compose(step.embed, total);
    C = step.ext;
  }

  adj.ext = C;
  adj.embed = C->same_as(*K) ? FieldHom::identity(K) : total;
  adj.zeta = zeta_m * zeta_w;
  if (M == 1) adj.zeta = KElem::one(C);
  adj.finalize();
  return adj;
}

// ---- embeddings K -> E over Q_p ----

inline std::vector<FieldHom> embeddings(const FieldPtr& K, const FieldPtr& E) {
  require(K->p == E->p, errc::inconsistent_inputs, "different residue characteristics");
  require(E->d % K->d == 0, errc::inconsistent_inputs, "degree obstruction");
  std::vector<FieldHom> out;
  if (K->d == 1) {
    KElem piv = KElem::uniformizer(K);  // = -E_0, a plain integer
    out.emplace_back(K, E, KElem::zero(E), KElem::from_int(E, piv.c[0]));
    return out;
  }

  const int d = K->d;
  // primitive element and its power matrix
  KElem gamma = KElem::zero(K);
  IMat G;
  std::vector<KElem> gpow;
  bool have = false;
  for (int cand = 0; cand < 12 && !have; ++cand) {
    if (K->f == 1)
      gamma = KElem::uniformizer(K);
    else if (K->e == 1)
      gamma = KElem::omega(K);
    else
      gamma = KElem::omega(K) + KElem::from_int(K, cand) * KElem::uniformizer(K);
    gpow.assign(1, KElem::one(K));
    for (int i = 1; i <= d; ++i) gpow.push_back(gpow.back() * gamma);
    G.assign(d, std::vector<Int>(d));
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) G[r][c] = gpow[c].c[r];
    try {
      solve_mod_pn(G, gpow[d].c, K->p, K->N);
      have = true;
    } catch (const error&) {
      have = false;
    }
    if (K->f == 1 || K->e == 1) break;
  }
  require(have, errc::precision_too_low, "no primitive element found");

  auto solveK = [&](const std::vector<Int>& rhs) { return solve_mod_pn(G, rhs, K->p, K->N); };
  auto minrel = solveK(gpow[d].c);
  auto omega_rel = solveK(KElem::omega(K).c);
  auto pi_rel = solveK(KElem::uniformizer(K).c);

  std::vector<Int> mp(d + 1);
  for (int i = 0; i < d; ++i) mp[i] = mod_reduce(-minrel.x[i], K->pN);
  mp[d] = 1;
  auto rts = integral_roots(kpoly_from_ints(E, mp), E);
  std::sort(rts.begin(), rts.end(), [](const KElem& a, const KElem& b) { return a.c < b.c; });

  for (auto& rho : rts) {
    std::vector<KElem> rpow(1, KElem::one(E));
    for (int i = 1; i < d; ++i) rpow.push_back(rpow.back() * rho);
    auto eval_rel = [&](const std::vector<Int>& cs) {
      KElem acc = KElem::zero(E);
      for (int i = 0; i < d; ++i)
        if (cs[i] != 0) acc = acc + rpow[i] * KElem::from_int(E, cs[i]);
      return acc;
    };
    FieldHom hom(K, E, eval_rel(omega_rel.x), eval_rel(pi_rel.x));
    if (hom.valid()) out.push_back(std::move(hom));
  }
  return out;
}

}  // namespace mlf
