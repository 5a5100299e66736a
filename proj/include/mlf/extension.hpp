#pragma once

// Building new Eisenstein-over-unramified presentations from old ones:
// unramified enlargements, tame Eisenstein steps, and general totally
// ramified steps (adjoining a root of an irreducible polynomial, with the
// uniformizer found by successive approximation).

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "mlf/kpoly.hpp"
#include "mlf/linalg.hpp"
#include "mlf/roots.hpp"

namespace mlf {

// Ring homomorphism K -> L fixing Q_p, determined by images of omega and pi.
class FieldHom {
 public:
  FieldPtr src, dst;

  FieldHom() = default;
  FieldHom(FieldPtr s, FieldPtr t, const KElem& omega_img, const KElem& pi_img)
      : src(std::move(s)), dst(std::move(t)) {
    monos_.reserve(src->d);
    KElem wpow = KElem::one(dst);
    std::vector<KElem> wpows;
    for (int j = 0; j < src->f; ++j) {
      wpows.push_back(wpow);
      wpow = wpow * omega_img;
    }
    KElem ppow = KElem::one(dst);
    for (int i = 0; i < src->e; ++i) {
      for (int j = 0; j < src->f; ++j) monos_.push_back(ppow * wpows[j]);
      ppow = ppow * pi_img;
    }
    pi_img_ = pi_img;
    omega_img_ = omega_img;
  }

  static FieldHom identity(const FieldPtr& F) {
    return FieldHom(F, F, KElem::omega(F), KElem::uniformizer(F));
  }

  const KElem& pi_image() const { return pi_img_; }
  const KElem& omega_image() const { return omega_img_; }
  const KElem& mono_image(int i, int j) const { return monos_[i * src->f + j]; }

  KElem apply(const KElem& x) const {
    require(x.F->same_as(*src), errc::field_mismatch, "hom applied to foreign element");
    KElem acc = KElem::zero(dst);
    for (int i = 0; i < src->e; ++i)
      for (int j = 0; j < src->f; ++j) {
        const Int& c = x.c[i * src->f + j];
        if (c != 0) acc = acc + monos_[i * src->f + j] * KElem::from_int(dst, c);
      }
    acc.aprec = std::min(acc.aprec, x.aprec * (dst->e / src->e) + 0);
    if (x.t > 0) acc = acc * pi_img_.inverse().pow(x.t);
    return acc;
  }

  KElem operator()(const KElem& x) const { return apply(x); }

  // Coefficient-wise sanity check that this is a homomorphism at precision.
  // The source presentation may be shallower than the target, so agreement
  // is only required up to the source's own precision.
  bool valid(long margin = 2) const {
    long scale = dst->e / src->e;
    long prec = std::min<long>(dst->ne, src->ne * scale);
    KPoly g;
    for (long c : src->unram) g.push_back(KElem::from_int(dst, c));
    KElem go = kpoly_eval(g, omega_image());
    if (go.ord_or(dst->ne) < prec - margin * dst->e) return false;
    KPoly eis;
    for (auto& cu : src->eis) {
      KElem c = KElem::zero(dst);
      for (int j = 0; j < src->f; ++j)
        if (cu[j] != 0) c = c + mono_image(0, j) * KElem::from_int(dst, cu[j]);
      eis.push_back(c);
    }
    KElem ev = kpoly_eval(eis, pi_img_);
    return ev.ord_or(dst->ne) >= prec - margin * dst->e - dst->e;
  }

  friend FieldHom compose(const FieldHom& outer, const FieldHom& inner) {
    require(inner.dst->same_as(*outer.src), errc::field_mismatch, "hom composition mismatch");
    return FieldHom(inner.src, outer.dst, outer.apply(inner.omega_image()),
                    outer.apply(inner.pi_image()));
  }

 private:
  std::vector<KElem> monos_;
  KElem pi_img_;
  KElem omega_img_;
};

struct ExtensionStep {
  FieldPtr ext;
  FieldHom embed;       // base -> ext
  KElem adjoined;       // image of the adjoined root (when meaningful)
};

// ---- unramified enlargement ----

inline ExtensionStep unram_enlarge(const FieldPtr& F, int f2) {
  require(f2 % F->f == 0, errc::inconsistent_inputs, "new inertia degree must be a multiple");
  if (f2 == F->f) {
    return {F, FieldHom::identity(F), KElem::omega(F)};
  }
  // helper unramified field of degree f2 to locate the root of the old
  // unramified polynomial
  std::vector<UVec> triv(2, UVec(static_cast<size_t>(f2), 0));
  triv[0][0] = mod_reduce(-F->p, pow_int(F->p, F->N));
  triv[1][0] = 1;
  FieldPtr U2 = make_field(F->p, f2, triv, F->N, F->prec_floor);
  std::vector<Int> gcoeffs(F->unram.begin(), F->unram.end());
  auto roots = integral_roots(kpoly_from_ints(U2, gcoeffs), U2);
  require(static_cast<int>(roots.size()) == F->f, errc::internal,
          "unramified polynomial did not split as expected");
  std::sort(roots.begin(), roots.end(), [](const KElem& a, const KElem& b) { return a.c < b.c; });
  KElem omega_root = roots.front();

  // carry Eisenstein coefficients through omega -> omega_root
  std::vector<UVec> eis2;
  for (auto& cu : F->eis) {
    KElem acc = KElem::zero(U2);
    KElem wp = KElem::one(U2);
    for (int j = 0; j < F->f; ++j) {
      if (cu[j] != 0) acc = acc + wp * KElem::from_int(U2, cu[j]);
      wp = wp * omega_root;
    }
    require(acc.t == 0, errc::internal, "unramified image not integral");
    eis2.push_back(UVec(acc.c.begin(), acc.c.begin() + f2));
  }
  FieldPtr ext = make_field(F->p, f2, eis2, F->N, F->prec_floor);
  KElem omega_in_ext(ext, [&] {
    OVec v = ext->o_zero();
    for (int j = 0; j < f2; ++j) v[j] = omega_root.c[j];
    return v;
  }(), 0, ext->ne);
  FieldHom embed(F, ext, omega_in_ext, KElem::uniformizer(ext));
  require(embed.valid(), errc::internal, "unramified embedding failed validation");
  return {ext, embed, omega_in_ext};
}

// ---- tame Eisenstein step: adjoin a t-th root of the uniformizer ----

inline ExtensionStep tame_eisenstein(const FieldPtr& F, long t) {
  require(t >= 1 && F->p % t != 0 && Int(t) % F->p != 0, errc::inconsistent_inputs,
          "tame degree must be coprime to p");
  if (t == 1) return {F, FieldHom::identity(F), KElem::uniformizer(F)};
  std::vector<UVec> eis2(static_cast<size_t>(F->e) * t + 1, UVec(F->f, 0));
  for (int i = 0; i <= F->e; ++i) eis2[static_cast<size_t>(i) * t] = F->eis[i];
  FieldPtr ext = make_field(F->p, F->f, eis2, F->N, F->prec_floor);
  FieldHom embed(F, ext, KElem::omega(ext), KElem::uniformizer(ext).pow(t));
  require(embed.valid(), errc::internal, "tame embedding failed validation");
  return {ext, embed, KElem::uniformizer(ext)};
}

// ---- general totally ramified step ----

namespace detail {

struct RelCtx {
  FieldPtr F;
  KPoly h;  // monic of degree n over F
  int n;

  using RElem = std::vector<KElem>;

  RElem zero() const { return RElem(n, KElem::zero(F)); }
  RElem from_base(const KElem& a) const {
    RElem z = zero();
    z[0] = a;
    return z;
  }
  RElem gen() const {
    RElem z = zero();
    if (n == 1) {
      z[0] = -h[0];
    } else {
      z[1] = KElem::one(F);
    }
    return z;
  }
  RElem add(const RElem& a, const RElem& b) const {
    RElem c = zero();
    for (int i = 0; i < n; ++i) c[i] = a[i] + b[i];
    return c;
  }
  RElem sub(const RElem& a, const RElem& b) const {
    RElem c = zero();
    for (int i = 0; i < n; ++i) c[i] = a[i] - b[i];
    return c;
  }
  RElem scale(const RElem& a, const KElem& s) const {
    RElem c = zero();
    for (int i = 0; i < n; ++i) c[i] = a[i] * s;
    return c;
  }
  RElem mul(const RElem& a, const RElem& b) const {
    std::vector<KElem> conv(2 * n - 1, KElem::zero(F));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) conv[i + j] = conv[i + j] + a[i] * b[j];
    for (int dgr = 2 * n - 2; dgr >= n; --dgr) {
      KElem lead = conv[dgr];
      if (lead.is_zero()) continue;
      for (int i = 0; i < n; ++i) conv[dgr - n + i] = conv[dgr - n + i] - lead * h[i];
    }
    return RElem(conv.begin(), conv.begin() + n);
  }
  RElem pow(RElem a, long k) const {
    RElem r = from_base(KElem::one(F));
    while (k > 0) {
      if (k & 1) r = mul(r, a);
      a = mul(a, a);
      k >>= 1;
    }
    return r;
  }

  // determinant of the multiplication matrix = N_{L/F}
  KElem norm(const RElem& z) const {
    std::vector<std::vector<KElem>> m(n, std::vector<KElem>(n, KElem::zero(F)));
    RElem col = z;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) m[i][j] = col[i];
      if (j + 1 < n) col = mul(col, gen());
    }
    return det(m);
  }

  KElem det(std::vector<std::vector<KElem>> m) const {
    size_t k = m.size();
    if (k == 1) return m[0][0];
    KElem acc = KElem::zero(F);
    int sign = 1;
    for (size_t i = 0; i < k; ++i) {
      if (!m[i][0].is_zero()) {
        std::vector<std::vector<KElem>> sub;
        for (size_t r = 0; r < k; ++r) {
          if (r == i) continue;
          sub.emplace_back(m[r].begin() + 1, m[r].end());
        }
        KElem term = m[i][0] * det(std::move(sub));
        acc = (sign > 0) ? acc + term : acc - term;
      }
      sign = -sign;
    }
    return acc;
  }

  // valuation in L, normalized so a uniformizer of L has valuation 1
  // (valid when L/F is totally ramified of degree n)
  long val(const RElem& z) const {
    KElem nm = norm(z);
    auto o = nm.ord();
    require(o.has_value(), errc::precision_too_low, "relative norm vanishes at precision");
    return *o;
  }
};

}  // namespace detail

// Adjoin a root of the monic irreducible polynomial h over F; the resulting
// extension must be totally ramified of degree n = deg h.
inline ExtensionStep tot_ram_adjoin(const FieldPtr& F, const KPoly& h) {
  const int n = static_cast<int>(h.size()) - 1;
  require(n >= 2, errc::inconsistent_inputs, "degree must be >= 2");
  detail::RelCtx R{F, h, n};
  using RElem = detail::RelCtx::RElem;

  const KElem piF = KElem::uniformizer(F);
  RElem beta = R.gen();

  // residue of beta: the Teichmueller representative within distance > 0
  RElem y;
  {
    bool found = false;
    for (Int idx = 0; idx < F->q && !found; ++idx) {
      FqCtx::Elt r = F->res.from_index(idx);
      KElem cand;
      if (F->res.is_zero(r)) {
        cand = KElem::zero(F);
      } else {
        OVec v = F->o_zero();
        for (int j = 0; j < F->f; ++j) v[j] = r[j];
        cand = teichmuller(KElem(F, v, 0, F->ne));
      }
      RElem diff = R.sub(beta, R.from_base(cand));
      if (R.val(diff) >= 1) {
        y = diff;
        found = true;
      }
    }
    require(found, errc::internal, "no residue match for the adjoined root");
  }

  // successive approximation until val(y) is coprime to n
  long v = R.val(y);
  for (int guard = 0;; ++guard) {
    require(guard < 4 * F->ne, errc::precision_too_low, "uniformizer search did not terminate");
    if (std::gcd(v, static_cast<long>(n)) == 1) break;
    require(v % n == 0, errc::bound_exceeded,
            "uniformizer search stuck (extension outside the supported class)");
    KElem piPow = piF.pow(v / n);
    RElem u = R.scale(y, piPow.inverse());
    // approximate the unit u by a Teichmueller lift from F
    bool improved = false;
    for (Int idx = 1; idx < F->q && !improved; ++idx) {
      FqCtx::Elt r = F->res.from_index(idx);
      if (F->res.is_zero(r)) continue;
      OVec vv = F->o_zero();
      for (int j = 0; j < F->f; ++j) vv[j] = r[j];
      KElem cand = teichmuller(KElem(F, vv, 0, F->ne));
      RElem diff = R.sub(u, R.from_base(cand));
      long vd = R.val(diff);
      if (vd >= 1) {
        y = R.scale(diff, piPow);
        v = R.val(y);
        improved = true;
      }
    }
    require(improved, errc::internal, "unit approximation step failed");
  }

  // pi_L = y^a * piF^b with a*v + b*n = 1
  Int aa, bb;
  ext_gcd(Int(v), Int(n), aa, bb);
  long a = to_long(mod_reduce(aa, n));  // a in [0,n)
  Int bnum = (Int(1) - Int(a) * v);
  require(bnum % n == 0, errc::internal, "uniformizer exponent arithmetic");
  long b = to_long(bnum / n);
  RElem piL = R.pow(y, a);
  KElem piFb = (b >= 0) ? piF.pow(b) : piF.inverse().pow(-b);
  piL = R.scale(piL, piFb);
  require(R.val(piL) == 1, errc::internal, "constructed element is not a uniformizer");

  const int eL = F->e * n;
  const int dL = F->d * n;

  // columns: omega^j * pi_L^k in the relative representation
  std::vector<RElem> cols;
  cols.reserve(dL);
  RElem piLk = R.from_base(KElem::one(F));
  for (int k = 0; k < eL; ++k) {
    for (int j = 0; j < F->f; ++j) {
      KElem wj = KElem::basis(F, 0, 0);
      if (j > 0) wj = KElem::omega(F).pow(j);
      cols.push_back(R.scale(piLk, wj));
    }
    piLk = R.mul(piLk, piL);
  }
  RElem rhs_pow = piLk;  // pi_L^{eL}

  // flatten with a common denominator pi_F^S
  long S = 0;
  auto scan = [&](const RElem& z) {
    for (auto& cf : z) S = std::max(S, cf.t);
  };
  for (auto& cl : cols) scan(cl);
  scan(rhs_pow);
  KElem piFS = piF.pow(S);
  long prec_budget = F->ne;
  auto flatten = [&](const RElem& z) {
    std::vector<Int> flat(static_cast<size_t>(n) * F->d, 0);
    for (int i = 0; i < n; ++i) {
      KElem cf = z[i] * piFS;
      require(cf.t == 0, errc::internal, "flatten: residual denominator");
      prec_budget = std::min(prec_budget, cf.aprec);
      for (int j = 0; j < F->d; ++j) flat[static_cast<size_t>(i) * F->d + j] = cf.c[j];
    }
    return flat;
  };

  IMat B(dL, std::vector<Int>(dL));
  for (int col = 0; col < dL; ++col) {
    auto flat = flatten(cols[col]);
    for (int row = 0; row < dL; ++row) B[row][col] = flat[row];
  }
  std::vector<Int> rhs = flatten(rhs_pow);
  for (auto& x : rhs) x = mod_reduce(-x, F->pN);

  auto sol = solve_mod_pn(B, rhs, F->p, F->N);
  auto solve_in_basis = [&](const RElem& z) {
    auto s2 = solve_mod_pn(B, flatten(z), F->p, F->N);
    sol.loss = std::max(sol.loss, s2.loss);
    return s2.x;
  };
  std::vector<Int> piF_coords = solve_in_basis(R.from_base(piF));
  std::vector<Int> beta_coords = solve_in_basis(beta);

  int N2 = F->N - static_cast<int>(sol.loss);
  require(N2 >= 2 && static_cast<long>(N2) * eL >= F->prec_floor, errc::precision_too_low,
          "totally ramified step lost too much precision");

  Int pN2 = pow_int(F->p, N2);
  std::vector<UVec> eis2(eL + 1, UVec(F->f, 0));
  for (int k = 0; k < eL; ++k)
    for (int j = 0; j < F->f; ++j)
      eis2[k][j] = mod_reduce(sol.x[static_cast<size_t>(k) * F->f + j], pN2);
  eis2[eL][0] = 1;
  FieldPtr ext = make_field(F->p, F->f, eis2, N2, F->prec_floor);

  auto elem_from_coords = [&](const std::vector<Int>& cs) {
    OVec v = ext->o_zero();
    for (int k = 0; k < eL; ++k)
      for (int j = 0; j < F->f; ++j)
        v[k * F->f + j] = mod_reduce(cs[static_cast<size_t>(k) * F->f + j], pN2);
    return KElem(ext, std::move(v), 0, ext->ne);
  };
  KElem piF_img = elem_from_coords(piF_coords);
  KElem beta_img = elem_from_coords(beta_coords);

  FieldHom embed(F, ext, KElem::omega(ext), piF_img);
  require(embed.valid(), errc::internal, "totally ramified embedding failed validation");
  {
    KPoly himg = kpoly_map(h, [&](const KElem& c) { return embed.apply(c); });
    KElem chk = kpoly_eval(himg, beta_img);
    require(chk.ord_or(ext->ne) >= ext->ne - 3 * ext->e, errc::internal,
            "adjoined root fails its defining polynomial");
  }
  return {ext, embed, beta_img};
}

// Solve hom(x) = z for x; fails if z is not in the image at precision.
inline KElem hom_preimage(const FieldHom& hom, const KElem& z) {
  const FieldPtr& K = hom.src;
  const FieldPtr& L = hom.dst;
  KElem zz = z;
  long shift = 0;
  if (zz.t > 0) {  // clear the denominator with pi_K-images
    long erel = L->e / K->e;
    shift = (zz.t + erel - 1) / erel;
    zz = zz * hom.pi_image().pow(shift);
    require(zz.t == 0, errc::inconsistent_inputs, "preimage denominator not defined over K");
  }
  // columns: images of the K-basis monomials; pick d_K independent rows to
  // solve, then verify the remaining coordinates
  IMat cols(L->d, std::vector<Int>(K->d));
  for (int i = 0; i < K->e; ++i)
    for (int j = 0; j < K->f; ++j) {
      const KElem& img = hom.mono_image(i, j);
      for (int r = 0; r < L->d; ++r) cols[r][i * K->f + j] = img.c[r];
    }
  // choose rows with minimal valuation pivots greedily
  std::vector<int> rows;
  {
    IMat work = cols;
    std::vector<char> used(L->d, 0);
    for (int k = 0; k < K->d; ++k) {
      long best = L->N + 1;
      int bi = -1;
      for (int r = 0; r < L->d; ++r) {
        if (used[r] || work[r][k] == 0) continue;
        long v = val_p(work[r][k], L->p);
        if (v < best) {
          best = v;
          bi = r;
        }
      }
      require(bi >= 0, errc::precision_too_low, "embedding matrix rank deficient");
      used[bi] = 1;
      rows.push_back(bi);
      Int pivinv_num = work[bi][k] / pow_int(L->p, best);
      Int m = pow_int(L->p, L->N);
      Int pivinv = inv_mod(pivinv_num, m);
      for (int r = 0; r < L->d; ++r) {
        if (r == bi || work[r][k] == 0) continue;
        if (val_p(work[r][k], L->p) < best) continue;
        Int mult = mod_reduce(work[r][k] / pow_int(L->p, best) * pivinv, m);
        for (int c2 = 0; c2 < K->d; ++c2) work[r][c2] = mod_reduce(work[r][c2] - mult * work[bi][c2], m);
      }
    }
  }
  IMat sub(K->d, std::vector<Int>(K->d));
  std::vector<Int> rhs(K->d);
  for (int k = 0; k < K->d; ++k) {
    for (int c2 = 0; c2 < K->d; ++c2) sub[k][c2] = cols[rows[k]][c2];
    rhs[k] = zz.c[rows[k]];
  }
  auto sol = solve_mod_pn(sub, rhs, K->p, K->N);
  int n2 = K->N - static_cast<int>(sol.loss);
  require(n2 >= 2, errc::precision_too_low, "preimage solve lost too much precision");
  OVec v(K->d);
  Int pn2 = pow_int(K->p, n2);
  for (int i = 0; i < K->d; ++i) v[i] = mod_reduce(sol.x[i], pn2);
  KElem x(K, std::move(v), 0, static_cast<long>(n2) * K->e);
  // verify
  KElem back = hom.apply(x) - zz;
  require(back.ord_or(L->ne) >= std::min<long>(L->ne, static_cast<long>(n2) * L->e) - L->e,
          errc::precision_too_low, "element is not in the image of the embedding");
  if (shift > 0) x = x * KElem::uniformizer(K).inverse().pow(shift);
  return x;
}

// Rank over Z_p of the lattice spanned by the samples (Lemma 5.1 surrogate).
// Pivot decisions stay below the samples' own precision.
inline int additive_span_rank(const std::vector<KElem>& samples, long margin = 2) {
  require(!samples.empty(), errc::inconsistent_inputs, "no samples");
  const FieldPtr& F = samples.front().F;
  long tmax = 0;
  long aprec_min = F->ne;
  for (auto& s : samples) {
    tmax = std::max(tmax, s.t);
    aprec_min = std::min(aprec_min, s.aprec);
  }
  KElem piT = KElem::uniformizer(F).pow(tmax);
  IMat m(F->d, std::vector<Int>(samples.size()));
  for (size_t k = 0; k < samples.size(); ++k) {
    KElem z = samples[k] * piT;
    require(z.t == 0, errc::internal, "span sample still fractional");
    for (int i = 0; i < F->d; ++i) m[i][k] = z.c[i];
  }
  long cap = std::min<long>(F->N, aprec_min / F->e);
  require(cap > margin, errc::precision_too_low, "samples too shallow for a rank decision");
  auto vals = pivot_valuations(m, F->p, cap);
  int rank = 0;
  for (long v : vals) {
    require(v < cap - margin || v >= cap, errc::precision_too_low,
            "rank decision unstable at current precision");
    if (v < cap - margin) ++rank;
  }
  return rank;
}

}  // namespace mlf
