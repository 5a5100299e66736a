#pragma once

// Root finding over O_K: digit-wise branch and prune, with Newton capture as
// soon as an approximation separates (v(h(r)) > 2 v(h'(r))).

#include <vector>

#include "mlf/kpoly.hpp"

namespace mlf {

namespace detail {

inline KElem newton_lift(const KPoly& h, const KPoly& dh, KElem r) {
  for (int it = 0; it < 200; ++it) {
    KElem hv = kpoly_eval(h, r);
    if (hv.is_zero()) return r;
    KElem dv = kpoly_eval(dh, r);
    KElem r2 = r - hv / dv;
    if (r2.eq(r)) {
      KElem check = kpoly_eval(h, r2);
      require(check.is_zero(), errc::precision_too_low, "newton stalled before vanishing");
      return r2;
    }
    r = r2;
  }
  fail(errc::internal, "newton did not converge");
}

}  // namespace detail

// All roots of h in O_K, exact at precision. Throws PrecisionTooLow when a
// candidate cannot be separated within the stored precision.
inline std::vector<KElem> integral_roots(const KPoly& h, const FieldPtr& F,
                                         size_t width_cap = 60000) {
  require(!h.empty(), errc::internal, "empty polynomial");
  KPoly dh = kpoly_derivative(h);
  long coeff_prec = F->ne;
  for (auto& c : h) coeff_prec = std::min(coeff_prec, c.aprec);
  const long kmax = coeff_prec - 1;

  struct State {
    OVec r;
    long k;
  };
  std::vector<State> frontier{{F->o_zero(), 0}};
  std::vector<KElem> roots;

  auto push_root = [&](const KElem& r) {
    for (auto& known : roots)
      if (known.eq(r)) return;
    roots.push_back(r);
  };

  Int qi = F->q;
  long q = to_long(qi);

  while (!frontier.empty()) {
    require(frontier.size() <= width_cap, errc::bound_exceeded, "root search too wide");
    std::vector<State> next;
    for (auto& st : frontier) {
      KElem r(F, st.r, 0, F->ne);
      KElem hv = kpoly_eval(h, r);
      long vh = hv.ord_or(hv.aprec);
      if (vh < st.k) continue;  // no root extends this digit prefix
      KElem dv = kpoly_eval(dh, r);
      auto odv = dv.ord();
      if (odv && st.k > *odv) {
        // v(h') is already stable on the ball: a root r* = r mod pi^k forces
        // v(h(r)) >= min(v(h'(r)) + k, 2k)
        if (vh < std::min(*odv + st.k, 2 * st.k)) continue;
        if (vh > 2 * (*odv)) {
          push_root(detail::newton_lift(h, dh, r));
          continue;
        }
      }
      require(st.k < kmax, errc::precision_too_low, "root candidate not separated at precision");
      // branch on the next pi-digit
      OVec pik = F->o_one();
      for (long s = 0; s < st.k; ++s) pik = F->o_mul_pi(pik);
      for (long idx = 0; idx < q; ++idx) {
        FqCtx::Elt dig = F->res.from_index(idx);
        OVec delta = F->o_zero();
        bool nz = false;
        for (int j = 0; j < F->f; ++j) {
          delta[j] = dig[j];
          nz = nz || dig[j] != 0;
        }
        OVec child = st.r;
        if (nz) child = F->o_add(child, F->o_mul(delta, pik));
        next.push_back({std::move(child), st.k + 1});
      }
    }
    frontier = std::move(next);
  }
  return roots;
}

// Largest nu <= bound with mu_{ell^nu} contained in K, decided by lifting
// roots of the (ell^nu)-th cyclotomic polynomial. The wild ladder is
// pre-filtered by the ramification divisibility phi(ell^k) | e, and the tame
// one by ell^k | q - 1; both conditions are forced by the degree formulas,
// so the Hensel search only runs where roots can exist.
inline int roots_of_unity(const FieldPtr& F, const Int& ell, int bound) {
  require(is_prime(ell), errc::not_prime, "ell must be prime");
  int nu = 0;
  for (int k = 1; k <= bound; ++k) {
    if (ell == F->p) {
      Int phik = pow_int(ell, k - 1) * (ell - 1);
      if (Int(F->e) % phik != 0) break;
    } else {
      if ((F->q - 1) % pow_int(ell, k) != 0) break;
    }
    // Phi_{ell^k}(x) = sum_{j<ell} x^{j * ell^(k-1)}, except Phi_2 = x + 1.
    std::vector<Int> cs;
    if (ell == 2 && k == 1) {
      cs = {1, 1};
    } else {
      long step = to_long(pow_int(ell, k - 1));
      long lell = to_long(ell);
      cs.assign(step * (lell - 1) + 1, 0);
      for (long j = 0; j < lell; ++j)
        if (ell != 2 || j < 2) cs[j * step] = 1;
      if (ell == 2) {
        cs.assign(step + 1, 0);
        cs[0] = 1;
        cs[step] = 1;  // x^{2^{k-1}} + 1
      }
    }
    require(static_cast<long>(cs.size()) < 4000, errc::precision_too_low,
            "cyclotomic degree exceeds the configured bound");
    auto rts = integral_roots(kpoly_from_ints(F, cs), F);
    if (rts.empty()) break;
    nu = k;
  }
  return nu;
}

}  // namespace mlf
