#pragma once

// Exact truncated arithmetic in Eisenstein-over-unramified presentations of
// finite extensions of Q_p. All ring arithmetic is modulo p^N; every value
// carries the absolute pi-adic precision it is known to.

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mlf/bigint.hpp"
#include "mlf/errors.hpp"
#include "mlf/fp_poly.hpp"
#include "mlf/linalg.hpp"

namespace mlf {

using UVec = std::vector<Int>;  // element of the unramified subring, f coords mod p^N
using OVec = std::vector<Int>;  // element of O_K, d = e*f coords mod p^N, idx = i*f + j

class FieldSpec;
using FieldPtr = std::shared_ptr<const FieldSpec>;

class FieldSpec : public std::enable_shared_from_this<FieldSpec> {
 public:
  Int p;
  int f = 1;
  int e = 1;
  int d = 1;
  int N = 2;
  Int pN;       // p^N
  Int q;        // p^f
  FpPoly unram; // monic degree-f lift with coeffs in [0,p)
  std::vector<UVec> eis;  // degree-e monic; eis[k] = coefficient of x^k, k <= e
  long prec_floor = 1;

  FqCtx res;               // residue field context
  std::vector<UVec> red;   // pi^e = sum red[i] pi^i  (= -eis[i])
  OVec p_div_pi;           // the integral element p/pi
  UVec w_unit;             // eis[0] = p * w_unit
  OVec p_unit;             // p = p_unit * pi^e, a unit
  OVec p_unit_inv;
  long ne = 0;             // N*e, the maximal stored precision

  // ---- unramified subring arithmetic (f coords mod p^N) ----

  UVec u_zero() const { return UVec(f, 0); }
  UVec u_one() const {
    UVec v(f, 0);
    v[0] = 1;
    return v;
  }
  UVec u_add(const UVec& a, const UVec& b) const {
    UVec c(f);
    for (int j = 0; j < f; ++j) c[j] = mod_reduce(a[j] + b[j], pN);
    return c;
  }
  UVec u_sub(const UVec& a, const UVec& b) const {
    UVec c(f);
    for (int j = 0; j < f; ++j) c[j] = mod_reduce(a[j] - b[j], pN);
    return c;
  }
  UVec u_neg(const UVec& a) const {
    UVec c(f);
    for (int j = 0; j < f; ++j) c[j] = mod_reduce(-a[j], pN);
    return c;
  }
  UVec u_scale(const UVec& a, const Int& s) const {
    UVec c(f);
    for (int j = 0; j < f; ++j) c[j] = mod_reduce(a[j] * s, pN);
    return c;
  }
  UVec u_mul(const UVec& a, const UVec& b) const {
    std::vector<Int> conv(2 * f - 1, 0);
    for (int i = 0; i < f; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < f; ++j) conv[i + j] += a[i] * b[j];
    }
    // reduce by the unramified minimal polynomial (monic)
    for (int dgr = 2 * f - 2; dgr >= f; --dgr) {
      Int lead = conv[dgr] % pN;
      if (lead == 0) continue;
      for (int j = 0; j < f; ++j) conv[dgr - f + j] -= lead * unram[j];
      conv[dgr] = 0;
    }
    UVec c(f);
    for (int j = 0; j < f; ++j) c[j] = mod_reduce(conv[j], pN);
    return c;
  }
  bool u_is_zero(const UVec& a) const {
    for (auto& x : a)
      if (x != 0) return false;
    return true;
  }
  long u_val(const UVec& a) const {  // p-valuation, N if zero
    long v = N;
    for (auto& x : a)
      if (x != 0) v = std::min(v, val_p(x, p));
    return v;
  }
  UVec u_inv(const UVec& a) const {
    require(u_val(a) == 0, errc::not_a_unit, "unramified inverse of a non-unit");
    // residue inverse, then Newton z <- z(2 - a z)
    FqCtx::Elt r(f);
    for (int j = 0; j < f; ++j) r[j] = static_cast<long>(a[j] % p);
    FqCtx::Elt rinv = res.inv(r);
    UVec z(f);
    for (int j = 0; j < f; ++j) z[j] = rinv[j];
    for (int it = 0; it < 64; ++it) {
      UVec az = u_mul(a, z);
      UVec corr = u_sub(u_scale(u_one(), 2), az);
      UVec z2 = u_mul(z, corr);
      if (z2 == z) break;
      z = std::move(z2);
    }
    require(u_is_zero(u_sub(u_mul(a, z), u_one())), errc::internal, "u_inv failed");
    return z;
  }

  // ---- O_K arithmetic on flat coordinates ----

  OVec o_zero() const { return OVec(d, 0); }
  OVec o_one() const {
    OVec v(d, 0);
    v[0] = 1;
    return v;
  }
  bool o_is_zero(const OVec& a) const {
    for (auto& x : a)
      if (x != 0) return false;
    return true;
  }
  OVec o_add(const OVec& a, const OVec& b) const {
    OVec c(d);
    for (int i = 0; i < d; ++i) c[i] = mod_reduce(a[i] + b[i], pN);
    return c;
  }
  OVec o_sub(const OVec& a, const OVec& b) const {
    OVec c(d);
    for (int i = 0; i < d; ++i) c[i] = mod_reduce(a[i] - b[i], pN);
    return c;
  }
  OVec o_scale(const OVec& a, const Int& s) const {
    OVec c(d);
    for (int i = 0; i < d; ++i) c[i] = mod_reduce(a[i] * s, pN);
    return c;
  }
  UVec o_coeff(const OVec& a, int i) const { return UVec(a.begin() + i * f, a.begin() + (i + 1) * f); }
  void o_set_coeff(OVec& a, int i, const UVec& u) const {
    for (int j = 0; j < f; ++j) a[i * f + j] = u[j];
  }

  OVec o_mul(const OVec& a, const OVec& b) const {
    std::vector<UVec> conv(2 * e - 1, u_zero());
    for (int i = 0; i < e; ++i) {
      UVec ai = o_coeff(a, i);
      if (u_is_zero(ai)) continue;
      for (int j = 0; j < e; ++j) {
        UVec bj = o_coeff(b, j);
        if (u_is_zero(bj)) continue;
        conv[i + j] = u_add(conv[i + j], u_mul(ai, bj));
      }
    }
    for (int dgr = 2 * e - 2; dgr >= e; --dgr) {
      if (u_is_zero(conv[dgr])) continue;
      UVec lead = conv[dgr];
      conv[dgr] = u_zero();
      for (int i = 0; i < e; ++i) conv[dgr - e + i] = u_add(conv[dgr - e + i], u_mul(lead, red[i]));
    }
    OVec c(d);
    for (int i = 0; i < e; ++i) o_set_coeff(c, i, conv[i]);
    return c;
  }

  OVec o_mul_pi(const OVec& a) const {
    OVec c(d, 0);
    UVec top = o_coeff(a, e - 1);
    for (int i = e - 1; i >= 1; --i) o_set_coeff(c, i, o_coeff(a, i - 1));
    if (!u_is_zero(top))
      for (int i = 0; i < e; ++i) o_set_coeff(c, i, u_add(o_coeff(c, i), u_mul(top, red[i])));
    return c;
  }

  // Exact division by pi; requires the constant coefficient divisible by p.
  OVec o_div_pi(const OVec& a) const {
    UVec c0 = o_coeff(a, 0);
    UVec b0(f);
    for (int j = 0; j < f; ++j) {
      require(c0[j] % p == 0, errc::internal, "o_div_pi: not divisible by pi");
      b0[j] = c0[j] / p;
    }
    OVec c(d, 0);
    for (int i = 0; i + 1 < e; ++i) o_set_coeff(c, i, o_coeff(a, i + 1));
    if (!u_is_zero(b0))
      for (int i = 0; i < e; ++i)
        o_set_coeff(c, i, u_add(o_coeff(c, i), u_mul(b0, o_coeff(p_div_pi, i))));
    return c;
  }

  // pi-valuation of the stored representative; ne if zero.
  long o_val(const OVec& a) const {
    long best = ne;
    for (int i = 0; i < e; ++i) {
      long vu = u_val(o_coeff(a, i));
      if (vu < N) best = std::min(best, static_cast<long>(e) * vu + i);
    }
    return best;
  }

  // Zero all digits of pi-valuation >= m (canonical representative mod pi^m).
  void o_mask(OVec& a, long m) const {
    if (m >= ne) return;
    for (int i = 0; i < e; ++i) {
      long k = m - i;
      if (k <= 0) {
        for (int j = 0; j < f; ++j) a[i * f + j] = 0;
      } else {
        long t = (k + e - 1) / e;
        if (t < N) {
          Int pt = pow_int(p, t);
          for (int j = 0; j < f; ++j) a[i * f + j] %= pt;
        }
      }
    }
  }

  OVec o_inv_unit(const OVec& a) const {
    require(o_val(a) == 0, errc::not_a_unit, "o_inv_unit of non-unit");
    FqCtx::Elt r(f);
    for (int j = 0; j < f; ++j) r[j] = static_cast<long>(a[j] % p);
    FqCtx::Elt rinv = res.inv(r);
    OVec z(d, 0);
    for (int j = 0; j < f; ++j) z[j] = rinv[j];
    for (int it = 0; it < 64; ++it) {
      OVec az = o_mul(a, z);
      OVec two = o_zero();
      o_set_coeff(two, 0, u_scale(u_one(), 2));
      OVec z2 = o_mul(z, o_sub(two, az));
      if (z2 == z) break;
      z = std::move(z2);
    }
    OVec check = o_mul(a, z);
    require(check == o_one(), errc::internal, "o_inv_unit failed");
    return z;
  }

  FqCtx::Elt o_residue(const OVec& a) const {
    FqCtx::Elt r(f);
    for (int j = 0; j < f; ++j) r[j] = static_cast<long>(a[j] % p);
    return r;
  }

  bool same_as(const FieldSpec& other) const {
    return p == other.p && f == other.f && e == other.e && N == other.N &&
           unram == other.unram && eis == other.eis;
  }
};

// ---- construction ----

namespace detail {
inline void init_field_tables(FieldSpec& F) {
  F.d = F.e * F.f;
  F.pN = pow_int(F.p, F.N);
  F.q = pow_int(F.p, F.f);
  F.ne = static_cast<long>(F.N) * F.e;
  F.res = FqCtx{to_long(F.p), F.f, F.unram};

  F.red.assign(F.e, F.u_zero());
  for (int i = 0; i < F.e; ++i) F.red[i] = F.u_neg(F.eis[i]);

  UVec w(F.f);
  for (int j = 0; j < F.f; ++j) {
    require(F.eis[0][j] % F.p == 0, errc::not_eisenstein, "constant term not divisible by p");
    w[j] = F.eis[0][j] / F.p;
  }
  require(F.u_val(w) == 0, errc::not_eisenstein, "constant term valuation != 1");
  F.w_unit = w;
  UVec winv = F.u_inv(w);
  // p/pi = -w^{-1} (pi^{e-1} + sum_{1<=i<e} E_i pi^{i-1})
  F.p_div_pi.assign(F.d, 0);
  for (int k = 0; k + 1 < F.e; ++k) F.o_set_coeff(F.p_div_pi, k, F.u_mul(winv, F.eis[k + 1]));
  {
    UVec top = F.o_coeff(F.p_div_pi, F.e - 1);
    F.o_set_coeff(F.p_div_pi, F.e - 1, F.u_add(top, winv));
  }
  for (auto& x : F.p_div_pi) x = mod_reduce(-x, F.pN);

  OVec pp = F.o_zero();
  pp[0] = F.p;
  for (int s = 0; s < F.e; ++s) pp = F.o_div_pi(pp);
  F.p_unit = pp;
  F.p_unit_inv = F.o_inv_unit(pp);
}
}  // namespace detail

// Validated field constructor. The unramified layer is the canonical
// (lexicographically smallest) irreducible polynomial of degree f.
inline FieldPtr make_field(const Int& p, int f, const std::vector<UVec>& eis_coeffs, int N,
                           long prec_floor = 1) {
  require(is_prime(p), errc::not_prime, "p is not prime");
  require(f >= 1, errc::precision_too_low, "f must be >= 1");
  require(N >= 2, errc::precision_too_low, "N must be >= 2 so Eisenstein-ness is decidable");
  require(eis_coeffs.size() >= 2, errc::not_eisenstein, "eis polynomial must have degree >= 1");
  auto F = std::make_shared<FieldSpec>();
  F->p = p;
  F->f = f;
  F->N = N;
  F->e = static_cast<int>(eis_coeffs.size()) - 1;
  F->prec_floor = prec_floor;
  F->unram = canonical_irreducible(to_long(p), f);
  F->pN = pow_int(p, N);
  F->eis = eis_coeffs;
  for (auto& c : F->eis) {
    require(static_cast<int>(c.size()) == f, errc::not_eisenstein, "coefficient width != f");
    for (auto& x : c) x = mod_reduce(x, F->pN);
  }
  // leading coefficient must be exactly 1
  UVec lead = F->eis[F->e];
  require(lead[0] == 1, errc::not_eisenstein, "polynomial not monic");
  for (int j = 1; j < f; ++j) require(lead[j] == 0, errc::not_eisenstein, "polynomial not monic");
  // Eisenstein: all non-leading coefficients have positive valuation,
  // constant term has valuation exactly 1 (checked in init via w_unit).
  for (int k = 0; k < F->e; ++k) {
    for (int j = 0; j < f; ++j)
      require(F->eis[k][j] % p == 0, errc::not_eisenstein, "coefficient is a unit");
  }
  detail::init_field_tables(*F);
  return F;
}

// Convenience: Eisenstein coefficients given as plain integers.
inline FieldPtr make_field_zcoeffs(const Int& p, int f, const std::vector<Int>& eis, int N,
                                   long prec_floor = 1) {
  std::vector<UVec> cs;
  cs.reserve(eis.size());
  for (auto& c : eis) {
    UVec u(f, 0);
    u[0] = c;
    cs.push_back(u);
  }
  return make_field(p, f, cs, N, prec_floor);
}

// ---- elements ----

class KElem {
 public:
  FieldPtr F;
  OVec c;       // numerator coordinates mod p^N
  long t = 0;   // value = c / pi^t
  long aprec = 0;  // value known modulo pi^aprec

  KElem() = default;
  KElem(FieldPtr field, OVec coords, long shift, long prec)
      : F(std::move(field)), c(std::move(coords)), t(shift), aprec(prec) {
    normalize();
  }

  static KElem zero(const FieldPtr& F, long prec = -1) {
    return KElem(F, F->o_zero(), 0, prec < 0 ? F->ne : prec);
  }
  static KElem one(const FieldPtr& F) { return KElem(F, F->o_one(), 0, F->ne); }
  static KElem from_int(const FieldPtr& F, const Int& a) {
    OVec v = F->o_zero();
    v[0] = mod_reduce(a, F->pN);
    return KElem(F, std::move(v), 0, F->ne);
  }
  // The class of the Eisenstein variable. For e = 1 this is -E_0.
  static KElem uniformizer(const FieldPtr& F) {
    OVec v = F->o_zero();
    if (F->e == 1) {
      F->o_set_coeff(v, 0, F->u_neg(F->eis[0]));
      return KElem(F, std::move(v), 0, F->ne);
    }
    F->o_set_coeff(v, 1, F->u_one());
    return KElem(F, std::move(v), 0, F->ne);
  }
  static KElem omega(const FieldPtr& F) {
    OVec v = F->o_zero();
    if (F->f == 1) return from_int(F, 0);
    v[1] = 1;
    return KElem(F, std::move(v), 0, F->ne);
  }
  // basis monomial omega^j pi^i
  static KElem basis(const FieldPtr& F, int i, int j) {
    OVec v = F->o_zero();
    v[i * F->f + j] = 1;
    return KElem(F, std::move(v), 0, F->ne);
  }

  bool is_zero() const { return F->o_is_zero(c); }

  // normalized valuation; nullopt marks "zero at precision"
  std::optional<long> ord() const {
    if (is_zero()) return std::nullopt;
    return F->o_val(c) - t;
  }

  long ord_or(long if_zero) const {
    auto o = ord();
    return o ? *o : if_zero;
  }

  void normalize() {
    aprec = std::min(aprec, F->ne - t);
    F->o_mask(c, aprec + t);
    if (F->o_is_zero(c)) {
      t = 0;
      aprec = std::min(aprec, F->ne);
      return;
    }
    long k = std::min<long>(F->o_val(c), t);
    for (long s = 0; s < k; ++s) c = F->o_div_pi(c);
    t -= k;
    F->o_mask(c, aprec + t);
    if (F->o_is_zero(c)) t = 0;
  }

  KElem operator-() const {
    OVec v(F->d);
    for (int i = 0; i < F->d; ++i) v[i] = mod_reduce(-c[i], F->pN);
    return KElem(F, std::move(v), t, aprec);
  }

  KElem operator+(const KElem& o) const {
    require(F->same_as(*o.F), errc::field_mismatch, "elements of different fields");
    long tt = std::max(t, o.t);
    OVec a = c, b = o.c;
    for (long s = t; s < tt; ++s) a = F->o_mul_pi(a);
    for (long s = o.t; s < tt; ++s) b = F->o_mul_pi(b);
    long prec = std::min(aprec, o.aprec);
    return KElem(F, F->o_add(a, b), tt, prec);
  }
  KElem operator-(const KElem& o) const { return *this + (-o); }

  KElem operator*(const KElem& o) const {
    require(F->same_as(*o.F), errc::field_mismatch, "elements of different fields");
    long oa = ord() ? *ord() : aprec;
    long ob = o.ord() ? *o.ord() : o.aprec;
    long prec = std::min(aprec + ob, o.aprec + oa);
    return KElem(F, F->o_mul(c, o.c), t + o.t, prec);
  }

  KElem inverse() const {
    auto o = ord();
    require(o.has_value(), errc::division_by_zero_at_precision, "inverse of zero at precision");
    long k = F->o_val(c);
    OVec u = c;
    for (long s = 0; s < k; ++s) u = F->o_div_pi(u);
    OVec uinv = F->o_inv_unit(u);
    long prec = aprec - 2 * (*o);
    require(prec >= F->prec_floor, errc::precision_loss, "inverse drops below precision floor");
    long ts = t - k;  // value = u * pi^{-ts}... value = u*pi^{k - t}; inverse = u^{-1} pi^{t-k}
    if (ts >= 0) {
      OVec v = uinv;
      for (long s = 0; s < ts; ++s) v = F->o_mul_pi(v);
      return KElem(F, std::move(v), 0, prec);
    }
    return KElem(F, std::move(uinv), -ts, prec);
  }

  KElem operator/(const KElem& o) const { return *this * o.inverse(); }

  // Exact division by a nonzero integer: loses exactly e*v_p(k) digits.
  KElem div_exact_int(const Int& k) const {
    require(k != 0, errc::division_by_zero_at_precision, "division by integer zero");
    Int kk = k < 0 ? Int(-k) : k;
    long s = val_p(kk, F->p);
    Int unit = kk / pow_int(F->p, s);
    OVec v = F->o_scale(c, inv_mod(unit, F->pN));
    long tt = t;
    long prec = aprec;
    for (long i = 0; i < s; ++i) {
      v = F->o_mul(v, F->p_unit_inv);
      tt += F->e;
      prec -= F->e;
    }
    KElem r(F, std::move(v), tt, prec);
    return k < 0 ? -r : r;
  }

  KElem pow(Int n) const {
    if (n < 0) return inverse().pow(-n);
    KElem r = one(F), b = *this;
    while (n > 0) {
      if ((n & 1) != 0) r = r * b;
      b = b * b;
      n >>= 1;
    }
    return r;
  }

  bool eq(const KElem& o) const {
    KElem dlt = *this - o;
    return dlt.is_zero();
  }

  // residue in the residue field (requires an integral element)
  FqCtx::Elt residue() const {
    require(t == 0, errc::internal, "residue of a non-integral element");
    return F->o_residue(c);
  }
};

// ---- named operations ----

inline std::optional<long> ord(const KElem& x) { return x.ord(); }

// Same presentation at a different storage precision.
inline FieldPtr refit_field(const FieldSpec& F, int n2) {
  return make_field(F.p, F.f, F.eis, n2, F.prec_floor);
}

// Carry an element into a refit of its own field (coefficient-wise).
inline KElem transplant(const KElem& x, const FieldPtr& G) {
  OVec v(G->d);
  for (int i = 0; i < G->d; ++i) v[i] = mod_reduce(x.c[i], G->pN);
  return KElem(G, std::move(v), x.t, std::min(x.aprec, G->ne - x.t));
}

inline long floor_log(long k, long p) {
  long l = 0, acc = 1;
  while (acc <= k / p) {
    acc *= p;
    ++l;
  }
  return l;
}

// The unique (q-1)-th root of unity congruent to u mod the maximal ideal.
inline KElem teichmuller(const KElem& u) {
  require(u.ord() && *u.ord() == 0, errc::not_a_unit, "teichmuller of a non-unit");
  const FieldPtr& F = u.F;
  KElem y = u;
  for (int it = 0; it < 4 * F->ne + 8; ++it) {
    KElem y2 = y.pow(F->q);
    if (y2.eq(y)) {
      require(y.pow(F->q - 1).eq(KElem::one(F)), errc::internal, "teichmuller: not a root of unity");
      return y;
    }
    y = y2;
  }
  fail(errc::internal, "teichmuller iteration failed to converge");
}

// Alternating series log on principal units.
inline KElem padic_log(const KElem& u) {
  const FieldPtr& F = u.F;
  KElem z0 = u - KElem::one(F);
  if (z0.is_zero()) return KElem::zero(F, z0.aprec);
  long m = *z0.ord();
  require(m >= 1, errc::not_principal_unit, "padic_log needs ord(u-1) >= 1");
  const long target = z0.aprec;
  const long pl = to_long(F->p);
  // last term that can matter below pi^target: k m - e v_p(k) < target
  long kstop = 1;
  while (!(kstop >= 2 * F->e + pl &&
           kstop * m - F->e * (floor_log(kstop, pl) + 1) >= target)) {
    ++kstop;
    require(kstop < 100000, errc::internal, "padic_log did not terminate");
  }
  // elevated working precision so high powers of z stay representable
  int n2 = F->N + static_cast<int>((kstop * m) / F->e) + 2;
  FieldPtr G = refit_field(*F, n2);
  KElem z = transplant(z0, G);
  z.aprec = target;  // value known only this well
  KElem sum = KElem::zero(G, target);
  KElem zk = z;
  for (long k = 1; k <= kstop; ++k) {
    if (k * m - F->e * (k > 1 ? val_p(Int(k), F->p) : 0) < target + F->e) {
      KElem term = zk.div_exact_int(k);
      sum = (k % 2 == 1) ? sum + term : sum - term;
    }
    if (k < kstop) zk = zk * z;
  }
  KElem out = transplant(sum, F);
  require(out.aprec >= F->prec_floor, errc::precision_loss, "padic_log below precision floor");
  return out;
}

inline KElem padic_exp(const KElem& x) {
  const FieldPtr& F = x.F;
  if (x.is_zero()) return KElem::one(F);
  long m = *x.ord();
  long pl = to_long(F->p);
  require(m * (pl - 1) > F->e, errc::outside_convergence_domain,
          "padic_exp needs ord(x) > e/(p-1)");
  const long target = x.aprec;
  long kstop = 1;
  while (kstop * (m * (pl - 1) - F->e) < target * (pl - 1)) {
    ++kstop;
    require(kstop < 100000, errc::internal, "padic_exp did not terminate");
  }
  int n2 = F->N + static_cast<int>((kstop * m) / F->e) + 2;
  FieldPtr G = refit_field(*F, n2);
  KElem xg = transplant(x, G);
  xg.aprec = target;
  KElem sum = KElem::one(G);
  KElem xk = KElem::one(G);
  Int fact = 1;
  for (long k = 1; k <= kstop; ++k) {
    xk = xk * xg;
    fact *= k;
    sum = sum + xk.div_exact_int(fact);
  }
  KElem out = transplant(sum, F);
  require(out.aprec >= F->prec_floor, errc::precision_loss, "padic_exp below precision floor");
  return out;
}

// Norm to Q_p: unit part mod p^unit_prec together with the p-valuation.
struct QpValue {
  long val = 0;
  Int unit = 1;      // mod p^unit_prec
  long unit_prec = 0;
};

inline QpValue norm_to_qp(const KElem& x) {
  require(x.ord().has_value(), errc::zero_at_precision, "norm of zero at precision");
  const FieldPtr& F = x.F;
  const int d = F->d;
  auto mult_matrix_det = [&](const OVec& a) -> Int {
    IMat M(d, std::vector<Int>(d));
    for (int col = 0; col < d; ++col) {
      OVec b = F->o_zero();
      b[col] = 1;
      OVec prod = F->o_mul(a, b);
      for (int row = 0; row < d; ++row) M[row][col] = prod[row];
    }
    return bareiss_det(M);
  };
  Int det = mult_matrix_det(x.c);
  require(det != 0, errc::precision_too_low, "norm vanishes at stored precision");
  long v = val_p(det, F->p);
  require(v < F->N, errc::precision_too_low, "norm unit part lost at precision");
  QpValue out;
  out.unit_prec = F->N - v;
  Int mod = pow_int(F->p, out.unit_prec);
  out.unit = mod_reduce(det / pow_int(F->p, v), mod);
  out.val = v;
  if (x.t != 0) {
    // N(x/pi^t) = N(x) / N(pi)^t;  v_p(N(pi)) = f
    KElem pi = KElem::uniformizer(F);
    Int dpi = mult_matrix_det(pi.c);
    long vpi = val_p(dpi, F->p);
    require(vpi == F->f, errc::internal, "norm of uniformizer has wrong valuation");
    Int upi = mod_reduce(dpi / pow_int(F->p, vpi), mod);
    out.val -= x.t * F->f;
    out.unit = mod_reduce(out.unit * mod_pow(inv_mod(upi, mod), x.t, mod), mod);
  }
  return out;
}

}  // namespace mlf
