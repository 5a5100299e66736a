#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mlf/field.hpp"

using namespace mlf;

namespace {

FieldPtr q3(int N = 6) { return make_field_zcoeffs(3, 1, {-3, 1}, N); }
FieldPtr q2_sqrt2(int N = 8) { return make_field_zcoeffs(2, 1, {-2, 0, 1}, N); }
FieldPtr q2_unram2(int N = 8) { return make_field_zcoeffs(2, 2, {-2, 1}, N); }

KElem rand_elem(const FieldPtr& F, std::mt19937& rng) {
  OVec v(F->d);
  for (int i = 0; i < F->d; ++i) v[i] = Int(rng()) % F->pN;
  return KElem(F, std::move(v), 0, F->ne);
}

}  // namespace

TEST_CASE("make_field basic invariants") {
  auto F = q3();
  CHECK(F->e == 1);
  CHECK(F->f == 1);
  CHECK(F->d == 1);
  CHECK(F->q == 3);

  auto G = q2_sqrt2();
  CHECK(G->e == 2);
  CHECK(G->f == 1);
  CHECK(G->d == 2);

  auto H = q2_unram2();
  CHECK(H->q == 4);
  CHECK(H->e == 1);
  CHECK(H->d == 2);
}

TEST_CASE("make_field rejects bad input") {
  CHECK_THROWS_AS(make_field_zcoeffs(4, 1, {-4, 1}, 6), error);      // not prime
  CHECK_THROWS_AS(make_field_zcoeffs(3, 1, {-1, 1}, 6), error);      // unit constant term
  CHECK_THROWS_AS(make_field_zcoeffs(3, 1, {-9, 1}, 6), error);      // valuation 2 constant
  CHECK_THROWS_AS(make_field_zcoeffs(2, 1, {-2, 1, 1}, 8), error);   // middle coeff unit
  CHECK_THROWS_AS(make_field_zcoeffs(3, 1, {-3, 1}, 1), error);      // N too low
}

TEST_CASE("arith in Q_2(sqrt 2)") {
  auto F = q2_sqrt2();
  KElem pi = KElem::uniformizer(F);
  KElem two = KElem::from_int(F, 2);
  CHECK((pi * pi).eq(two));  // sqrt2 * sqrt2 = 2

  // 1/sqrt2 = sqrt2 / 2, i.e. shift 1
  KElem inv = KElem::one(F) / pi;
  CHECK((inv * pi).eq(KElem::one(F)));
  CHECK(inv.t == 1);
  CHECK(*inv.ord() == -1);
}

TEST_CASE("arith in Q_3: 4*7 = 28 = 1 mod 27") {
  auto F = q3(3);
  KElem a = KElem::from_int(F, 4), b = KElem::from_int(F, 7);
  CHECK((a * b).eq(KElem::from_int(F, 28)));
  CHECK((a * b).eq(KElem::from_int(F, 1)));
}

TEST_CASE("ord") {
  auto F = q2_sqrt2();
  CHECK(*KElem::from_int(F, 2).ord() == 2);
  auto G = q3();
  CHECK(*KElem::from_int(G, 3).ord() == 1);
  CHECK_FALSE(KElem::zero(G).ord().has_value());
  CHECK(*KElem::uniformizer(F).ord() == 1);
}

TEST_CASE("ring axioms at precision (random)") {
  std::mt19937 rng(42);
  for (auto F : {q3(), q2_sqrt2(), q2_unram2()}) {
    for (int it = 0; it < 25; ++it) {
      KElem a = rand_elem(F, rng), b = rand_elem(F, rng), cc = rand_elem(F, rng);
      CHECK(((a + b) + cc).eq(a + (b + cc)));
      CHECK((a * (b + cc)).eq(a * b + a * cc));
      CHECK((a * b).eq(b * a));
      auto oab = (a * b).ord();
      if (a.ord() && b.ord()) {
        REQUIRE(oab.has_value());
        CHECK(*oab == *a.ord() + *b.ord());
      }
      if ((a + b).ord()) CHECK(*(a + b).ord() >= std::min(a.ord_or(a.aprec), b.ord_or(b.aprec)));
    }
  }
}

TEST_CASE("teichmuller") {
  auto F = q3(6);
  // teichmuller(2) in Q_3 = -1
  KElem tm = teichmuller(KElem::from_int(F, 2));
  CHECK(tm.eq(KElem::from_int(F, -1)));
  // teichmuller(1 + p) = 1
  CHECK(teichmuller(KElem::from_int(F, 4)).eq(KElem::one(F)));

  // unramified quadratic over Q_2: cube root of 1 congruent to 3 = omega-ish unit
  auto H = q2_unram2();
  KElem u = KElem::omega(H);  // a unit whose residue generates F_4
  KElem tw = teichmuller(u);
  CHECK(tw.pow(3).eq(KElem::one(H)));
  CHECK_FALSE(tw.eq(KElem::one(H)));
  // congruence mod the maximal ideal
  CHECK((tw - u).ord_or(100) >= 1);

  CHECK_THROWS_AS(teichmuller(KElem::from_int(F, 3)), error);
  // property: t^(q-1) = 1 and t = u mod p
  std::mt19937 rng(7);
  for (int it = 0; it < 10; ++it) {
    KElem r = rand_elem(H, rng);
    if (!r.ord() || *r.ord() != 0) continue;
    KElem tt = teichmuller(r);
    CHECK(tt.pow(H->q - 1).eq(KElem::one(H)));
    CHECK((tt - r).ord_or(100) >= 1);
  }
}

TEST_CASE("padic_log examples") {
  auto F = q3(3);
  // log(4) = 21 mod 27: series 3 - 9/2 + 27/3 with 2^{-1} = 14 mod 27
  KElem lg = padic_log(KElem::from_int(F, 4));
  CHECK(lg.eq(KElem::from_int(F, 21)));
  CHECK(padic_log(KElem::one(F)).is_zero());
  // log(u^3) = 3 log(u): 3*21 = 63 = 9 mod 27 and log(64) = 9 mod 27
  KElem lg64 = padic_log(KElem::from_int(F, 64));
  CHECK(lg64.eq(KElem::from_int(F, 9)));
  CHECK(lg64.eq(KElem::from_int(F, 3) * lg));
  CHECK_THROWS_AS(padic_log(KElem::from_int(F, 2)), error);
}

TEST_CASE("padic_log homomorphism property") {
  std::mt19937 rng(11);
  for (auto F : {q3(8), q2_sqrt2(10)}) {
    for (int it = 0; it < 12; ++it) {
      KElem a = rand_elem(F, rng), b = rand_elem(F, rng);
      // force principal units at depth > e/(p-1)
      long n0 = F->e / (to_long(F->p) - 1) + 1;
      KElem pin = KElem::uniformizer(F).pow(n0);
      KElem u = KElem::one(F) + pin * a;
      KElem v = KElem::one(F) + pin * b;
      KElem lu = padic_log(u), lv = padic_log(v), luv = padic_log(u * v);
      CHECK((lu + lv).eq(luv));
    }
  }
}

TEST_CASE("padic_exp examples and round trip") {
  auto F = q3(4);
  CHECK(padic_exp(KElem::zero(F)).eq(KElem::one(F)));
  // exp(log(1+9)) = 10
  KElem u = KElem::from_int(F, 10);
  CHECK(padic_exp(padic_log(u)).eq(u));
  // exp(9) * exp(-9) = 1
  KElem x = KElem::from_int(F, 9);
  CHECK((padic_exp(x) * padic_exp(-x)).eq(KElem::one(F)));
  // Q_2: ord must exceed e/(p-1) = 1
  auto F2 = make_field_zcoeffs(2, 1, {-2, 1}, 8);
  CHECK_THROWS_AS(padic_exp(KElem::from_int(F2, 2)), error);

  // round trip on U(n), n > e/(p-1), both directions
  std::mt19937 rng(3);
  for (auto G : {q3(8), q2_sqrt2(12)}) {
    long n0 = G->e / (to_long(G->p) - 1) + 1;
    for (int it = 0; it < 8; ++it) {
      KElem a = rand_elem(G, rng);
      KElem w = KElem::uniformizer(G).pow(n0) * a;
      if (!w.ord() || *w.ord() <= G->e / (to_long(G->p) - 1)) continue;
      CHECK(padic_log(padic_exp(w)).eq(w));
      KElem uu = KElem::one(G) + w;
      CHECK(padic_exp(padic_log(uu)).eq(uu));
    }
  }
}

TEST_CASE("norm examples") {
  auto F = q2_sqrt2();
  QpValue n = norm_to_qp(KElem::uniformizer(F));
  CHECK(n.val == 1);
  // N(sqrt2) = -2: unit part is -1
  CHECK(n.unit == mod_reduce(Int(-1), pow_int(Int(2), n.unit_prec)));

  // rational elements: N(u) = u^d
  QpValue n5 = norm_to_qp(KElem::from_int(F, 5));
  CHECK(n5.val == 0);
  CHECK(n5.unit == mod_reduce(Int(25), pow_int(Int(2), n5.unit_prec)));

  CHECK_THROWS_AS(norm_to_qp(KElem::zero(F)), error);
}

TEST_CASE("norm multiplicativity (random)") {
  std::mt19937 rng(5);
  auto F = q2_unram2();
  for (int it = 0; it < 15; ++it) {
    KElem a = rand_elem(F, rng), b = rand_elem(F, rng);
    if (!a.ord() || !b.ord()) continue;
    if (F->f * (*a.ord() + *b.ord()) >= F->N - 1) continue;  // unit part would be lost
    QpValue na = norm_to_qp(a), nb = norm_to_qp(b), nab = norm_to_qp(a * b);
    CHECK(nab.val == na.val + nb.val);
    long prec = std::min({na.unit_prec, nb.unit_prec, nab.unit_prec});
    Int m = pow_int(F->p, prec);
    CHECK(mod_reduce(na.unit * nb.unit, m) == mod_reduce(nab.unit, m));
  }
}

TEST_CASE("division tracks precision loss") {
  auto F = q3(4);
  KElem one = KElem::one(F);
  KElem three = KElem::from_int(F, 3);
  KElem r = one / three;
  CHECK(*r.ord() == -1);
  CHECK(r.aprec < F->ne);
  CHECK_THROWS_AS(one / KElem::zero(F), error);
}
