#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mlf/cyclotomic.hpp"
#include "mlf/roots.hpp"

using namespace mlf;

namespace {
FieldPtr q2(int N = 12) { return make_field_zcoeffs(2, 1, {-2, 1}, N); }
FieldPtr q3(int N = 12) { return make_field_zcoeffs(3, 1, {-3, 1}, N); }
FieldPtr q5(int N = 10) { return make_field_zcoeffs(5, 1, {-5, 1}, N); }
FieldPtr q2i(int N = 12) { return make_field_zcoeffs(2, 1, {2, -2, 1}, N); }  // Q_2(i), pi = 1+i
FieldPtr q2s2(int N = 12) { return make_field_zcoeffs(2, 1, {-2, 0, 1}, N); }
}  // namespace

TEST_CASE("roots_of_unity") {
  CHECK(roots_of_unity(q2(), 2, 4) == 1);   // only +-1 in Q_2
  CHECK(roots_of_unity(q5(), 2, 4) == 2);   // 4 | 5-1
  CHECK(roots_of_unity(q2i(), 2, 4) == 2);  // zeta_4 = i present, zeta_8 absent
  CHECK(roots_of_unity(q3(), 3, 4) == 0);
  CHECK(roots_of_unity(q5(), 5, 4) == 0);
  auto z3field = make_field_zcoeffs(3, 1, {3, 3, 1}, 12);  // Q_3(zeta_3): x^2+3x+3
  CHECK(roots_of_unity(z3field, 3, 4) == 1);
}

TEST_CASE("unramified enlargement") {
  auto F = q3();
  auto st = unram_enlarge(F, 2);
  CHECK(st.ext->f == 2);
  CHECK(st.ext->e == 1);
  CHECK(st.embed.valid());
  // norm of embedded elements: x maps with the same valuation scaled
  KElem three = st.embed.apply(KElem::from_int(F, 3));
  CHECK(*three.ord() == 1);
}

TEST_CASE("adjoin_cyclotomic: identity") {
  auto F = q3();
  auto adj = adjoin_cyclotomic(F, 1);
  CHECK(adj.ext->same_as(*F));
  CHECK(adj.zeta.eq(KElem::one(F)));
  CHECK(adj.galois_exponents.size() == 1);
}

TEST_CASE("adjoin_cyclotomic(Q_3, 4): unramified quadratic") {
  auto F = q3();
  auto adj = adjoin_cyclotomic(F, 4);
  CHECK(adj.ext->f == 2);
  CHECK(adj.ext->e == 1);
  CHECK(adj.zeta.pow(4).eq(KElem::one(adj.ext)));
  CHECK_FALSE(adj.zeta.pow(2).eq(KElem::one(adj.ext)));
  REQUIRE(adj.galois_exponents.size() == 2);
  CHECK(adj.galois_exponents[0] == 1);
  CHECK(adj.galois_exponents[1] == 3);  // Frobenius: zeta -> zeta^3
}

TEST_CASE("adjoin_cyclotomic(Q_3, 3): ramified quadratic") {
  auto F = q3();
  auto adj = adjoin_cyclotomic(F, 3);
  CHECK(adj.ext->e == 2);
  CHECK(adj.ext->f == 1);
  CHECK(adj.zeta.pow(3).eq(KElem::one(adj.ext)));
  CHECK_FALSE(adj.zeta.eq(KElem::one(adj.ext)));
  CHECK(adj.galois_exponents.size() == 2);
}

TEST_CASE("adjoin_cyclotomic(Q_2, 8): wild ladder") {
  auto F = q2(16);
  auto adj = adjoin_cyclotomic(F, 8);
  CHECK(adj.ext->e == 4);
  CHECK(adj.ext->f == 1);
  CHECK(adj.zeta.pow(8).eq(KElem::one(adj.ext)));
  CHECK(adj.zeta.pow(4).eq(KElem::from_int(adj.ext, -1)));
  CHECK(adj.galois_exponents.size() == 4);
  // galois automorphisms fix the embedded base
  for (auto& k : adj.galois_exponents) {
    KElem img = adj.embed.apply(KElem::from_int(F, 2));
    CHECK(adj.apply_galois(k, img).eq(img));
  }
}

TEST_CASE("adjoin_cyclotomic(Q_3, 9): wild over Q_3") {
  auto F = q3(14);
  auto adj = adjoin_cyclotomic(F, 9);
  CHECK(adj.ext->e == 6);
  CHECK(adj.ext->d == 6);
  CHECK(adj.galois_exponents.size() == 6);
  // sigma_2: zeta -> zeta^2 is an automorphism; apply twice = zeta^4
  KElem z2 = adj.apply_galois(2, adj.zeta);
  CHECK(z2.eq(adj.zeta.pow(2)));
}

TEST_CASE("adjoin_cyclotomic(Q_5, 5)") {
  auto F = q5(10);
  auto adj = adjoin_cyclotomic(F, 5);
  CHECK(adj.ext->e == 4);
  CHECK(adj.galois_exponents.size() == 4);
}

TEST_CASE("mixed cyclotomic: Q_3(zeta_12)") {
  auto F = q3(14);
  auto adj = adjoin_cyclotomic(F, 12);
  CHECK(adj.ext->f == 2);  // zeta_4 part
  CHECK(adj.ext->e == 2);  // zeta_3 part
  CHECK(adj.galois_exponents.size() == 4);
  CHECK(adj.zeta.pow(12).eq(KElem::one(adj.ext)));
  CHECK_FALSE(adj.zeta.pow(6).eq(KElem::one(adj.ext)));
  CHECK_FALSE(adj.zeta.pow(4).eq(KElem::one(adj.ext)));
}

TEST_CASE("embeddings") {
  // (Q_p, any E) -> exactly 1
  auto F = q2(12);
  auto E8 = adjoin_cyclotomic(F, 8).ext;
  CHECK(embeddings(F, E8).size() == 1);

  // Q_2(sqrt2) -> Q_2(zeta_8): two embeddings, sqrt2 -> +-(zeta + zeta^-1)
  auto S = q2s2(12);
  auto embs = embeddings(S, E8);
  CHECK(embs.size() == 2);
  for (auto& h : embs) {
    CHECK(h.valid());
    CHECK((h.pi_image() * h.pi_image()).eq(KElem::from_int(E8, 2)));
  }

  // Q_2(i) -> Q_2(sqrt2): none
  CHECK(embeddings(q2i(), q2s2()).empty());

  // K -> K: d embeddings iff Galois; quadratic case gives 2
  CHECK(embeddings(q2s2(), q2s2()).size() == 2);
}

TEST_CASE("additive_span_rank") {
  auto F = q2(10);
  CHECK(additive_span_rank({KElem::one(F)}) == 1);
  CHECK(additive_span_rank({KElem::one(F), KElem::from_int(F, 5)}) == 1);

  auto S = q2s2(12);
  KElem pi = KElem::uniformizer(S);
  KElem a = KElem::one(S) + KElem::from_int(S, 4);
  KElem b = KElem::one(S) + KElem::from_int(S, 4) * pi;
  CHECK(additive_span_rank({a, b}) == 2);

  // Lemma 5.1 surrogate: enough samples of U(n) span the whole lattice
  std::mt19937 rng(9);
  for (auto G : {q3(10), q2s2(12)}) {
    for (int n = 1; n <= 3; ++n) {
      std::vector<KElem> samples;
      KElem pin = KElem::uniformizer(G).pow(n);
      for (int k = 0; k < G->d + 3; ++k) {
        OVec v(G->d);
        for (int i = 0; i < G->d; ++i) v[i] = Int(rng()) % G->pN;
        samples.push_back(KElem::one(G) + pin * KElem(G, std::move(v), 0, G->ne));
      }
      CHECK(additive_span_rank(samples) == G->d);
    }
  }
}

TEST_CASE("tame eisenstein adjoin") {
  auto F = q2(12);
  auto st = tame_eisenstein(F, 3);  // tame cubic over Q_2
  CHECK(st.ext->e == 3);
  CHECK(st.embed.valid());
  KElem pi3 = KElem::uniformizer(st.ext).pow(3);
  CHECK(pi3.eq(st.embed.apply(KElem::uniformizer(F))));
}
