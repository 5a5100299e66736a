#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mlf/abelian.hpp"

using namespace mlf;

TEST_CASE("snf examples") {
  {
    auto s = snf({{1, 0}, {0, 1}});
    CHECK(s.diag == std::vector<Int>{1, 1});
  }
  {
    auto s = snf({{4, 6}, {2, 8}});
    CHECK(s.diag == std::vector<Int>{2, 10});
  }
  {
    auto s = snf({{0}});
    CHECK(s.diag == std::vector<Int>{0});
  }
}

TEST_CASE("snf transforms: U*A*V = D, unimodular") {
  std::mt19937 rng(77);
  for (int it = 0; it < 40; ++it) {
    size_t m = 1 + rng() % 4, n = 1 + rng() % 4;
    IMat a(m, std::vector<Int>(n));
    for (auto& row : a)
      for (auto& x : row) x = Int(rng() % 41) - 20;
    auto s = snf(a);
    // check U*A*V = diag
    IMat ua(m, std::vector<Int>(n, 0));
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < n; ++j)
        for (size_t k = 0; k < m; ++k) ua[i][j] += s.u[i][k] * a[k][j];
    IMat uav(m, std::vector<Int>(n, 0));
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < n; ++j)
        for (size_t k = 0; k < n; ++k) uav[i][j] += ua[i][k] * s.v[k][j];
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < n; ++j) {
        Int expect = (i == j && i < s.diag.size()) ? s.diag[i] : Int(0);
        CHECK(uav[i][j] == expect);
      }
    // divisibility chain
    for (size_t i = 0; i + 1 < s.diag.size(); ++i)
      if (s.diag[i] != 0 && s.diag[i + 1] != 0) CHECK(s.diag[i + 1] % s.diag[i] == 0);
    // unimodularity
    Int du = bareiss_det(s.u), dv = bareiss_det(s.v);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
  }
}

TEST_CASE("invariant factors are presentation independent") {
  std::mt19937 rng(5);
  FinAbPresentation base{3, {{2, 0, 0}, {0, 4, 0}, {0, 0, 3}}};
  auto inv0 = invariant_factors(base);
  CHECK(inv0 == std::vector<Int>{2, 12});  // Z/2 + Z/4 + Z/3 = Z/2 + Z/12
  for (int it = 0; it < 20; ++it) {
    // random row operations on the relations
    IMat rel = base.relations;
    for (int stp = 0; stp < 6; ++stp) {
      size_t i = rng() % rel.size(), j = rng() % rel.size();
      if (i == j) continue;
      Int q = Int(rng() % 5) - 2;
      for (size_t c = 0; c < rel[i].size(); ++c) rel[i][c] += q * rel[j][c];
    }
    CHECK(invariant_factors({3, rel}) == inv0);
  }
}

TEST_CASE("pro_ell_rank") {
  ProfinInvariants q2{1, {{2, 1}}, {2}};
  CHECK(pro_ell_rank(q2, 2) == 2);
  CHECK(pro_ell_rank(q2, 3) == 1);
  ProfinInvariants zhat{1, {}, {}};
  CHECK(pro_ell_rank(zhat, 2) == 1);
  CHECK(pro_ell_rank(zhat, 97) == 1);
}

TEST_CASE("subgroups_of_index") {
  AbAmbient e23{{2, 2, 2}};
  CHECK(subgroups_of_index(e23, 2).size() == 7);
  AbAmbient z4{{4}};
  CHECK(subgroups_of_index(z4, 2).size() == 1);
  CHECK(subgroups_of_index(z4, 1).size() == 1);
  CHECK(subgroups_of_index(z4, 1).front() == Subgroup::full(z4));
  AbAmbient z6z4{{6, 4}};
  // index-2 subgroups = index-2 subgroups of Z/2 x Z/4-part: 3
  CHECK(subgroups_of_index(z6z4, 2).size() == 3);
}

TEST_CASE("subgroup arithmetic") {
  AbAmbient amb{{8, 4}};
  Subgroup s = Subgroup::from_gens(amb, {{2, 1}});
  CHECK(s.order() == 4);  // cyclic generated by (2,1)
  Subgroup t = Subgroup::from_gens(amb, {{0, 2}});
  CHECK(t.order() == 2);
  Subgroup u = s.intersect(t);
  CHECK(u.order() == 1);  // (0,2) is not a multiple of (2,1)
  CHECK(s.contains({2, 1}));
  CHECK(s.contains({4, 2}));
  CHECK_FALSE(t.contains({2, 1}));
  CHECK(s.sum(t) == s.sum(t).sum(t));
  // torsion
  Subgroup full = Subgroup::full(amb);
  CHECK(full.torsion(2).order() == 4);
  CHECK(full.multiples(2).order() == 8);
  CHECK(full.group_invariants() == std::vector<Int>{4, 8});
}

TEST_CASE("subgroup order via generated cyclic") {
  AbAmbient amb{{12}};
  Subgroup s = Subgroup::from_gens(amb, {{8}});
  CHECK(s.order() == 3);  // gcd(8,12) = 4, <4> has order 3
  CHECK(s.group_invariants() == std::vector<Int>{3});
}

TEST_CASE("snf vinv is the inverse of v") {
  std::mt19937 rng(123);
  for (int it = 0; it < 25; ++it) {
    size_t m = 1 + rng() % 4, n = 1 + rng() % 4;
    IMat a(m, std::vector<Int>(n));
    for (auto& row : a)
      for (auto& x : row) x = Int(rng() % 21) - 10;
    auto s = snf(a);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        Int acc = 0;
        for (size_t k = 0; k < n; ++k) acc += s.v[i][k] * s.vinv[k][j];
        CHECK(acc == (i == j ? 1 : 0));
      }
  }
}
