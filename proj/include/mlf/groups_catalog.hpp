#pragma once

// Named permutation groups used by the test suites and the selfcheck CLI.

#include <string>

#include "mlf/permgroup.hpp"

namespace mlf {

inline FiniteGroup cyclic_group(int n) {
  Perm c(n);
  for (int i = 0; i < n; ++i) c[i] = (i + 1) % n;
  return FiniteGroup::generate(n, {c});
}

inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  int n = a.npoints + b.npoints;
  std::vector<Perm> gens;
  for (auto& g : a.gens) {
    Perm p = perm_id(n);
    for (int i = 0; i < a.npoints; ++i) p[i] = g[i];
    gens.push_back(p);
  }
  for (auto& g : b.gens) {
    Perm p = perm_id(n);
    for (int i = 0; i < b.npoints; ++i) p[a.npoints + i] = a.npoints + g[i];
    gens.push_back(p);
  }
  return FiniteGroup::generate(n, gens, a.order() * b.order() + 1);
}

inline FiniteGroup dihedral_group(int n) {  // order 2n
  Perm r(n), s(n);
  for (int i = 0; i < n; ++i) {
    r[i] = (i + 1) % n;
    s[i] = (n - i) % n;
  }
  return FiniteGroup::generate(n, {r, s});
}

inline FiniteGroup symmetric_group(int n) {
  Perm t = perm_id(n), c(n);
  std::swap(t[0], t[1]);
  for (int i = 0; i < n; ++i) c[i] = (i + 1) % n;
  return FiniteGroup::generate(n, {t, c});
}

inline FiniteGroup alternating_group4() {
  // (0 1 2) and (0 1)(2 3)
  Perm a{1, 2, 0, 3}, b{1, 0, 3, 2};
  return FiniteGroup::generate(4, {a, b});
}

inline FiniteGroup quaternion_group8() {
  // left regular representation on {1,-1,i,-i,j,-j,k,-k}
  Perm i{2, 3, 1, 0, 6, 7, 5, 4};
  Perm j{4, 5, 7, 6, 1, 0, 2, 3};
  return FiniteGroup::generate(8, {i, j});
}

// order-preserving action of a matrix group over F_p on nonzero column vectors
inline FiniteGroup matrix_group(long p, const std::vector<std::array<long, 4>>& mats,
                                long bound = 400) {
  int n = static_cast<int>(p * p - 1);
  auto idx = [&](long x, long y) { return static_cast<int>(x * p + y) - 1; };
  std::vector<Perm> gens;
  for (auto& m : mats) {
    Perm perm(n);
    for (long x = 0; x < p; ++x)
      for (long y = 0; y < p; ++y) {
        if (x == 0 && y == 0) continue;
        long x2 = (m[0] * x + m[1] * y) % p;
        long y2 = (m[2] * x + m[3] * y) % p;
        perm[idx(x, y)] = idx(x2, y2);
      }
    gens.push_back(perm);
  }
  return FiniteGroup::generate(n, gens, bound);
}

inline FiniteGroup sl2_3() {
  return matrix_group(3, {{1, 1, 0, 1}, {0, 2, 1, 0}});
}

// C_3 : C_4 (dicyclic of order 12), realized in GL_2(F_7)
inline FiniteGroup c3_rtimes_c4() {
  return matrix_group(7, {{2, 0, 0, 4}, {0, 1, 6, 0}});
}

// affine maps x -> ax+b over F_p as permutations of p points
inline FiniteGroup affine_group(long p, long mult_gen) {
  int n = static_cast<int>(p);
  Perm add(n), mul(n);
  for (long x = 0; x < p; ++x) {
    add[x] = static_cast<int>((x + 1) % p);
    mul[x] = static_cast<int>((mult_gen * x) % p);
  }
  return FiniteGroup::generate(n, {add, mul});
}

inline FiniteGroup heisenberg3() {  // order 27, exponent 3
  // generated by unitriangular matrices acting on F_3^3
  long p = 3;
  int n = 27;
  auto idx = [&](long x, long y, long z) { return static_cast<int>((x * p + y) * p + z); };
  auto mat_perm = [&](long a, long b) {  // (x,y,z) -> (x, y+ax, z+by+...)
    Perm perm(n);
    for (long x = 0; x < p; ++x)
      for (long y = 0; y < p; ++y)
        for (long z = 0; z < p; ++z) {
          long y2 = (y + a * x) % p;
          long z2 = (z + b * y) % p;
          perm[idx(x, y, z)] = idx(x, y2, z2);
        }
    return perm;
  };
  return FiniteGroup::generate(n, {mat_perm(1, 0), mat_perm(0, 1)});
}

inline FiniteGroup semidihedral16() {
  Perm r(8), s(8);
  for (int i = 0; i < 8; ++i) {
    r[i] = (i + 1) % 8;
    s[i] = (3 * i) % 8;
  }
  return FiniteGroup::generate(8, {r, s});
}

inline FiniteGroup modular16() {
  Perm r(8), s(8);
  for (int i = 0; i < 8; ++i) {
    r[i] = (i + 1) % 8;
    s[i] = (5 * i) % 8;
  }
  return FiniteGroup::generate(8, {r, s});
}

struct NamedGroup {
  std::string name;
  FiniteGroup group;
};

// solvable groups of order <= 100 exercised by the finite-group suites,
// plus the named non-catalog extras
inline std::vector<NamedGroup> solvable_catalog() {
  std::vector<NamedGroup> out;
  auto add = [&](const std::string& name, FiniteGroup g) { out.push_back({name, std::move(g)}); };
  for (int n : {1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 15, 16, 24, 30, 36, 48, 60, 100})
    add("C" + std::to_string(n), cyclic_group(n));
  add("C2xC2", direct_product(cyclic_group(2), cyclic_group(2)));
  add("C2xC4", direct_product(cyclic_group(2), cyclic_group(4)));
  add("C2xC2xC2", direct_product(cyclic_group(2), direct_product(cyclic_group(2), cyclic_group(2))));
  add("C3xC3", direct_product(cyclic_group(3), cyclic_group(3)));
  add("C2xC6", direct_product(cyclic_group(2), cyclic_group(6)));
  for (int n : {3, 4, 5, 6, 7, 8, 9, 10, 12})
    add("D" + std::to_string(n), dihedral_group(n));
  add("S3", symmetric_group(3));
  add("S4", symmetric_group(4));
  add("A4", alternating_group4());
  add("Q8", quaternion_group8());
  add("SL(2,3)", sl2_3());
  add("C3:C4", c3_rtimes_c4());
  add("D4xC3", direct_product(dihedral_group(4), cyclic_group(3)));
  add("F20", affine_group(5, 2));
  add("C7:C3", affine_group(7, 2));
  add("F42", affine_group(7, 3));
  add("Heis3", heisenberg3());
  add("SD16", semidihedral16());
  add("M16", modular16());
  add("Q8xC5", direct_product(quaternion_group8(), cyclic_group(5)));
  add("S3xS3", direct_product(symmetric_group(3), symmetric_group(3)));
  add("D4xD4", direct_product(dihedral_group(4), dihedral_group(4)));
  add("A4xC2", direct_product(alternating_group4(), cyclic_group(2)));
  return out;
}

}  // namespace mlf
