#pragma once

// Session configuration and the standard field catalog used by the test
// suites and the command line.

#include <string>
#include <vector>

#include "mlf/blob.hpp"
#include "mlf/reconstruct.hpp"

namespace mlf {

struct SessionConfig {
  int prec = 0;           // 0: per-field default
  int c = 6;              // principal-unit exponent
  Int mfrob = 12600;      // 2^3 * 3^2 * 5^2 * 7
  int unit_depth = 0;     // 0: derived from c
  int degree_bound = 4;   // directory bound
  int tower_depth = 2;    // cyclotomic ladder depth
  int window = 4;         // appendix-A buffer
  int jobs = 1;

  ArtinParams artin() const {
    ArtinParams par;
    par.c = c;
    par.mfrob = mfrob;
    par.depth = unit_depth;
    return par;
  }
};

struct CatalogField {
  std::string name;
  FieldPtr field;
};

// default per-field storage precision: room for the module depth plus the
// losses of the constructive tower steps
inline int default_precision(const Int& p, int e, int c) {
  long n0 = e / (to_long(p) - 1) + 1;
  long depth = n0 + static_cast<long>(e) * (c + 1);
  return static_cast<int>(depth / e + 10);
}

inline FieldPtr catalog_make(const Int& p, int f, const std::vector<Int>& eis, int c = 6) {
  int e = static_cast<int>(eis.size()) - 1;
  return make_field_zcoeffs(p, f, eis, default_precision(p, e, c));
}

// p in {2,3,5}, d <= 4; the fields named by the acceptance gate plus a few
// with the same coarse invariants
inline std::vector<CatalogField> standard_catalog(int c = 6) {
  std::vector<CatalogField> out;
  auto add = [&](const std::string& name, FieldPtr F) { out.push_back({name, std::move(F)}); };
  add("Q2", catalog_make(2, 1, {-2, 1}, c));
  add("Q3", catalog_make(3, 1, {-3, 1}, c));
  add("Q5", catalog_make(5, 1, {-5, 1}, c));
  add("Q2(sqrt2)", catalog_make(2, 1, {-2, 0, 1}, c));
  add("Q2(i)", catalog_make(2, 1, {2, -2, 1}, c));       // pi = 1 + i
  add("Q2(zeta3)", catalog_make(2, 2, {-2, 1}, c));      // unramified quadratic
  add("Q3(zeta3)", catalog_make(3, 1, {3, 3, 1}, c));    // pi = zeta_3 - 1
  add("Q3(zeta4)", catalog_make(3, 2, {-3, 1}, c));      // unramified quadratic
  add("Q5(zeta4)", catalog_make(5, 1, {-5, 1}, c));      // zeta_4 already lies in Q_5
  add("Q2(cbrt2)", catalog_make(2, 1, {-2, 0, 0, 1}, c));  // tame cubic
  add("Q5(zeta3)", catalog_make(5, 2, {-5, 1}, c));
  add("Q5(sqrt5)", catalog_make(5, 1, {-5, 0, 1}, c));
  add("Q2(sqrt-2)", catalog_make(2, 1, {2, 0, 1}, c));
  return out;
}

// known (p, d, e, f) of each catalog entry, for oracle comparisons
inline ReconInvariants field_invariants(const FieldPtr& F) {
  ReconInvariants inv;
  inv.p = F->p;
  inv.d = F->d;
  inv.e = F->e;
  inv.f = F->f;
  return inv;
}

}  // namespace mlf
