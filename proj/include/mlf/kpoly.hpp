#pragma once

// Polynomials with KElem coefficients (little-endian by degree).

#include <vector>

#include "mlf/field.hpp"

namespace mlf {

using KPoly = std::vector<KElem>;

inline KPoly kpoly_from_ints(const FieldPtr& F, const std::vector<Int>& cs) {
  KPoly h;
  h.reserve(cs.size());
  for (auto& c : cs) h.push_back(KElem::from_int(F, c));
  return h;
}

inline KElem kpoly_eval(const KPoly& h, const KElem& x) {
  KElem acc = KElem::zero(x.F);
  for (size_t i = h.size(); i-- > 0;) acc = acc * x + h[i];
  return acc;
}

inline KPoly kpoly_derivative(const KPoly& h) {
  KPoly d;
  for (size_t i = 1; i < h.size(); ++i) d.push_back(h[i] * KElem::from_int(h[i].F, Int(i)));
  return d;
}

// Coefficient-wise image under a map src->dst.
template <class Hom>
inline KPoly kpoly_map(const KPoly& h, Hom&& hom) {
  KPoly out;
  out.reserve(h.size());
  for (auto& c : h) out.push_back(hom(c));
  return out;
}

}  // namespace mlf
