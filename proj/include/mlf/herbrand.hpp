#pragma once

// Filtration algebra: piecewise-linear psi/phi transition functions with
// exact rational breakpoints, and upper-numbering filtrations on finite
// groups with the quotient / subgroup rules.

#include <vector>

#include "mlf/bigint.hpp"
#include "mlf/errors.hpp"

namespace mlf {

// Piecewise-linear, strictly increasing, f(0) = 0. slopes[i] applies on
// [breaks[i], breaks[i+1]); the last slope extends to infinity.
class HerbrandFn {
 public:
  std::vector<Rat> breaks;  // breaks[0] == 0
  std::vector<Rat> slopes;  // same length as breaks, all > 0

  static HerbrandFn identity() { return HerbrandFn{{Rat(0)}, {Rat(1)}}; }

  void canonicalize() {
    std::vector<Rat> b2{breaks[0]}, s2{slopes[0]};
    for (size_t i = 1; i < breaks.size(); ++i) {
      if (slopes[i] == s2.back()) continue;
      b2.push_back(breaks[i]);
      s2.push_back(slopes[i]);
    }
    breaks = std::move(b2);
    slopes = std::move(s2);
  }

  Rat eval(const Rat& v) const {
    require(v >= 0, errc::inconsistent_inputs, "herbrand functions live on [0,inf)");
    Rat acc = 0;
    for (size_t i = 0; i < breaks.size(); ++i) {
      Rat hi = (i + 1 < breaks.size()) ? breaks[i + 1] : v;
      if (v <= hi) {
        acc += slopes[i] * (v - breaks[i]);
        return acc;
      }
      acc += slopes[i] * (hi - breaks[i]);
      if (i + 1 == breaks.size()) return acc;
    }
    return acc;
  }

  Rat slope_at(const Rat& v) const {  // slope on [v, v+eps)
    size_t i = 0;
    while (i + 1 < breaks.size() && breaks[i + 1] <= v) ++i;
    return slopes[i];
  }

  HerbrandFn inverse() const {
    HerbrandFn out;
    for (size_t i = 0; i < breaks.size(); ++i) {
      out.breaks.push_back(eval(breaks[i]));
      out.slopes.push_back(Rat(1) / slopes[i]);
    }
    out.canonicalize();
    return out;
  }

  bool operator==(const HerbrandFn& o) const { return breaks == o.breaks && slopes == o.slopes; }

  // outer(inner(v))
  friend HerbrandFn compose(const HerbrandFn& outer, const HerbrandFn& inner) {
    HerbrandFn inv = inner.inverse();
    std::vector<Rat> xs = inner.breaks;
    for (auto& b : outer.breaks) xs.push_back(inv.eval(b));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    HerbrandFn out;
    for (auto& x : xs) {
      out.breaks.push_back(x);
      out.slopes.push_back(outer.slope_at(inner.eval(x)) * inner.slope_at(x));
    }
    out.canonicalize();
    return out;
  }
};

// Upper-numbering filtration on a finite group. S is the subgroup payload
// (needs order() and operator==). Entry 0 covers [0, v_0]; entry k >= 1
// covers (v_{k-1}, v_k]; beyond the last jump the group is trivial. The
// first entry is the inertia layer.
template <class S>
struct Filtration {
  struct Jump {
    Rat v;
    S sub;
  };
  std::vector<Jump> jumps;

  const S& inertia() const {
    require(!jumps.empty(), errc::empty_filtration, "filtration without jumps");
    return jumps.front().sub;
  }

  void canonicalize() {
    require(!jumps.empty(), errc::empty_filtration, "filtration without jumps");
    std::vector<Jump> out;
    for (auto& j : jumps) {
      if (!out.empty()) {
        require(j.v > out.back().v, errc::inconsistent_inputs, "jumps must increase");
        if (j.sub == out.back().sub) {
          out.back().v = j.v;  // extend the run
          continue;
        }
      }
      out.push_back(j);
    }
    while (out.size() > 1 && out.back().sub.order() == 1) out.pop_back();
    if (out.size() == 1 && out.front().sub.order() == 1) out.front().v = 0;
    jumps = std::move(out);
  }

  // multiset of (jump value, subgroup order), for comparisons
  std::vector<std::pair<Rat, Int>> profile() const {
    std::vector<std::pair<Rat, Int>> out;
    for (auto& j : jumps) out.emplace_back(j.v, j.sub.order());
    return out;
  }
};

// psi(v) = integral_0^v (G(0) : G(w)) dw   (classical inertia-indexed form)
template <class S>
inline HerbrandFn psi_of(const Filtration<S>& f) {
  require(!f.jumps.empty(), errc::empty_filtration, "psi of empty filtration");
  const Int i0 = f.jumps.front().sub.order();
  HerbrandFn out;
  if (f.jumps.front().v > 0) {  // inertia layer extends past 0: index 1 there
    out.breaks.push_back(Rat(0));
    out.slopes.push_back(Rat(1));
  }
  for (size_t k = 0; k < f.jumps.size(); ++k) {
    // slope on [v_k, v_{k+1}) is the index of the next layer
    Int next_order = (k + 1 < f.jumps.size()) ? f.jumps[k + 1].sub.order() : Int(1);
    out.breaks.push_back(f.jumps[k].v);
    out.slopes.push_back(Rat(i0, next_order));
  }
  out.canonicalize();
  return out;
}

template <class S>
inline HerbrandFn phi_of(const Filtration<S>& f) {
  return psi_of(f).inverse();
}

// Paper-literal variant: integrand ((G/H) : (G/H)(w)) over the full quotient
// order rather than the inertia layer. Agrees with psi_of exactly when the
// extension is totally ramified.
template <class S>
inline HerbrandFn psi_of_full_index(const Filtration<S>& f, const Int& total_order) {
  require(!f.jumps.empty(), errc::empty_filtration, "psi of empty filtration");
  HerbrandFn out;
  if (f.jumps.front().v > 0) {
    out.breaks.push_back(Rat(0));
    out.slopes.push_back(Rat(total_order, f.jumps.front().sub.order()));
  }
  for (size_t k = 0; k < f.jumps.size(); ++k) {
    Int next_order = (k + 1 < f.jumps.size()) ? f.jumps[k + 1].sub.order() : Int(1);
    out.breaks.push_back(f.jumps[k].v);
    out.slopes.push_back(Rat(total_order, next_order));
  }
  out.canonicalize();
  return out;
}

// (G/N)(v) = G(v)N/N: push each layer through a quotient map.
template <class S, class T, class QuotMap>
inline Filtration<T> quotient_filtration(const Filtration<S>& f, QuotMap&& qmap) {
  Filtration<T> out;
  for (auto& j : f.jumps) out.jumps.push_back({j.v, qmap(j.sub)});
  out.canonicalize();
  return out;
}

// H(w) = H intersect G(phi(w)) with phi from the quotient filtration G/H;
// jumps land at psi-images of the G-jumps.
template <class S, class Meet>
inline Filtration<S> subgroup_filtration(const Filtration<S>& f, const S& h, const HerbrandFn& phi,
                                         Meet&& meet) {
  HerbrandFn psi = phi.inverse();
  Filtration<S> out;
  for (auto& j : f.jumps) out.jumps.push_back({psi.eval(j.v), meet(h, j.sub)});
  out.canonicalize();
  return out;
}

}  // namespace mlf
