#pragma once

#include "sl3mm/modularchar.hpp"

#include <map>
#include <utility>

namespace sl3mm {

struct FusionCoefficient {
  Weight coset;  // output coset representative
  std::int64_t multiplicity{0};
  friend bool operator==(const FusionCoefficient&, const FusionCoefficient&) = default;
};

// Output flow -> (coset, multiplicity) for a product of two standard modules.
using FusionCoefficientTable = std::map<Coweight, FusionCoefficient>;

// Output flows farther than this (l1 distance from xi + xi') are scanned and
// must vanish; the seven nonzero ones sit at distance at most 2.
inline constexpr std::int64_t kVerlindeWindow = 4;

// The standard Verlinde formula for sigma^xi R[mu] x sigma^xi' R[mu'].
// For each candidate output flow xi'' the summand
//   S(xi,mu; X) S(xi',mu'; X) conj S(xi'',mu''; X) / S(vac; X)
// is integrated over the running coset and summed over the running flow;
// the result is m * delta([mu'' - shift]).
inline FusionCoefficientTable standardFusionCoefficients(const Coweight& xi, const Weight& mu, const Coweight& xip,
                                                         const Weight& mup) {
  const SymWeight out = SymWeight::variable(0);
  SumIntegrand ab = standardSRunning(xi, mu) * standardSRunning(xip, mup) * vacuumInverseRunning();
  Coweight centre = xi + xip;
  FusionCoefficientTable table;
  for (std::int64_t a = -kVerlindeWindow; a <= kVerlindeWindow; ++a)
    for (std::int64_t b = -kVerlindeWindow; b <= kVerlindeWindow; ++b) {
      Coweight off{a, b};
      if (l1Norm(off) > kVerlindeWindow) continue;
      Coweight xo = centre + off;
      DiracTerm t = deltaReduce(ab * standardSRunning(xo, out).conj());
      if (t.isZero()) continue;
      auto m = t.coefficient.asInteger();
      if (!m || *m < 0) throw InternalError("Verlinde coefficient at " + toString(xo) + " is not a nonnegative integer");
      // argument is mu'' + C in normal form, so the output coset is [-C]
      if (t.argument.vars != std::map<int, std::int64_t>{{0, 1}})
        throw InternalError("Verlinde delta argument does not isolate the output coset");
      table[xo] = {cosetRepresentative(-t.argument.constant), *m};
    }
  return table;
}

inline FusionCoefficientTable standardFusionCoefficients(const Weight& mu, const Weight& mup) {
  return standardFusionCoefficients({}, mu, {}, mup);
}

// The expected table: 2 R[mu+mu'] and sigma^{+-wi} R[mu+mu'+3/2 wi].
inline FusionCoefficientTable relaxedProductRule(const Weight& mu, const Weight& mup) {
  FusionCoefficientTable t;
  Weight s = mu + mup;
  t[{}] = {cosetRepresentative(s), 2};
  const std::pair<Coweight, Weight> dirs[] = {
      {coweights::omega1, weights::omega1},
      {coweights::omega2, weights::omega2},
      {coweights::omega3, weights::omega2 - weights::omega1},
  };
  for (const auto& [c, w] : dirs) {
    Weight shifted = cosetRepresentative(s + Rational(3, 2) * w);
    t[c] = {shifted, 1};
    t[-c] = {shifted, 1};
  }
  return t;
}

inline FusionCoefficientTable d6Equivariance(const FusionCoefficientTable& t, const D6Element& g) {
  FusionCoefficientTable r;
  for (const auto& [xo, c] : t) r[d6Apply(g, xo)] = {cosetRepresentative(d6Apply(g, c.coset)), c.multiplicity};
  return r;
}

inline FusionCoefficientTable flowEquivariance(const FusionCoefficientTable& t, const Coweight& xi,
                                               const Coweight& xip) {
  FusionCoefficientTable r;
  for (const auto& [xo, c] : t) r[xo + xi + xip] = c;
  return r;
}

inline std::string toString(const FusionCoefficientTable& t) {
  std::string s;
  for (const auto& [xo, c] : t) {
    if (!s.empty()) s += " + ";
    if (c.multiplicity != 1) s += std::to_string(c.multiplicity) + " ";
    if (xo != Coweight{}) s += "sigma^" + toString(xo) + " ";
    s += "R[" + toString(c.coset.d1) + "," + toString(c.coset.d2) + "]";
  }
  return s.empty() ? "0" : s;
}

}  // namespace sl3mm
