#pragma once

#include "sl3mm/modlabel.hpp"

#include <map>
#include <string>

namespace sl3mm {

// Element of the Grothendieck group: canonical labels with integer multiplicities.
class GrClass {
 public:
  GrClass() = default;
  explicit GrClass(const CanonicalLabel& m, std::int64_t mult = 1) { add(m, mult); }

  void add(const CanonicalLabel& m, std::int64_t mult = 1) {
    if (mult == 0) return;
    auto& slot = terms_[m];
    slot += mult;
    if (slot == 0) terms_.erase(m);
  }
  GrClass& operator+=(const GrClass& o) {
    for (const auto& [m, n] : o.terms_) add(m, n);
    return *this;
  }
  GrClass& operator-=(const GrClass& o) {
    for (const auto& [m, n] : o.terms_) add(m, -n);
    return *this;
  }
  friend GrClass operator+(GrClass a, const GrClass& b) { return a += b; }
  friend GrClass operator-(GrClass a, const GrClass& b) { return a -= b; }
  friend GrClass operator*(std::int64_t s, const GrClass& a) {
    GrClass r;
    for (const auto& [m, n] : a.terms_) r.add(m, s * n);
    return r;
  }
  friend bool operator==(const GrClass&, const GrClass&) = default;

  const std::map<CanonicalLabel, std::int64_t>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::int64_t multiplicity(const CanonicalLabel& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
  }
  std::int64_t totalMultiplicity() const {
    std::int64_t s = 0;
    for (const auto& [m, n] : terms_) s += n;
    return s;
  }

 private:
  std::map<CanonicalLabel, std::int64_t> terms_;
};

inline std::string toString(const GrClass& g) {
  if (g.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, n] : g.terms()) {
    if (!first) s += n < 0 ? " - " : " + ";
    else if (n < 0) s += "-";
    first = false;
    std::int64_t a = n < 0 ? -n : n;
    if (a != 1) s += std::to_string(a) + " ";
    s += toString(m);
  }
  return s;
}

// Apply a twist and a flow to every term, re-canonicalizing.
inline GrClass transform(const GrClass& g, const D6Element& tw, const Coweight& fl, const Level& lvl) {
  GrClass r;
  for (const auto& [m, n] : g.terms()) r.add(canonicalize(flowApply(fl, twist(tw, m)), lvl), n);
  return r;
}

// ---------------------------------------------------------------------------

// Reducible semirelaxed module at one of the two special cosets [lambda], [w1.lambda].
inline GrClass decomposeSemi(const Weight& lambda, const Rational& t, const Level& lvl) {
  auto a = requireAdmissible(lambda, lvl);
  if (!inSigma1(a)) throw DomainError("semirelaxed family weight " + toString(lambda) + " is not in Sigma^1");
  Weight refl = dotAction(d6::w1, lambda);
  GrClass out;
  auto hw = [&](const Weight& w, const D6Element& g) { out.add(canonicalize(twist(g, makeHW(w, lvl)), lvl)); };
  Rational tt = fracPart(t);
  if (tt == 0) {
    hw(lambda, d6::e);
    hw(refl, d6::w1);
  } else if (tt == fracPart(-lambda.d1)) {
    hw(refl, d6::e);
    hw(lambda, d6::w1);
  } else {
    throw DomainError("semirelaxed parameter " + toString(tt) + " is not degenerate for family " + toString(lambda));
  }
  return out;
}

inline GrClass decomposeSemiAt(const Weight& lambda, const Weight& mu, const Level& lvl) {
  return decomposeSemi(lambda, semiParameterOf(lambda, mu), lvl);
}

namespace detail {

// g . S_lambda[mu], either irreducible or refined into its two highest-weight summands.
inline GrClass semiSummand(const D6Element& g, const Weight& lambda, const Weight& mu, const Level& lvl) {
  Rational t = semiParameterOf(lambda, mu);
  if (semiParameterDegenerate(lambda, t)) return transform(decomposeSemi(lambda, t, lvl), g, {}, lvl);
  return GrClass(canonicalize(twist(g, makeSemi(lambda, t, lvl)), lvl));
}

}  // namespace detail

// Decomposition of R_lambda[mu] along the given curve of Sing(lambda) (0: alpha1 through lambda,
// 1: alpha2 through w1.lambda, 2: alpha3 through lambda).
inline GrClass decomposeRelVia(const Weight& lambda, const Weight& muAny, int curve, const Level& lvl) {
  auto a = requireAdmissible(lambda, lvl);
  auto locus = singularLocus(a);
  if (curve < 0 || curve > 2) throw std::invalid_argument("curve index must be 0, 1 or 2");
  const auto& cv = locus.curves[curve];
  auto t = curveParameter(muAny, cv.base, cv.direction);
  if (!t) throw DomainError("coset " + toString(cosetRepresentative(muAny)) + " is not on curve " + std::to_string(curve));
  // Representative of [mu] on the curve itself.
  Weight mu = cv.base + *t * weights::alpha(cv.direction);
  Rational l2I = lambda.d2;  // lambda in R^2 has integral second label
  Weight lp = dotAction(d6::c * d6::w2, lambda);
  GrClass out;
  switch (curve) {
    case 0:
      out += detail::semiSummand(d6::e, lambda, mu, lvl);
      out += detail::semiSummand(d6::c, lp, d6Apply(d6::c, mu) + (l2I - 1) * weights::alpha2, lvl);
      break;
    case 1: {
      Weight w21mu = d6Apply(d6::w2 * d6::w1, mu);
      out += detail::semiSummand(d6::w1w2, lambda, w21mu + (l2I - 1) * weights::alpha2, lvl);
      out += detail::semiSummand(d6::c * d6::w1w2, lp, d6Apply(d6::c, w21mu), lvl);
      break;
    }
    case 2:
      out += detail::semiSummand(d6::w2, lambda, d6Apply(d6::w2, mu) + l2I * weights::alpha2, lvl);
      out += detail::semiSummand(d6::c * d6::w2, lp, dotAction(d6::c * d6::w2, mu), lvl);
      break;
  }
  return out;
}

inline GrClass decomposeRel(const Weight& lambda, const Weight& mu, const Level& lvl) {
  auto curves = curvesContaining(singularLocus(requireAdmissible(lambda, lvl)), mu);
  if (curves.empty())
    throw DomainError("relaxed coset " + toString(cosetRepresentative(mu)) + " is not on the singular locus of " +
                      toString(lambda));
  return decomposeRelVia(lambda, mu, curves.front(), lvl);
}

// Dispatch on a parsed (possibly degenerate) label: twist and flow are carried through.
inline GrClass decomposeLabel(const ModuleLabel& m, const Level& lvl) {
  GrClass core;
  switch (m.core.kind) {
    case CoreKind::HW: core = GrClass(canonicalize(makeHW(m.core.lambda, lvl), lvl)); break;
    case CoreKind::Semi:
      if (semiParameterDegenerate(m.core.lambda, m.core.t)) core = decomposeSemi(m.core.lambda, m.core.t, lvl);
      else core = GrClass(canonicalize(makeSemi(m.core.lambda, m.core.t, lvl), lvl));
      break;
    case CoreKind::Rel:
      if (relCosetDegenerate(m.core.lambda, m.core.coset, lvl)) core = decomposeRel(m.core.lambda, m.core.coset, lvl);
      else core = GrClass(canonicalize(makeRel(m.core.lambda, m.core.coset, lvl), lvl));
      break;
  }
  return transform(core, m.twist, m.flow, lvl);
}

// 0 for typical relaxed cosets, 1 for a single singular curve and for irreducible
// semirelaxed modules, 2 at double points and for highest-weight modules.
inline int atypicalityDegree(const ModuleLabel& m, const Level& lvl) {
  switch (m.core.kind) {
    case CoreKind::HW: return 2;
    case CoreKind::Semi: return semiParameterDegenerate(m.core.lambda, m.core.t) ? 2 : 1;
    case CoreKind::Rel:
      return static_cast<int>(curvesContaining(singularLocus(requireAdmissible(m.core.lambda, lvl)), m.core.coset).size());
  }
  return 0;
}

}  // namespace sl3mm
