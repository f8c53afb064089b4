#pragma once

#include "sl3mm/rootdata.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

namespace sl3mm {

using Triple = std::array<std::int64_t, 3>;  // affine Dynkin labels (l0, l1, l2)

enum class AdmType { Planar, Reflected };

struct AdmWeight {
  Weight weight;
  AdmType type{AdmType::Planar};
  Triple integralPart{};
  Triple fractionalPart{};
};

enum class NilpotentOrbit { O0, Omin, Opr };

inline const char* toString(NilpotentOrbit o) {
  switch (o) {
    case NilpotentOrbit::O0: return "O0";
    case NilpotentOrbit::Omin: return "Omin";
    case NilpotentOrbit::Opr: return "Opr";
  }
  return "?";
}

struct ClassTag {
  bool inAdm{false};
  bool inSigma1{false};
  bool inR1{false};
  bool inR2{false};
  bool inR3{false};
  bool fdimTop{false};
  NilpotentOrbit orbit{NilpotentOrbit::O0};
};

struct SingularCurve {
  Weight base;
  int direction{1};  // index i of the root alpha_i spanning the curve
};

struct SingularLocus {
  std::array<SingularCurve, 3> curves;
};

struct AdmCounts {
  std::int64_t adm{0};
  std::int64_t fdimTop{0};
  std::int64_t sigma1{0};
  std::int64_t r2{0};
  friend bool operator==(const AdmCounts&, const AdmCounts&) = default;
};

namespace detail {
inline std::vector<Triple> dominantTriples(std::int64_t level) {
  std::vector<Triple> out;
  for (std::int64_t a1 = 0; a1 <= level; ++a1)
    for (std::int64_t a2 = 0; a1 + a2 <= level; ++a2) out.push_back({level - a1 - a2, a1, a2});
  return out;
}
}  // namespace detail

// Dynkin labels of the weight with the given integral and fractional parts.
inline Weight admissibleWeightOf(AdmType type, const Triple& I, const Triple& F, const Level& lvl) {
  Rational uv(lvl.u, lvl.v);
  if (type == AdmType::Planar) return {I[1] - uv * F[1], I[2] - uv * F[2]};
  return {Rational(lvl.u - 2 - I[1]) - uv * (lvl.v - F[1]),
          Rational(lvl.u - 2 - I[0]) - uv * (lvl.v - 1 - F[0])};
}

inline std::vector<AdmWeight> enumerateAdmissible(const Level& lvlIn) {
  Level lvl = makeAdmissibleLevel(lvlIn.u, lvlIn.v);
  std::vector<AdmWeight> out;
  auto integral = detail::dominantTriples(lvl.u - 3);
  auto fractional = detail::dominantTriples(lvl.v - 1);
  for (const auto& I : integral)
    for (const auto& F : fractional) out.push_back({admissibleWeightOf(AdmType::Planar, I, F, lvl), AdmType::Planar, I, F});
  for (const auto& I : integral)
    for (const auto& F : fractional)
      if (F[1] >= 1) out.push_back({admissibleWeightOf(AdmType::Reflected, I, F, lvl), AdmType::Reflected, I, F});
  return out;
}

inline std::optional<AdmWeight> findAdmissible(const Weight& w, const Level& lvl) {
  for (const auto& a : enumerateAdmissible(lvl))
    if (a.weight == w) return a;
  return std::nullopt;
}

inline AdmWeight requireAdmissible(const Weight& w, const Level& lvl) {
  auto a = findAdmissible(w, lvl);
  if (!a) throw DomainError("weight " + toString(w) + " is not admissible at this level");
  return *a;
}

inline bool inSigma1(const AdmWeight& a) { return a.type == AdmType::Planar && a.fractionalPart[1] != 0; }
inline bool inSigma(const AdmWeight& a) { return inSigma1(a) || a.type == AdmType::Reflected; }
inline bool inR1(const AdmWeight& a) {
  return a.type == AdmType::Planar && a.fractionalPart[1] == 0 && a.fractionalPart[2] != 0;
}
inline bool inR2(const AdmWeight& a) {
  return a.type == AdmType::Planar && a.fractionalPart[1] != 0 && a.fractionalPart[2] == 0;
}
inline bool inR3(const AdmWeight& a) { return a.type == AdmType::Reflected && a.fractionalPart[2] == 0; }
inline bool inR(const AdmWeight& a) { return inR1(a) || inR2(a) || inR3(a); }
inline bool hasFdimTop(const AdmWeight& a) {
  return a.type == AdmType::Planar && a.fractionalPart[1] == 0 && a.fractionalPart[2] == 0;
}

inline ClassTag classify(const AdmWeight& a, const Level& lvl) {
  ClassTag t;
  t.inAdm = true;
  t.inSigma1 = inSigma1(a);
  t.inR1 = inR1(a);
  t.inR2 = inR2(a);
  t.inR3 = inR3(a);
  t.fdimTop = hasFdimTop(a);
  // d(Sigma) membership: the diagram flip of the weight is a Sigma weight.
  bool inDSigma = false;
  if (auto flipped = findAdmissible(d6Apply(d6::d, a.weight), lvl)) inDSigma = inSigma(*flipped);
  if (inR(a))
    t.orbit = NilpotentOrbit::Omin;
  else if (inSigma(a) || inDSigma)
    t.orbit = NilpotentOrbit::Opr;
  else
    t.orbit = NilpotentOrbit::O0;
  return t;
}

inline AdmCounts counts(const Level& lvlIn) {
  Level lvl = makeAdmissibleLevel(lvlIn.u, lvlIn.v);
  // |R2| is (1/2)(u-1)(u-2)(v-1): v-1 fractional triples (f0, f1, 0) with f1 >= 1
  // for each of the (1/2)(u-1)(u-2) integral triples.
  std::int64_t a = (lvl.u - 1) * (lvl.u - 2);
  return {a * lvl.v * lvl.v / 2, a / 2, a * lvl.v * (lvl.v - 1) / 4, a * (lvl.v - 1) / 2};
}

inline AdmCounts enumeratedCounts(const Level& lvl) {
  AdmCounts c;
  for (const auto& a : enumerateAdmissible(lvl)) {
    ++c.adm;
    c.fdimTop += hasFdimTop(a);
    c.sigma1 += inSigma1(a);
    c.r2 += inR2(a);
  }
  return c;
}

// Parameter t in [0,1) with mu - base - t*alpha_dir in Q, if [mu] lies on the curve [base + C alpha_dir].
inline std::optional<Rational> curveParameter(const Weight& mu, const Weight& base, int dir) {
  Weight delta = mu - base;
  Rational t;
  switch (dir) {
    case 1: t = -delta.d2; break;
    case 2: t = -delta.d1; break;
    case 3: t = delta.d1; break;
    default: throw std::invalid_argument("curve direction must be 1, 2 or 3");
  }
  t = fracPart(t);
  if (!inRootLattice(delta - t * weights::alpha(dir))) return std::nullopt;
  return t;
}

inline SingularLocus singularLocus(const AdmWeight& a) {
  if (!inR2(a)) throw DomainError("singular locus is defined for relaxed representatives in R2 only");
  Weight l = a.weight;
  return {{SingularCurve{l, 1}, SingularCurve{dotAction(d6::w1, l), 2}, SingularCurve{l, 3}}};
}

// Indices (0-based) of the curves of the locus containing [mu].
inline std::vector<int> curvesContaining(const SingularLocus& s, const Weight& mu) {
  std::vector<int> out;
  for (int i = 0; i < 3; ++i)
    if (curveParameter(mu, s.curves[i].base, s.curves[i].direction)) out.push_back(i);
  return out;
}

inline bool boundedHwTest(const Weight& w) {
  bool n1 = isNatural(w.d1), n2 = isNatural(w.d2);
  if (n1 && !n2) return true;
  if (!n1 && n2) return true;
  if (!n1 && !n2) {
    Rational s = w.d1 + w.d2;
    return isInteger(s) && s >= -1;
  }
  return false;
}

}  // namespace sl3mm
