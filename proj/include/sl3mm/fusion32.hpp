#pragma once

// Grothendieck fusion ring of M(3,2).
//
// Two independent routes are provided. fuse() applies the closed
// irreducible-by-irreducible rules after moving twists and flows out of the
// way. fuseByResolution() expands both factors into standard modules,
// multiplies with the relaxed-by-relaxed rule and telescopes the period-2
// tails.
//
// The resolution route works in the group ring Z[G], G = P-check x (h*/Q),
// where sigma^xi R[mu] is the monomial x(xi,mu). The relaxed rule reads
// x * y = K x y with the seven-term kernel
//   K = 2 + sum_i (b_i + b_i^{-1}),  b_i = x(wi-check, 3/2 wi),
// so multiplying standard expansions by K gives a ring homomorphism psi into
// the ordinary group ring. psi of every irreducible is a finite Laurent
// polynomial, which makes telescoping an exact division by (1 - s).

#include "sl3mm/degen.hpp"
#include "sl3mm/verlinde.hpp"

#include <mutex>
#include <optional>
#include <set>
#include <vector>

namespace sl3mm {

// ---------------------------------------------------------------------------
// Group ring Z[P-check x h*/Q]

struct GroupElement {
  Coweight flow;
  Weight coset;  // canonical representative
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    if (a.flow != b.flow) return a.flow < b.flow;
    return a.coset < b.coset;
  }
};

class PsiPoly {
 public:
  PsiPoly() = default;
  static PsiPoly monomial(const Coweight& flow, const Weight& coset, std::int64_t c = 1) {
    PsiPoly p;
    p.add({flow, cosetRepresentative(coset)}, c);
    return p;
  }
  static PsiPoly one() { return monomial({}, weights::zero); }

  void add(const GroupElement& g, std::int64_t c) {
    if (c == 0) return;
    auto& slot = terms_[g];
    slot = detail::checkedAdd(slot, c);
    if (slot == 0) terms_.erase(g);
  }
  const std::map<GroupElement, std::int64_t>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  std::int64_t coefficient(const GroupElement& g) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? 0 : it->second;
  }

  PsiPoly& operator+=(const PsiPoly& o) {
    for (const auto& [g, c] : o.terms_) add(g, c);
    return *this;
  }
  PsiPoly& operator-=(const PsiPoly& o) {
    for (const auto& [g, c] : o.terms_) add(g, -c);
    return *this;
  }
  friend PsiPoly operator+(PsiPoly a, const PsiPoly& b) { return a += b; }
  friend PsiPoly operator-(PsiPoly a, const PsiPoly& b) { return a -= b; }
  friend PsiPoly operator*(std::int64_t s, const PsiPoly& a) {
    PsiPoly r;
    for (const auto& [g, c] : a.terms_) r.add(g, detail::checkedMul(s, c));
    return r;
  }
  friend PsiPoly operator*(const PsiPoly& a, const PsiPoly& b) {
    PsiPoly r;
    for (const auto& [g, c] : a.terms_)
      for (const auto& [h, d] : b.terms_)
        r.add({g.flow + h.flow, cosetRepresentative(g.coset + h.coset)}, detail::checkedMul(c, d));
    return r;
  }
  friend bool operator==(const PsiPoly&, const PsiPoly&) = default;

  // Shift by the monomial x(flow, coset).
  PsiPoly shifted(const Coweight& flow, const Weight& coset = weights::zero) const {
    PsiPoly r;
    for (const auto& [g, c] : terms_) r.add({g.flow + flow, cosetRepresentative(g.coset + coset)}, c);
    return r;
  }
  PsiPoly twisted(const D6Element& h) const {
    PsiPoly r;
    for (const auto& [g, c] : terms_) r.add({d6Apply(h, g.flow), cosetRepresentative(d6Apply(h, g.coset))}, c);
    return r;
  }
  // Value of the one-dimensional character x(xi,mu) -> 1.
  std::int64_t augmentation() const {
    std::int64_t s = 0;
    for (const auto& [g, c] : terms_) s = detail::checkedAdd(s, c);
    return s;
  }

 private:
  std::map<GroupElement, std::int64_t> terms_;
};

inline std::string toString(const PsiPoly& p) {
  if (p.isZero()) return "0";
  std::string s;
  for (const auto& [g, c] : p.terms()) {
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    std::int64_t a = c < 0 ? -c : c;
    if (a != 1) s += std::to_string(a) + "*";
    s += "x" + toString(g.flow) + toString(g.coset);
  }
  return s;
}

// The relaxed-by-relaxed kernel K.
inline const PsiPoly& relaxedKernel() {
  static const PsiPoly k = [] {
    PsiPoly p = 2 * PsiPoly::one();
    const std::pair<Coweight, Weight> b[] = {{coweights::omega1, weights::omega1},
                                             {coweights::omega2, weights::omega2},
                                             {coweights::omega3, weights::omega2 - weights::omega1}};
    for (const auto& [c, w] : b) {
      p += PsiPoly::monomial(c, Rational(3, 2) * w);
      p += PsiPoly::monomial(-c, Rational(-3, 2) * w);
    }
    return p;
  }();
  return k;
}

// ---------------------------------------------------------------------------
// Labels at (3,2) with possibly reducible parameters.

namespace detail {

inline const Weight& hwWeightOmega1() {
  static const Weight w{Rational(-3, 2), 0};
  return w;
}
inline const Weight& hwWeightOmega2() {
  static const Weight w{0, Rational(-3, 2)};
  return w;
}
inline const Weight& hwWeightHalfRho() {
  static const Weight w{Rational(-1, 2), Rational(-1, 2)};
  return w;
}

inline ModuleLabel relLabel(const Coweight& flow, const Weight& mu, const D6Element& g = d6::e) {
  return {flow, g, Core{CoreKind::Rel, m32FamilyWeight(), 0, cosetRepresentative(mu)}};
}

// Parameter t with mu = lambda + t alpha1 modulo Q, if mu lies on the semirelaxed line.
inline std::optional<Rational> semiParameterModQ(const Weight& mu) {
  auto [t1, t2] = rootCoordinates(mu - m32FamilyWeight());
  if (!isInteger(t2)) return std::nullopt;
  return fracPart(t1);
}

inline ModuleLabel semiLabel(const Coweight& flow, const Weight& mu, const D6Element& g = d6::e) {
  auto t = semiParameterModQ(mu);
  if (!t) throw InternalError("coset " + toString(mu) + " is not on the semirelaxed line");
  return {flow, g, Core{CoreKind::Semi, m32FamilyWeight(), *t, {}}};
}

inline ModuleLabel hwLabel(const Coweight& flow, const Weight& lambda, const D6Element& g = d6::e) {
  return {flow, g, Core{CoreKind::HW, lambda, 0, {}}};
}

inline ModuleLabel transformLabel(const ModuleLabel& m, const D6Element& g, const Coweight& flow) {
  return flowApply(flow, twist(g, m));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Standard expansions

struct PatternTerm {
  ModuleLabel label;  // may carry a reducible parameter
  std::int64_t coefficient{1};
};

// X = finite + sum_{n >= 0} sigma^{2n d} even + sigma^{(2n+1) d} odd
struct GrTail {
  Coweight direction;
  std::vector<PatternTerm> even;
  std::vector<PatternTerm> odd;
};

struct GrExpansion {
  std::vector<PatternTerm> finite;
  std::optional<GrTail> tail;
};

namespace detail {

inline void transformTerms(std::vector<PatternTerm>& v, const D6Element& g, const Coweight& flow, std::int64_t s = 1) {
  for (auto& t : v) {
    t.label = transformLabel(t.label, g, flow);
    t.coefficient *= s;
  }
}

inline GrExpansion transformExpansion(GrExpansion e, const D6Element& g, const Coweight& flow, std::int64_t s = 1) {
  transformTerms(e.finite, g, flow, s);
  if (e.tail) {
    e.tail->direction = d6Apply(g, e.tail->direction);
    transformTerms(e.tail->even, g, flow, s);
    transformTerms(e.tail->odd, g, flow, s);
  }
  return e;
}

// HW(-3/2 w1): even terms w2 S[-3/2 w1] - sigma^{-w2} S[-rho/2] along -w1, odd terms zero.
inline GrExpansion hwOmega1Expansion() {
  GrTail tail{-coweights::omega1,
              {{semiLabel({}, hwWeightOmega1(), d6::w2), 1}, {semiLabel(-coweights::omega2, hwWeightHalfRho()), -1}},
              {}};
  return {{}, tail};
}

}  // namespace detail

inline GrExpansion grExpand(const ModuleLabel& m) {
  GrExpansion core;
  switch (m.core.kind) {
    case CoreKind::Rel: core.finite.push_back({detail::relLabel({}, m.core.coset), 1}); break;
    case CoreKind::Semi: {
      if (!(m.core.lambda == m32FamilyWeight())) throw DomainError("grExpand needs a label of M(3,2)");
      Weight mu = m.core.semiWeight();
      core.tail = GrTail{-coweights::omega2,
                         {{detail::relLabel({}, mu), 1}},
                         {{detail::relLabel({}, mu - Rational(1, 2) * weights::alpha1), -1}}};
      break;
    }
    case CoreKind::HW: {
      const Weight& l = m.core.lambda;
      if (l == detail::hwWeightOmega1()) core = detail::hwOmega1Expansion();
      else if (l == weights::zero)
        core = detail::transformExpansion(detail::hwOmega1Expansion(), d6::e, -coweights::omega1);
      else if (l == detail::hwWeightOmega2()) core = detail::transformExpansion(detail::hwOmega1Expansion(), d6::d, {});
      else if (l == detail::hwWeightHalfRho()) {
        // S[-rho/2] minus the sigma^{w3}-flowed vacuum
        GrExpansion vac = detail::transformExpansion(detail::hwOmega1Expansion(), d6::e,
                                                     coweights::omega3 - coweights::omega1, -1);
        core.finite.push_back({detail::semiLabel({}, l), 1});
        core.tail = vac.tail;
      } else {
        throw DomainError("grExpand needs a label of M(3,2); got highest weight " + toString(l));
      }
      break;
    }
  }
  return detail::transformExpansion(core, m.twist, m.flow);
}

namespace detail {

// T / (1 - s) for s = x(step, 0), expanded in nonnegative powers of s. Every
// line of T along step must have coefficient sum zero for the result to be finite.
inline PsiPoly telescope(const PsiPoly& t, const Coweight& step) {
  if (step == Coweight{}) throw InternalError("zero telescoping step");
  auto lineIndex = [&](const Coweight& f) {
    return step.c1 != 0 ? floorOf(Rational(f.c1, step.c1)) : floorOf(Rational(f.c2, step.c2));
  };
  std::map<GroupElement, std::map<std::int64_t, std::int64_t>> lines;
  for (const auto& [g, c] : t.terms()) {
    std::int64_t j = lineIndex(g.flow);
    lines[{g.flow - j * step, g.coset}][j] += c;
  }
  PsiPoly q;
  for (const auto& [base, line] : lines) {
    std::int64_t running = 0;
    std::int64_t j = line.begin()->first;
    std::int64_t last = line.rbegin()->first;
    for (; j <= last; ++j) {
      auto it = line.find(j);
      if (it != line.end()) running = checkedAdd(running, it->second);
      if (j < last) q.add({base.flow + j * step, base.coset}, running);
    }
    if (running != 0) throw InternalError("non-terminating tail along " + toString(step));
  }
  return q;
}

}  // namespace detail

inline PsiPoly psi(const ModuleLabel& m);

namespace detail {

inline PsiPoly psiOfTerms(const std::vector<PatternTerm>& v) {
  PsiPoly r;
  for (const auto& t : v) r += t.coefficient * psi(t.label);
  return r;
}

}  // namespace detail

// K times the standard expansion of m.
inline PsiPoly psi(const ModuleLabel& m) {
  if (m.core.kind == CoreKind::Rel)
    return relaxedKernel().shifted(m.flow, d6Apply(m.twist, m.core.coset));
  GrExpansion e = grExpand(m);
  PsiPoly r = detail::psiOfTerms(e.finite);
  if (e.tail) {
    PsiPoly t = detail::psiOfTerms(e.tail->even) + detail::psiOfTerms(e.tail->odd).shifted(e.tail->direction);
    r += detail::telescope(t, 2 * e.tail->direction);
  }
  return r;
}

inline PsiPoly psi(const GrClass& g) {
  PsiPoly r;
  for (const auto& [m, n] : g.terms()) r += n * psi(m);
  return r;
}

// Linear extension of R -> 8, S -> 4, HW(-rho/2) -> 3, HW(0) -> 1.
inline std::int64_t dimensionRep(const GrClass& g) { return psi(g).augmentation(); }

// ---------------------------------------------------------------------------
// Recollection: the unique class with a given psi image.

namespace detail {

inline const Level& lvl32() { return level32(); }

struct ReferenceImages {
  PsiPoly relaxed;                // psi(R[0]) shifted to coset 0
  PsiPoly semi;                   // psi(S[mu0]) shifted back by mu0
  std::vector<std::pair<Weight, PsiPoly>> hw;
};

inline const ReferenceImages& referenceImages() {
  static const ReferenceImages r = [] {
    ReferenceImages out;
    out.relaxed = psi(relLabel({}, weights::zero));
    Weight mu0 = m32FamilyWeight() + Rational(1, 3) * weights::alpha1;
    out.semi = psi(semiLabel({}, mu0)).shifted({}, -mu0);
    for (const Weight& l : {weights::zero, hwWeightOmega1(), hwWeightOmega2(), hwWeightHalfRho()})
      out.hw.push_back({l, psi(hwLabel({}, l))});
    return out;
  }();
  return r;
}

inline bool supportedIn(const PsiPoly& p, const PsiPoly& f) {
  for (const auto& [g, c] : p.terms())
    if (f.coefficient(g) == 0) return false;
  return true;
}

// Irreducible labels whose psi image meets the point p.
inline void candidatesAt(const GroupElement& p, std::set<ModuleLabel>& out) {
  const auto& ref = referenceImages();
  const Level& L = lvl32();
  for (const auto& [o, c] : ref.relaxed.terms()) {
    Weight nu = cosetRepresentative(p.coset - o.coset);
    if (!relCosetDegenerate(m32FamilyWeight(), nu, L)) out.insert(relLabel(p.flow - o.flow, nu));
  }
  for (int k = 0; k < 12; ++k) {
    D6Element g = D6Element::fromIndex(k);
    D6Element gi = d6Inverse(g);
    for (const auto& [o, c] : ref.semi.terms()) {
      // sigma^eta g S[mu] meets p through the term g(o) + (0, g mu)
      Weight mu = d6Apply(gi, p.coset) - o.coset;
      auto t = semiParameterModQ(mu);
      if (!t || semiParameterDegenerate(m32FamilyWeight(), *t)) continue;
      out.insert({p.flow - d6Apply(g, o.flow), g, Core{CoreKind::Semi, m32FamilyWeight(), *t, {}}});
    }
    for (const auto& [l, img] : ref.hw) {
      PsiPoly tw = img.twisted(g);
      for (const auto& [o, c] : tw.terms())
        if (o.coset == p.coset) out.insert(hwLabel(p.flow - o.flow, l, g));
    }
  }
}

// Exact Gaussian elimination; returns the unique solution or nullopt.
inline std::optional<std::vector<Rational>> solveUnique(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivotCol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    Rational inv = Rational(1) / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] = a[r][j] * inv;
    b[r] = b[r] * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] = a[i][j] - f * a[r][j];
      b[i] = b[i] - f * b[r];
    }
    pivotCol.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  if (pivotCol.size() != cols) return std::nullopt;
  std::vector<Rational> x(cols);
  for (std::size_t i = 0; i < r; ++i) x[pivotCol[i]] = b[i];
  return x;
}

}  // namespace detail

// The class C with psi(C) = f, built from irreducible labels.
inline GrClass recollect(const PsiPoly& f) {
  if (f.isZero()) return {};
  std::set<ModuleLabel> raw;
  for (const auto& [p, c] : f.terms()) {
    if (c < 0) throw InternalError("negative coefficient in a product image");
    detail::candidatesAt(p, raw);
  }
  std::map<CanonicalLabel, PsiPoly> cands;
  for (const auto& m : raw) {
    PsiPoly img = psi(m);
    if (!detail::supportedIn(img, f)) continue;
    CanonicalLabel c = canonicalize(m, detail::lvl32());
    cands.emplace(c, img);
  }
  std::vector<GroupElement> rowsKey;
  for (const auto& [p, c] : f.terms()) rowsKey.push_back(p);
  std::vector<std::vector<Rational>> a(rowsKey.size(), std::vector<Rational>(cands.size(), Rational(0)));
  std::vector<Rational> b(rowsKey.size());
  std::map<GroupElement, std::size_t> rowOf;
  for (std::size_t i = 0; i < rowsKey.size(); ++i) {
    rowOf[rowsKey[i]] = i;
    b[i] = Rational(f.coefficient(rowsKey[i]));
  }
  std::size_t j = 0;
  std::vector<CanonicalLabel> labels;
  for (const auto& [lab, img] : cands) {
    for (const auto& [p, c] : img.terms()) a[rowOf.at(p)][j] = Rational(c);
    labels.push_back(lab);
    ++j;
  }
  auto x = detail::solveUnique(a, b);
  if (!x) throw InternalError("recollection is not unique or has no solution for " + toString(f));
  GrClass out;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const Rational& m = (*x)[k];
    if (!isInteger(m) || m < 0) throw InternalError("recollected multiplicity " + toString(m) + " is not a natural number");
    out.add(labels[k], m.numerator());
  }
  if (psi(out) != f) throw InternalError("recollection does not reproduce the product image");
  return out;
}

inline GrClass fuseByResolution(const GrClass& a, const GrClass& b) { return recollect(psi(a) * psi(b)); }

inline GrClass fuseByResolution(const ModuleLabel& a, const ModuleLabel& b) {
  return recollect(psi(a) * psi(b));
}

// ---------------------------------------------------------------------------
// Closed rules

enum class CoreType { Vacuum, HalfRho, Relaxed, Semi, Other };

namespace detail {

inline CoreType coreType(const Core& c) {
  switch (c.kind) {
    case CoreKind::Rel: return CoreType::Relaxed;
    case CoreKind::Semi: return CoreType::Semi;
    case CoreKind::HW:
      if (c.lambda == weights::zero) return CoreType::Vacuum;
      if (c.lambda == hwWeightHalfRho()) return CoreType::HalfRho;
      return CoreType::Other;
  }
  return CoreType::Other;
}

// Weight carried by a relaxed or semirelaxed core.
inline Weight coreCoset(const Core& c) { return c.kind == CoreKind::Rel ? c.coset : c.semiWeight(); }

inline Weight w3() { return weights::omega2 - weights::omega1; }

// X0 (x) k Y0 for untwisted, unflowed cores, when a closed rule applies.
inline std::optional<std::vector<PatternTerm>> closedRule(const Core& x, const D6Element& k, const Core& y) {
  using T = CoreType;
  T tx = coreType(x), ty = coreType(y);
  const Rational h(3, 2);
  if (tx == T::Vacuum) return std::vector<PatternTerm>{{{{}, k, y}, 1}};
  if (tx == T::Relaxed && ty == T::Relaxed) {
    Weight s = coreCoset(x) + d6Apply(k, coreCoset(y));
    std::vector<PatternTerm> r{{relLabel({}, s), 2}};
    for (auto [c, w] : {std::pair{coweights::omega1, weights::omega1}, std::pair{coweights::omega2, weights::omega2},
                        std::pair{coweights::omega3, w3()}}) {
      r.push_back({relLabel(c, s + h * w), 1});
      r.push_back({relLabel(-c, s + h * w), 1});
    }
    return r;
  }
  if (tx == T::Semi && ty == T::Relaxed) {
    Weight s = coreCoset(x) + d6Apply(k, coreCoset(y));
    return std::vector<PatternTerm>{{relLabel({}, s), 1},
                                    {relLabel(coweights::omega1, s + h * weights::omega1), 1},
                                    {relLabel(coweights::omega2, s + h * weights::omega2), 1},
                                    {relLabel(coweights::omega3, s + h * w3()), 1}};
  }
  if (tx == T::HalfRho && ty == T::Relaxed) {
    Weight m = d6Apply(k, coreCoset(y));
    Rational half(1, 2);
    return std::vector<PatternTerm>{{relLabel({}, m + half * weights::alpha3), 1},
                                    {relLabel(coweights::omega1, m + half * weights::alpha1), 1},
                                    {relLabel(coweights::omega2, m + half * weights::alpha2), 1}};
  }
  if (tx == T::Semi && ty == T::Semi) {
    Weight s = coreCoset(x) + d6Apply(k, coreCoset(y));
    if (k == d6::e)
      return std::vector<PatternTerm>{{semiLabel(coweights::omega1, s + h * weights::omega1), 1},
                                      {relLabel(coweights::omega2, s + h * weights::omega2), 1},
                                      {semiLabel(coweights::omega3, s + h * w3()), 1}};
    if (k == d6::w2)
      return std::vector<PatternTerm>{{relLabel({}, s), 1}, {relLabel(coweights::omega1, s + h * weights::omega1), 1}};
    if (k == d6::w1w2)
      return std::vector<PatternTerm>{{relLabel({}, s), 1}, {relLabel(coweights::omega3, s + h * w3()), 1}};
    return std::nullopt;
  }
  if (tx == T::HalfRho && ty == T::Semi && k == d6::e) {
    Weight m = coreCoset(y);
    Rational half(1, 2);
    return std::vector<PatternTerm>{{semiLabel(coweights::omega1, m + half * weights::alpha1), 1},
                                    {relLabel(coweights::omega2, m + half * weights::alpha2), 1}};
  }
  if (tx == T::HalfRho && ty == T::HalfRho) {
    if (k == d6::e)
      return std::vector<PatternTerm>{{hwLabel({}, weights::zero), 1},
                                      {hwLabel(2 * coweights::omega1, weights::zero), 1},
                                      {hwLabel(2 * coweights::omega2, weights::zero), 1},
                                      {hwLabel(coweights::omega1 + coweights::omega2, hwWeightHalfRho(), d6::c), 2}};
    if (k == d6::c) return std::vector<PatternTerm>{{relLabel({}, weights::zero), 1}, {hwLabel({}, weights::zero), 1}};
  }
  return std::nullopt;
}

// sigma^alpha g X0 (x) sigma^beta h Y0 = sigma^{alpha+beta} g (X0 (x) g^{-1} h Y0), trying both orders.
inline std::optional<std::vector<PatternTerm>> ruleForPair(const ModuleLabel& x, const ModuleLabel& y) {
  D6Element gi = d6Inverse(x.twist);
  D6Element k = gi * y.twist;
  auto r = closedRule(x.core, k, y.core);
  D6Element outer = x.twist;
  if (!r) {
    r = closedRule(y.core, d6Inverse(y.twist) * x.twist, x.core);
    outer = y.twist;
  }
  if (!r) return std::nullopt;
  transformTerms(*r, outer, x.flow + y.flow);
  return r;
}

inline GrClass collect(const std::vector<PatternTerm>& terms) {
  GrClass out;
  for (const auto& t : terms) out += t.coefficient * decomposeLabel(t.label, lvl32());
  return out;
}

class OrbitCache {
 public:
  std::set<ModuleLabel> orbit(const ModuleLabel& m) {
    {
      std::lock_guard lock(mu_);
      auto it = cache_.find(m);
      if (it != cache_.end()) return it->second;
    }
    auto o = identificationOrbit(m, lvl32());
    std::lock_guard lock(mu_);
    return cache_.emplace(m, std::move(o)).first->second;
  }

 private:
  std::mutex mu_;
  std::map<ModuleLabel, std::set<ModuleLabel>> cache_;
};

inline OrbitCache& orbitCache() {
  static OrbitCache c;
  return c;
}

}  // namespace detail

// Every closed-rule evaluation reachable through the identification orbits
// of the two factors (at most `limit`). All of them must agree.
inline std::vector<GrClass> closedRuleRoutes(const CanonicalLabel& a, const CanonicalLabel& b, std::size_t limit) {
  std::vector<GrClass> out;
  auto oa = detail::orbitCache().orbit(a);
  auto ob = detail::orbitCache().orbit(b);
  for (const auto& x : oa)
    for (const auto& y : ob) {
      if (out.size() >= limit) return out;
      if (auto r = detail::ruleForPair(x, y)) out.push_back(detail::collect(*r));
    }
  return out;
}

// Product of two irreducible canonical labels by the closed rules.
inline GrClass fuseIrreducible(const CanonicalLabel& a, const CanonicalLabel& b) {
  auto r = closedRuleRoutes(a, b, 1);
  if (r.empty()) throw InternalError("no closed fusion rule reaches " + toString(a) + " x " + toString(b));
  return r.front();
}

// Bilinear extension; reducible labels are decomposed first.
inline GrClass fuse(const GrClass& a, const GrClass& b) {
  const Level& L = detail::lvl32();
  GrClass ea, eb;
  for (const auto& [m, n] : a.terms()) ea += n * decomposeLabel(m, L);
  for (const auto& [m, n] : b.terms()) eb += n * decomposeLabel(m, L);
  GrClass out;
  for (const auto& [x, n] : ea.terms())
    for (const auto& [y, k] : eb.terms()) out += (n * k) * fuseIrreducible(x, y);
  return out;
}

inline GrClass fuse(const ModuleLabel& a, const ModuleLabel& b) {
  const Level& L = detail::lvl32();
  return fuse(decomposeLabel(a, L), decomposeLabel(b, L));
}

// Standard-by-standard product as a class (outputs at singular cosets are decomposed).
inline GrClass standardProductClass(const Coweight& xi, const Weight& mu, const Coweight& xip, const Weight& mup) {
  GrClass out;
  for (const auto& [xo, c] : standardFusionCoefficients(xi, mu, xip, mup))
    out += c.multiplicity * decomposeLabel(detail::relLabel(xo, c.coset), detail::lvl32());
  return out;
}

}  // namespace sl3mm
