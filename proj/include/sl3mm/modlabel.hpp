#pragma once

#include "sl3mm/admissible.hpp"
#include "sl3mm/rootdata.hpp"

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace sl3mm {

enum class CoreKind : std::uint8_t { HW = 0, Semi = 1, Rel = 2 };

// The untwisted, unflowed part of a label.
//   HW   : lambda is the highest weight.
//   Semi : family weight lambda in Sigma^1 and coset parameter t in [0,1);
//          the coset is [lambda + t alpha1] modulo Z alpha1.
//   Rel  : family weight lambda in R^2 and coset the canonical Q-coset representative.
struct Core {
  CoreKind kind{CoreKind::HW};
  Weight lambda;
  Rational t{0};
  Weight coset;

  auto key() const { return std::tie(kind, lambda.d1, lambda.d2, t, coset.d1, coset.d2); }
  friend bool operator==(const Core& a, const Core& b) { return a.key() == b.key(); }
  friend bool operator<(const Core& a, const Core& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (!(a.lambda == b.lambda)) return a.lambda < b.lambda;
    if (a.t != b.t) return a.t < b.t;
    return a.coset < b.coset;
  }
  // The weight mu = lambda + t alpha1 for Semi cores.
  Weight semiWeight() const { return lambda + t * weights::alpha1; }
};

// sigma^flow . twist . core
struct ModuleLabel {
  Coweight flow;
  D6Element twist;
  Core core;

  friend bool operator==(const ModuleLabel& a, const ModuleLabel& b) {
    return a.flow == b.flow && a.twist == b.twist && a.core == b.core;
  }
  // The fixed total order used to pick canonical representatives:
  // (|flow|_1, flow, twist index, core).
  friend bool operator<(const ModuleLabel& a, const ModuleLabel& b) {
    auto na = l1Norm(a.flow), nb = l1Norm(b.flow);
    if (na != nb) return na < nb;
    if (a.flow != b.flow) return a.flow < b.flow;
    if (a.twist.index() != b.twist.index()) return a.twist.index() < b.twist.index();
    return a.core < b.core;
  }
};

// Labels returned by canonicalize; a distinct name documents intent only.
using CanonicalLabel = ModuleLabel;

// ---------------------------------------------------------------------------
// Constructors that enforce the irreducibility invariants.

inline Rational semiParameterOf(const Weight& lambda, const Weight& mu) {
  Weight delta = mu - lambda;
  Rational t = -delta.d2;
  if (delta.d1 != 2 * t) throw DomainError("weight " + toString(mu) + " is not on the line through " + toString(lambda) + " along alpha1");
  return fracPart(t);
}

// The two reducible parameters of a semirelaxed family: [lambda] and [w1 . lambda].
inline bool semiParameterDegenerate(const Weight& lambda, const Rational& t) {
  return fracPart(t) == 0 || fracPart(t) == fracPart(-lambda.d1);
}

inline ModuleLabel makeHW(const Weight& lambda, const Level& lvl) {
  requireAdmissible(lambda, lvl);
  return {{}, d6::e, Core{CoreKind::HW, lambda, 0, {}}};
}

inline ModuleLabel makeSemi(const Weight& lambda, const Rational& t, const Level& lvl) {
  auto a = requireAdmissible(lambda, lvl);
  if (!inSigma1(a)) throw DomainError("semirelaxed family weight " + toString(lambda) + " is not in Sigma^1");
  if (semiParameterDegenerate(lambda, t))
    throw DegenerateParameterError("degenerate parameter: S" + toString(lambda) + "[" + toString(fracPart(t)) +
                                   "] is reducible; use degen to decompose it");
  return {{}, d6::e, Core{CoreKind::Semi, lambda, fracPart(t), {}}};
}

inline ModuleLabel makeSemiAt(const Weight& lambda, const Weight& mu, const Level& lvl) {
  return makeSemi(lambda, semiParameterOf(lambda, mu), lvl);
}

inline bool relCosetDegenerate(const Weight& lambda, const Weight& mu, const Level& lvl) {
  return !curvesContaining(singularLocus(requireAdmissible(lambda, lvl)), mu).empty();
}

inline ModuleLabel makeRel(const Weight& lambda, const Weight& mu, const Level& lvl) {
  auto a = requireAdmissible(lambda, lvl);
  if (!inR2(a)) throw DomainError("relaxed family weight " + toString(lambda) + " is not in R^2");
  if (!curvesContaining(singularLocus(a), mu).empty())
    throw DegenerateParameterError("degenerate parameter: R" + toString(lambda) + "[" + toString(cosetRepresentative(mu)) +
                                   "] lies on the singular locus; use degen to decompose it");
  return {{}, d6::e, Core{CoreKind::Rel, lambda, 0, cosetRepresentative(mu)}};
}

// ---------------------------------------------------------------------------
// Group actions on labels.

inline ModuleLabel twist(const D6Element& g, const ModuleLabel& m) {
  return {d6Apply(g, m.flow), g * m.twist, m.core};
}

inline ModuleLabel flowApply(const Coweight& xi, const ModuleLabel& m) { return {m.flow + xi, m.twist, m.core}; }

// Weight and conformal weight after spectral flow by xi.
inline std::pair<Weight, Rational> flowedWeightShift(const Weight& nu, const Rational& delta, const Coweight& xi,
                                                     const Level& lvl) {
  Rational k = lvl.k();
  return {nu + k * dualWeight(xi), delta + pairing(nu, xi) + killingCoweight(xi, xi) * k / 2};
}

// ---------------------------------------------------------------------------
// Positive-energy flow rules: sigma^eta X = h Y for an untwisted core X.

struct FlowRule {
  Coweight eta;
  D6Element h;
  Core target;
};

namespace detail {

inline Weight affineRotateForward(const Weight& mu, const Rational& k) {
  // Dynkin labels of the affine triple (mu2, mu0, mu1): finite part (mu0, mu1).
  return {k - mu.d1 - mu.d2, mu.d1};
}
inline Weight affineRotateBackward(const Weight& mu, const Rational& k) {
  // Dynkin labels of the affine triple (mu1, mu2, mu0): finite part (mu2, mu0).
  return {mu.d2, k - mu.d1 - mu.d2};
}

inline Core hwCore(const Weight& w) { return Core{CoreKind::HW, w, 0, {}}; }

}  // namespace detail

inline std::vector<FlowRule> flowRules(const Core& x, const Level& lvl) {
  std::vector<FlowRule> out;
  Rational k = lvl.k();
  if (x.kind == CoreKind::HW) {
    const Weight& mu = x.lambda;
    Weight fwd = detail::affineRotateForward(mu, k);
    Weight bwd = detail::affineRotateBackward(mu, k);
    bool n1 = isNatural(mu.d1), n2 = isNatural(mu.d2);
    if (n1 && n2) {
      out.push_back({coweights::omega1, d6::e, detail::hwCore(fwd)});
      out.push_back({coweights::omega2, d6::e, detail::hwCore(bwd)});
    }
    if (n1) out.push_back({coweights::omega1 - coweights::omega2, d6::w2, detail::hwCore(bwd)});
    if (n2) out.push_back({coweights::omega2 - coweights::omega1, d6::w1, detail::hwCore(fwd)});
    out.push_back({-coweights::omega1, d6::w1w2, detail::hwCore(bwd)});
    out.push_back({-coweights::omega2, d6::w2w1, detail::hwCore(fwd)});
  } else if (x.kind == CoreKind::Semi) {
    const Weight& l = x.lambda;
    Weight lp{l.d1, k - l.d1 - l.d2};
    Rational tp = fracPart(-l.d1 - x.t);
    out.push_back({-coweights::omega2, d6::c, Core{CoreKind::Semi, lp, tp, {}}});
  }
  return out;
}

// Rules Y <- X, i.e. pairs (X, rule) with rule.target == y, for the inverse direction.
inline std::vector<std::pair<Core, FlowRule>> inverseFlowRules(const Core& y, const Level& lvl) {
  std::vector<std::pair<Core, FlowRule>> out;
  Rational k = lvl.k();
  if (y.kind == CoreKind::HW) {
    // Candidate sources are the two affine rotations of y's weight; admissible ones only.
    Weight cands[2] = {detail::affineRotateForward(y.lambda, k), detail::affineRotateBackward(y.lambda, k)};
    std::set<Weight> seen;
    for (const auto& c : cands) {
      if (!seen.insert(c).second) continue;
      if (!findAdmissible(c, lvl)) continue;
      Core x = detail::hwCore(c);
      for (const auto& r : flowRules(x, lvl))
        if (r.target == y) out.push_back({x, r});
    }
  } else if (y.kind == CoreKind::Semi) {
    // The semirelaxed rule is its own inverse on the family data.
    const Weight& lp = y.lambda;
    Weight l{lp.d1, k - lp.d1 - lp.d2};
    Rational t = fracPart(-lp.d1 - y.t);
    Core x{CoreKind::Semi, l, t, {}};
    for (const auto& r : flowRules(x, lvl))
      if (r.target == y) out.push_back({x, r});
  }
  return out;
}

// The positive-energy image of sigma^xi m for m with zero flow and trivial twist.
inline std::optional<ModuleLabel> positiveEnergyFlowImage(const ModuleLabel& m, const Coweight& xi, const Level& lvl) {
  if (!(m.flow == Coweight{}) || !(m.twist == d6::e))
    throw std::invalid_argument("positiveEnergyFlowImage expects an unflowed, untwisted label");
  if (xi == Coweight{}) return m;
  for (const auto& r : flowRules(m.core, lvl))
    if (r.eta == xi) return ModuleLabel{{}, r.h, r.target};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Canonicalization by breadth-first closure of the identification rules.

inline constexpr std::size_t kOrbitCap = 10000;

namespace detail {

inline Coweight reduceFlowForIntegrable(const Coweight& x) {
  // At v = 1 flows by the coroot lattice act trivially; Q-check has the same
  // Hermite form as Q in these coordinates.
  std::int64_t m = (x.c2 - x.c1) % 3;
  if (m < 0) m += 3;
  return {0, m};
}

inline ModuleLabel normalizeFlow(ModuleLabel m, const Level& lvl) {
  if (lvl.v == 1) m.flow = reduceFlowForIntegrable(m.flow);
  return m;
}

inline std::vector<ModuleLabel> neighbours(const ModuleLabel& m, const Level& lvl) {
  std::vector<ModuleLabel> out;
  const Core& x = m.core;
  auto push = [&](Coweight f, D6Element g, Core c) { out.push_back(normalizeFlow({f, g, c}, lvl)); };
  switch (x.kind) {
    case CoreKind::HW:
      if (isNatural(x.lambda.d1)) push(m.flow, m.twist * d6::w1, x);
      if (isNatural(x.lambda.d2)) push(m.flow, m.twist * d6::w2, x);
      push(m.flow, m.twist * d6::d, hwCore(d6Apply(d6::d, x.lambda)));
      break;
    case CoreKind::Semi: {
      Weight w1mu = d6Apply(d6::w1, x.semiWeight());
      push(m.flow, m.twist * d6::w1, Core{CoreKind::Semi, x.lambda, semiParameterOf(x.lambda, w1mu), {}});
      break;
    }
    case CoreKind::Rel: {
      for (auto w : {d6::w1, d6::w2})
        push(m.flow, m.twist * w, Core{CoreKind::Rel, x.lambda, 0, cosetRepresentative(d6Apply(w, x.coset))});
      Weight lp = dotAction(d6::c * d6::w2, x.lambda);
      push(m.flow, m.twist * d6::d, Core{CoreKind::Rel, lp, 0, cosetRepresentative(d6Apply(d6::d, x.coset))});
      break;
    }
  }
  for (const auto& r : flowRules(x, lvl)) push(m.flow - d6Apply(m.twist, r.eta), m.twist * r.h, r.target);
  for (const auto& [src, r] : inverseFlowRules(x, lvl)) {
    D6Element hinv = d6Inverse(r.h);
    push(m.flow + d6Apply(m.twist * hinv, r.eta), m.twist * hinv, src);
  }
  return out;
}

}  // namespace detail

// All labels identified with m by the rewrite rules (the identification orbit).
inline std::set<ModuleLabel> identificationOrbit(const ModuleLabel& m, const Level& lvl) {
  std::set<ModuleLabel> seen;
  std::deque<ModuleLabel> queue;
  ModuleLabel start = detail::normalizeFlow(m, lvl);
  seen.insert(start);
  queue.push_back(start);
  while (!queue.empty()) {
    ModuleLabel cur = queue.front();
    queue.pop_front();
    for (auto& n : detail::neighbours(cur, lvl)) {
      if (seen.insert(n).second) {
        if (seen.size() > kOrbitCap) throw InternalError("identification orbit exceeded the cap of 10^4 labels");
        queue.push_back(n);
      }
    }
  }
  return seen;
}

inline CanonicalLabel canonicalize(const ModuleLabel& m, const Level& lvl) {
  return *identificationOrbit(m, lvl).begin();
}

inline bool isomorphic(const ModuleLabel& a, const ModuleLabel& b, const Level& lvl) {
  return canonicalize(a, lvl) == canonicalize(b, lvl);
}

// ---------------------------------------------------------------------------
// Positive-energy spectral-flow orbit of a module (flows keeping it positive-energy).

struct FlowOrbit {
  std::map<Coweight, CanonicalLabel> nodes;  // flow eta -> canonical label of sigma^eta m
  std::vector<std::pair<Coweight, Coweight>> edges;
};

inline FlowOrbit positiveEnergyOrbit(const ModuleLabel& m, const Level& lvl) {
  FlowOrbit orbit;
  ModuleLabel c = canonicalize(m, lvl);
  if (!(c.flow == Coweight{})) throw DomainError("label is not positive-energy");
  std::deque<std::pair<Coweight, ModuleLabel>> queue;
  orbit.nodes[{}] = c;
  queue.push_back({{}, c});
  while (!queue.empty()) {
    auto [eta, lab] = queue.front();
    queue.pop_front();
    // lab = g Y; sigma^eps g Y = g sigma^{g^{-1} eps} Y.
    for (const auto& r : flowRules(lab.core, lvl)) {
      Coweight eps = d6Apply(lab.twist, r.eta);
      Coweight target = eta + eps;
      if (lvl.v == 1) target = detail::reduceFlowForIntegrable(target);
      ModuleLabel next{{}, lab.twist * r.h, r.target};
      if (target == eta) continue;
      if (eta < target) orbit.edges.push_back({eta, target});
      else orbit.edges.push_back({target, eta});
      if (!orbit.nodes.count(target)) {
        orbit.nodes[target] = canonicalize(next, lvl);
        queue.push_back({target, next});
        if (orbit.nodes.size() > kOrbitCap) throw InternalError("flow orbit exceeded the cap");
      }
    }
  }
  std::sort(orbit.edges.begin(), orbit.edges.end());
  orbit.edges.erase(std::unique(orbit.edges.begin(), orbit.edges.end()), orbit.edges.end());
  return orbit;
}

// ---------------------------------------------------------------------------
// Label grammar:
//   [sf(c1,c2)*] [D6 word] core
//   core := H(d1,d2) | S[t] | S(d1,d2)[t] | R[a,b] | R(d1,d2)[a,b]
// The short forms S[t] and R[a,b] refer to the family weight -3/2 omega1 of M(3,2).

inline const Weight& m32FamilyWeight() {
  static const Weight w{Rational(-3, 2), 0};
  return w;
}

inline std::string coreToString(const Core& c) {
  switch (c.kind) {
    case CoreKind::HW: return "H(" + toString(c.lambda.d1) + "," + toString(c.lambda.d2) + ")";
    case CoreKind::Semi:
      return (c.lambda == m32FamilyWeight() ? std::string("S") : "S" + toString(c.lambda)) + "[" + toString(c.t) + "]";
    case CoreKind::Rel:
      return (c.lambda == m32FamilyWeight() ? std::string("R") : "R" + toString(c.lambda)) + "[" +
             toString(c.coset.d1) + "," + toString(c.coset.d2) + "]";
  }
  return "?";
}

inline std::string toString(const ModuleLabel& m) {
  std::string s;
  if (!(m.flow == Coweight{})) s += "sf" + toString(m.flow) + "*";
  if (!(m.twist == d6::e)) s += toString(m.twist) + " ";
  return s + coreToString(m.core);
}

namespace detail {

class LabelParser {
 public:
  explicit LabelParser(std::string_view s) : s_(s) {}

  ModuleLabel parse() {
    ModuleLabel m;
    skipWs();
    if (s_.substr(pos_, 3) == "sf(") {
      pos_ += 3;
      auto parts = splitUntil(')');
      if (parts.size() != 2) fail("flow needs two coordinates");
      Rational a = parseRat(parts[0]), b = parseRat(parts[1]);
      if (!isInteger(a) || !isInteger(b)) fail("flow coordinates must be integers");
      m.flow = {a.numerator(), b.numerator()};
      skipWs();
      expect('*');
    }
    D6Element g = d6::e;
    for (;;) {
      skipWs();
      if (match("w1")) g = g * d6::w1;
      else if (match("w2")) g = g * d6::w2;
      else if (match("w3")) g = g * d6::w3;
      else if (match("c")) g = g * d6::c;
      else if (match("d")) g = g * d6::d;
      else if (match("e")) continue;
      else break;
    }
    m.twist = g;
    skipWs();
    if (pos_ >= s_.size()) fail("missing module core");
    char kind = s_[pos_++];
    Weight lambda = m32FamilyWeight();
    switch (kind) {
      case 'H': {
        expect('(');
        auto p = splitUntil(')');
        if (p.size() != 2) fail("H needs two Dynkin labels");
        m.core = Core{CoreKind::HW, {parseRat(p[0]), parseRat(p[1])}, 0, {}};
        break;
      }
      case 'S':
      case 'R': {
        if (peekIs('(')) {
          ++pos_;
          auto p = splitUntil(')');
          if (p.size() != 2) fail("family weight needs two Dynkin labels");
          lambda = {parseRat(p[0]), parseRat(p[1])};
        }
        expect('[');
        auto p = splitUntil(']');
        if (kind == 'S') {
          if (p.size() != 1) fail("S needs one coset parameter");
          m.core = Core{CoreKind::Semi, lambda, fracPart(parseRat(p[0])), {}};
        } else {
          if (p.size() != 2) fail("R needs two coset coordinates");
          m.core = Core{CoreKind::Rel, lambda, 0, cosetRepresentative({parseRat(p[0]), parseRat(p[1])})};
        }
        break;
      }
      default: fail(std::string("unknown module core '") + kind + "'");
    }
    skipWs();
    if (pos_ != s_.size()) fail("trailing characters");
    return m;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("cannot parse label '" + std::string(s_) + "': " + why);
  }
  void skipWs() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '.')) ++pos_;
  }
  bool peekIs(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  bool match(std::string_view tok) {
    if (s_.substr(pos_, tok.size()) != tok) return false;
    std::size_t end = pos_ + tok.size();
    // Tokens must be followed by a separator or a core letter boundary.
    if (end < s_.size()) {
      char n = s_[end];
      if (!(n == ' ' || n == '\t' || n == '.' || n == 'H' || n == 'S' || n == 'R' || n == 'w' || n == 'c' || n == 'd'))
        return false;
    }
    pos_ = end;
    return true;
  }
  void expect(char c) {
    if (!peekIs(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::vector<std::string_view> splitUntil(char close) {
    std::size_t end = s_.find(close, pos_);
    if (end == std::string_view::npos) fail(std::string("missing '") + close + "'");
    std::vector<std::string_view> parts;
    std::string_view body = s_.substr(pos_, end - pos_);
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = body.find(',', start);
      parts.push_back(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    pos_ = end + 1;
    return parts;
  }
  Rational parseRat(std::string_view t) {
    try {
      return parseRational(t);
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }

  std::string_view s_;
  std::size_t pos_{0};
};

}  // namespace detail

// Parses the grammar only; no admissibility or degeneracy checks.
inline ModuleLabel parseLabel(std::string_view s) { return detail::LabelParser(s).parse(); }

// Parses and checks the core invariants at the given level.
inline ModuleLabel parseLabel(std::string_view s, const Level& lvl) {
  ModuleLabel m = parseLabel(s);
  ModuleLabel core;
  switch (m.core.kind) {
    case CoreKind::HW: core = makeHW(m.core.lambda, lvl); break;
    case CoreKind::Semi: core = makeSemi(m.core.lambda, m.core.t, lvl); break;
    case CoreKind::Rel: core = makeRel(m.core.lambda, m.core.coset, lvl); break;
  }
  return {m.flow, m.twist, core.core};
}

}  // namespace sl3mm
