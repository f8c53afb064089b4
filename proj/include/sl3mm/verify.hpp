#pragma once

// Self-checks behind `sl3mm verify`. Each suite returns named pass/fail
// results and never throws; an exception inside a check becomes a failure.

#include "sl3mm/fusion32.hpp"

#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace sl3mm {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed{false};
  std::string detail;
};

inline const std::vector<std::string>& verifySuiteNames() {
  static const std::vector<std::string> names{"rootdata", "admissible", "labels",  "degen",
                                              "modular",  "verlinde",   "fusion"};
  return names;
}

namespace detail {

class Checker {
 public:
  explicit Checker(std::string suite) : suite_(std::move(suite)) {}

  void run(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r{suite_, name, false, {}};
    try {
      r.detail = body();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    results_.push_back(std::move(r));
  }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::string suite_;
  std::vector<CheckResult> results_;
};

inline std::vector<Level> admissibleGrid(int maxU, int maxV) {
  std::vector<Level> out;
  for (int u = 3; u <= maxU; ++u)
    for (int v = 1; v <= maxV; ++v)
      if (std::gcd(u, v) == 1) out.push_back({u, v});
  return out;
}

inline Weight randomRationalCoset(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(0, 59), den(1, 12);
  return cosetRepresentative({Rational(num(rng), den(rng)), Rational(num(rng), den(rng))});
}

inline CanonicalLabel randomLabel32(std::mt19937& rng) {
  const Level& L = level32();
  std::uniform_int_distribution<int> kind(0, 4), g(0, 11), f(-1, 1), den(3, 16);
  ModuleLabel core;
  switch (kind(rng)) {
    case 0: core = makeHW(weights::zero, L); break;
    case 1: core = makeHW({Rational(-1, 2), Rational(-1, 2)}, L); break;
    case 2: core = makeHW({0, Rational(-3, 2)}, L); break;
    case 3:
      for (;;) {
        int d = den(rng);
        Rational t(std::uniform_int_distribution<int>(1, d - 1)(rng), d);
        if (semiParameterDegenerate(m32FamilyWeight(), t)) continue;
        core = makeSemi(m32FamilyWeight(), t, L);
        break;
      }
      break;
    default:
      for (;;) {
        Weight w = randomRationalCoset(rng);
        if (relCosetDegenerate(m32FamilyWeight(), w, L)) continue;
        core = makeRel(m32FamilyWeight(), w, L);
        break;
      }
  }
  return canonicalize(flowApply({f(rng), f(rng)}, twist(D6Element::fromIndex(g(rng)), core)), L);
}

// ---------------------------------------------------------------------------

inline std::vector<CheckResult> verifyRootdata() {
  Checker c("rootdata");
  c.run("D6 is a group of order 12 acting by pairing-preserving maps", []() -> std::string {
    for (int i = 0; i < 12; ++i) {
      D6Element g = D6Element::fromIndex(i);
      if (!(d6Inverse(g) * g == d6::e)) return "inverse fails for " + toString(g);
      for (int j = 0; j < 12; ++j) {
        D6Element h = D6Element::fromIndex(j);
        Weight w{Rational(1, 3), Rational(-2, 5)};
        Coweight x{2, -1};
        if (d6Apply(g * h, w) != d6Apply(g, d6Apply(h, w))) return "action is not a homomorphism";
        if (pairing(d6Apply(g, w), d6Apply(g, x)) != pairing(w, x)) return "pairing not invariant under " + toString(g);
      }
    }
    return std::string();
  });
  c.run("central charge and conformal weights at (3,2)", []() -> std::string {
    Level L{3, 2};
    if (centralCharge(L) != Rational(-8)) return std::string("c != -8");
    for (const Weight& w : {Weight{Rational(-3, 2), 0}, Weight{0, Rational(-3, 2)}, Weight{Rational(-1, 2), Rational(-1, 2)}})
      if (conformalWeight(w, L) != Rational(-1, 2)) return "Delta(" + toString(w) + ") != -1/2";
    return std::string();
  });
  c.run("coset representatives are canonical", []() -> std::string {
    std::mt19937 rng(1);
    for (int i = 0; i < 200; ++i) {
      Weight w = randomRationalCoset(rng);
      if (cosetRepresentative(w + weights::alpha1 - Rational(3) * weights::alpha2) != w) return "not invariant under Q";
    }
    return std::string();
  });
  return c.take();
}

inline std::vector<CheckResult> verifyAdmissible() {
  Checker c("admissible");
  c.run("enumerated counts match counts() for u <= 6, v <= 5", []() -> std::string {
    for (const auto& l : admissibleGrid(6, 5)) {
      if (enumeratedCounts(l) != counts(l)) return "mismatch at (" + std::to_string(l.u) + "," + std::to_string(l.v) + ")";
    }
    return std::string();
  });
  c.run("spectrum of M(3,2)", []() -> std::string {
    auto adm = enumerateAdmissible({3, 2});
    if (adm.size() != 4) return std::string("expected 4 admissible weights");
    auto k = counts({3, 2});
    if (k != AdmCounts{4, 1, 1, 1}) return std::string("counts are not (4,1,1,1)");
    return std::string();
  });
  return c.take();
}

inline std::vector<CheckResult> verifyLabels() {
  Checker c("labels");
  c.run("parse(print(label)) round-trips on canonical labels", []() -> std::string {
    std::mt19937 rng(2);
    for (int i = 0; i < 60; ++i) {
      CanonicalLabel m = randomLabel32(rng);
      if (!(parseLabel(toString(m), level32()) == m)) return "round trip fails for " + toString(m);
    }
    return std::string();
  });
  c.run("canonicalize is idempotent and constant on orbits", []() -> std::string {
    std::mt19937 rng(3);
    for (int i = 0; i < 20; ++i) {
      CanonicalLabel m = randomLabel32(rng);
      if (!(canonicalize(m, level32()) == m)) return "not idempotent on " + toString(m);
      for (const auto& y : identificationOrbit(m, level32()))
        if (!(canonicalize(y, level32()) == m)) return "orbit member " + toString(y) + " canonicalizes elsewhere";
    }
    return std::string();
  });
  c.run("vacuum flow orbit at (3,2) has seven nodes", []() -> std::string {
    auto o = positiveEnergyOrbit(makeHW(weights::zero, level32()), level32());
    return o.nodes.size() == 7 ? std::string() : "orbit has " + std::to_string(o.nodes.size()) + " nodes";
  });
  return c.take();
}

inline std::vector<CheckResult> verifyDegen() {
  Checker c("degen");
  c.run("double points: both curve routes agree", []() -> std::string {
    for (const Level& l : {Level{3, 2}, Level{4, 3}})
      for (const auto& a : enumerateAdmissible(l)) {
        if (!inR2(a)) continue;
        auto locus = singularLocus(a);
        for (const Weight& mu : {a.weight, dotAction(d6::w1, a.weight), dotAction(d6::w2w1, a.weight)}) {
          auto curves = curvesContaining(locus, mu);
          if (curves.size() != 2) return "coset " + toString(mu) + " is not a double point";
          auto x = decomposeRelVia(a.weight, mu, curves[0], l);
          auto y = decomposeRelVia(a.weight, mu, curves[1], l);
          if (!(x == y) || x.totalMultiplicity() != 4) return "routes differ at " + toString(mu);
        }
      }
    return std::string();
  });
  c.run("decompositions preserve the resolution image at (3,2)", []() -> std::string {
    const Level& L = level32();
    auto locus = singularLocus(requireAdmissible(m32FamilyWeight(), L));
    for (int curve = 0; curve < 3; ++curve)
      for (int j = 0; j < 6; ++j) {
        const auto& cv = locus.curves[curve];
        Weight nu = cv.base + Rational(j, 6) * weights::alpha(cv.direction);
        if (psi(decomposeRelVia(m32FamilyWeight(), nu, curve, L)) != relaxedKernel().shifted({}, nu))
          return "image mismatch at " + toString(nu);
      }
    return std::string();
  });
  return c.take();
}

inline std::vector<CheckResult> verifyModular() {
  Checker c("modular");
  c.run("unitarity and S^2 on flows in [-2,2]^2", []() -> std::string {
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b)
        for (int p = -2; p <= 2; ++p)
          for (int q = -2; q <= 2; ++q) {
            Coweight x{a, b}, y{p, q};
            DiracTerm u = unitaritySum(x, y), s = sSquaredSum(x, y);
            bool uOk = x == y ? u.coefficient == PhaseSum(1) &&
                                    u.argument == (SymWeight::variable(0) - SymWeight::variable(1)).deltaNormal()
                              : u.isZero();
            bool sOk = x == -y ? s.coefficient == PhaseSum(1) &&
                                     s.argument == (SymWeight::variable(0) + SymWeight::variable(1)).deltaNormal()
                               : s.isZero();
            if (!uOk || !sOk) return "fails at " + toString(x) + ", " + toString(y);
          }
    return std::string();
  });
  c.run("1/eta^4 through order 50", []() -> std::string {
    auto s = etaInvFourth(50);
    std::vector<mpz_class> a(51, 0);
    a[0] = 1;
    for (int colour = 0; colour < 4; ++colour)
      for (std::size_t part = 1; part <= 50; ++part)
        for (std::size_t n = part; n <= 50; ++n) a[n] += a[n - part];
    return s.coefficients == a ? std::string() : std::string("coefficient mismatch");
  });
  c.run("S^4 = 1 and (ST)^3 = S^2", []() -> std::string {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-0.8, 0.8), im(0.4, 1.6);
    for (int i = 0; i < 20; ++i) {
      CharacterPoint p{{u(rng), u(rng)}, {Complex(u(rng), u(rng)), Complex(u(rng), u(rng))}, {u(rng), im(rng)}};
      auto S = [](const CharacterPoint& x) { return modularAction(ModularOp::S, x); };
      auto T = [](const CharacterPoint& x) { return modularAction(ModularOp::T, x); };
      auto d = [](const CharacterPoint& a, const CharacterPoint& b) {
        return std::abs(a.theta - b.theta) + std::abs(a.zeta[0] - b.zeta[0]) + std::abs(a.zeta[1] - b.zeta[1]) +
               std::abs(a.tau - b.tau);
      };
      if (d(S(S(S(S(p)))), p) > 1e-10) return std::string("S^4 != 1");
      if (d(S(T(S(T(S(T(p)))))), S(S(p))) > 1e-10) return std::string("(ST)^3 != S^2");
    }
    return std::string();
  });
  c.run("scope guard away from (3,2)", []() -> std::string {
    try {
      requireModularLevel({4, 3});
    } catch (const LinearDependenceError&) {
      return std::string();
    }
    return std::string("no linear-dependence error at (4,3)");
  });
  return c.take();
}

inline std::vector<CheckResult> verifyVerlinde() {
  Checker c("verlinde");
  c.run("standard Verlinde formula reproduces the relaxed rule", []() -> std::string {
    std::mt19937 rng(5);
    for (int i = 0; i < 50; ++i) {
      Weight m = randomRationalCoset(rng), n = randomRationalCoset(rng);
      if (standardFusionCoefficients(m, n) != relaxedProductRule(m, n)) return "mismatch at " + toString(m) + ", " + toString(n);
    }
    return std::string();
  });
  c.run("flow and D6 equivariance", []() -> std::string {
    std::mt19937 rng(6);
    for (int i = 0; i < 10; ++i) {
      Weight m = randomRationalCoset(rng), n = randomRationalCoset(rng);
      auto t = standardFusionCoefficients(m, n);
      for (int k = 0; k < 12; ++k) {
        D6Element g = D6Element::fromIndex(k);
        if (standardFusionCoefficients(d6Apply(g, m), d6Apply(g, n)) != d6Equivariance(t, g)) return "D6 fails";
      }
      if (standardFusionCoefficients({1, 0}, m, {0, -2}, n) != flowEquivariance(t, {1, 0}, {0, -2})) return "flow fails";
    }
    return std::string();
  });
  return c.take();
}

inline std::vector<CheckResult> verifyFusion() {
  Checker c("fusion");
  c.run("closed rules agree with the resolution route", []() -> std::string {
    std::mt19937 rng(7);
    for (int i = 0; i < 40; ++i) {
      CanonicalLabel a = randomLabel32(rng), b = randomLabel32(rng);
      if (fuseIrreducible(a, b) != fuseByResolution(GrClass(a), GrClass(b)))
        return "disagreement on " + toString(a) + " x " + toString(b);
    }
    return std::string();
  });
  c.run("associativity, commutativity and the dimension homomorphism", []() -> std::string {
    std::mt19937 rng(8);
    for (int i = 0; i < 15; ++i) {
      GrClass a(randomLabel32(rng)), b(randomLabel32(rng)), x(randomLabel32(rng));
      GrClass ab = fuse(a, b);
      if (ab != fuse(b, a)) return std::string("not commutative");
      if (fuse(ab, x) != fuse(a, fuse(b, x))) return std::string("not associative");
      if (dimensionRep(ab) != dimensionRep(a) * dimensionRep(b)) return std::string("dimension not multiplicative");
    }
    return std::string();
  });
  c.run("vacuum multiplicities of conjugate products", []() -> std::string {
    const Level& L = level32();
    CanonicalLabel v = canonicalize(makeHW(weights::zero, L), L);
    auto s = makeSemi(m32FamilyWeight(), Rational(1, 5), L);
    auto r = makeRel(m32FamilyWeight(), {Rational(1, 7), Rational(2, 3)}, L);
    if (fuse(s, twist(d6::c, s)).multiplicity(v) != 2) return std::string("S x cS");
    if (fuse(r, twist(d6::c, r)).multiplicity(v) != 6) return std::string("R x cR");
    return std::string();
  });
  return c.take();
}

}  // namespace detail

inline std::vector<CheckResult> runVerifySuite(const std::string& name) {
  if (name == "rootdata") return detail::verifyRootdata();
  if (name == "admissible") return detail::verifyAdmissible();
  if (name == "labels") return detail::verifyLabels();
  if (name == "degen") return detail::verifyDegen();
  if (name == "modular") return detail::verifyModular();
  if (name == "verlinde") return detail::verifyVerlinde();
  if (name == "fusion") return detail::verifyFusion();
  if (name == "all") {
    std::vector<CheckResult> all;
    for (const auto& n : verifySuiteNames()) {
      auto r = runVerifySuite(n);
      all.insert(all.end(), r.begin(), r.end());
    }
    return all;
  }
  throw std::invalid_argument("unknown verify suite '" + name + "'");
}

}  // namespace sl3mm
