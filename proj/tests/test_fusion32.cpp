#include "sl3mm/fusion32.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sl3mm;

namespace {

const Level kL = level32();
const Weight kHalfRho{Rational(-1, 2), Rational(-1, 2)};

CanonicalLabel vac() { return canonicalize(makeHW(weights::zero, kL), kL); }
ModuleLabel halfRho() { return makeHW(kHalfRho, kL); }

Rational randomSemiParameter(std::mt19937& rng) {
  std::uniform_int_distribution<int> den(3, 24);
  for (;;) {
    int d = den(rng);
    Rational t(std::uniform_int_distribution<int>(1, d - 1)(rng), d);
    if (!semiParameterDegenerate(m32FamilyWeight(), t)) return t;
  }
}

Weight randomTypicalCoset(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(0, 59), den(1, 12);
  for (;;) {
    Weight w = cosetRepresentative({Rational(num(rng), den(rng)), Rational(num(rng), den(rng))});
    if (!relCosetDegenerate(m32FamilyWeight(), w, kL)) return w;
  }
}

ModuleLabel semi(const Rational& t) { return makeSemi(m32FamilyWeight(), t, kL); }
ModuleLabel rel(const Weight& w) { return makeRel(m32FamilyWeight(), w, kL); }

// Random irreducible label across all core types, with a random twist and a small flow.
CanonicalLabel randomLabel(std::mt19937& rng) {
  std::uniform_int_distribution<int> kind(0, 5), g(0, 11), f(-1, 1);
  ModuleLabel core;
  switch (kind(rng)) {
    case 0: core = makeHW(weights::zero, kL); break;
    case 1: core = halfRho(); break;
    case 2: core = makeHW({Rational(-3, 2), 0}, kL); break;
    case 3:
    case 4: core = semi(randomSemiParameter(rng)); break;
    default: core = rel(randomTypicalCoset(rng)); break;
  }
  return canonicalize(flowApply({f(rng), f(rng)}, twist(D6Element::fromIndex(g(rng)), core)), kL);
}

GrClass cls(const ModuleLabel& m) { return GrClass(canonicalize(m, kL)); }

GrClass fuseL(const ModuleLabel& a, const ModuleLabel& b) { return fuse(a, b); }

PsiPoly x(const Coweight& f, const Weight& w) { return PsiPoly::monomial(f, w); }

// Independent closed forms: K = 2 + sum b^{+-1}, psi(S[mu]) = (b1 + 1 + b2 + b3) x(0,mu).
PsiPoly b(int i) {
  switch (i) {
    case 1: return x(coweights::omega1, Rational(3, 2) * weights::omega1);
    case 2: return x(coweights::omega2, Rational(3, 2) * weights::omega2);
    default: return x(coweights::omega3, Rational(3, 2) * (weights::omega2 - weights::omega1));
  }
}
PsiPoly bInv(int i) {
  PsiPoly p = b(i);
  GroupElement g = p.terms().begin()->first;
  return x(-g.flow, -g.coset);
}

}  // namespace

// ---------------------------------------------------------------------------
// Expansions and the psi images

TEST(GrExpand, ShapesOfTheExpansions) {
  auto r = grExpand(rel({Rational(1, 4), 0}));
  EXPECT_EQ(r.finite.size(), 1u);
  EXPECT_FALSE(r.tail);

  Weight mu = m32FamilyWeight() + Rational(1, 3) * weights::alpha1;
  auto s = grExpand(semi(Rational(1, 3)));
  ASSERT_TRUE(s.tail);
  EXPECT_EQ(s.tail->direction, -coweights::omega2);
  ASSERT_EQ(s.tail->even.size(), 1u);
  ASSERT_EQ(s.tail->odd.size(), 1u);
  EXPECT_EQ(s.tail->even[0].label.core.coset, cosetRepresentative(mu));
  EXPECT_EQ(s.tail->odd[0].label.core.coset, cosetRepresentative(mu - Rational(1, 2) * weights::alpha1));
  EXPECT_EQ(s.tail->odd[0].coefficient, -1);

  auto l = grExpand(halfRho());
  ASSERT_EQ(l.finite.size(), 1u);
  EXPECT_EQ(l.finite[0].label.core.kind, CoreKind::Semi);
  EXPECT_EQ(l.finite[0].label.core.semiWeight(), m32FamilyWeight() + Rational(1, 2) * weights::alpha1);
  ASSERT_TRUE(l.tail);
  // minus the sigma^{w3}-flowed vacuum tail
  auto v = grExpand(makeHW(weights::zero, kL));
  ASSERT_TRUE(v.tail);
  EXPECT_EQ(l.tail->direction, v.tail->direction);
  ASSERT_EQ(l.tail->even.size(), v.tail->even.size());
  for (std::size_t i = 0; i < v.tail->even.size(); ++i) {
    EXPECT_EQ(l.tail->even[i].coefficient, -v.tail->even[i].coefficient);
    EXPECT_EQ(l.tail->even[i].label, flowApply(coweights::omega3, v.tail->even[i].label));
  }
}

TEST(Psi, ClosedFormsOfTheIrreducibles) {
  PsiPoly one = PsiPoly::one();
  PsiPoly k = 2 * one;
  for (int i = 1; i <= 3; ++i) k += b(i) + bInv(i);
  EXPECT_EQ(relaxedKernel(), k);
  EXPECT_EQ(psi(makeHW(weights::zero, kL)), one);
  EXPECT_EQ(psi(makeHW({Rational(-3, 2), 0}, kL)), x(coweights::omega1, {}));
  EXPECT_EQ(psi(makeHW({0, Rational(-3, 2)}, kL)), x(coweights::omega2, {}));
  EXPECT_EQ(psi(halfRho()), (b(1) + one + b(2)) * x({}, kHalfRho));
  std::mt19937 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    Rational t = randomSemiParameter(rng);
    Weight mu = m32FamilyWeight() + t * weights::alpha1;
    EXPECT_EQ(psi(semi(t)), (b(1) + one + b(2) + b(3)) * x({}, mu));
    Weight nu = randomTypicalCoset(rng);
    EXPECT_EQ(psi(rel(nu)), k * x({}, nu));
  }
}

TEST(Psi, KernelFactorisesThroughTheSemirelaxedImage) {
  // K = b1 (1 + b1^{-1}) (1 + b2^{-1}) (1 + b3)
  PsiPoly one = PsiPoly::one();
  EXPECT_EQ(relaxedKernel(), b(1) * (one + bInv(1)) * (one + bInv(2)) * (one + b(3)));
}

TEST(Psi, DimensionRepresentation) {
  EXPECT_EQ(dimensionRep(cls(rel({Rational(1, 4), 0}))), 8);
  EXPECT_EQ(dimensionRep(cls(semi(Rational(1, 3)))), 4);
  EXPECT_EQ(dimensionRep(cls(halfRho())), 3);
  EXPECT_EQ(dimensionRep(cls(makeHW(weights::zero, kL))), 1);
  EXPECT_EQ(dimensionRep(cls(makeHW({Rational(-3, 2), 0}, kL))), 1);
  std::mt19937 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    CanonicalLabel m = randomLabel(rng);
    std::int64_t d = dimensionRep(GrClass(m));
    for (int k = 0; k < 12; ++k)
      EXPECT_EQ(dimensionRep(GrClass(canonicalize(twist(D6Element::fromIndex(k), m), kL))), d);
    EXPECT_EQ(dimensionRep(GrClass(canonicalize(flowApply({2, -1}, m), kL))), d);
  }
}

TEST(Psi, ConstantOnIdentificationOrbits) {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 25; ++trial) {
    CanonicalLabel m = randomLabel(rng);
    PsiPoly p = psi(m);
    for (const auto& y : identificationOrbit(m, kL)) EXPECT_EQ(psi(y), p) << toString(m) << " ~ " << toString(y);
  }
}

TEST(Psi, EquivariantUnderTwistAndFlow) {
  std::mt19937 rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    CanonicalLabel m = randomLabel(rng);
    D6Element g = D6Element::fromIndex(trial % 12);
    Coweight f{trial % 3 - 1, trial % 5 - 2};
    EXPECT_EQ(psi(flowApply(f, twist(g, m))), psi(m).twisted(g).shifted(f));
  }
}

TEST(Psi, AgreesWithDegenerationOfSingularModules) {
  // A reducible standard module and the sum of its composition factors have the same image.
  std::mt19937 rng(45);
  auto locus = singularLocus(requireAdmissible(m32FamilyWeight(), kL));
  for (int curve = 0; curve < 3; ++curve)
    for (int trial = 0; trial < 8; ++trial) {
      const auto& c = locus.curves[curve];
      Rational s(std::uniform_int_distribution<int>(0, 11)(rng), 12);
      Weight nu = c.base + s * weights::alpha(c.direction);
      GrClass parts = decomposeRelVia(m32FamilyWeight(), nu, curve, kL);
      EXPECT_EQ(psi(parts), relaxedKernel() * x({}, nu)) << "curve " << curve << " " << toString(nu);
    }
  for (const Rational& t : {Rational(0), Rational(1, 2)}) {
    Weight mu = m32FamilyWeight() + t * weights::alpha1;
    EXPECT_EQ(psi(decomposeSemi(m32FamilyWeight(), t, kL)), psi(detail::semiLabel({}, mu)));
  }
}

TEST(Psi, TelescopingRejectsNonTerminatingTails) {
  PsiPoly t = x({}, {}) + x({0, -2}, {});
  EXPECT_THROW(detail::telescope(t, {0, -2}), InternalError);
  PsiPoly ok = x({}, {}) - x({0, -4}, {});
  EXPECT_EQ(detail::telescope(ok, {0, -2}), x({}, {}) + x({0, -2}, {}));
}

TEST(Psi, RecollectInvertsPsiOnIrreducibles) {
  std::mt19937 rng(46);
  for (int trial = 0; trial < 30; ++trial) {
    CanonicalLabel m = randomLabel(rng);
    EXPECT_EQ(recollect(psi(m)), GrClass(m)) << toString(m);
  }
}

// ---------------------------------------------------------------------------
// Closed rules against the resolution route

TEST(Fusion, RelaxedTimesRelaxedMatchesVerlinde) {
  std::mt19937 rng(51);
  for (int trial = 0; trial < 15; ++trial) {
    Weight m = randomTypicalCoset(rng), n = randomTypicalCoset(rng);
    EXPECT_EQ(fuseL(rel(m), rel(n)), standardProductClass({}, m, {}, n));
  }
}

TEST(Fusion, SemiTimesRelaxedRule) {
  std::mt19937 rng(52);
  const Rational h(3, 2);
  for (int trial = 0; trial < 25; ++trial) {
    Rational t = randomSemiParameter(rng);
    Weight nu = randomTypicalCoset(rng);
    Weight s = m32FamilyWeight() + t * weights::alpha1 + nu;
    GrClass expected;
    expected += decomposeLabel(detail::relLabel({}, s), kL);
    expected += decomposeLabel(detail::relLabel(coweights::omega1, s + h * weights::omega1), kL);
    expected += decomposeLabel(detail::relLabel(coweights::omega2, s + h * weights::omega2), kL);
    expected += decomposeLabel(detail::relLabel(coweights::omega3, s + h * (weights::omega2 - weights::omega1)), kL);
    EXPECT_EQ(fuseL(semi(t), rel(nu)), expected);
    EXPECT_EQ(fuseByResolution(cls(semi(t)), cls(rel(nu))), expected);
  }
}

TEST(Fusion, HalfRhoTimesRelaxedRule) {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 25; ++trial) {
    Weight nu = randomTypicalCoset(rng);
    GrClass got = fuseL(halfRho(), rel(nu));
    EXPECT_EQ(got, fuseByResolution(cls(halfRho()), cls(rel(nu))));
    EXPECT_EQ(dimensionRep(got), 24);
  }
}

TEST(Fusion, SemiTimesSemiRule) {
  std::mt19937 rng(54);
  const Rational h(3, 2);
  for (int trial = 0; trial < 25; ++trial) {
    Rational t = randomSemiParameter(rng), u = randomSemiParameter(rng);
    Weight s = Rational(2) * m32FamilyWeight() + (t + u) * weights::alpha1;
    GrClass expected;
    expected += decomposeLabel(detail::semiLabel(coweights::omega1, s + h * weights::omega1), kL);
    expected += decomposeLabel(detail::relLabel(coweights::omega2, s + h * weights::omega2), kL);
    expected += decomposeLabel(detail::semiLabel(coweights::omega3, s + h * (weights::omega2 - weights::omega1)), kL);
    EXPECT_EQ(fuseL(semi(t), semi(u)), expected);
    EXPECT_EQ(fuseByResolution(cls(semi(t)), cls(semi(u))), expected);
  }
}

TEST(Fusion, TwistedSemiProducts) {
  std::mt19937 rng(55);
  for (const D6Element& g : {d6::w2, d6::w1w2}) {
    for (int trial = 0; trial < 25; ++trial) {
      Rational t = randomSemiParameter(rng), u = randomSemiParameter(rng);
      auto a = semi(t), bb = twist(g, semi(u));
      GrClass got = fuseL(a, bb);
      EXPECT_EQ(got, fuseByResolution(cls(a), cls(bb))) << toString(g);
      EXPECT_EQ(dimensionRep(got), 16);
    }
  }
}

TEST(Fusion, HalfRhoTimesSemiRule) {
  std::mt19937 rng(56);
  for (int trial = 0; trial < 25; ++trial) {
    Rational t = randomSemiParameter(rng);
    D6Element g = D6Element::fromIndex(trial % 12);
    auto bb = twist(g, semi(t));
    GrClass got = fuseL(halfRho(), bb);
    EXPECT_EQ(got, fuseByResolution(cls(halfRho()), cls(bb))) << toString(g);
    EXPECT_EQ(dimensionRep(got), 12);
  }
}

TEST(Fusion, HalfRhoProducts) {
  auto l = halfRho();
  GrClass ll;
  ll += cls(makeHW(weights::zero, kL));
  ll += cls(flowApply(2 * coweights::omega1, makeHW(weights::zero, kL)));
  ll += cls(flowApply(2 * coweights::omega2, makeHW(weights::zero, kL)));
  ll += 2 * cls(twist(d6::c, flowApply(-coweights::omega1 - coweights::omega2, l)));
  EXPECT_EQ(fuseL(l, l), ll);
  EXPECT_EQ(fuseByResolution(cls(l), cls(l)), ll);

  GrClass lcl = cls(makeHW(weights::zero, kL)) + decomposeLabel(detail::relLabel({}, weights::zero), kL);
  EXPECT_EQ(fuseL(l, twist(d6::c, l)), lcl);
  EXPECT_EQ(fuseByResolution(cls(l), cls(twist(d6::c, l))), lcl);
  EXPECT_EQ(dimensionRep(lcl), 9);
  // every twisted and flowed pair agrees with the resolution route
  for (int k = 0; k < 12; ++k)
    for (Coweight f : {Coweight{}, coweights::omega1, Coweight{1, -2}}) {
      auto bb = flowApply(f, twist(D6Element::fromIndex(k), l));
      EXPECT_EQ(fuseL(l, bb), fuseByResolution(cls(l), cls(bb))) << k;
    }
}

TEST(Fusion, ConjugateProductsContainTheVacuum) {
  std::mt19937 rng(57);
  CanonicalLabel v = vac();
  for (int trial = 0; trial < 10; ++trial) {
    Rational t = randomSemiParameter(rng);
    auto s = semi(t);
    GrClass ss = fuseL(s, twist(d6::c, s));
    EXPECT_EQ(ss.multiplicity(v), 2);
    GrClass expected = decomposeLabel(detail::relLabel({}, weights::zero), kL) + 2 * GrClass(v) +
                       cls(flowApply(-coweights::omega3, halfRho())) +
                       cls(twist(d6::c, flowApply(-coweights::omega3, halfRho())));
    EXPECT_EQ(ss, expected) << toString(ss);
    Weight nu = randomTypicalCoset(rng);
    GrClass rr = fuseL(rel(nu), twist(d6::c, rel(nu)));
    EXPECT_EQ(rr.multiplicity(v), 6);
  }
  EXPECT_EQ(fuseL(halfRho(), twist(d6::c, halfRho())).multiplicity(v), 1);
}

TEST(Fusion, RandomPairsAgreeWithResolution) {
  std::mt19937 rng(58);
  for (int trial = 0; trial < 60; ++trial) {
    CanonicalLabel a = randomLabel(rng), bb = randomLabel(rng);
    GrClass got = fuseIrreducible(a, bb);
    EXPECT_EQ(got, fuseByResolution(GrClass(a), GrClass(bb))) << toString(a) << " x " << toString(bb);
    for (const auto& [m, n] : got.terms()) EXPECT_GT(n, 0);
  }
}

TEST(Fusion, EveryRuleRouteAgrees) {
  std::mt19937 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    CanonicalLabel a = randomLabel(rng), bb = randomLabel(rng);
    auto routes = closedRuleRoutes(a, bb, 40);
    ASSERT_FALSE(routes.empty());
    for (const auto& r : routes) EXPECT_EQ(r, routes.front()) << toString(a) << " x " << toString(bb);
  }
}

// ---------------------------------------------------------------------------
// Ring laws

TEST(FusionRing, CommutativeWithUnit) {
  std::mt19937 rng(61);
  GrClass unit(vac());
  for (int trial = 0; trial < 30; ++trial) {
    GrClass a(randomLabel(rng)), bb(randomLabel(rng));
    EXPECT_EQ(fuse(a, bb), fuse(bb, a));
    EXPECT_EQ(fuse(unit, a), a);
  }
}

TEST(FusionRing, AssociativeOnFortyTriples) {
  std::mt19937 rng(62);
  for (int trial = 0; trial < 40; ++trial) {
    GrClass a(randomLabel(rng)), bb(randomLabel(rng)), c(randomLabel(rng));
    EXPECT_EQ(fuse(fuse(a, bb), c), fuse(a, fuse(bb, c))) << trial;
  }
}

TEST(FusionRing, DimensionIsMultiplicative) {
  std::mt19937 rng(63);
  for (int trial = 0; trial < 40; ++trial) {
    GrClass a(randomLabel(rng)), bb(randomLabel(rng));
    EXPECT_EQ(dimensionRep(fuse(a, bb)), dimensionRep(a) * dimensionRep(bb));
  }
  // (3)(3) = 1 + 1 + 1 + 2*3 and (8)(8) = 2*8 + 6*8
  EXPECT_EQ(dimensionRep(fuseL(halfRho(), halfRho())), 9);
  EXPECT_EQ(dimensionRep(fuseL(rel({Rational(1, 5), 0}), rel({0, Rational(1, 7)}))), 64);
}

TEST(FusionRing, TwistAndFlowEquivariance) {
  std::mt19937 rng(64);
  std::uniform_int_distribution<int> f(-2, 2), g(0, 11);
  for (int trial = 0; trial < 25; ++trial) {
    CanonicalLabel a = randomLabel(rng), bb = randomLabel(rng);
    D6Element h = D6Element::fromIndex(g(rng));
    Coweight p{f(rng), f(rng)}, q{f(rng), f(rng)};
    GrClass ab = fuse(GrClass(a), GrClass(bb));
    EXPECT_EQ(fuse(cls(twist(h, a)), cls(twist(h, bb))), transform(ab, h, {}, kL));
    EXPECT_EQ(fuse(cls(flowApply(p, a)), cls(flowApply(q, bb))), transform(ab, d6::e, p + q, kL));
  }
}

TEST(FusionRing, BilinearAndDecomposesReducibleInputs) {
  // A standard module at a singular coset fuses like the sum of its factors.
  auto locus = singularLocus(requireAdmissible(m32FamilyWeight(), kL));
  const auto& c = locus.curves[0];
  Weight nu = c.base + Rational(1, 5) * weights::alpha(c.direction);
  ModuleLabel reducible = detail::relLabel({}, nu);
  GrClass parts = decomposeLabel(reducible, kL);
  ASSERT_EQ(parts.totalMultiplicity(), 2);
  Weight m{Rational(1, 7), Rational(2, 5)};
  EXPECT_EQ(fuse(reducible, rel(m)), standardProductClass({}, nu, {}, m));
  std::mt19937 rng(65);
  GrClass x1(randomLabel(rng));
  EXPECT_EQ(fuse(parts, x1), fuse(GrClass(parts.terms().begin()->first), x1) +
                                 fuse(GrClass(std::next(parts.terms().begin())->first), x1));
}
