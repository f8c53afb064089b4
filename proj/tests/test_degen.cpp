#include "sl3mm/degen.hpp"

#include <gtest/gtest.h>

#include <map>
#include <numeric>

using namespace sl3mm;

namespace {

const Level k32{3, 2};
const Weight kM1{Rational(-3, 2), 0};
const Weight kM2{0, Rational(-3, 2)};
const Weight kL{Rational(-1, 2), Rational(-1, 2)};

ModuleLabel hw(const Weight& w, const D6Element& g = d6::e) { return canonicalize(twist(g, makeHW(w, k32)), k32); }

GrClass sum(std::initializer_list<ModuleLabel> ms) {
  GrClass g;
  for (const auto& m : ms) g.add(m);
  return g;
}

// ---------------------------------------------------------------------------
// Oracle: weight multiplicities of irreducible sl3 highest-weight modules, computed as
// ranks of the Shapovalov form on the Verma module. The Verma module is realised with
// gl3 matrix units: f1 = E21, f3 = E31, f2 = E32, PBW basis f1^a f3^c f2^b v.

using Mono = std::array<int, 3>;  // (a, c, b)
using Vec = std::map<Mono, Rational>;

class Verma {
 public:
  explicit Verma(const Weight& lam) : diag_{lam.d1 + lam.d2, lam.d2, 0} {}

  // E_{ij} (1-based) applied to a basis monomial.
  const Vec& apply(int i, int j, const Mono& m) {
    auto key = std::make_tuple(i, j, m[0], m[1], m[2]);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Vec out;
    auto [a, c, b] = m;
    if (a > 0 || c > 0 || b > 0) {
      int li, lj;  // leading factor E_{li lj}
      Mono rest = m;
      if (a > 0) { li = 2; lj = 1; --rest[0]; }
      else if (c > 0) { li = 3; lj = 1; --rest[1]; }
      else { li = 3; lj = 2; --rest[2]; }
      // X L rest = L (X rest) + [X, L] rest
      Vec inner = apply(i, j, rest);
      for (const auto& [mm, co] : inner) addLeading(out, li, lj, mm, co);
      // [E_ij, E_kl] = delta_jk E_il - delta_li E_kj
      if (j == li) addScaled(out, applyUnit(i, lj, rest), 1);
      if (lj == i) addScaled(out, applyUnit(li, j, rest), -1);
    } else {
      if (i == j) {
        if (diag_[i - 1] != 0) out[{0, 0, 0}] = diag_[i - 1];
      } else if (i > j) {
        Mono n{0, 0, 0};
        if (i == 2 && j == 1) n[0] = 1;
        if (i == 3 && j == 1) n[1] = 1;
        if (i == 3 && j == 2) n[2] = 1;
        out[n] = 1;
      }
    }
    return memo_[key] = out;
  }

  Vec applyVec(int i, int j, const Vec& v) {
    Vec out;
    for (const auto& [m, co] : v) addScaled(out, apply(i, j, m), co);
    return out;
  }

  // dim L(lambda)_{lambda - p alpha1 - q alpha2}
  int multiplicity(int p, int q) {
    if (p < 0 || q < 0) return 0;
    std::vector<Mono> basis;
    for (int c = 0; c <= std::min(p, q); ++c) basis.push_back({p - c, c, q - c});
    std::size_t n = basis.size();
    std::vector<std::vector<Rational>> g(n, std::vector<Rational>(n));
    for (std::size_t s = 0; s < n; ++s) {
      // sigma(f1^a f3^c f2^b) = e2^b e3^c e1^a, applied right to left.
      for (std::size_t r = 0; r < n; ++r) {
        Vec v{{basis[s], Rational(1)}};
        auto [a, c, b] = basis[r];
        for (int k = 0; k < a; ++k) v = applyVec(1, 2, v);
        for (int k = 0; k < c; ++k) v = applyVec(1, 3, v);
        for (int k = 0; k < b; ++k) v = applyVec(2, 3, v);
        auto it = v.find({0, 0, 0});
        g[r][s] = it == v.end() ? Rational(0) : it->second;
      }
    }
    return rank(g);
  }

 private:
  static void addScaled(Vec& out, const Vec& v, const Rational& s) {
    for (const auto& [m, co] : v) {
      auto& slot = out[m];
      slot += s * co;
      if (slot == 0) out.erase(m);
    }
  }
  // Leading factor times a normal-ordered monomial.
  static void addLeading(Vec& out, int li, int lj, const Mono& m, const Rational& co) {
    auto bump = [&](Mono n, const Rational& x) {
      auto& slot = out[n];
      slot += x;
      if (slot == 0) out.erase(n);
    };
    if (li == 2 && lj == 1) bump({m[0] + 1, m[1], m[2]}, co);
    else if (li == 3 && lj == 1) bump({m[0], m[1] + 1, m[2]}, co);
    else {
      // f2 f1^a = f1^a f2 + a f1^{a-1} f3
      bump({m[0], m[1], m[2] + 1}, co);
      if (m[0] > 0) bump({m[0] - 1, m[1] + 1, m[2]}, co * m[0]);
    }
  }
  Vec applyUnit(int i, int j, const Mono& m) {
    if (i != j) return apply(i, j, m);
    // Diagonal units act by their weight on monomials.
    Vec v;
    Rational w = diag_[i - 1];
    auto [a, c, b] = m;
    // f1 = E21 lowers E11 by 1 and raises E22 by 1, etc.
    int shifts[3][3] = {{-1, 1, 0}, {-1, 0, 1}, {0, -1, 1}};
    w += shifts[0][i - 1] * a + shifts[1][i - 1] * c + shifts[2][i - 1] * b;
    if (w != 0) v[m] = w;
    return v;
  }
  static int rank(std::vector<std::vector<Rational>> m) {
    int r = 0;
    std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    for (std::size_t col = 0; col < cols && r < static_cast<int>(rows); ++col) {
      std::size_t piv = r;
      while (piv < rows && m[piv][col] == 0) ++piv;
      if (piv == rows) continue;
      std::swap(m[piv], m[r]);
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == static_cast<std::size_t>(r) || m[i][col] == 0) continue;
        Rational f = m[i][col] / m[r][col];
        for (std::size_t k = col; k < cols; ++k) m[i][k] -= f * m[r][k];
      }
      ++r;
    }
    return r;
  }

  std::array<Rational, 3> diag_;
  std::map<std::tuple<int, int, int, int, int>, Vec> memo_;
};

class TopSpaceOracle {
 public:
  explicit TopSpaceOracle(const Level& l) : lvl_(l) {}

  int hwMult(const Weight& lam, const Weight& nu) {
    auto [p, q] = rootCoordinates(lam - nu);
    if (!isInteger(p) || !isInteger(q)) return 0;
    auto it = vermas_.try_emplace(lam, lam).first;
    return it->second.multiplicity(static_cast<int>(p.numerator()), static_cast<int>(q.numerator()));
  }
  // Top space of S_lambda[mu]: multiplicities are constant along alpha1-rows, equal to those of the
  // degenerate member L(lambda) + w1 L(w1.lambda) far along the row.
  int semiMult(const Weight& lam, const Rational& t, const Weight& nu) {
    Weight delta = nu - lam - t * weights::alpha1;
    auto [x, y] = rootCoordinates(delta);
    if (!isInteger(x) || !isInteger(y)) return 0;
    Weight probe = lam + Rational(x) * weights::alpha1 + Rational(y) * weights::alpha2;
    return hwMult(lam, probe) + hwMult(dotAction(d6::w1, lam), d6Apply(d6::w1, probe));
  }
  int labelMult(const ModuleLabel& m, const Weight& nu) {
    EXPECT_EQ(m.flow, Coweight{}) << "oracle handles unflowed labels only";
    Weight pre = d6Apply(d6Inverse(m.twist), nu);
    switch (m.core.kind) {
      case CoreKind::HW: return hwMult(m.core.lambda, pre);
      case CoreKind::Semi: return semiMult(m.core.lambda, m.core.t, pre);
      default: ADD_FAILURE() << "relaxed summand in a decomposition"; return 0;
    }
  }
  int classMult(const GrClass& g, const Weight& nu) {
    int s = 0;
    for (const auto& [m, n] : g.terms()) s += static_cast<int>(n) * labelMult(m, nu);
    return s;
  }

 private:
  Level lvl_;
  std::map<Weight, Verma> vermas_;
};

std::vector<Level> grid(int maxU, int maxV) {
  std::vector<Level> out;
  for (int u = 3; u <= maxU; ++u)
    for (int v = 2; v <= maxV; ++v)
      if (std::gcd(u, v) == 1) out.push_back({u, v});
  return out;
}

}  // namespace

TEST(DegenOracle, VermaMultiplicitiesOfKnownModules) {
  // Finite-dimensional oracle checks: adjoint and defining representations.
  Verma adj(weights::rho);
  EXPECT_EQ(adj.multiplicity(1, 1), 2);
  EXPECT_EQ(adj.multiplicity(2, 2), 1);
  EXPECT_EQ(adj.multiplicity(2, 0), 0);
  EXPECT_EQ(adj.multiplicity(3, 3), 0);
  Verma def(weights::omega1);
  EXPECT_EQ(def.multiplicity(1, 0), 1);
  EXPECT_EQ(def.multiplicity(1, 1), 1);
  EXPECT_EQ(def.multiplicity(0, 1), 0);
  // Generic Verma module is irreducible: Kostant partition function min(p,q)+1.
  Verma gen({Rational(1, 3), Rational(2, 7)});
  EXPECT_EQ(gen.multiplicity(3, 2), 3);
}

TEST(Degen, SemiExamples32) {
  auto a = decomposeSemiAt(kM1, kM1, k32);
  EXPECT_EQ(a, sum({hw(kM1), hw(kL, d6::w1)}));
  auto b = decomposeSemiAt(kM1, kL, k32);
  EXPECT_EQ(b, sum({hw(kL), hw(kM1, d6::w1)}));
  EXPECT_EQ(a.totalMultiplicity(), 2);
  EXPECT_EQ(b.totalMultiplicity(), 2);
  EXPECT_THROW(decomposeSemi(kM1, Rational(1, 3), k32), DomainError);
  EXPECT_THROW(decomposeSemi(kM2, 0, k32), DomainError);
}

TEST(Degen, RelaxedExamples32) {
  EXPECT_EQ(decomposeRel(kM1, kL, k32), sum({hw(kL), hw(kL, d6::c), hw(kM1, d6::w1), hw(kM2, d6::w2)}));
  EXPECT_EQ(decomposeRel(kM1, kM2, k32), sum({hw(kM2), hw(kM2, d6::c), hw(kL, d6::w2), hw(kL, d6::c * d6::w2)}));
  EXPECT_EQ(decomposeRel(kM1, kM1, k32), sum({hw(kM1), hw(kM1, d6::c), hw(kL, d6::w1), hw(kL, d6::c * d6::w1)}));
  // Generic point on the alpha1 curve: S[mu] + c S[-mu - alpha2].
  for (Rational t : {Rational(1, 3), Rational(1, 5), Rational(2, 7)}) {
    Weight mu = kM1 + t * weights::alpha1;
    GrClass expected;
    expected.add(canonicalize(makeSemiAt(kM1, mu, k32), k32));
    expected.add(canonicalize(twist(d6::c, makeSemiAt(kM1, -mu - weights::alpha2, k32)), k32));
    EXPECT_EQ(decomposeRel(kM1, mu, k32), expected);
  }
  EXPECT_THROW(decomposeRel(kM1, {Rational(1, 4), 0}, k32), DomainError);
}

TEST(Degen, AtypicalityDegree) {
  EXPECT_EQ(atypicalityDegree(parseLabel("R[1/4,0]"), k32), 0);
  EXPECT_EQ(atypicalityDegree(parseLabel("R[1/2,1/2]"), k32), 2);  // [-rho/2]
  EXPECT_EQ(atypicalityDegree(parseLabel("R[1/6,2/3]"), k32), 1);
  EXPECT_EQ(atypicalityDegree(makeSemi(kM1, Rational(1, 3), k32), k32), 1);
  EXPECT_EQ(atypicalityDegree(makeHW(kL, k32), k32), 2);
  // Oracle for the typical example: brute-force search for t = j/24 on all three curves.
  Weight mu{Rational(1, 4), 0};
  auto locus = singularLocus(requireAdmissible(kM1, k32));
  for (const auto& cv : locus.curves)
    for (int j = 0; j < 24; ++j)
      EXPECT_FALSE(inRootLattice(mu - cv.base - Rational(j, 24) * weights::alpha(cv.direction)));
}

TEST(Degen, DoublePointRoutesAgree) {
  for (const auto& l : grid(7, 4))
    for (const auto& a : enumerateAdmissible(l)) {
      if (!inR2(a)) continue;
      auto locus = singularLocus(a);
      for (const Weight& mu : {a.weight, dotAction(d6::w1, a.weight), dotAction(d6::w2w1, a.weight)}) {
        auto curves = curvesContaining(locus, mu);
        ASSERT_EQ(curves.size(), 2u) << toString(mu);
        auto x = decomposeRelVia(a.weight, mu, curves[0], l);
        auto y = decomposeRelVia(a.weight, mu, curves[1], l);
        EXPECT_EQ(x, y) << l.u << "," << l.v << " " << toString(a.weight) << " at " << toString(mu);
        EXPECT_EQ(x.totalMultiplicity(), 4);
        for (const auto& [m, n] : x.terms()) EXPECT_EQ(m.core.kind, CoreKind::HW);
      }
    }
}

TEST(Degen, RepresentativeIndependence) {
  for (const auto& l : {k32, Level{4, 3}, Level{5, 2}})
    for (const auto& a : enumerateAdmissible(l)) {
      if (!inR2(a)) continue;
      for (int dir = 1; dir <= 3; ++dir) {
        Weight base = dir == 2 ? dotAction(d6::w1, a.weight) : a.weight;
        Weight mu = base + Rational(2, 7) * weights::alpha(dir);
        auto ref = decomposeRel(a.weight, mu, l);
        EXPECT_EQ(ref.totalMultiplicity(), 2);
        for (const auto& shift : {weights::alpha1, weights::alpha2, Weight{3, 0}, Weight{-2, 1}})
          EXPECT_EQ(decomposeRel(a.weight, mu + shift, l), ref);
      }
    }
}

TEST(Degen, DecomposeLabelCarriesTwistAndFlow) {
  auto m = parseLabel("sf(1,0)*w2 R[1/2,1/2]");
  auto expected = transform(decomposeRel(kM1, kL, k32), d6::w2, {1, 0}, k32);
  EXPECT_EQ(decomposeLabel(m, k32), expected);
  EXPECT_EQ(decomposeLabel(parseLabel("S[1/3]"), k32).totalMultiplicity(), 1);
}

// Semirelaxed oracle consistency: the degenerate sum L(l) + w1 L(w1.l) has constant multiplicity
// along every alpha1-row, as a coherent family must.
TEST(DegenOracle, SemiDegenerateSumIsRowConstant) {
  for (const auto& l : {k32, Level{4, 3}}) {
    TopSpaceOracle o(l);
    for (const auto& a : enumerateAdmissible(l)) {
      if (!inSigma1(a)) continue;
      auto g = decomposeSemi(a.weight, 0, l);
      for (int y = 0; y >= -3; --y) {
        std::set<int> seen;
        for (int x = -5; x <= 5; ++x) seen.insert(o.classMult(g, a.weight + Rational(x) * weights::alpha1 + Rational(y) * weights::alpha2));
        EXPECT_EQ(seen.size(), 1u) << toString(a.weight) << " row " << y;
      }
    }
  }
}

// The summands of every degenerate relaxed module tile the coset mu + Q with the common
// top-space multiplicity lambda_2 + 1.
TEST(DegenOracle, RelaxedTopSpaceIsTiledBySummands) {
  for (const auto& l : {k32, Level{4, 3}}) {
    TopSpaceOracle o(l);
    for (const auto& a : enumerateAdmissible(l)) {
      if (!inR2(a)) continue;
      int expected = static_cast<int>(a.weight.d2.numerator()) + 1;
      std::vector<Weight> samples{a.weight, dotAction(d6::w1, a.weight), dotAction(d6::w2w1, a.weight)};
      for (int dir = 1; dir <= 3; ++dir) {
        Weight base = dir == 2 ? dotAction(d6::w1, a.weight) : a.weight;
        samples.push_back(base + Rational(1, 3) * weights::alpha(dir));
      }
      for (const auto& mu : samples) {
        auto g = decomposeRel(a.weight, mu, l);
        for (int x = -3; x <= 3; ++x)
          for (int y = -3; y <= 3; ++y) {
            Weight nu = mu + Rational(x) * weights::alpha1 + Rational(y) * weights::alpha2;
            EXPECT_EQ(o.classMult(g, nu), expected) << l.u << "," << l.v << " mu " << toString(mu) << " nu " << toString(nu);
          }
      }
    }
  }
}
