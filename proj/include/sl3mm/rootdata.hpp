#pragma once

#include "sl3mm/errors.hpp"
#include "sl3mm/rational.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <tuple>

namespace sl3mm {

// A weight of sl3 in Dynkin-label coordinates.
struct Weight {
  Rational d1{0};
  Rational d2{0};

  Weight() = default;
  Weight(Rational a, Rational b) : d1(a), d2(b) {}

  friend Weight operator+(const Weight& a, const Weight& b) { return {a.d1 + b.d1, a.d2 + b.d2}; }
  friend Weight operator-(const Weight& a, const Weight& b) { return {a.d1 - b.d1, a.d2 - b.d2}; }
  friend Weight operator-(const Weight& a) { return {-a.d1, -a.d2}; }
  friend Weight operator*(const Rational& s, const Weight& a) { return {s * a.d1, s * a.d2}; }
  Weight& operator+=(const Weight& o) { return *this = *this + o; }
  Weight& operator-=(const Weight& o) { return *this = *this - o; }
  friend bool operator==(const Weight& a, const Weight& b) { return a.d1 == b.d1 && a.d2 == b.d2; }
  friend bool operator<(const Weight& a, const Weight& b) {
    if (a.d1 != b.d1) return a.d1 < b.d1;
    return a.d2 < b.d2;
  }
};

// A coweight in the basis of fundamental coweights.
struct Coweight {
  std::int64_t c1{0};
  std::int64_t c2{0};

  friend Coweight operator+(const Coweight& a, const Coweight& b) { return {a.c1 + b.c1, a.c2 + b.c2}; }
  friend Coweight operator-(const Coweight& a, const Coweight& b) { return {a.c1 - b.c1, a.c2 - b.c2}; }
  friend Coweight operator-(const Coweight& a) { return {-a.c1, -a.c2}; }
  friend Coweight operator*(std::int64_t s, const Coweight& a) { return {s * a.c1, s * a.c2}; }
  Coweight& operator+=(const Coweight& o) { return *this = *this + o; }
  friend auto operator<=>(const Coweight&, const Coweight&) = default;
  friend bool operator==(const Coweight&, const Coweight&) = default;
};

inline std::string toString(const Weight& w) { return "(" + toString(w.d1) + "," + toString(w.d2) + ")"; }
inline std::string toString(const Coweight& c) {
  return "(" + std::to_string(c.c1) + "," + std::to_string(c.c2) + ")";
}

inline std::int64_t l1Norm(const Coweight& c) { return (c.c1 < 0 ? -c.c1 : c.c1) + (c.c2 < 0 ? -c.c2 : c.c2); }

namespace weights {
inline const Weight zero{0, 0};
inline const Weight omega1{1, 0};
inline const Weight omega2{0, 1};
inline const Weight rho{1, 1};
inline const Weight alpha1{2, -1};
inline const Weight alpha2{-1, 2};
inline const Weight alpha3{1, 1};
inline const Weight& alpha(int i) {
  static const std::array<Weight, 3> a{alpha1, alpha2, alpha3};
  return a.at(static_cast<std::size_t>(i - 1));
}
}  // namespace weights

namespace coweights {
inline constexpr Coweight zero{0, 0};
inline constexpr Coweight omega1{1, 0};
inline constexpr Coweight omega2{0, 1};
// omega3 = omega2 - omega1, the convention used for flow labels.
inline constexpr Coweight omega3{-1, 1};
}  // namespace coweights

// Root-lattice coordinates (t1,t2) of a weight: lambda = t1 alpha1 + t2 alpha2.
inline std::pair<Rational, Rational> rootCoordinates(const Weight& w) {
  return {(2 * w.d1 + w.d2) / 3, (w.d1 + 2 * w.d2) / 3};
}

inline Rational pairing(const Weight& w, const Coweight& x) {
  auto [t1, t2] = rootCoordinates(w);
  return t1 * x.c1 + t2 * x.c2;
}

inline Rational killingDual(const Weight& a, const Weight& b) {
  return (2 * a.d1 * b.d1 + a.d1 * b.d2 + a.d2 * b.d1 + 2 * a.d2 * b.d2) / 3;
}

inline Rational killingCoweight(const Coweight& a, const Coweight& b) {
  return Rational(2 * a.c1 * b.c1 + a.c1 * b.c2 + a.c2 * b.c1 + 2 * a.c2 * b.c2, 3);
}

// The weight xi* = kappa(xi, -). Its Dynkin labels are the coweight coordinates.
inline Weight dualWeight(const Coweight& x) { return {Rational(x.c1), Rational(x.c2)}; }

// True when w lies in the root lattice Q = {(a,b) integral : a = b mod 3},
// which has Hermite basis {(1,1), (0,3)}.
inline bool inRootLattice(const Weight& w) {
  if (!isInteger(w.d1) || !isInteger(w.d2)) return false;
  return (w.d1.numerator() - w.d2.numerator()) % 3 == 0;
}

// Canonical representative of the coset w + Q: first Dynkin label in [0,1),
// second in [0,3).
inline Weight cosetRepresentative(const Weight& w) {
  Rational a = w.d1, b = w.d2;
  std::int64_t fa = floorOf(a);
  a -= fa;
  b -= fa;
  return {a, modInt(b, 3)};
}

// ---------------------------------------------------------------------------
// The dihedral group D6 generated by the Weyl reflections and the diagram flip.

enum class WeylPart : std::uint8_t { e = 0, w1, w2, w1w2, w2w1, w3 };

struct D6Element {
  WeylPart weyl{WeylPart::e};
  bool dynkin{false};  // element is weyl * d when set

  constexpr int index() const { return static_cast<int>(weyl) + (dynkin ? 6 : 0); }
  static constexpr D6Element fromIndex(int i) { return {static_cast<WeylPart>(i % 6), i >= 6}; }

  friend constexpr bool operator==(const D6Element& a, const D6Element& b) { return a.index() == b.index(); }
  friend constexpr bool operator<(const D6Element& a, const D6Element& b) { return a.index() < b.index(); }
};

namespace d6 {
inline constexpr D6Element e{WeylPart::e, false};
inline constexpr D6Element w1{WeylPart::w1, false};
inline constexpr D6Element w2{WeylPart::w2, false};
inline constexpr D6Element w1w2{WeylPart::w1w2, false};
inline constexpr D6Element w2w1{WeylPart::w2w1, false};
inline constexpr D6Element w3{WeylPart::w3, false};
inline constexpr D6Element d{WeylPart::e, true};
inline constexpr D6Element c{WeylPart::w3, true};
}  // namespace d6

using IntMatrix2 = std::array<std::array<std::int64_t, 2>, 2>;

inline constexpr IntMatrix2 matMul(const IntMatrix2& a, const IntMatrix2& b) {
  IntMatrix2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

// Matrix of g acting on Dynkin labels of weights (equivalently on coweight
// coordinates, since the Cartan matrix is symmetric).
inline constexpr IntMatrix2 d6Matrix(const D6Element& g) {
  constexpr IntMatrix2 id{{{1, 0}, {0, 1}}};
  constexpr IntMatrix2 m1{{{-1, 0}, {1, 1}}};
  constexpr IntMatrix2 m2{{{1, 1}, {0, -1}}};
  constexpr IntMatrix2 md{{{0, 1}, {1, 0}}};
  IntMatrix2 w = id;
  switch (g.weyl) {
    case WeylPart::e: w = id; break;
    case WeylPart::w1: w = m1; break;
    case WeylPart::w2: w = m2; break;
    case WeylPart::w1w2: w = matMul(m1, m2); break;
    case WeylPart::w2w1: w = matMul(m2, m1); break;
    case WeylPart::w3: w = matMul(m1, matMul(m2, m1)); break;
  }
  return g.dynkin ? matMul(w, md) : w;
}

inline D6Element d6Compose(const D6Element& g, const D6Element& h) {
  static const std::array<std::array<D6Element, 12>, 12> table = [] {
    std::array<std::array<D6Element, 12>, 12> t{};
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) {
        IntMatrix2 p = matMul(d6Matrix(D6Element::fromIndex(i)), d6Matrix(D6Element::fromIndex(j)));
        for (int k = 0; k < 12; ++k)
          if (d6Matrix(D6Element::fromIndex(k)) == p) t[i][j] = D6Element::fromIndex(k);
      }
    return t;
  }();
  return table[g.index()][h.index()];
}

inline D6Element d6Inverse(const D6Element& g) {
  for (int k = 0; k < 12; ++k)
    if (d6Compose(g, D6Element::fromIndex(k)) == d6::e) return D6Element::fromIndex(k);
  throw InternalError("D6 element without inverse");
}

inline D6Element operator*(const D6Element& g, const D6Element& h) { return d6Compose(g, h); }

inline bool isWeyl(const D6Element& g) { return !g.dynkin; }

inline Weight applyLinear(const IntMatrix2& m, const Weight& w) {
  return {m[0][0] * w.d1 + m[0][1] * w.d2, m[1][0] * w.d1 + m[1][1] * w.d2};
}

inline Coweight d6Apply(const D6Element& g, const Coweight& x) {
  IntMatrix2 m = d6Matrix(g);
  return {m[0][0] * x.c1 + m[0][1] * x.c2, m[1][0] * x.c1 + m[1][1] * x.c2};
}

inline Weight d6Apply(const D6Element& g, const Weight& w, bool shifted = false) {
  if (!shifted) return applyLinear(d6Matrix(g), w);
  return applyLinear(d6Matrix(g), w + weights::rho) - weights::rho;
}

// Shifted action g . lambda = g(lambda + rho) - rho.
inline Weight dotAction(const D6Element& g, const Weight& w) { return d6Apply(g, w, true); }

inline std::string toString(const D6Element& g) {
  if (g == d6::c) return "c";
  static const char* names[] = {"", "w1", "w2", "w1 w2", "w2 w1", "w3"};
  std::string s = names[static_cast<int>(g.weyl)];
  if (g.dynkin) s += s.empty() ? "d" : " d";
  return s.empty() ? "e" : s;
}

// ---------------------------------------------------------------------------
// Levels k = -3 + u/v.

struct Level {
  std::int64_t u{3};
  std::int64_t v{2};

  Rational k() const { return Rational(-3) + Rational(u, v); }
  friend bool operator==(const Level&, const Level&) = default;
};

// Validates u >= 2, v >= 1 and gcd(u,v) = 1.
inline Level makeLevel(std::int64_t u, std::int64_t v) {
  if (u < 2 || v < 1)
    throw LevelError(LevelError::Kind::Invalid,
                     "invalid level: need u >= 2 and v >= 1 (got u=" + std::to_string(u) +
                         ", v=" + std::to_string(v) + ")");
  if (std::gcd(u, v) != 1)
    throw LevelError(LevelError::Kind::NotCoprime, "invalid level: gcd(u,v) must be 1");
  return {u, v};
}

// Additionally rejects u = 2, where the vertex algebra is simple but not admissible.
inline Level makeAdmissibleLevel(std::int64_t u, std::int64_t v) {
  Level l = makeLevel(u, v);
  if (u == 2)
    throw LevelError(LevelError::Kind::NonAdmissible,
                     "level with u=2 is not admissible; admissible levels need u >= 3");
  return l;
}

struct CasimirValues {
  Rational q;
  Rational cubic;
  friend bool operator==(const CasimirValues&, const CasimirValues&) = default;
};

inline CasimirValues casimirEigenvalues(const Weight& w) {
  const Rational& a = w.d1;
  const Rational& b = w.d2;
  Rational q = (a * a + b * b + (a + b) * (a + b)) / 3 + 2 * (a + b);
  Rational cubic = (a + 2 * b + 3) * (2 * a + b + 3) * (a - b);
  return {q, cubic};
}

inline Rational conformalWeight(const Weight& w, const Level& lvl) {
  return killingDual(w, w + 2 * weights::rho) / (2 * (lvl.k() + 3));
}

inline Rational centralCharge(const Level& lvl) { return 8 * lvl.k() / (lvl.k() + 3); }

}  // namespace sl3mm
