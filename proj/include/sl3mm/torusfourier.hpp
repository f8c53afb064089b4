#pragma once

// Finite Fourier sums on the torus h*_R / Q, Dirac-comb reduction of lattice
// sums, and cone-directed geometric expansions.

#include "sl3mm/errors.hpp"
#include "sl3mm/rootdata.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace sl3mm {

// e^{2 pi i angle}, angle kept in [0,1).
struct PhaseAngle {
  Rational angle{0};

  PhaseAngle() = default;
  explicit PhaseAngle(const Rational& a) : angle(fracPart(a)) {}

  friend PhaseAngle operator*(const PhaseAngle& a, const PhaseAngle& b) { return PhaseAngle(a.angle + b.angle); }
  PhaseAngle inverse() const { return PhaseAngle(-angle); }
  friend bool operator==(const PhaseAngle&, const PhaseAngle&) = default;
  friend auto operator<=>(const PhaseAngle& a, const PhaseAngle& b) { return a.angle <=> b.angle; }
};

using ComplexL = std::complex<long double>;

inline ComplexL evalNumeric(const PhaseAngle& p) {
  long double x = 2 * std::numbers::pi_v<long double> * static_cast<long double>(p.angle.numerator()) /
                  static_cast<long double>(p.angle.denominator());
  return {std::cos(x), std::sin(x)};
}

namespace detail {

inline std::int64_t checkedAdd(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("phase coefficient overflow");
  return r;
}
inline std::int64_t checkedMul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("phase coefficient overflow");
  return r;
}

// Integer polynomials, lowest degree first.
using IntPoly = std::vector<std::int64_t>;

// Exact quotient a / b for monic b dividing a.
inline IntPoly exactDivide(IntPoly a, const IntPoly& b) {
  std::size_t db = b.size() - 1;
  if (a.size() < b.size()) return {0};
  IntPoly q(a.size() - db, 0);
  for (std::size_t i = a.size(); i-- > db;) {
    std::int64_t c = a[i];
    q[i - db] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] = checkedAdd(a[i - db + j], -checkedMul(c, b[j]));
  }
  return q;
}

// The n-th cyclotomic polynomial, cached.
inline const IntPoly& cyclotomic(std::int64_t n) {
  static std::mutex mu;
  static std::map<std::int64_t, IntPoly> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  IntPoly p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (std::int64_t d = 1; d < n; ++d)
    if (n % d == 0) p = exactDivide(p, cyclotomic(d));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(n, std::move(p)).first->second;
}

// Remainder of a modulo the monic polynomial m.
inline IntPoly remainderMod(IntPoly a, const IntPoly& m) {
  std::size_t dm = m.size() - 1;
  for (std::size_t i = a.size(); i-- > dm;) {
    std::int64_t c = a[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dm; ++j) a[i - dm + j] = checkedAdd(a[i - dm + j], -checkedMul(c, m[j]));
  }
  if (a.size() > dm) a.resize(dm);
  return a;
}

}  // namespace detail

// Finite Z-linear combination of roots of unity, an element of Z[Q/Z]
// evaluated in C. Equality is equality of complex values, decided exactly by
// reduction modulo a cyclotomic polynomial.
class PhaseSum {
 public:
  PhaseSum() = default;
  PhaseSum(std::int64_t c) { add(PhaseAngle{}, c); }  // NOLINT(google-explicit-constructor)
  explicit PhaseSum(const PhaseAngle& p, std::int64_t c = 1) {
    add(p, c);
    reduce();
  }
  static PhaseSum phase(const Rational& angle, std::int64_t c = 1) { return PhaseSum(PhaseAngle(angle), c); }

  const std::map<PhaseAngle, std::int64_t>& terms() const { return terms_; }

  friend PhaseSum operator+(PhaseSum a, const PhaseSum& b) {
    for (const auto& [p, c] : b.terms_) a.add(p, c);
    a.reduce();
    return a;
  }
  friend PhaseSum operator-(const PhaseSum& a) {
    PhaseSum r;
    for (const auto& [p, c] : a.terms_) r.terms_[p] = -c;
    return r;
  }
  friend PhaseSum operator-(const PhaseSum& a, const PhaseSum& b) { return a + (-b); }
  friend PhaseSum operator*(const PhaseSum& a, const PhaseSum& b) {
    PhaseSum r;
    for (const auto& [p, c] : a.terms_)
      for (const auto& [q, d] : b.terms_) r.add(p * q, detail::checkedMul(c, d));
    r.reduce();
    return r;
  }
  PhaseSum& operator+=(const PhaseSum& o) { return *this = *this + o; }
  PhaseSum& operator-=(const PhaseSum& o) { return *this = *this - o; }
  PhaseSum& operator*=(const PhaseSum& o) { return *this = *this * o; }

  PhaseSum conj() const {
    PhaseSum r;
    for (const auto& [p, c] : terms_) r.add(p.inverse(), c);
    r.reduce();
    return r;
  }

  bool isZero() const { return terms_.empty(); }
  friend bool operator==(const PhaseSum& a, const PhaseSum& b) { return (a - b).isZero(); }

  // The value as an integer, when it is one.
  std::optional<std::int64_t> asInteger() const {
    if (terms_.empty()) return 0;
    if (terms_.size() == 1 && terms_.begin()->first.angle == 0) return terms_.begin()->second;
    return std::nullopt;
  }
  // The single phase (with sign) when the value is +-e(angle).
  std::optional<std::pair<PhaseAngle, std::int64_t>> asSignedPhase() const {
    if (terms_.size() != 1) return std::nullopt;
    auto [p, c] = *terms_.begin();
    if (c != 1 && c != -1) return std::nullopt;
    return std::make_pair(p, c);
  }

  ComplexL evalNumeric() const {
    ComplexL s{0, 0};
    for (const auto& [p, c] : terms_) s += static_cast<long double>(c) * sl3mm::evalNumeric(p);
    return s;
  }

 private:
  void add(const PhaseAngle& p, std::int64_t c) {
    if (c == 0) return;
    auto& slot = terms_[p];
    slot = detail::checkedAdd(slot, c);
    if (slot == 0) terms_.erase(p);
  }

  std::int64_t conductor() const {
    std::int64_t n = 1;
    for (const auto& [p, c] : terms_) n = std::lcm(n, p.angle.denominator());
    return n;
  }

  // Rewrite in the power basis of Q(zeta_n), n the lcm of the angle
  // denominators, repeating while n shrinks.
  void reduce() {
    for (;;) {
      std::int64_t n = conductor();
      if (n == 1) return;
      detail::IntPoly a(static_cast<std::size_t>(n), 0);
      for (const auto& [p, c] : terms_) a[static_cast<std::size_t>(p.angle.numerator() * (n / p.angle.denominator()))] = c;
      a = detail::remainderMod(std::move(a), detail::cyclotomic(n));
      terms_.clear();
      for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] != 0) terms_[PhaseAngle(Rational(static_cast<std::int64_t>(k), n))] = a[k];
      if (conductor() == n) return;
    }
  }

  std::map<PhaseAngle, std::int64_t> terms_;
};

inline std::string toString(const PhaseSum& s) {
  if (s.isZero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [p, c] : s.terms()) {
    if (!first) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    first = false;
    std::int64_t a = c < 0 ? -c : c;
    if (p.angle == 0) {
      out += std::to_string(a);
      continue;
    }
    if (a != 1) out += std::to_string(a) + "*";
    out += "e(" + toString(p.angle) + ")";
  }
  return out;
}

// ---------------------------------------------------------------------------

// sum_xi c_xi e^{2 pi i <mu, xi>}, a function of mu on h*_R / Q with coweight
// frequencies.
class FourierPoly {
 public:
  FourierPoly() = default;
  FourierPoly(std::int64_t c) : FourierPoly(PhaseSum(c)) {}  // NOLINT(google-explicit-constructor)
  FourierPoly(const PhaseSum& c) { add(Coweight{}, c); }    // NOLINT(google-explicit-constructor)
  static FourierPoly monomial(const Coweight& xi, const PhaseSum& c = PhaseSum(1)) {
    FourierPoly p;
    p.add(xi, c);
    return p;
  }

  const std::map<Coweight, PhaseSum>& terms() const { return terms_; }
  PhaseSum coefficient(const Coweight& xi) const {
    auto it = terms_.find(xi);
    return it == terms_.end() ? PhaseSum{} : it->second;
  }
  bool isZero() const { return terms_.empty(); }

  friend FourierPoly operator+(FourierPoly a, const FourierPoly& b) {
    for (const auto& [x, c] : b.terms_) a.add(x, c);
    return a;
  }
  friend FourierPoly operator-(const FourierPoly& a) {
    FourierPoly r;
    for (const auto& [x, c] : a.terms_) r.terms_[x] = -c;
    return r;
  }
  friend FourierPoly operator-(const FourierPoly& a, const FourierPoly& b) { return a + (-b); }
  friend FourierPoly operator*(const FourierPoly& a, const FourierPoly& b) {
    FourierPoly r;
    for (const auto& [x, c] : a.terms_)
      for (const auto& [y, d] : b.terms_) r.add(x + y, c * d);
    return r;
  }
  FourierPoly& operator+=(const FourierPoly& o) { return *this = *this + o; }
  FourierPoly& operator-=(const FourierPoly& o) { return *this = *this - o; }
  FourierPoly& operator*=(const FourierPoly& o) { return *this = *this * o; }
  friend bool operator==(const FourierPoly& a, const FourierPoly& b) { return (a - b).isZero(); }

  // Complex conjugate as a function of real mu.
  FourierPoly conj() const {
    FourierPoly r;
    for (const auto& [x, c] : terms_) r.add(-x, c.conj());
    return r;
  }

  // f(g^{-1} mu), which moves every frequency xi to g(xi).
  FourierPoly substituteD6(const D6Element& g) const {
    FourierPoly r;
    for (const auto& [x, c] : terms_) r.add(d6Apply(g, x), c);
    return r;
  }

 private:
  void add(const Coweight& x, const PhaseSum& c) {
    if (c.isZero()) return;
    auto it = terms_.find(x);
    if (it == terms_.end()) {
      terms_.emplace(x, c);
      return;
    }
    it->second += c;
    if (it->second.isZero()) terms_.erase(it);
  }

  std::map<Coweight, PhaseSum> terms_;
};

inline std::string toString(const FourierPoly& p) {
  if (p.isZero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [x, c] : p.terms()) {
    if (!first) out += " + ";
    first = false;
    out += "[" + toString(c) + "]";
    if (x != Coweight{}) out += "*E" + toString(x);
  }
  return out;
}

inline PhaseSum evalExact(const FourierPoly& p, const Weight& mu) {
  PhaseSum s;
  for (const auto& [x, c] : p.terms()) s += c * PhaseSum::phase(pairing(mu, x));
  return s;
}

inline ComplexL evalNumeric(const FourierPoly& p, const Weight& mu) { return evalExact(p, mu).evalNumeric(); }

// Evaluation at a real weight given by floating Dynkin labels.
inline ComplexL evalNumeric(const FourierPoly& p, long double mu1, long double mu2) {
  long double t1 = (2 * mu1 + mu2) / 3, t2 = (mu1 + 2 * mu2) / 3;
  ComplexL s{0, 0};
  for (const auto& [x, c] : p.terms()) {
    long double a = 2 * std::numbers::pi_v<long double> * (t1 * static_cast<long double>(x.c1) +
                                                           t2 * static_cast<long double>(x.c2));
    s += c.evalNumeric() * ComplexL(std::cos(a), std::sin(a));
  }
  return s;
}

// Integral over h*_R / Q with unit total measure.
inline PhaseSum integrateTorus(const FourierPoly& p) { return p.coefficient(Coweight{}); }

// ---------------------------------------------------------------------------
// Lattice sums and Dirac combs.

enum class Lattice { RootQ, CoweightP };

inline Lattice dualLattice(Lattice l) { return l == Lattice::RootQ ? Lattice::CoweightP : Lattice::RootQ; }

// sum over the lattice of e^{2 pi i <element, zeta>}.
struct LatticeSum {
  Lattice over;
};

// sum over the support lattice of delta(zeta - element).
struct DeltaComb {
  Lattice support;
};

inline DeltaComb combReduce(const LatticeSum& s) { return {dualLattice(s.over)}; }

// Membership of a point in the comb support. Points of h are written in the
// fundamental coweight basis, points of h* in root coordinates, so both
// supports are the integral points.
inline bool onCombSupport(const DeltaComb&, const Rational& x1, const Rational& x2) {
  return isInteger(x1) && isInteger(x2);
}

// Truncated lattice sum over coordinates m in [-radius, radius)^2. The point
// zeta is given in the coordinates dual to the lattice basis.
inline ComplexL truncatedLatticeSum(const LatticeSum&, long double z1, long double z2, int radius) {
  ComplexL s{0, 0};
  for (int m1 = -radius; m1 < radius; ++m1)
    for (int m2 = -radius; m2 < radius; ++m2) {
      long double a = 2 * std::numbers::pi_v<long double> * (m1 * z1 + m2 * z2);
      s += ComplexL(std::cos(a), std::sin(a));
    }
  return s;
}

// ---------------------------------------------------------------------------
// Symbolic delta reduction. Coset variables mu_v (v an integer id) range over
// h*_R / Q; a SymWeight is a constant weight plus an integral combination of
// them.

struct SymWeight {
  Weight constant;
  std::map<int, std::int64_t> vars;

  static SymWeight variable(int id, std::int64_t n = 1) {
    SymWeight s;
    if (n != 0) s.vars[id] = n;
    return s;
  }
  SymWeight() = default;
  SymWeight(const Weight& w) : constant(w) {}  // NOLINT(google-explicit-constructor)

  friend SymWeight operator+(SymWeight a, const SymWeight& b) {
    a.constant += b.constant;
    for (const auto& [v, n] : b.vars) {
      auto& slot = a.vars[v];
      slot += n;
      if (slot == 0) a.vars.erase(v);
    }
    return a;
  }
  friend SymWeight operator-(const SymWeight& a) {
    SymWeight r;
    r.constant = -a.constant;
    for (const auto& [v, n] : a.vars) r.vars[v] = -n;
    return r;
  }
  friend SymWeight operator-(const SymWeight& a, const SymWeight& b) { return a + (-b); }
  friend bool operator==(const SymWeight&, const SymWeight&) = default;

  // Normal form of the class of +-(this) modulo Q: leading variable
  // coefficient positive, constant reduced to its coset representative.
  SymWeight deltaNormal() const {
    SymWeight s = *this;
    bool flip = false;
    if (!s.vars.empty()) {
      flip = s.vars.begin()->second < 0;
    } else {
      Weight a = cosetRepresentative(s.constant), b = cosetRepresentative(-s.constant);
      flip = b < a;
    }
    if (flip) s = -s;
    s.constant = cosetRepresentative(s.constant);
    return s;
  }
};

inline std::string toString(const SymWeight& s) {
  std::string out;
  for (const auto& [v, n] : s.vars) {
    if (!out.empty()) out += n < 0 ? " - " : " + ";
    else if (n < 0) out += "-";
    std::int64_t a = n < 0 ? -n : n;
    if (a != 1) out += std::to_string(a) + "*";
    out += "mu" + std::to_string(v);
  }
  if (s.constant != weights::zero || out.empty()) out += (out.empty() ? "" : " + ") + toString(s.constant);
  return out;
}

// sum_{xi in P-check} integral of e^{2 pi i <pairing, xi>} poly(mu) dmu, with
// the summation variable xi and the integration variable mu ranging
// independently.
struct SumIntegrand {
  SymWeight pairing;
  FourierPoly poly{1};

  friend SumIntegrand operator*(const SumIntegrand& a, const SumIntegrand& b) {
    return {a.pairing + b.pairing, a.poly * b.poly};
  }
  SumIntegrand conj() const { return {-pairing, poly.conj()}; }
};

// coefficient * delta([argument]) on h*_R / Q.
struct DiracTerm {
  PhaseSum coefficient;
  SymWeight argument;

  bool isZero() const { return coefficient.isZero(); }
  friend bool operator==(const DiracTerm& a, const DiracTerm& b) {
    if (a.isZero() || b.isZero()) return a.isZero() && b.isZero();
    return a.coefficient == b.coefficient && a.argument.deltaNormal() == b.argument.deltaNormal();
  }
};

// Integrate over mu, then collapse the P-check sum into a Q-comb.
inline DiracTerm deltaReduce(const SumIntegrand& s) {
  DiracTerm t{integrateTorus(s.poly), s.pairing.deltaNormal()};
  return t;
}

// ---------------------------------------------------------------------------
// Cone-directed expansion of num / den.

struct ConeSeries {
  FourierPoly numerator{1};
  FourierPoly denominator{1};
  // The expansion runs over frequencies offset from the leading term by
  // elements of -(R>=0 cone1 + R>=0 cone2). cone2 may be zero.
  Coweight cone1{};
  Coweight cone2{};
};

namespace detail {

// Degree a + b of delta = -(a cone1 + b cone2) with a, b >= 0, or nullopt
// when delta lies outside the negated cone.
inline std::optional<Rational> coneDegree(const Coweight& delta, const Coweight& g1, const Coweight& g2) {
  Rational x1(-delta.c1), x2(-delta.c2);
  std::int64_t det = g1.c1 * g2.c2 - g1.c2 * g2.c1;
  if (det == 0) {
    // One-dimensional cone along g1 (g2 collinear or zero).
    if (g1 == Coweight{}) throw DomainError("degenerate expansion cone");
    if (g1.c1 * delta.c2 - g1.c2 * delta.c1 != 0) return std::nullopt;
    Rational a = g1.c1 != 0 ? x1 / Rational(g1.c1) : x2 / Rational(g1.c2);
    if (a < 0) return std::nullopt;
    return a;
  }
  Rational a = (x1 * g2.c2 - x2 * g2.c1) / Rational(det);
  Rational b = (x2 * g1.c1 - x1 * g1.c2) / Rational(det);
  if (a < 0 || b < 0) return std::nullopt;
  return a + b;
}

}  // namespace detail

// Partial sum of the cone expansion: every term of 1/den whose cone degree is
// at most order times the smallest positive degree of the expansion variable,
// multiplied by the numerator.
inline FourierPoly coneExpand(const ConeSeries& s, int order) {
  if (order < 0) throw std::invalid_argument("expansion order must be nonnegative");
  const auto& den = s.denominator.terms();
  if (den.empty()) throw DomainError("zero denominator in cone series");
  const Coweight* lead = nullptr;
  for (const auto& [f0, c0] : den) {
    bool ok = true;
    for (const auto& [f, c] : den)
      if (f != f0 && !detail::coneDegree(f - f0, s.cone1, s.cone2)) {
        ok = false;
        break;
      }
    if (ok) {
      lead = &f0;
      break;
    }
  }
  if (!lead) throw DomainError("non-invertible leading term: no denominator term dominates the cone");
  auto unit = den.at(*lead).asSignedPhase();
  if (!unit) throw DomainError("non-invertible leading term: coefficient is not a signed phase");
  PhaseSum c0inv = PhaseSum(unit->first.inverse(), unit->second);

  // den = c0 e(f0) (1 - r)
  FourierPoly r;
  std::optional<Rational> dmin;
  for (const auto& [f, c] : den) {
    if (f == *lead) continue;
    r += FourierPoly::monomial(f - *lead, -(c * c0inv));
    Rational d = *detail::coneDegree(f - *lead, s.cone1, s.cone2);
    if (!dmin || d < *dmin) dmin = d;
  }
  auto truncate = [&](const FourierPoly& p, const Rational& bound) {
    FourierPoly t;
    for (const auto& [f, c] : p.terms())
      if (*detail::coneDegree(f, s.cone1, s.cone2) <= bound) t += FourierPoly::monomial(f, c);
    return t;
  };
  FourierPoly inv = 1;
  if (dmin) {
    Rational bound = Rational(order) * *dmin;
    FourierPoly power = 1;
    for (int n = 1; n <= order; ++n) {
      power = truncate(power * r, bound);
      if (power.isZero()) break;
      inv += power;
    }
  }
  return s.numerator * FourierPoly::monomial(-*lead, c0inv) * inv;
}

inline ComplexL evalNumeric(const ConeSeries& s, long double mu1, long double mu2) {
  return evalNumeric(s.numerator, mu1, mu2) / evalNumeric(s.denominator, mu1, mu2);
}

}  // namespace sl3mm
