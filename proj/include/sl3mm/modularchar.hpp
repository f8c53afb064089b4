#pragma once

// Characters and modular S-transforms for the (u,v) = (3,2) minimal model.
// Characters are kept as (prefactor, Dirac comb) records; S-matrix entries
// are exact Fourier data in the free torus parameter mu'.

#include "sl3mm/modlabel.hpp"
#include "sl3mm/torusfourier.hpp"

#include <gmpxx.h>

#include <array>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace sl3mm {

inline const Level& level32() {
  static const Level l{3, 2};
  return l;
}

// Modular data only exists at (3,2): at every other non-integrable level the
// characters of a highest-weight module and its conjugate are linearly
// dependent.
inline void requireModularLevel(const Level& lvl) {
  if (lvl == level32()) return;
  if (lvl.v > 1)
    throw LinearDependenceError("no S-matrix or Verlinde formula at level (u,v)=(" + std::to_string(lvl.u) + "," +
                                std::to_string(lvl.v) +
                                "): the relaxed characters there are linearly dependent (only (3,2) avoids this)");
  throw DomainError("modular data at integrable levels (v = 1) is outside the relaxed standard-module formalism");
}

// ---------------------------------------------------------------------------
// q-series

struct QSeries {
  Rational leadingExponent{0};
  std::vector<mpz_class> coefficients;  // coefficient of q^{leadingExponent + n}

  std::size_t truncationOrder() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
};

inline std::string toString(const QSeries& s, std::size_t maxTerms = 6) {
  std::string body;
  std::size_t shown = 0;
  for (std::size_t n = 0; n < s.coefficients.size() && shown < maxTerms; ++n) {
    const mpz_class& c = s.coefficients[n];
    if (c == 0) continue;
    if (shown > 0) body += c < 0 ? " - " : " + ";
    else if (c < 0) body += "-";
    mpz_class a = abs(c);
    if (n == 0) body += a.get_str();
    else {
      if (a != 1) body += a.get_str() + " ";
      body += n == 1 ? "q" : "q^" + std::to_string(n);
    }
    ++shown;
  }
  body += " + ...";
  return "q^(" + toString(s.leadingExponent) + ") * (" + body + ")";
}

// 1/eta(q)^4 = q^{-1/6} sum_n p_4(n) q^n, from n a(n) = 4 sum_{k=1}^n sigma(k) a(n-k).
inline QSeries etaInvFourth(std::size_t order) {
  if (order > 10000) throw std::invalid_argument("etaInvFourth: order must be at most 10^4");
  std::vector<mpz_class> sigma(order + 1, 0);
  for (std::size_t d = 1; d <= order; ++d)
    for (std::size_t m = d; m <= order; m += d) sigma[m] += static_cast<unsigned long>(d);
  QSeries s{Rational(-1, 6), std::vector<mpz_class>(order + 1, 0)};
  s.coefficients[0] = 1;
  for (std::size_t n = 1; n <= order; ++n) {
    mpz_class acc = 0;
    for (std::size_t k = 1; k <= n; ++k) acc += sigma[k] * s.coefficients[n - k];
    acc *= 4;
    s.coefficients[n] = acc / static_cast<unsigned long>(n);
  }
  return s;
}

// Multiplicity of any weight of R[mu] at grade n above the ground states:
// the character is y^{-3/2} eta^{-4} sum_{nu in [mu]} z^nu, so every weight
// space at grade n has dimension p_4(n).
inline mpz_class relaxedWeightMultiplicity(std::size_t grade) { return etaInvFourth(grade).coefficients[grade]; }

// ---------------------------------------------------------------------------
// S-matrix entries

// sigma^flow R[coset] at (3,2).
struct StandardCharacter {
  Coweight flow;
  Weight coset;
};

enum class SEntryKind { Standard, Semirelaxed, HighestWeight };

// num / den as a function of mu', expanded (when needed) along the cone.
struct SMatrixEntry {
  SEntryKind kind{SEntryKind::Standard};
  ConeSeries value;
};

// The whole exponent 3 kappa(xi,xi')/2 - <mu,xi'> - <mu',xi> with every argument concrete.
inline PhaseSum standardSValue(const Coweight& xi, const Weight& mu, const Coweight& xip, const Weight& mup) {
  return PhaseSum::phase(Rational(3, 2) * killingCoweight(xi, xip) - pairing(mu, xip) - pairing(mup, xi));
}

// The same entry as a Fourier monomial in mu'.
inline FourierPoly standardSPoly(const Coweight& xi, const Weight& mu, const Coweight& xip) {
  return FourierPoly::monomial(-xi, PhaseSum::phase(Rational(3, 2) * killingCoweight(xi, xip) - pairing(mu, xip)));
}

inline SMatrixEntry standardSEntry(const Coweight& xi, const Weight& mu, const Coweight& xip) {
  return {SEntryKind::Standard, ConeSeries{standardSPoly(xi, mu, xip), 1, {}, {}}};
}

// 2(1 + cos 2pi<mu',w1> + cos 2pi<mu',w2> + cos 2pi<mu',w1-w2>) as seven frequencies.
inline FourierPoly vacuumDenominator() {
  FourierPoly d = 2;
  for (Coweight f : {coweights::omega1, coweights::omega2, coweights::omega1 - coweights::omega2})
    d += FourierPoly::monomial(f) + FourierPoly::monomial(-f);
  return d;
}

// The default completion cone for highest-weight entries.
inline std::pair<Coweight, Coweight> hwCone() { return {-coweights::omega2, coweights::omega3}; }

namespace detail {

// Spectral flow by theta multiplies an entry by e(3 kappa(theta,xi')/2 - <mu',theta>).
inline SMatrixEntry flowEntry(const Coweight& theta, const Coweight& xip, SMatrixEntry e) {
  e.value.numerator =
      e.value.numerator * FourierPoly::monomial(-theta, PhaseSum::phase(Rational(3, 2) * killingCoweight(theta, xip)));
  return e;
}

// Twisting by g: S(gM; xi', mu') = S(M; g^{-1} xi', g^{-1} mu'). The caller
// supplies the untwisted entry already evaluated at g^{-1} xi'.
inline SMatrixEntry twistEntry(const D6Element& g, SMatrixEntry e) {
  e.value.numerator = e.value.numerator.substituteD6(g);
  e.value.denominator = e.value.denominator.substituteD6(g);
  e.value.cone1 = d6Apply(g, e.value.cone1);
  e.value.cone2 = d6Apply(g, e.value.cone2);
  return e;
}

// S[mu] with no flow and no twist.
inline SMatrixEntry semiEntryUntwisted(const Weight& mu, const Coweight& xip, bool opposite) {
  Coweight dir = opposite ? coweights::omega2 : -coweights::omega2;
  return {SEntryKind::Semirelaxed,
          ConeSeries{standardSPoly({}, mu, xip), FourierPoly(1) + FourierPoly::monomial(coweights::omega2), dir, {}}};
}

// HW(-3/2 omega1), no flow.
inline SMatrixEntry hwBaseEntry(const Coweight& xip) {
  Coweight w1 = coweights::omega1;
  auto [c1, c2] = hwCone();
  return {SEntryKind::HighestWeight,
          ConeSeries{FourierPoly::monomial(-w1, PhaseSum::phase(Rational(3, 2) * killingCoweight(w1, xip))),
                     vacuumDenominator(), c1, c2}};
}

}  // namespace detail

// sigma^xi g(S[mu]) against sigma^{xi'} R[mu'], mu on the line -3/2 omega1 + C alpha1.
// The default cone is -g(omega2-check); opposite = true expands the other way.
inline SMatrixEntry semiRelaxedSEntry(const Coweight& xi, const Coweight& xip, const Weight& mu, const D6Element& g,
                                      bool opposite = false) {
  semiParameterOf(m32FamilyWeight(), mu);  // validates the line
  auto base = detail::semiEntryUntwisted(mu, d6Apply(d6Inverse(g), xip), opposite);
  return detail::flowEntry(xi, xip, detail::twistEntry(g, base));
}

enum class HWWeight { Zero, MinusThreeHalvesOmega1, MinusThreeHalvesOmega2, MinusHalfRho };

inline Weight weightOf(HWWeight h) {
  switch (h) {
    case HWWeight::Zero: return weights::zero;
    case HWWeight::MinusThreeHalvesOmega1: return {Rational(-3, 2), 0};
    case HWWeight::MinusThreeHalvesOmega2: return {0, Rational(-3, 2)};
    case HWWeight::MinusHalfRho: return {Rational(-1, 2), Rational(-1, 2)};
  }
  return {};
}

inline const std::array<HWWeight, 4>& allHWWeights() {
  static const std::array<HWWeight, 4> a{HWWeight::Zero, HWWeight::MinusThreeHalvesOmega1,
                                         HWWeight::MinusThreeHalvesOmega2, HWWeight::MinusHalfRho};
  return a;
}

// sigma^xi HW(lambda) against sigma^{xi'} R[mu'].
//   HW(-3/2 w1): closed form with the seven-term denominator;
//   HW(0) = sigma^{-w1} HW(-3/2 w1);  HW(-3/2 w2) = d HW(-3/2 w1);
//   HW(-rho/2) = S[-rho/2] - sigma^{w3} HW(0) in the Grothendieck group.
inline SMatrixEntry hwSEntry(const Coweight& xi, HWWeight which, const Coweight& xip) {
  SMatrixEntry e;
  switch (which) {
    case HWWeight::MinusThreeHalvesOmega1: e = detail::hwBaseEntry(xip); break;
    case HWWeight::Zero: e = detail::flowEntry(-coweights::omega1, xip, detail::hwBaseEntry(xip)); break;
    case HWWeight::MinusThreeHalvesOmega2:
      e = detail::twistEntry(d6::d, detail::hwBaseEntry(d6Apply(d6Inverse(d6::d), xip)));
      break;
    case HWWeight::MinusHalfRho: {
      SMatrixEntry semi = detail::semiEntryUntwisted(weightOf(HWWeight::MinusHalfRho), xip, false);
      SMatrixEntry vac = detail::flowEntry(coweights::omega3, xip, hwSEntry({}, HWWeight::Zero, xip));
      // D = y1^{-1} (1 + y1)(1 + y2)(1 + y1/y2), so D / (1 + y2) is explicit.
      FourierPoly cofactor = FourierPoly::monomial(-coweights::omega1) *
                             (FourierPoly(1) + FourierPoly::monomial(coweights::omega1)) *
                             (FourierPoly(1) + FourierPoly::monomial(coweights::omega1 - coweights::omega2));
      auto [c1, c2] = hwCone();
      e = {SEntryKind::HighestWeight,
           ConeSeries{semi.value.numerator * cofactor - vac.value.numerator, vacuumDenominator(), c1, c2}};
      break;
    }
  }
  if (xi == Coweight{}) return e;
  return detail::flowEntry(xi, xip, e);
}

// ---------------------------------------------------------------------------
// Exact unitarity and S^2 by delta reduction. Coset variable 0 is mu, 1 is mu'.

// S(xi, mu; Xi, M) as a function of the running flow Xi (summed over P-check)
// and running coset M (integrated).
inline SumIntegrand standardSRunning(const Coweight& xi, const SymWeight& mu) {
  return {SymWeight(Rational(3, 2) * dualWeight(xi)) - mu, FourierPoly::monomial(-xi)};
}

// 1 / S_vac = 2(1 + three cosines), independent of the running flow.
inline SumIntegrand vacuumInverseRunning() { return {SymWeight{}, vacuumDenominator()}; }

// sum_{xi''} int S(xi,mu; xi'',mu'') conj S(xi'',mu''; xi',mu') dmu''.
inline DiracTerm unitaritySum(const Coweight& xi, const Coweight& xip) {
  auto a = standardSRunning(xi, SymWeight::variable(0));
  auto b = standardSRunning(xip, SymWeight::variable(1)).conj();
  return deltaReduce(a * b);
}

// sum_{xi''} int S(xi,mu; xi'',mu'') S(xi'',mu''; xi',mu') dmu''.
inline DiracTerm sSquaredSum(const Coweight& xi, const Coweight& xip) {
  auto a = standardSRunning(xi, SymWeight::variable(0));
  auto b = standardSRunning(xip, SymWeight::variable(1));
  return deltaReduce(a * b);
}

// ---------------------------------------------------------------------------
// Numeric layer: modular action on (theta, zeta, tau) and character pairings.

using Complex = std::complex<double>;

struct CharacterPoint {
  Complex theta;
  std::array<Complex, 2> zeta;  // coordinates in the fundamental coweight basis
  Complex tau;
};

enum class ModularOp { S, T };

inline Complex killingComplex(const std::array<Complex, 2>& a, const std::array<Complex, 2>& b) {
  return (2.0 * a[0] * b[0] + a[0] * b[1] + a[1] * b[0] + 2.0 * a[1] * b[1]) / 3.0;
}

// Principal branch for arg.
inline CharacterPoint modularAction(ModularOp op, const CharacterPoint& p) {
  if (p.tau.imag() <= 0) throw DomainError("tau must lie in the upper half plane");
  const double pi = std::numbers::pi;
  const double argm1 = std::arg(Complex(-1.0, 0.0));
  if (op == ModularOp::T) return {p.theta - argm1 / (9 * pi), p.zeta, p.tau + 1.0};
  Complex k = killingComplex(p.zeta, p.zeta);
  return {p.theta - k / (2.0 * p.tau) - (2 * std::arg(p.tau) - argm1) / (3 * pi),
          {p.zeta[0] / p.tau, p.zeta[1] / p.tau},
          -1.0 / p.tau};
}

inline Complex etaNumeric(Complex tau) {
  if (tau.imag() <= 0) throw DomainError("tau must lie in the upper half plane");
  const double pi = std::numbers::pi;
  Complex q = std::exp(Complex(0, 2 * pi) * tau);
  Complex prod = 1.0, qn = q;
  for (int n = 1; n < 100000 && std::abs(qn) > 1e-18; ++n) {
    prod *= 1.0 - qn;
    qn *= q;
  }
  return std::exp(Complex(0, 2 * pi / 24) * tau) * prod;
}

// The factor multiplying sum_{xi'} delta(zeta + tau xi - xi') in the character
// of sigma^xi R[mu], at an arbitrary point.
inline Complex standardPrefactor(const StandardCharacter& ch, Complex theta, const std::array<Complex, 2>& zeta,
                                 Complex tau) {
  const double pi = std::numbers::pi;
  std::array<Complex, 2> xi{static_cast<double>(ch.flow.c1), static_cast<double>(ch.flow.c2)};
  std::array<Complex, 2> shifted{zeta[0] + tau * xi[0] / 2.0, zeta[1] + tau * xi[1] / 2.0};
  std::array<Complex, 2> full{zeta[0] + tau * xi[0], zeta[1] + tau * xi[1]};
  auto [t1, t2] = rootCoordinates(ch.coset);
  Complex muPair = toDouble(t1) * full[0] + toDouble(t2) * full[1];
  Complex expo = Complex(0, -3 * pi) * theta + Complex(0, -3 * pi) * killingComplex(xi, shifted) +
                 Complex(0, 2 * pi) * muPair;
  return std::exp(expo) / std::pow(etaNumeric(tau), 4);
}

// Coefficient of delta(zeta + tau xi - test) in the character of sigma^xi R[mu];
// zero when the test point is off the coweight lattice.
inline Complex numericCharacterPairing(const StandardCharacter& ch, const Rational& test1, const Rational& test2,
                                       Complex theta, Complex tau) {
  if (!onCombSupport({Lattice::CoweightP}, test1, test2)) return 0.0;
  std::array<Complex, 2> zeta{toDouble(test1) - tau * static_cast<double>(ch.flow.c1),
                              toDouble(test2) - tau * static_cast<double>(ch.flow.c2)};
  return standardPrefactor(ch, theta, zeta, tau);
}

}  // namespace sl3mm
