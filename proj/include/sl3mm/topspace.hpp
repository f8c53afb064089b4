#pragma once

// Ground-state (top-space) weight multiplicities of positive-energy modules,
// used for weight-support plots.

#include "sl3mm/modlabel.hpp"

#include <gmpxx.h>

#include <map>
#include <tuple>
#include <vector>

namespace sl3mm {

// dim L(lambda)_{lambda - p alpha1 - q alpha2} for the irreducible sl3 module,
// as the rank of the Shapovalov form on the Verma module. Vectors are written
// in the PBW basis f1^a f3^c f2^b v with f3 = [f2, f1]. Gram entries grow
// factorially, so the arithmetic is in GMP rationals.
class HighestWeightMultiplicities {
 public:
  explicit HighestWeightMultiplicities(const Weight& lambda)
      : lambda1_(toMpq(lambda.d1)), lambda2_(toMpq(lambda.d2)) {}

  std::int64_t at(std::int64_t p, std::int64_t q) {
    if (p < 0 || q < 0) return 0;
    auto key = std::make_pair(p, q);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::vector<Pbw> basis;
    for (std::int64_t c = 0; c <= std::min(p, q); ++c) basis.push_back({p - c, c, q - c});
    std::vector<std::vector<mpq_class>> gram(basis.size(), std::vector<mpq_class>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) gram[i][j] = pairing(basis[i], basis[j]);
    return cache_[key] = rank(std::move(gram));
  }

 private:
  using Pbw = std::array<std::int64_t, 3>;  // exponents (a, c, b)
  using Vec = std::map<Pbw, mpq_class>;

  static mpq_class toMpq(const Rational& r) {
    mpq_class q(mpz_class(std::to_string(r.numerator())), mpz_class(std::to_string(r.denominator())));
    q.canonicalize();
    return q;
  }

  static void accumulate(Vec& v, const Pbw& m, const mpq_class& x) {
    if (x == 0) return;
    auto& s = v[m];
    s += x;
    if (s == 0) v.erase(m);
  }

  // Cartan eigenvalues (alpha1-check, alpha2-check) of the monomial's weight.
  std::pair<mpq_class, mpq_class> cartan(const Pbw& m) const {
    auto [a, c, b] = m;
    // f1 lowers by alpha1 = (2,-1), f2 by alpha2 = (-1,2), f3 by alpha1 + alpha2 = (1,1)
    return {lambda1_ - (2 * a - b + c), lambda2_ - (-a + 2 * b + c)};
  }

  // f_i . m for i = 1, 2, 3
  static Vec lower(int i, const Pbw& m) {
    Vec out;
    auto [a, c, b] = m;
    if (i == 1) accumulate(out, {a + 1, c, b}, mpq_class(1));
    else if (i == 3) accumulate(out, {a, c + 1, b}, mpq_class(1));
    else {
      accumulate(out, {a, c, b + 1}, mpq_class(1));
      if (a > 0) accumulate(out, {a - 1, c + 1, b}, mpq_class(a));
    }
    return out;
  }

  static Vec lowerVec(int i, const Vec& v) {
    Vec out;
    for (const auto& [m, x] : v)
      for (const auto& [n, y] : lower(i, m)) accumulate(out, n, x * y);
    return out;
  }

  // e_i . m, by peeling the leftmost PBW factor.
  Vec raise(int i, const Pbw& m) {
    auto key = std::make_tuple(i, m[0], m[1], m[2]);
    if (auto it = raiseMemo_.find(key); it != raiseMemo_.end()) return it->second;
    Vec out;
    auto [a, c, b] = m;
    int lead;
    Pbw rest = m;
    if (a > 0) { lead = 1; --rest[0]; }
    else if (c > 0) { lead = 3; --rest[1]; }
    else if (b > 0) { lead = 2; --rest[2]; }
    else return raiseMemo_[key] = out;  // e_i kills the highest-weight vector
    // e_i f_lead rest = f_lead (e_i rest) + [e_i, f_lead] rest
    for (const auto& [n, x] : lowerVec(lead, raise(i, rest))) accumulate(out, n, x);
    auto h = cartan(rest);
    Vec br;
    if (i == lead) {
      // [e_i, f_i] = h_i, with h3 = h1 + h2
      mpq_class ev = i == 1 ? h.first : i == 2 ? h.second : h.first + h.second;
      accumulate(br, rest, ev);
    } else if (i == 1 && lead == 3) {
      // [e1, f3] = -f2
      for (const auto& [n, x] : lower(2, rest)) accumulate(br, n, -x);
    } else if (i == 2 && lead == 3) {
      // [e2, f3] = f1
      br = lower(1, rest);
    } else if (i == 3 && lead == 1) {
      // [e3, f1] = -e2
      for (const auto& [n, x] : raise(2, rest)) accumulate(br, n, -x);
    } else if (i == 3 && lead == 2) {
      // [e3, f2] = e1
      br = raise(1, rest);
    }
    // [e1, f2] = [e2, f1] = 0
    for (const auto& [n, x] : br) accumulate(out, n, x);
    return raiseMemo_[key] = out;
  }

  Vec raiseVec(int i, const Vec& v) {
    Vec out;
    for (const auto& [m, x] : v)
      for (const auto& [n, y] : raise(i, m)) accumulate(out, n, x * y);
    return out;
  }

  // <x v, y v> with the anti-involution f_i <-> e_i.
  mpq_class pairing(const Pbw& x, const Pbw& y) {
    Vec v{{y, mpq_class(1)}};
    auto [a, c, b] = x;  // adjoint of f1^a f3^c f2^b is e2^b e3^c e1^a; apply e1 first
    for (std::int64_t k = 0; k < a; ++k) v = raiseVec(1, v);
    for (std::int64_t k = 0; k < c; ++k) v = raiseVec(3, v);
    for (std::int64_t k = 0; k < b; ++k) v = raiseVec(2, v);
    auto it = v.find({0, 0, 0});
    return it == v.end() ? mpq_class(0) : it->second;
  }

  static std::int64_t rank(std::vector<std::vector<mpq_class>> m) {
    std::int64_t r = 0;
    std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    for (std::size_t col = 0; col < cols && r < static_cast<std::int64_t>(rows); ++col) {
      std::size_t piv = static_cast<std::size_t>(r);
      while (piv < rows && m[piv][col] == 0) ++piv;
      if (piv == rows) continue;
      std::swap(m[piv], m[static_cast<std::size_t>(r)]);
      const auto& pr = m[static_cast<std::size_t>(r)];
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == static_cast<std::size_t>(r) || m[i][col] == 0) continue;
        mpq_class f = m[i][col] / pr[col];
        for (std::size_t k = col; k < cols; ++k) m[i][k] -= f * pr[k];
      }
      ++r;
    }
    return r;
  }

  mpq_class lambda1_;
  mpq_class lambda2_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> cache_;
  std::map<std::tuple<int, std::int64_t, std::int64_t, std::int64_t>, Vec> raiseMemo_;
};

struct WeightPoint {
  Weight weight;
  std::int64_t multiplicity{0};
};

// Nonzero top-space multiplicities of a positive-energy module in the window
// base + x alpha1 + y alpha2, |x|, |y| <= radius (base: the highest weight or the coset).
inline std::vector<WeightPoint> topSpaceSupport(const ModuleLabel& label, const Level& lvl, int radius) {
  if (radius < 0 || radius > 30) throw std::invalid_argument("radius must lie in [0, 30]");
  ModuleLabel m = canonicalize(label, lvl);
  if (!(m.flow == Coweight{})) throw DomainError("weight support is only tabulated for positive-energy modules; " + toString(m) + " is not");
  std::vector<WeightPoint> out;
  auto emit = [&](const Weight& pre, std::int64_t n) {
    if (n != 0) out.push_back({d6Apply(m.twist, pre), n});
  };
  const Core& c = m.core;
  switch (c.kind) {
    case CoreKind::HW: {
      HighestWeightMultiplicities h(c.lambda);
      for (int p = 0; p <= radius; ++p)
        for (int q = 0; q <= radius; ++q)
          emit(c.lambda - Rational(p) * weights::alpha1 - Rational(q) * weights::alpha2, h.at(p, q));
      break;
    }
    case CoreKind::Semi: {
      // constant along alpha1-rows, read off far along the row from the reducible member
      HighestWeightMultiplicities h(c.lambda), hr(dotAction(d6::w1, c.lambda));
      Weight base = c.semiWeight();
      for (int y = -radius; y <= radius; ++y) {
        Weight probe = c.lambda + Rational(-radius - 1) * weights::alpha1 + Rational(y) * weights::alpha2;
        auto [p, q] = rootCoordinates(c.lambda - probe);
        auto [pr, qr] = rootCoordinates(dotAction(d6::w1, c.lambda) - d6Apply(d6::w1, probe));
        std::int64_t n = h.at(p.numerator(), q.numerator()) + hr.at(pr.numerator(), qr.numerator());
        for (int x = -radius; x <= radius; ++x) emit(base + Rational(x) * weights::alpha1 + Rational(y) * weights::alpha2, n);
      }
      break;
    }
    case CoreKind::Rel: {
      std::int64_t n = c.lambda.d2.numerator() + 1;
      for (int x = -radius; x <= radius; ++x)
        for (int y = -radius; y <= radius; ++y)
          emit(c.coset + Rational(x) * weights::alpha1 + Rational(y) * weights::alpha2, n);
      break;
    }
  }
  return out;
}

}  // namespace sl3mm
