#pragma once

#include <map>
#include <utility>
#include <vector>

#include "qm/rational.hpp"

namespace qm {

// Bivariate polynomial in the formal symbols z and u, where u stands for
// 1/(2*pi*i).  Coefficient domain for series carrying fundamental systems.
// No zero terms are ever stored.
class ZUPoly {
 public:
  using Key = std::pair<int, int>;  // (z degree, u degree)

  ZUPoly() = default;
  explicit ZUPoly(const Rational& c) {
    if (!qm::is_zero(c)) terms_[{0, 0}] = c;
  }

  static ZUPoly monomial(int zdeg, int udeg, const Rational& c) {
    if (zdeg < 0 || udeg < 0) throw error("negative degree in ZU monomial");
    ZUPoly p;
    if (!qm::is_zero(c)) p.terms_[{zdeg, udeg}] = c;
    return p;
  }

  bool is_zero() const { return terms_.empty(); }

  // True when the polynomial is a plain rational (z- and u-degree 0).
  bool is_rational() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
  }

  Rational rational_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_rational()) throw error("ZU polynomial is not a rational constant");
    return terms_.begin()->second;
  }

  Rational coeff(int zdeg, int udeg) const {
    auto it = terms_.find({zdeg, udeg});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  int z_degree() const {  // -1 for the zero polynomial
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, k.first);
    return d;
  }

  int u_degree() const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, k.second);
    return d;
  }

  const std::map<Key, Rational>& terms() const { return terms_; }

  ZUPoly& operator+=(const ZUPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  ZUPoly& operator-=(const ZUPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }

  friend ZUPoly operator+(ZUPoly a, const ZUPoly& b) { return a += b; }
  friend ZUPoly operator-(ZUPoly a, const ZUPoly& b) { return a -= b; }
  friend ZUPoly operator-(const ZUPoly& a) {
    ZUPoly r;
    for (const auto& [k, c] : a.terms_) r.terms_[k] = -c;
    return r;
  }

  friend ZUPoly operator*(const ZUPoly& a, const ZUPoly& b) {
    ZUPoly r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_)
        r.add_term({ka.first + kb.first, ka.second + kb.second}, ca * cb);
    return r;
  }

  friend ZUPoly operator*(const ZUPoly& a, const Rational& c) {
    ZUPoly r;
    if (qm::is_zero(c)) return r;
    for (const auto& [k, ac] : a.terms_) r.terms_[k] = ac * c;
    return r;
  }
  friend ZUPoly operator*(const Rational& c, const ZUPoly& a) { return a * c; }

  bool operator==(const ZUPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const ZUPoly& o) const { return !(*this == o); }

  // Substitutes z -> z + 1 (binomial expansion of each z power).
  ZUPoly shift_z() const;

 private:
  void add_term(const Key& k, const Rational& c) {
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      if (!qm::is_zero(c)) terms_.emplace(k, c);
    } else {
      it->second += c;
      if (qm::is_zero(it->second)) terms_.erase(it);
    }
  }

  std::map<Key, Rational> terms_;
};

inline ZUPoly ZUPoly::shift_z() const {
  ZUPoly r;
  for (const auto& [k, c] : terms_) {
    auto [a, b] = k;
    Rational binom(1);
    for (int j = a; j >= 0; --j) {
      r.add_term({j, b}, c * binom);
      // next: binom(a, j-1) = binom(a, j) * j / (a - j + 1)
      if (j > 0) binom = binom * j / (a - j + 1);
    }
  }
  return r;
}

}  // namespace qm
