#pragma once

#include <vector>

#include "qm/forms.hpp"

namespace qm {

// Quasimodular form of weight w, stored by its E2-decomposition
// f = sum_{l=0}^{s} E2^l h_l with h_l modular of weight w - 2l.  The top
// component is nonzero up to truncation (depth is normalized downward
// otherwise; vanishing to truncation is of course not a proof of exact
// vanishing).  Immutable; the full expansion is computed once.
class QuasiForm {
 public:
  QuasiForm(int weight, std::vector<QSeries> components);

  static QuasiForm from_modular(const ModularForm& f) {
    return QuasiForm(f.weight, {f.expansion});
  }
  static QuasiForm constant(const Rational& c, Idx order) {
    return QuasiForm(0, {QSeries::constant(c, order)});
  }

  int weight() const { return weight_; }
  int depth() const { return int(components_.size()) - 1; }
  const QSeries& component(int l) const { return components_.at(std::size_t(l)); }
  const std::vector<QSeries>& components() const { return components_; }
  const QSeries& expansion() const { return expansion_; }
  Idx truncation() const { return expansion_.truncation(); }
  bool is_zero() const { return components_.size() == 1 && components_[0].is_zero(); }

  QuasiForm scaled(const Rational& c) const;
  // leading coefficient of the expansion scaled to 1
  QuasiForm normalized() const;
  QuasiForm truncated(Idx t) const;

  friend QuasiForm operator+(const QuasiForm& a, const QuasiForm& b);
  friend QuasiForm operator-(const QuasiForm& a, const QuasiForm& b);

  // multiplication by a modular form (componentwise)
  QuasiForm times_modular(const QSeries& g, int gweight) const;
  // multiplication by E2 (shifts the decomposition up one level)
  QuasiForm times_e2() const;
  // exact division of every component by Delta^k; errors if some component
  // has vanishing order < k, which is how table transcription mistakes in
  // weight-lowering operators surface
  QuasiForm div_delta_power(int k) const;

 private:
  int weight_;
  std::vector<QSeries> components_;
  QSeries expansion_;
};

// Serre derivative d_p f = f' - (p/12) E2 f.  The subscript p is the
// caller's choice; for a depth-<=r form of weight w, p = w - r keeps the
// depth bound (the output has weight w + 2 and depth <= r).
QSeries serre_derivative(const QSeries& f, int weight_parameter);
ZUSeries serre_derivative(const ZUSeries& f, int weight_parameter);
QuasiForm serre_derivative(const QuasiForm& f, int weight_parameter);

// Iterated derivative d^k with the subscript convention
// d^{k+1}_p = d_{p+2k} (d^k_p f).
template <class T>
T serre_chain(const T& f, int weight_parameter, int k) {
  T g = f;
  for (int i = 0; i < k; ++i) g = serre_derivative(g, weight_parameter + 2 * i);
  return g;
}

// Exact resolution of a q-expansion against the basis {E2^l E4^a E6^b} of
// QM_w^r.  Errors when the series is not in the space (nonzero residual up
// to truncation) or the truncation cannot pin the coefficients.
QuasiForm decompose_e2(const QSeries& f, int w, int r);

// The transformation components g_0..g_s of a depth-s form, with the
// constant 6/(pi i) carried as the formal monomial 12u:
//   binom(s,l) g_l = (12u)^l sum_m binom(l+m, m) E2^m h_{l+m},  g_0 = f.
struct GComponents {
  int weight = 0;
  int depth_bound = 0;            // the s used in the binomials
  std::vector<ZUSeries> g;        // size depth_bound + 1
};
GComponents g_components(const QuasiForm& f);
GComponents g_components(const QuasiForm& f, int r);  // embedded at depth r

// Rational parts: g_l = u^l * (rational series); returns those series.
std::vector<QSeries> g_rational_parts(const QuasiForm& f, int r);

// q-valuations lambda_0..lambda_s of the components; errors if some g_l is
// identically zero up to truncation (its order is then undeterminable).
std::vector<Idx> vanishing_orders(const GComponents& gc);

struct MonodromyPair {
  std::vector<std::vector<long long>> rhoS;  // anti-diagonal, (-1)^k entries
  std::vector<std::vector<long long>> rhoT;  // lower-triangular Pascal
};
MonodromyPair rho_matrices(int r);

// The quasimodular vector (f_0, ..., f_r),
//   f_k = sum_{l<=min(k,s)} binom(k,l) z^{k-l} g_l.
std::vector<ZUSeries> quasivector(const QuasiForm& f, int r);

}  // namespace qm
