#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qm/series.hpp"

namespace qm {

// E4^e4 E6^e6, a monomial in the two generators of the ring of level-one
// modular forms.  Basis order is fixed globally: descending e4 power.
struct ModularMonomial {
  int e4 = 0;
  int e6 = 0;
  int weight() const { return 4 * e4 + 6 * e6; }
  bool operator==(const ModularMonomial& o) const {
    return e4 == o.e4 && e6 == o.e6;
  }
  // descending-e4 order, so map iteration matches the global basis order
  bool operator<(const ModularMonomial& o) const {
    return e4 != o.e4 ? e4 > o.e4 : e6 < o.e6;
  }
};

struct ModularForm {
  int weight = 0;
  QSeries expansion = QSeries::zero(0);
  // present when the form was constructed from (or resolved into) the
  // E4/E6 monomial basis; agrees with the expansion up to its truncation
  std::optional<std::map<ModularMonomial, Rational>> monomials;

  Rational value_at_cusp() const {
    return expansion.truncation() > 0 && expansion.valuation() == 0
               ? expansion.coeff(0)
               : Rational(0);
  }
};

// Exact Bernoulli number B_n for even n >= 2 (B_2 = 1/6, B_4 = -1/30, ...).
Rational bernoulli(int n);

// E_{2k} = 1 - (4k / B_{2k}) sum_{n>=1} sigma_{2k-1}(n) q^n, correct for
// exponents < order.  k = 1 yields the weight-2 quasimodular E_2.
QSeries eisenstein_series(int k, Idx order);
ModularForm eisenstein(int k, Idx order);

QSeries e2_series(Idx order);

// Delta = (E4^3 - E6^2) / 1728, the weight-12 cusp form q - 24q^2 + ...
QSeries delta_series(Idx order);
ModularForm delta(Idx order);

// dim M_w: 0 for negative or odd w and for w = 2; otherwise floor(w/12)+1,
// minus one when w = 2 (mod 12).
int dim_modular(int w);

// All monomials of weight w in descending e4 order; size dim M_w.
std::vector<ModularMonomial> modular_basis(int w);

// q-expansion of a single monomial, correct for exponents < order.
QSeries monomial_series(const ModularMonomial& m, Idx order);

// q-expansion of a monomial combination.
QSeries combination_series(const std::map<ModularMonomial, Rational>& c,
                           int weight, Idx order);

// dim QM_w^r = sum_{k=0}^{r} dim M_{w-2k}, evaluated by the closed form
// with the depth clamped at w/2 (the sum saturates there).
Idx dim_qm(int w, int r);

// Resolves a weight-w modular form given as a q-expansion into the E4/E6
// monomial basis; errors if the series is not modular of that weight to its
// truncation.
std::map<ModularMonomial, Rational> to_monomials(const QSeries& f, int w);

ModularForm make_form(int weight, QSeries expansion);
ModularForm make_form(int weight, const std::map<ModularMonomial, Rational>& c,
                      Idx order);

}  // namespace qm
