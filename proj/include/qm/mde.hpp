#pragma once

#include <vector>

#include "qm/quasi.hpp"

namespace qm {

// Modular differential operator of order r+1 acting on weight-w objects:
//   K f = B_m d^{r+1} f + B_{m+2} d^r f + ... + B_{m+2r+2} f,
// with d the iterated Serre derivative starting at subscript w - r and
// B_{m+2l} modular of weight m + 2l, B_m(i oo) = 1.  The operator stores w
// so callers cannot mismatch derivative subscripts.
struct MDEOperator {
  int base_weight = 0;  // m
  int r = 0;            // order is r + 1
  int w = 0;            // weight of the solutions
  std::vector<ModularForm> coeffs;  // B_m .. B_{m+2r+2}, size r + 2

  int order() const { return r + 1; }
  int weight_parameter() const { return w - r; }
  Idx coeff_truncation() const;
  // rebuilds the coefficient expansions at a higher order; requires every
  // coefficient to carry its monomial resolution
  MDEOperator at_order(Idx order) const;
};

MDEOperator make_operator(int base_weight, int r, int w,
                          std::vector<ModularForm> coeffs);

QSeries apply_operator(const MDEOperator& K, const QSeries& f);
ZUSeries apply_operator(const MDEOperator& K, const ZUSeries& f);

// Indicial polynomial p(x) = sum_l B_{m+2l}(i oo) q_{r+1-l}(x), where
// q_j(x) = prod_{i<j} (x - (w - r + 2i)/12).  Returned with ascending
// powers; degree r+1 with leading coefficient B_m(i oo) = 1.
std::vector<Rational> indicial_polynomial(const MDEOperator& K);

Rational poly_eval(const std::vector<Rational>& poly, const Rational& x);

// All roots when they are non-negative integers, in decreasing order with
// multiplicity.  all_integer is false when deflation by integer roots does
// not exhaust the polynomial.
struct IndicialRoots {
  std::vector<Idx> roots;
  bool all_integer = false;
};
IndicialRoots indicial_roots(const MDEOperator& K);

// Power-series solution q^{lam0}(1 + ...) correct for exponents < order.
// Requires lam0 to be a root with p(lam0 + n) != 0 for all n >= 1; a
// resonance (larger root at integer distance) is an error -- use
// frobenius_fundamental instead.
QSeries frobenius_leading(const MDEOperator& K, Idx lam0, Idx order);

// Fundamental system for an operator whose exponents are non-negative
// integers lam_0 >= ... >= lam_r.  The l-th solution is homogeneous of total
// degree l in (z, u) with z-degree <= l; z-power corrections appear only
// where a resonance obstruction forces them, and each solution is reduced
// against the earlier ones (zero where possible) and scaled so its lowest
// graded piece is monic.
struct FundamentalSystem {
  std::vector<ZUSeries> solutions;
  std::vector<Idx> exponents;  // decreasing, with multiplicity
};
FundamentalSystem frobenius_fundamental(const MDEOperator& K, Idx order);

// det(F, dF, ..., d^r F) in the ZU coefficient ring, d = d_{w-r} iterated.
// For a quasimodular vector this is a modular form of weight w(r+1); for a
// fundamental system of a normalized operator with integer exponents it is
// a nonzero constant times Delta^{w(r+1)/12}.
ZUSeries wronskian(const std::vector<ZUSeries>& system, int w, int r);

}  // namespace qm
