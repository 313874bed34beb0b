#pragma once

#include "qm/mde.hpp"

namespace qm {

// Decreasing exponent tuple lam_0 >= ... >= lam_r >= 0 subject to the
// balanced-form constraints: lam_l < dim QM_{w-2l}^{r-l} and
// sum lam_l = dim QM_w^r - 1.
struct ExponentTuple {
  int w = 0;
  int r = 0;
  std::vector<Idx> lams;

  void validate() const;
  Idx sum() const;
};

// Normalized operator d^{r+1} + a4 E4 d^{r-1} + ... + a_{2r+2} E_{2r+2}
// whose indicial polynomial is prod (x - lam_l).  Requires r <= 4 and
// w(r+1) = 0 (mod 12); the a's enter the indicial identity linearly and are
// solved exactly.  Depth >= 5 admits no such normalized equation (the root
// sum would exceed the space's dimension) and is rejected.
MDEOperator mde_from_exponents(const ExponentTuple& t, Idx order);

// Nonzero form in the kernel of the map sending f to the first lam_l
// coefficients of each transformation component g_l; the realized orders of
// the g_l are then >= lam_l.  When the kernel has dimension > 1 the
// reduced-echelon representative with the earliest pivot in the global
// basis order (E2 power ascending, then e4 descending) is taken.  Output is
// normalized to leading coefficient 1.
QuasiForm balanced_form(const ExponentTuple& t, Idx order);

// Requested exponents versus the orders realized by the constructed form
// (realized orders can exceed requested ones).
struct BalancedOrders {
  std::vector<Idx> requested;
  std::vector<Idx> observed;  // -1 where g_l vanishes identically to truncation
};
BalancedOrders observed_orders(const QuasiForm& f, const ExponentTuple& t);

// Normalized operator annihilating Delta^{w/12} with x = w/12 as an
// (r+1)-fold indicial root, built from the recursion
//   Q_0 = 1,  Q_k = ((r+1-k)/12) E2 Q_{k-1} + d_{k-1} Q_{k-1},
// followed by elimination of E2 powers of Q_{r+1} against Q_{r-1}..Q_0.
// Its fundamental system is { z^l Delta^{w/12} }.
MDEOperator delta_power_operator(int w, int r, Idx order);

// The residue-class equations away from w(r+1) = 0 (mod 12), transcribed as
// data and validated against kernel-built balanced forms by the test suite:
//   depth 0: one equation per residue class of w mod 12 (lams ignored),
//   depth 1: classes a = 0,2,4 mod 6, single exponent lam_0,
//   depth 2: classes a = 0,2 mod 4, exponents (lam_0,lam_1,lam_2),
//   depth 3: classes a = 0,2,4 mod 6, exponents (lam_0..lam_3), not all equal.
MDEOperator residue_equation(int depth, int w, const std::vector<Idx>& lams,
                             Idx order);

// The annihilated depth-0 form for each residue class (E4^x E6^y Delta^k).
QuasiForm residue_class_form(int w, Idx order);

// Weight-raising step for depth-3 residue class w = 4 (mod 6):
//   f = d_{w-7}^2 g - (lam - (w+5)/12)(lam - (w+7)/12) E4 g
// applied to a balanced form g of weight w - 4 whose tuple has lam
// diminished by one; restores the exponent to lam.
QuasiForm lift4(const QuasiForm& g, int w, Idx lam);

}  // namespace qm
