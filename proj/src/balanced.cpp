#include "qm/balanced.hpp"

#include "qm/linalg.hpp"

namespace qm {

namespace {

std::vector<Rational> poly_from_roots(const std::vector<Idx>& roots) {
  std::vector<Rational> p{Rational(1)};
  for (Idx r : roots) {
    std::vector<Rational> q(p.size() + 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i + 1] += p[i];
      q[i] -= Rational(long(r)) * p[i];
    }
    p = std::move(q);
  }
  return p;
}

// q_j(x) = prod_{i<j} (x - (w - r + 2i)/12), ascending coefficients
std::vector<Rational> qpoly(int w, int r, int j) {
  std::vector<Rational> p{Rational(1)};
  for (int i = 0; i < j; ++i) {
    std::vector<Rational> q(p.size() + 1);
    for (std::size_t k = 0; k < p.size(); ++k) {
      q[k + 1] += p[k];
      q[k] -= rat(w - r + 2 * i, 12) * p[k];
    }
    p = std::move(q);
  }
  return p;
}

ModularForm zero_form(int weight, Idx order) {
  ModularForm f;
  f.weight = weight;
  f.expansion = QSeries::zero(order);
  f.monomials = std::map<ModularMonomial, Rational>{};
  return f;
}

ModularForm scaled_eisenstein(int k, const Rational& a, Idx order) {
  ModularForm f = eisenstein(k, order);
  f.expansion = f.expansion.scaled(a);
  std::map<ModularMonomial, Rational> mono;
  for (const auto& [m, c] : *f.monomials)
    if (!qm::is_zero(c * a)) mono[m] = c * a;
  f.monomials = mono;
  return f;
}

ModularForm unit_form(Idx order) {
  ModularForm f;
  f.weight = 0;
  f.expansion = QSeries::constant(Rational(1), order);
  f.monomials = std::map<ModularMonomial, Rational>{{{0, 0}, Rational(1)}};
  return f;
}

// E_{2k} for the normalized-operator coefficients; E8 = E4^2 and E10 = E4 E6
// as q-series, but we keep the genuine Eisenstein monomial resolution.
ModularForm eisenstein_coeff(int k, const Rational& a, Idx order) {
  if (qm::is_zero(a)) return zero_form(2 * k, order);
  ModularForm f;
  f.weight = 2 * k;
  f.expansion = eisenstein_series(k, order).scaled(a);
  f.monomials = to_monomials(f.expansion, f.weight);
  return f;
}

ModularForm form_from_monomials(int weight,
                                std::map<ModularMonomial, Rational> mono,
                                Idx order) {
  for (auto it = mono.begin(); it != mono.end();)
    it = qm::is_zero(it->second) ? mono.erase(it) : std::next(it);
  ModularForm f;
  f.weight = weight;
  f.expansion = combination_series(mono, weight, order);
  f.monomials = std::move(mono);
  return f;
}

Rational elementary_symmetric(const std::vector<Idx>& lams, int k) {
  // e_k via the generating product
  std::vector<Rational> e(std::size_t(k) + 1);
  e[0] = Rational(1);
  for (Idx l : lams)
    for (int i = k; i >= 1; --i)
      e[std::size_t(i)] += e[std::size_t(i - 1)] * long(l);
  return e[std::size_t(k)];
}

}  // namespace

Idx ExponentTuple::sum() const {
  Idx s = 0;
  for (Idx l : lams) s += l;
  return s;
}

void ExponentTuple::validate() const {
  if (r < 0 || Idx(lams.size()) != Idx(r) + 1)
    throw error("exponent tuple needs r + 1 entries");
  for (std::size_t i = 0; i < lams.size(); ++i) {
    if (lams[i] < 0) throw error("exponents must be non-negative");
    if (i > 0 && lams[i] > lams[i - 1])
      throw error("exponents must be non-increasing");
    if (lams[i] >= dim_qm(w - 2 * int(i), r - int(i)))
      throw error("exponent lambda_" + std::to_string(i) +
                  " exceeds the dimension bound");
  }
  if (sum() != dim_qm(w, r) - 1)
    throw error("exponent sum must equal dim QM_w^r - 1");
}

MDEOperator mde_from_exponents(const ExponentTuple& t, Idx order) {
  t.validate();
  if (t.r > 4)
    throw error("no normalized equation exists for depth >= 5");
  if ((t.w * (t.r + 1)) % 12 != 0)
    throw error("normalized equation needs w(r+1) divisible by 12");
  // peel prod(x - lam) - q_{r+1} against q_{r-1}, q_{r-2}, ..., q_0: the
  // a-coefficients enter the indicial identity linearly and triangularly
  std::vector<Rational> target = poly_from_roots(t.lams);
  std::vector<Rational> diff = target;
  {
    const auto qr1 = qpoly(t.w, t.r, t.r + 1);
    for (std::size_t i = 0; i < qr1.size(); ++i) diff[i] -= qr1[i];
  }
  if (!qm::is_zero(diff[std::size_t(t.r) + 1]) ||
      !qm::is_zero(diff[std::size_t(t.r)]))
    throw error("exponent data inconsistent with a normalized operator");
  std::vector<Rational> a(std::size_t(t.r));  // a_4 .. a_{2r+2}
  for (int i = 0; i < t.r; ++i) {
    const int deg = t.r - 1 - i;
    a[std::size_t(i)] = diff[std::size_t(deg)];
    const auto qi = qpoly(t.w, t.r, deg);
    for (std::size_t k = 0; k < qi.size(); ++k)
      diff[k] -= a[std::size_t(i)] * qi[k];
  }
  for (const auto& c : diff)
    if (!qm::is_zero(c)) throw error("indicial peel left a residual");

  std::vector<ModularForm> coeffs;
  coeffs.push_back(unit_form(order));
  coeffs.push_back(zero_form(2, order));
  for (int i = 0; i < t.r; ++i)
    coeffs.push_back(eisenstein_coeff(i + 2, a[std::size_t(i)], order));
  return make_operator(0, t.r, t.w, std::move(coeffs));
}

QuasiForm balanced_form(const ExponentTuple& t, Idx order) {
  t.validate();
  if (order <= t.lams[0])
    throw error("order must exceed the leading exponent");
  const int w = t.w, r = t.r;
  struct Col {
    int l;
    ModularMonomial m;
  };
  std::vector<Col> cols;
  for (int l = 0; l <= r; ++l)
    for (const auto& m : modular_basis(w - 2 * l)) cols.push_back({l, m});
  const Idx dim = dim_qm(w, r);
  if (Idx(cols.size()) != dim) throw error("basis size mismatch");

  // the map drops the first lam_l coefficients of each rational part of g_l
  const Idx probe = t.lams[0] + 2;
  std::vector<std::vector<QSeries>> colg;
  for (const auto& c : cols) {
    std::vector<QSeries> comps(std::size_t(c.l) + 1, QSeries::zero(probe));
    comps[std::size_t(c.l)] = monomial_series(c.m, probe);
    colg.push_back(
        g_rational_parts(QuasiForm(w, std::move(comps)), r));
  }
  RatMat m;
  for (int l = 0; l <= r; ++l)
    for (Idx n = 0; n < t.lams[std::size_t(l)]; ++n) {
      RatVec row(cols.size());
      for (std::size_t j = 0; j < cols.size(); ++j)
        row[j] = colg[j][std::size_t(l)].coeff(n);
      m.push_back(std::move(row));
    }
  const std::vector<RatVec> kernel = nullspace(m);
  if (kernel.empty())
    throw error("balanced kernel is trivial");  // cannot happen by dimension
  // canonical choice: reduced-echelon vector with the earliest pivot in the
  // fixed basis order
  const RatVec& pick = kernel.front();
  std::vector<QSeries> components;
  std::size_t j = 0;
  for (int l = 0; l <= r; ++l) {
    std::map<ModularMonomial, Rational> comb;
    for (const auto& mm : modular_basis(w - 2 * l)) {
      if (!qm::is_zero(pick[j])) comb[mm] = pick[j];
      ++j;
    }
    components.push_back(combination_series(comb, w - 2 * l, order));
  }
  return QuasiForm(w, std::move(components)).normalized();
}

BalancedOrders observed_orders(const QuasiForm& f, const ExponentTuple& t) {
  BalancedOrders out;
  out.requested = t.lams;
  for (const auto& g : g_rational_parts(f, t.r))
    out.observed.push_back(g.is_zero() ? -1 : g.valuation());
  return out;
}

MDEOperator delta_power_operator(int w, int r, Idx order) {
  if (w <= 0 || w % 12 != 0) throw error("w must be a positive multiple of 12");
  if (r < 0) throw error("r must be >= 0");
  const Idx t = order + 2;
  // Q_0 = 1; Q_k = ((r+1-k)/12) E2 Q_{k-1} + d_{k-1} Q_{k-1}; the first term
  // vanishes at k = r+1, so Q_{r+1} has depth <= r-1 and the E2 powers can
  // be eliminated against Q_{r-1}, ..., Q_0 by modular-form coefficients.
  std::vector<QuasiForm> Q{QuasiForm::constant(Rational(1), t)};
  for (int k = 1; k <= r + 1; ++k) {
    QuasiForm d = serre_derivative(Q.back(), k - 1);
    if (k != r + 1)
      d = d + Q.back().times_e2().scaled(rat(r + 1 - k, 12));
    Q.push_back(std::move(d));
  }
  std::vector<ModularForm> coeffs;
  coeffs.push_back(unit_form(order));
  coeffs.push_back(zero_form(2, order));
  QuasiForm rem = Q[std::size_t(r) + 1];
  for (int j = 2; j <= r + 1; ++j) {
    const QuasiForm& qj = Q[std::size_t(r + 1 - j)];
    const int target_depth = r + 1 - j;
    QSeries b = QSeries::zero(t);
    if (rem.depth() >= target_depth && !rem.component(target_depth).is_zero()) {
      // top component of Q_{r+1-j} is a nonzero constant
      const QSeries& top = qj.component(target_depth);
      if (top.valuation() != 0) throw error("degenerate elimination pivot");
      b = rem.component(target_depth).scaled(-Rational(1) / top.coeff(0));
    }
    if (rem.depth() > target_depth)
      throw error("depth bookkeeping failed in E2 elimination");
    ModularForm B;
    B.weight = 2 * j;
    B.expansion = b.truncated(order);
    B.monomials = to_monomials(b, 2 * j);
    rem = rem + qj.times_modular(b, 2 * j);
    coeffs.push_back(std::move(B));
  }
  if (!rem.expansion().is_zero())
    throw error("E2 elimination left a residual");
  return make_operator(0, r, w, std::move(coeffs));
}

QuasiForm residue_class_form(int w, Idx order) {
  if (w < 4 || w % 2 != 0) throw error("weight must be even and >= 4");
  const QSeries e4 = eisenstein_series(2, order);
  const QSeries e6 = eisenstein_series(3, order);
  const QSeries dl = delta_series(order);
  auto field = [&](const QSeries& lead, int leadw, int k) {
    return QuasiForm(leadw + 12 * k, {lead * pow(dl, k)});
  };
  switch (w % 12) {
    case 0:  return field(QSeries::constant(Rational(1), order), 0, w / 12);
    case 2:  if (w < 14) throw error("no depth-0 form of weight 2");
             return field(e4 * e4 * e6, 14, (w - 14) / 12);
    case 4:  return field(e4, 4, (w - 4) / 12);
    case 6:  return field(e6, 6, (w - 6) / 12);
    case 8:  return field(e4 * e4, 8, (w - 8) / 12);
    case 10: return field(e4 * e6, 10, (w - 10) / 12);
    default: throw error("odd weight");
  }
}

MDEOperator residue_equation(int depth, int w, const std::vector<Idx>& lams,
                             Idx order) {
  using M = std::map<ModularMonomial, Rational>;
  const auto F = [&](int weight, M mono) {
    return form_from_monomials(weight, std::move(mono), order);
  };
  if (depth == 0) {
    // one first-order equation per residue class of w mod 12
    switch (((w % 12) + 12) % 12) {
      case 0:
        return make_operator(0, 0, w, {unit_form(order), zero_form(2, order)});
      case 2:
        return make_operator(10, 0, w,
                             {F(10, {{{1, 1}, Rational(1)}}),
                              F(12, {{{3, 0}, rat(1, 2)}, {{0, 2}, rat(2, 3)}})});
      case 4:
        return make_operator(4, 0, w,
                             {F(4, {{{1, 0}, Rational(1)}}),
                              F(6, {{{0, 1}, rat(1, 3)}})});
      case 6:
        return make_operator(6, 0, w,
                             {F(6, {{{0, 1}, Rational(1)}}),
                              F(8, {{{2, 0}, rat(1, 2)}})});
      case 8:
        return make_operator(4, 0, w,
                             {F(4, {{{1, 0}, Rational(1)}}),
                              F(6, {{{0, 1}, rat(2, 3)}})});
      case 10:
        return make_operator(10, 0, w,
                             {F(10, {{{1, 1}, Rational(1)}}),
                              F(12, {{{3, 0}, rat(1, 2)}, {{0, 2}, rat(1, 3)}})});
    }
  }
  if (depth == 1) {
    if (lams.size() != 1) throw error("depth 1 takes a single exponent");
    const Idx lam = lams[0];
    const int a = ((w % 6) + 6) % 6;
    if (a % 2 != 0) throw error("weight must be even");
    // ordering constraint: (w-a)/12 <= lam <= (w-a)/6, as exact rationals
    if (Rational(long(lam)) < rat(w - a, 12) || 6 * lam > w - a)
      throw error("exponent out of range for this residue class");
    const Rational l12 = Rational(long(12 * lam));
    if (a == 0) {
      const Rational c = (l12 - (w + 1)) * (l12 - (w - 1)) / 144;
      return make_operator(
          0, 1, w,
          {unit_form(order), zero_form(2, order), scaled_eisenstein(2, -c, order)});
    }
    if (a == 2) {
      const Rational c = (l12 - (w - 1)) * (l12 - (w - 3)) / 144;
      return make_operator(4, 1, w,
                           {F(4, {{{1, 0}, Rational(1)}}),
                            F(6, {{{0, 1}, rat(1, 3)}}),
                            F(8, {{{2, 0}, -c}})});
    }
    // a == 4
    const Rational c = (l12 - (w - 3)) * (l12 - (w - 5)) / 144 - rat(1, 18);
    // 384 Delta = (2/9)(E4^3 - E6^2)
    return make_operator(
        8, 1, w,
        {F(8, {{{2, 0}, Rational(1)}}), F(10, {{{1, 1}, rat(2, 3)}}),
         F(12, {{{3, 0}, -c - rat(2, 9)}, {{0, 2}, rat(2, 9)}})});
  }
  if (depth == 2) {
    if (lams.size() != 3) throw error("depth 2 takes three exponents");
    const int a = ((w % 4) + 4) % 4;
    Idx sum = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (lams[i] < 0 || (i && lams[i] > lams[i - 1]))
        throw error("exponents must be non-increasing and non-negative");
      sum += lams[i];
    }
    if (4 * sum != w - a) throw error("exponent sum must be (w - a)/4");
    const Rational A =
        rat(4 - 3 * (w - a) * (w - a), 144) + elementary_symmetric(lams, 2);
    Rational B(-1);
    for (Idx l : lams) B *= Rational(long(l)) - rat(w - a - 2, 12);
    if (a == 0)
      return make_operator(0, 2, w,
                           {unit_form(order), zero_form(2, order),
                            scaled_eisenstein(2, A, order),
                            scaled_eisenstein(3, B, order)});
    if (a != 2) throw error("depth 2 covers residues 0 and 2 mod 4");
    return make_operator(
        6, 2, w,
        {F(6, {{{0, 1}, Rational(1)}}), F(8, {{{2, 0}, rat(1, 2)}}),
         F(10, {{{1, 1}, A}}),
         F(12, {{{3, 0}, A / 2}, {{0, 2}, (3 * B - A) / 3}})});
  }
  if (depth == 3) {
    if (lams.size() != 4) throw error("depth 3 takes four exponents");
    const int a = ((w % 6) + 6) % 6;
    if (a % 2 != 0) throw error("weight must be even");
    Idx sum = 0;
    bool all_equal = true;
    for (std::size_t i = 0; i < 4; ++i) {
      if (lams[i] < 0 || (i && lams[i] > lams[i - 1]))
        throw error("exponents must be non-increasing and non-negative");
      all_equal = all_equal && lams[i] == lams[0];
      sum += lams[i];
    }
    if (sum != w / 3) throw error("exponent sum must be floor(w/3)");
    if (all_equal) throw error("all-equal exponents are the Delta-power case");
    const Rational s2 = elementary_symmetric(lams, 2);
    const Rational s3 = elementary_symmetric(lams, 3);
    Rational C(1);
    for (Idx l : lams) C *= Rational(long(l)) - rat(w - 3, 12);
    if (a == 0) {
      const Rational A0 = -rat(w * w, 24) + s2 + rat(5, 72);
      const Rational B0 = -rat(w * w * w, 216) + rat(w * w, 72) +
                          rat(w - 2, 6) * s2 - s3 - rat(5, 216);
      return make_operator(0, 3, w,
                           {unit_form(order), zero_form(2, order),
                            scaled_eisenstein(2, A0, order),
                            scaled_eisenstein(3, B0, order),
                            F(8, {{{2, 0}, C}})});
    }
    if (a == 2) {
      const Rational A2 = -rat((w - 2) * (w - 2), 24) + s2 + rat(5, 72);
      const Rational B2 =
          -rat((w - 2) * (w - 2) * (w - 2), 216) + rat(w - 2, 6) * s2 - s3;
      const Rational D2 = rat(16, 3) * ((w - 2) * (w - 2) * (w - 2)) -
                          16 * ((w - 2) * (w - 2)) + rat(80, 3) -
                          192 * (w - 4) * s2 + 1152 * s3;
      // D2 Delta = (D2/1728)(E4^3 - E6^2)
      return make_operator(
          4, 3, w,
          {F(4, {{{1, 0}, Rational(1)}}), F(6, {{{0, 1}, rat(2, 3)}}),
           F(8, {{{2, 0}, A2}}), F(10, {{{1, 1}, B2}}),
           F(12, {{{3, 0}, C + D2 / 1728}, {{0, 2}, -D2 / 1728}})});
    }
    if (a != 4) throw error("depth 3 covers residues 0, 2, 4 mod 6");
    const Rational A4 = -rat((w - 1) * (w - 1), 24) + rat(1, 36) + s2;
    const int w3 = 2 * w * w * w - 9 * w * w + 12 * w - 3;
    const Rational B4 = -rat(w3, 432) - s3 + rat(w - 2, 6) * s2;
    const Rational D4 = rat(4, 3) * w3 - 96 * (w - 2) * s2 + 576 * s3;
    return make_operator(
        4, 3, w,
        {F(4, {{{1, 0}, Rational(1)}}), F(6, {{{0, 1}, rat(1, 3)}}),
         F(8, {{{2, 0}, A4}}), F(10, {{{1, 1}, B4}}),
         F(12, {{{3, 0}, C + D4 / 1728}, {{0, 2}, -D4 / 1728}})});
  }
  throw error("residue equations cover depths 0..3");
}

QuasiForm lift4(const QuasiForm& g, int w, Idx lam) {
  const Rational c =
      (Rational(long(lam)) - rat(w + 5, 12)) * (Rational(long(lam)) - rat(w + 7, 12));
  const QSeries e4 = eisenstein_series(2, g.truncation());
  return serre_chain(g, w - 7, 2) - g.times_modular(e4, 4).scaled(c);
}

}  // namespace qm
