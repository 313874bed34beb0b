#include "qm/quasi.hpp"

#include "qm/linalg.hpp"

namespace qm {

namespace {

Rational binom(long n, long k) {
  if (k < 0 || k > n) return Rational(0);
  Integer b(1);
  for (long i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return Rational(b);
}

Idx min_truncation(const std::vector<QSeries>& cs) {
  Idx t = cs.empty() ? 0 : cs.front().truncation();
  for (const auto& c : cs) t = std::min(t, c.truncation());
  return t;
}

}  // namespace

QuasiForm::QuasiForm(int weight, std::vector<QSeries> components)
    : weight_(weight),
      components_(std::move(components)),
      expansion_(QSeries::zero(0)) {
  if (components_.empty()) throw error("quasimodular form needs h_0");
  while (components_.size() > 1 && components_.back().is_zero())
    components_.pop_back();
  if (2 * depth() > weight_ && !(depth() == 0 && components_[0].is_zero()))
    throw error("depth exceeds weight/2");
  const Idx t = min_truncation(components_);
  const QSeries e2 = e2_series(t);
  QSeries acc = components_[0].truncated(t);
  QSeries e2pow = QSeries::constant(Rational(1), t);
  for (std::size_t l = 1; l < components_.size(); ++l) {
    e2pow = e2pow * e2;
    acc = acc + e2pow * components_[l];
  }
  expansion_ = std::move(acc);
}

QuasiForm QuasiForm::scaled(const Rational& c) const {
  std::vector<QSeries> cs;
  cs.reserve(components_.size());
  for (const auto& h : components_) cs.push_back(h.scaled(c));
  return QuasiForm(weight_, std::move(cs));
}

QuasiForm QuasiForm::normalized() const {
  if (expansion_.is_zero()) throw error("cannot normalize the zero form");
  return scaled(Rational(1) / expansion_.leading());
}

QuasiForm QuasiForm::truncated(Idx t) const {
  std::vector<QSeries> cs;
  cs.reserve(components_.size());
  for (const auto& h : components_) cs.push_back(h.truncated(t));
  return QuasiForm(weight_, std::move(cs));
}

QuasiForm operator+(const QuasiForm& a, const QuasiForm& b) {
  if (a.weight_ != b.weight_) throw error("weight mismatch in addition");
  std::vector<QSeries> cs;
  const std::size_t n = std::max(a.components_.size(), b.components_.size());
  const Idx t = std::min(a.truncation(), b.truncation());
  for (std::size_t l = 0; l < n; ++l) {
    const QSeries* ha = l < a.components_.size() ? &a.components_[l] : nullptr;
    const QSeries* hb = l < b.components_.size() ? &b.components_[l] : nullptr;
    if (ha && hb)
      cs.push_back(*ha + *hb);
    else
      cs.push_back((ha ? *ha : *hb).truncated(t));
  }
  return QuasiForm(a.weight_, std::move(cs));
}

QuasiForm operator-(const QuasiForm& a, const QuasiForm& b) {
  return a + b.scaled(Rational(-1));
}

QuasiForm QuasiForm::times_modular(const QSeries& g, int gweight) const {
  std::vector<QSeries> cs;
  cs.reserve(components_.size());
  for (const auto& h : components_) cs.push_back(h * g);
  return QuasiForm(weight_ + gweight, std::move(cs));
}

QuasiForm QuasiForm::times_e2() const {
  std::vector<QSeries> cs;
  cs.push_back(QSeries::zero(truncation()));
  for (const auto& h : components_) cs.push_back(h);
  return QuasiForm(weight_ + 2, std::move(cs));
}

QuasiForm QuasiForm::div_delta_power(int k) const {
  if (k < 0) throw error("negative Delta power");
  if (k == 0) return *this;
  const QSeries dk = pow(delta_series(truncation()), k);
  std::vector<QSeries> cs;
  cs.reserve(components_.size());
  for (const auto& h : components_) cs.push_back(h / dk);
  return QuasiForm(weight_ - 12 * k, std::move(cs));
}

QSeries serre_derivative(const QSeries& f, int weight_parameter) {
  const QSeries e2 = e2_series(f.truncation());
  return qderive(f) - (e2 * f).scaled(rat(weight_parameter, 12));
}

ZUSeries serre_derivative(const ZUSeries& f, int weight_parameter) {
  const ZUSeries e2 = promote(e2_series(f.truncation()));
  return qderive(f) - (e2 * f).scaled(ZUPoly(rat(weight_parameter, 12)));
}

// Componentwise: with f = sum E2^l h_l of weight w,
//   (d_p f)_k = d_{w-2k} h_k + ((w + 1 - k - p)/12) h_{k-1}
//               - ((k+1)/12) E4 h_{k+1},
// which follows from E2' = (E2^2 - E4)/12 and h' = d h + (wt/12) E2 h.
// Depth grows by at most one; the new top vanishes exactly when p = w - depth.
QuasiForm serre_derivative(const QuasiForm& f, int weight_parameter) {
  const int w = f.weight();
  const int s = f.depth();
  const Idx t = f.truncation();
  const QSeries e4 = eisenstein_series(2, t);
  std::vector<QSeries> out;
  for (int k = 0; k <= s + 1; ++k) {
    QSeries c = QSeries::zero(t);
    if (k <= s)
      c = c + serre_derivative(f.component(k).truncated(t), w - 2 * k);
    if (k >= 1)
      c = c + f.component(k - 1)
                  .truncated(t)
                  .scaled(rat(w + 1 - k - weight_parameter, 12));
    if (k + 1 <= s)
      c = c - (e4 * f.component(k + 1)).scaled(rat(k + 1, 12));
    out.push_back(std::move(c));
  }
  return QuasiForm(w + 2, std::move(out));
}

QuasiForm decompose_e2(const QSeries& f, int w, int r) {
  if (r < 0) throw error("decompose_e2: negative depth bound");
  const Idx dim = dim_qm(w, r);
  const Idx rows = dim + 4;
  if (f.truncation() < rows)
    throw error("insufficient truncation for E2 decomposition");
  // columns: E2 power ascending, then the monomial basis of M_{w-2l}
  struct Col {
    int l;
    ModularMonomial m;
  };
  std::vector<Col> cols;
  for (int l = 0; l <= r; ++l)
    for (const auto& m : modular_basis(w - 2 * l)) cols.push_back({l, m});
  if (Idx(cols.size()) != dim) throw error("basis size mismatch");
  const QSeries e2 = e2_series(rows);
  std::vector<QSeries> colseries;
  for (const auto& c : cols)
    colseries.push_back(pow(e2, c.l) * monomial_series(c.m, rows));
  RatMat m(std::size_t(rows), RatVec(cols.size()));
  auto rhs = RatVec(std::size_t(rows));
  for (Idx e = 0; e < rows; ++e) {
    for (std::size_t j = 0; j < cols.size(); ++j)
      m[std::size_t(e)][j] = colseries[j].coeff(e);
    rhs[std::size_t(e)] = f.coeff(e);
  }
  RatVec x;
  try {
    x = solve_unique(m, rhs);
  } catch (const error&) {
    throw error("series is not in QM_w^r (no exact E2 decomposition)");
  }
  std::vector<QSeries> components;
  const Idx t = f.truncation();
  std::size_t j = 0;
  for (int l = 0; l <= r; ++l) {
    std::map<ModularMonomial, Rational> comb;
    for (const auto& m2 : modular_basis(w - 2 * l)) {
      if (!qm::is_zero(x[j])) comb[m2] = x[j];
      ++j;
    }
    components.push_back(combination_series(comb, w - 2 * l, t));
  }
  QuasiForm out(w, std::move(components));
  if (!agree(out.expansion(), f))
    throw error("series is not in QM_w^r (nonzero residual)");
  return out;
}

GComponents g_components(const QuasiForm& f) {
  return g_components(f, f.depth());
}

GComponents g_components(const QuasiForm& f, int r) {
  if (r < f.depth()) throw error("embedding depth below actual depth");
  GComponents gc;
  gc.weight = f.weight();
  gc.depth_bound = r;
  const auto parts = g_rational_parts(f, r);
  for (int l = 0; l <= r; ++l) {
    ZUSeries g = promote(parts[std::size_t(l)]);
    gc.g.push_back(g.scaled(ZUPoly::monomial(0, l, Rational(1))));
  }
  return gc;
}

std::vector<QSeries> g_rational_parts(const QuasiForm& f, int r) {
  if (r < f.depth()) throw error("embedding depth below actual depth");
  const Idx t = f.truncation();
  const QSeries e2 = e2_series(t);
  std::vector<QSeries> out;
  for (int l = 0; l <= r; ++l) {
    // binom(r,l) g_l = (12u)^l sum_m binom(l+m, m) E2^m h_{l+m}
    QSeries acc = QSeries::zero(t);
    QSeries e2pow = QSeries::constant(Rational(1), t);
    for (int mm = 0; l + mm <= f.depth(); ++mm) {
      acc = acc + (e2pow * f.component(l + mm)).scaled(binom(l + mm, mm));
      e2pow = e2pow * e2;
    }
    Rational scale = Rational(1);
    for (int i = 0; i < l; ++i) scale *= 12;
    out.push_back(acc.scaled(scale / binom(r, l)));
  }
  return out;
}

std::vector<Idx> vanishing_orders(const GComponents& gc) {
  std::vector<Idx> orders;
  for (const auto& g : gc.g) {
    if (g.is_zero())
      throw error("transformation component vanishes to truncation; "
                  "order undeterminable");
    orders.push_back(g.valuation());
  }
  return orders;
}

MonodromyPair rho_matrices(int r) {
  if (r < 0) throw error("rho_matrices: r must be >= 0");
  const std::size_t n = std::size_t(r) + 1;
  MonodromyPair p;
  p.rhoS.assign(n, std::vector<long long>(n, 0));
  p.rhoT.assign(n, std::vector<long long>(n, 0));
  for (std::size_t k = 0; k < n; ++k) {
    p.rhoS[k][n - 1 - k] = (k % 2 == 0) ? 1 : -1;
    long long b = 1;  // binom(k, j)
    for (std::size_t j = 0; j <= k; ++j) {
      p.rhoT[k][j] = b;
      b = b * (long long)(k - j) / (long long)(j + 1);
    }
  }
  return p;
}

std::vector<ZUSeries> quasivector(const QuasiForm& f, int r) {
  const auto gc = g_components(f, r);
  const int s = f.depth();
  std::vector<ZUSeries> out;
  for (int k = 0; k <= r; ++k) {
    ZUSeries acc = ZUSeries::zero(f.truncation());
    for (int l = 0; l <= std::min(k, s); ++l) {
      const ZUPoly zf = ZUPoly::monomial(k - l, 0, binom(k, l));
      acc = acc + gc.g[std::size_t(l)].scaled(zf);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace qm
