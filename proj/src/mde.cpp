#include "qm/mde.hpp"

#include <map>

#include "qm/linalg.hpp"

namespace qm {

namespace {

template <class S>
S apply_impl(const MDEOperator& K, const S& f) {
  std::vector<S> ders{f};
  for (int j = 0; j <= K.r; ++j)
    ders.push_back(
        serre_derivative(ders.back(), K.weight_parameter() + 2 * j));
  S acc = S::zero(f.truncation());
  for (int l = 0; l <= K.r + 1; ++l) {
    const QSeries& B = K.coeffs[std::size_t(l)].expansion;
    if (B.is_zero()) continue;
    if constexpr (std::is_same_v<S, QSeries>)
      acc = acc + B * ders[std::size_t(K.r + 1 - l)];
    else
      acc = acc + promote(B) * ders[std::size_t(K.r + 1 - l)];
  }
  return acc;
}

std::vector<Rational> poly_mul(const std::vector<Rational>& a,
                               const std::vector<Rational>& b) {
  std::vector<Rational> r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

}  // namespace

Idx MDEOperator::coeff_truncation() const {
  Idx t = coeffs.empty() ? 0 : coeffs[0].expansion.truncation();
  for (const auto& c : coeffs) t = std::min(t, c.expansion.truncation());
  return t;
}

MDEOperator MDEOperator::at_order(Idx order) const {
  MDEOperator K = *this;
  for (auto& c : K.coeffs) {
    if (!c.monomials)
      throw error("operator coefficient lacks monomial resolution");
    c.expansion = combination_series(*c.monomials, c.weight, order);
  }
  return K;
}

MDEOperator make_operator(int base_weight, int r, int w,
                          std::vector<ModularForm> coeffs) {
  if (r < 0) throw error("operator order must be >= 1");
  if (Idx(coeffs.size()) != Idx(r) + 2)
    throw error("operator needs r + 2 coefficient forms");
  for (int l = 0; l <= r + 1; ++l)
    if (coeffs[std::size_t(l)].weight != base_weight + 2 * l)
      throw error("operator coefficient weights must ascend by 2");
  if (coeffs[0].value_at_cusp() != Rational(1))
    throw error("leading operator coefficient must be 1 at the cusp");
  MDEOperator K;
  K.base_weight = base_weight;
  K.r = r;
  K.w = w;
  K.coeffs = std::move(coeffs);
  return K;
}

QSeries apply_operator(const MDEOperator& K, const QSeries& f) {
  return apply_impl(K, f);
}

ZUSeries apply_operator(const MDEOperator& K, const ZUSeries& f) {
  return apply_impl(K, f);
}

std::vector<Rational> indicial_polynomial(const MDEOperator& K) {
  // q_j(x) = prod_{i<j} (x - (w - r + 2i)/12)
  std::vector<std::vector<Rational>> q{{Rational(1)}};
  for (int j = 0; j <= K.r; ++j)
    q.push_back(poly_mul(q.back(),
                         {rat(-(K.w - K.r + 2 * j), 12), Rational(1)}));
  std::vector<Rational> p(std::size_t(K.r) + 2);
  for (int l = 0; l <= K.r + 1; ++l) {
    const Rational c = K.coeffs[std::size_t(l)].value_at_cusp();
    if (qm::is_zero(c)) continue;
    const auto& ql = q[std::size_t(K.r + 1 - l)];
    for (std::size_t i = 0; i < ql.size(); ++i) p[i] += c * ql[i];
  }
  return p;
}

Rational poly_eval(const std::vector<Rational>& poly, const Rational& x) {
  Rational v(0);
  for (std::size_t i = poly.size(); i-- > 0;) v = v * x + poly[i];
  return v;
}

IndicialRoots indicial_roots(const MDEOperator& K) {
  std::vector<Rational> p = indicial_polynomial(K);
  IndicialRoots out;
  // roots of a monic polynomial with non-negative integer roots are bounded
  // by their sum, read off the second-highest coefficient
  const Rational sum = -p[p.size() - 2] / p.back();
  Idx bound = 0;
  if (sum > 0) {
    Rational s = sum;
    bound = Idx(mpz_class(s.get_num() / s.get_den()).get_si()) + 1;
  }
  for (Idx t = bound; t >= 0; --t) {
    while (p.size() > 1 && qm::is_zero(poly_eval(p, Rational(long(t))))) {
      out.roots.push_back(t);
      // synthetic division by (x - t)
      std::vector<Rational> q(p.size() - 1);
      Rational carry(0);
      for (std::size_t i = p.size(); i-- > 1;) {
        q[i - 1] = p[i] + carry;
        carry = q[i - 1] * long(t);
      }
      p = std::move(q);
    }
  }
  out.all_integer = (p.size() == 1);
  return out;
}

QSeries frobenius_leading(const MDEOperator& K, Idx lam0, Idx order) {
  const MDEOperator Ko =
      K.coeff_truncation() >= order ? K : K.at_order(order);
  const auto p = indicial_polynomial(Ko);
  if (!qm::is_zero(poly_eval(p, Rational(long(lam0)))))
    throw error("lam0 is not an indicial root");
  if (order <= lam0) throw error("order must exceed the leading exponent");
  std::vector<Rational> a(std::size_t(order - lam0));
  a[0] = Rational(1);
  QSeries f(lam0, a, order);
  for (Idx n = 1; n < order - lam0; ++n) {
    const QSeries res = apply_operator(Ko, f);
    if (res.is_zero() || res.valuation() > lam0 + n) continue;
    const Rational c = res.coeff(lam0 + n);
    if (qm::is_zero(c)) continue;
    const Rational pn = poly_eval(p, Rational(long(lam0 + n)));
    if (qm::is_zero(pn))
      throw error("resonance at exponent " + std::to_string(lam0 + n) +
                  "; use frobenius_fundamental");
    a[std::size_t(n)] = -c / pn;
    f = QSeries(lam0, a, order);
  }
  const QSeries res = apply_operator(Ko, f);
  if (!res.is_zero())
    throw error("frobenius_leading failed to annihilate the series");
  return f;
}

namespace {

// Flattened coordinates for homogeneous degree-l ZU series with q-support
// [0, N): index = a*N + n for the z^a u^{l-a} q^n slot, so z-degree is the
// primary sort key.  That makes "reduce against earlier solutions" zero the
// low-z slices first, matching the minimal-correction ladder.
struct Flat {
  Idx N;
  int l;
  Idx size() const { return N * (l + 1); }
  Idx at(int a, Idx n) const { return Idx(a) * N + n; }
};

RatVec flatten(const Flat& fl, const ZUSeries& s) {
  RatVec v(std::size_t(fl.size()));
  for (Idx i = 0; i < Idx(s.data().size()); ++i) {
    const Idx n = s.valuation() + i;
    if (n >= fl.N) break;
    for (const auto& [key, c] : s.data()[std::size_t(i)].terms()) {
      auto [a, b] = key;
      if (a + b != fl.l) throw error("inhomogeneous solution slice");
      v[std::size_t(fl.at(a, n))] = c;
    }
  }
  return v;
}

ZUSeries unflatten(const Flat& fl, const RatVec& v) {
  std::vector<ZUPoly> coeffs(std::size_t(fl.N));
  for (int a = 0; a <= fl.l; ++a)
    for (Idx n = 0; n < fl.N; ++n) {
      const Rational& c = v[std::size_t(fl.at(a, n))];
      if (!qm::is_zero(c))
        coeffs[std::size_t(n)] += ZUPoly::monomial(a, fl.l - a, c);
    }
  return ZUSeries(0, std::move(coeffs), fl.N);
}

// Reduces v against rows already in reduced echelon form.
void reduce_against(RatVec& v, const RatMat& rows,
                    const std::vector<int>& pivots) {
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    const Rational c = v[std::size_t(pivots[i])];
    if (qm::is_zero(c)) continue;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * rows[i][j];
  }
}

bool vec_is_zero(const RatVec& v) {
  for (const auto& c : v)
    if (!qm::is_zero(c)) return false;
  return true;
}

}  // namespace

FundamentalSystem frobenius_fundamental(const MDEOperator& K, Idx order) {
  const IndicialRoots roots = indicial_roots(K);
  if (!roots.all_integer || Idx(roots.roots.size()) != Idx(K.r) + 1)
    throw error("fundamental system requires non-negative integer exponents");
  const Idx N = order;
  if (N <= roots.roots.front() + 1)
    throw error("order too small for a fundamental system");
  const MDEOperator Ko = K.coeff_truncation() >= N ? K : K.at_order(N);

  FundamentalSystem fs;
  fs.exponents = roots.roots;
  for (int l = 0; l <= K.r; ++l) {
    const Flat fl{N, l};
    // matrix of K on the degree-l homogeneous slice
    RatMat m(std::size_t(fl.size()), RatVec(std::size_t(fl.size())));
    for (int a = 0; a <= l; ++a) {
      for (Idx n = 0; n < N; ++n) {
        const ZUSeries img = apply_operator(
            Ko, ZUSeries::monomial(n, ZUPoly::monomial(a, 0, Rational(1)), N));
        const Idx col = fl.at(a, n);
        // K preserves total (z,u) degree; the u^{l-a} factor is passive
        for (Idx i = 0; i < Idx(img.data().size()); ++i) {
          const Idx ne = img.valuation() + i;
          for (const auto& [key, c] : img.data()[std::size_t(i)].terms()) {
            const int ar = key.first;
            m[std::size_t(fl.at(ar, ne))][std::size_t(col)] = c;
          }
        }
      }
    }
    std::vector<RatVec> null = nullspace(m);
    if (Idx(null.size()) != Idx(l) + 1)
      throw error("solution ladder degenerate at this order (kernel rank " +
                  std::to_string(null.size()) + ")");

    // gauge freedom: u^(l-j) times an earlier solution
    RatMat gauge;
    for (int j = 0; j < l; ++j) {
      ZUSeries g = fs.solutions[std::size_t(j)].scaled(
          ZUPoly::monomial(0, l - j, Rational(1)));
      gauge.push_back(flatten(fl, g));
    }
    RatMat gauge_r = gauge;
    const std::vector<int> gauge_piv = rref(gauge_r);

    bool found = false;
    for (int d = 0; d <= l && !found; ++d) {
      // combinations of the kernel basis supported on z-degree <= d
      RatMat cond;
      for (int a = d + 1; a <= l; ++a)
        for (Idx n = 0; n < N; ++n) {
          RatVec row(null.size());
          bool nz = false;
          for (std::size_t i = 0; i < null.size(); ++i) {
            row[i] = null[i][std::size_t(fl.at(a, n))];
            nz = nz || !qm::is_zero(row[i]);
          }
          if (nz) cond.push_back(std::move(row));
        }
      std::vector<RatVec> combos;
      if (cond.empty()) {
        combos.resize(null.size());
        for (std::size_t i = 0; i < null.size(); ++i) {
          combos[i].assign(null.size(), Rational(0));
          combos[i][i] = Rational(1);
        }
      } else {
        combos = nullspace(cond);
      }
      // low-z part of the gauge, for canonical reduction
      RatMat gcond;
      for (int a = d + 1; a <= l; ++a)
        for (Idx n = 0; n < N; ++n) {
          RatVec row(gauge.size());
          bool nz = false;
          for (std::size_t i = 0; i < gauge.size(); ++i) {
            row[i] = gauge[i][std::size_t(fl.at(a, n))];
            nz = nz || !qm::is_zero(row[i]);
          }
          if (nz) gcond.push_back(std::move(row));
        }
      RatMat glow;
      if (gauge.empty()) {
        // nothing to reduce against
      } else if (gcond.empty()) {
        glow = gauge;
      } else {
        for (const auto& combo : nullspace(gcond)) {
          RatVec g(std::size_t(fl.size()));
          for (std::size_t i = 0; i < gauge.size(); ++i) {
            if (qm::is_zero(combo[i])) continue;
            for (std::size_t k = 0; k < g.size(); ++k)
              g[k] += combo[i] * gauge[i][k];
          }
          glow.push_back(std::move(g));
        }
      }
      const std::vector<int> glow_piv = rref(glow);

      for (const auto& combo : combos) {
        RatVec v(std::size_t(fl.size()));
        for (std::size_t i = 0; i < null.size(); ++i) {
          if (qm::is_zero(combo[i])) continue;
          for (std::size_t k = 0; k < v.size(); ++k)
            v[k] += combo[i] * null[i][k];
        }
        RatVec probe = v;
        reduce_against(probe, gauge_r, gauge_piv);
        if (vec_is_zero(probe)) continue;
        // canonical representative: reduce by the low-z gauge only, so the
        // z-degree stays minimal
        reduce_against(v, glow, glow_piv);
        // monic lowest graded piece
        for (Idx k = 0; k < fl.size(); ++k) {
          if (!qm::is_zero(v[std::size_t(k)])) {
            const Rational inv = Rational(1) / v[std::size_t(k)];
            for (auto& c : v) c *= inv;
            break;
          }
        }
        fs.solutions.push_back(unflatten(fl, v));
        found = true;
        break;
      }
    }
    if (!found)
      throw error("no independent solution found; order too small or "
                  "operator has no quasimodular-type ladder");
  }
  return fs;
}

ZUSeries wronskian(const std::vector<ZUSeries>& system, int w, int r) {
  if (Idx(system.size()) != Idx(r) + 1)
    throw error("wronskian needs r + 1 series");
  Idx t = system[0].truncation();
  for (const auto& s : system) t = std::min(t, s.truncation());
  std::vector<std::vector<ZUSeries>> m;
  for (const auto& f : system) {
    std::vector<ZUSeries> row{f.truncated(t)};
    for (int j = 0; j < r; ++j)
      row.push_back(serre_derivative(row.back(), w - r + 2 * j));
    m.push_back(std::move(row));
  }
  // cofactor expansion over rows, memoized on the set of open columns
  // (the row index is determined by the popcount, so the mask is the key)
  std::map<unsigned, ZUSeries> memo;
  auto det = [&](auto&& self, std::size_t row, unsigned mask) -> ZUSeries {
    if (row == m.size()) return ZUSeries::constant(ZUPoly(Rational(1)), t);
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    ZUSeries acc = ZUSeries::zero(t);
    int sign = 1;
    for (std::size_t c = 0; c <= std::size_t(r); ++c) {
      if (!(mask & (1u << c))) continue;
      const ZUSeries minor = self(self, row + 1, mask & ~(1u << c));
      const ZUSeries term = m[row][c] * minor;
      acc = (sign > 0) ? acc + term : acc - term;
      sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return det(det, 0, (1u << (r + 1)) - 1);
}

}  // namespace qm
