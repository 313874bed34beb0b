#include "qm/forms.hpp"

#include <mutex>

#include "qm/linalg.hpp"

namespace qm {

namespace {

std::mutex cache_mutex;

// B_0..B_n via the defining recurrence sum_{k<=m} binom(m+1,k) B_k = 0.
const std::vector<Rational>& bernoulli_upto(int n) {
  static std::vector<Rational> cache{Rational(1)};
  if (int(cache.size()) <= n) {
    for (int m = int(cache.size()); m <= n; ++m) {
      Rational acc(0);
      Integer binom(1);  // binom(m+1, k)
      for (int k = 0; k < m; ++k) {
        acc += Rational(binom) * cache[std::size_t(k)];
        binom = binom * (m + 1 - k) / (k + 1);
      }
      cache.push_back(-acc / Rational(long(m + 1)));
    }
  }
  return cache;
}

// sigma_e(n) for n < order, by sieve; grows monotonically per exponent.
const std::vector<Integer>& sigma_upto(int e, Idx order) {
  static std::map<int, std::vector<Integer>> cache;
  auto& v = cache[e];
  if (Idx(v.size()) < order) {
    v.assign(std::size_t(order), Integer(0));
    for (Idx d = 1; d < order; ++d) {
      Integer dk;
      mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d),
                    static_cast<unsigned long>(e));
      for (Idx m = d; m < order; m += d) v[std::size_t(m)] += dk;
    }
  }
  return v;
}

}  // namespace

Rational bernoulli(int n) {
  if (n < 2 || n % 2 != 0) throw error("bernoulli: n must be even and >= 2");
  std::lock_guard<std::mutex> lock(cache_mutex);
  return bernoulli_upto(n)[std::size_t(n)];
}

QSeries eisenstein_series(int k, Idx order) {
  if (k < 1) throw error("eisenstein: k must be >= 1");
  std::vector<Rational> c(std::size_t(std::max<Idx>(order, 0)));
  if (order > 0) c[0] = Rational(1);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    const Rational factor = Rational(-4 * k) / bernoulli_upto(2 * k)[std::size_t(2 * k)];
    const auto& sig = sigma_upto(2 * k - 1, order);
    for (Idx n = 1; n < order; ++n)
      c[std::size_t(n)] = factor * Rational(sig[std::size_t(n)]);
  }
  return QSeries(0, std::move(c), order);
}

ModularForm eisenstein(int k, Idx order) {
  ModularForm f;
  f.weight = 2 * k;
  f.expansion = eisenstein_series(k, order);
  if (k == 2)
    f.monomials = std::map<ModularMonomial, Rational>{{{1, 0}, Rational(1)}};
  if (k == 3)
    f.monomials = std::map<ModularMonomial, Rational>{{{0, 1}, Rational(1)}};
  return f;
}

QSeries e2_series(Idx order) { return eisenstein_series(1, order); }

QSeries delta_series(Idx order) {
  const QSeries e4 = eisenstein_series(2, order);
  const QSeries e6 = eisenstein_series(3, order);
  return (pow(e4, 3) - e6 * e6).scaled(rat(1, 1728));
}

ModularForm delta(Idx order) {
  ModularForm f;
  f.weight = 12;
  f.expansion = delta_series(order);
  f.monomials = std::map<ModularMonomial, Rational>{
      {{3, 0}, rat(1, 1728)}, {{0, 2}, rat(-1, 1728)}};
  return f;
}

int dim_modular(int w) {
  if (w < 0 || w % 2 != 0 || w == 2) return 0;
  return w / 12 + (w % 12 == 2 ? 0 : 1);
}

std::vector<ModularMonomial> modular_basis(int w) {
  std::vector<ModularMonomial> basis;
  if (w < 0 || w % 2 != 0) return basis;
  for (int a = w / 4; a >= 0; --a) {
    const int rest = w - 4 * a;
    if (rest % 6 == 0) basis.push_back({a, rest / 6});
  }
  if (int(basis.size()) != dim_modular(w))
    throw error("modular_basis size does not match dim M_w");
  return basis;
}

QSeries monomial_series(const ModularMonomial& m, Idx order) {
  return pow(eisenstein_series(2, order), m.e4) *
         pow(eisenstein_series(3, order), m.e6);
}

QSeries combination_series(const std::map<ModularMonomial, Rational>& c,
                           int weight, Idx order) {
  QSeries acc = QSeries::zero(order);
  for (const auto& [m, x] : c) {
    if (m.weight() != weight)
      throw error("monomial weight mismatch in combination");
    acc = acc + monomial_series(m, order).scaled(x);
  }
  return acc;
}

Idx dim_qm(int w, int r) {
  if (w < 0 || w % 2 != 0) throw error("dim_qm: w must be even and >= 0");
  if (r < 0) throw error("dim_qm: r must be >= 0");
  // The direct sum saturates at depth w/2 (all lower summands vanish); the
  // closed form is only valid up to there.
  const Idx rr = std::min<Idx>(r, w / 2);
  const Idx wr = Idx(w) * (rr + 1);
  return wr / 12 - ((rr + 1) / 6) * (rr - 3 * ((rr + 1) / 6) - 1) + rr / 6 + 1 -
         (wr % 12 == 2 ? 1 : 0);
}

std::map<ModularMonomial, Rational> to_monomials(const QSeries& f, int w) {
  const auto basis = modular_basis(w);
  if (basis.empty()) {
    if (!f.is_zero()) throw error("series is not modular of the given weight");
    return {};
  }
  const Idx need = Idx(basis.size()) + 2;
  if (f.truncation() < need)
    throw error("insufficient truncation for monomial resolution");
  RatMat m(std::size_t(need), RatVec(basis.size()));
  auto rhs = RatVec(std::size_t(need));
  for (Idx e = 0; e < need; ++e) {
    for (std::size_t j = 0; j < basis.size(); ++j)
      m[std::size_t(e)][j] = monomial_series(basis[j], need).coeff(e);
    rhs[std::size_t(e)] = f.coeff(e);
  }
  RatVec x = solve_unique(m, rhs);
  std::map<ModularMonomial, Rational> out;
  for (std::size_t j = 0; j < basis.size(); ++j)
    if (!qm::is_zero(x[j])) out[basis[j]] = x[j];
  // residual must vanish to the full truncation, not just the solve window
  if (!agree(f, combination_series(out, w, f.truncation())))
    throw error("series is not modular of the given weight");
  return out;
}

ModularForm make_form(int weight, QSeries expansion) {
  ModularForm f;
  f.weight = weight;
  f.expansion = std::move(expansion);
  return f;
}

ModularForm make_form(int weight, const std::map<ModularMonomial, Rational>& c,
                      Idx order) {
  ModularForm f;
  f.weight = weight;
  f.expansion = combination_series(c, weight, order);
  f.monomials = c;
  return f;
}

}  // namespace qm
