// Acceptance suite: every check is exact (rational arithmetic, zero
// tolerance) and prints one PASS/FAIL line.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "oracles.hpp"
#include "qm/extremal.hpp"
#include "qm/linalg.hpp"

using namespace qm;

namespace {

bool report(int num, const char* desc, bool ok) {
  std::printf("[criterion %2d] %s - %s\n", num, ok ? "PASS" : "FAIL", desc);
  std::fflush(stdout);
  return ok;
}

Rational det(RatMat m) {
  Rational d(1);
  const std::size_t n = m.size();
  for (std::size_t col = 0, row = 0; col < n && row < n; ++col, ++row) {
    std::size_t sel = row;
    while (sel < n && qm::is_zero(m[sel][col])) ++sel;
    if (sel == n) return Rational(0);
    if (sel != row) {
      std::swap(m[sel], m[row]);
      d = -d;
    }
    d *= m[row][col];
    const Rational inv = Rational(1) / m[row][col];
    for (std::size_t i = row + 1; i < n; ++i) {
      if (qm::is_zero(m[i][col])) continue;
      const Rational f = m[i][col] * inv;
      for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[row][j];
    }
  }
  return d;
}

using IMat = std::vector<std::vector<long long>>;

IMat imul(const IMat& a, const IMat& b) {
  const std::size_t n = a.size();
  IMat c(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

bool is_sign_identity(const IMat& m, long long s) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m[i][j] != (i == j ? s : 0)) return false;
  return true;
}

std::vector<std::vector<Idx>> admissible_tuples(int w, int r) {
  std::vector<std::vector<Idx>> out;
  std::vector<Idx> cur(std::size_t(r) + 1);
  const Idx target = dim_qm(w, r) - 1;
  auto rec = [&](auto&& self, int l, Idx rest, Idx cap) -> void {
    if (l == r + 1) {
      if (rest == 0) out.push_back(cur);
      return;
    }
    const Idx bound = std::min<Idx>(cap, dim_qm(w - 2 * l, r - l) - 1);
    for (Idx v = bound; v >= 0; --v) {
      if (v * (r + 1 - l) < rest) break;  // cannot reach the target sorted
      if (v > rest) continue;
      cur[std::size_t(l)] = v;
      self(self, l + 1, rest - v, v);
    }
  };
  rec(rec, 0, target, target);
  return out;
}

}  // namespace

TEST_CASE("criterion 1: derivative identities to q^200") {
  const Idx N = 201;
  const QSeries e2 = e2_series(N), e4 = eisenstein_series(2, N),
                e6 = eisenstein_series(3, N), dl = delta_series(N);
  bool ok = (qderive(e2) - (e2 * e2 - e4).scaled(rat(1, 12))).is_zero();
  ok = ok && (qderive(e4) - (e2 * e4 - e6).scaled(rat(1, 3))).is_zero();
  ok = ok && (qderive(e6) - (e2 * e6 - e4 * e4).scaled(rat(1, 2))).is_zero();
  ok = ok && (serre_derivative(e2, 1) + e4.scaled(rat(1, 12))).is_zero();
  ok = ok && (serre_derivative(e4, 4) + e6.scaled(rat(1, 3))).is_zero();
  ok = ok && (serre_derivative(e6, 6) + (e4 * e4).scaled(rat(1, 2))).is_zero();
  ok = ok && serre_derivative(dl, 12).is_zero();
  CHECK(report(1, "Ramanujan and Serre identities exact to q^200", ok));
}

TEST_CASE("criterion 2: Delta equals the eta product to q^500") {
  const Idx N = 501;
  const bool ok = delta_series(N) == oracles::eta_power_24(N);
  CHECK(report(2, "Delta == q prod (1-q^n)^24 to q^500", ok));
}

TEST_CASE("criterion 3: dimension formula vs direct sum") {
  bool ok = true;
  for (int w = 0; w <= 240 && ok; w += 2)
    for (int r = 0; r <= 12 && ok; ++r)
      ok = dim_qm(w, r) == oracles::dim_qm_direct(w, r);
  CHECK(report(3, "dim QM closed form == direct sum (w <= 240, r <= 12)", ok));
}

TEST_CASE("criterion 4: first-order residue-class equations") {
  const Idx N = 101;
  bool ok = true;
  for (int base : {12, 2, 4, 6, 8, 10}) {
    const int w1 = base == 2 ? 14 : base;
    for (int w : {w1, w1 + 12}) {
      const MDEOperator K = residue_equation(0, w, {}, N);
      const QuasiForm f = residue_class_form(w, N);
      const QSeries res = apply_operator(K, f.expansion());
      ok = ok && res.is_zero() && res.truncation() >= 100;
    }
  }
  CHECK(report(4, "all six depth-0 rows exact to q^100, two weights each", ok));
}

TEST_CASE("criterion 5: monodromy matrix relations") {
  bool ok = true;
  for (int r = 0; r <= 8; ++r) {
    const MonodromyPair p = rho_matrices(r);
    const long long sign = (r % 2 == 0) ? 1 : -1;
    ok = ok && is_sign_identity(imul(p.rhoS, p.rhoS), sign);
    const IMat st = imul(p.rhoS, p.rhoT);
    ok = ok && is_sign_identity(imul(imul(st, st), st), sign);
    auto to_rat = [](const IMat& m) {
      RatMat rm(m.size(), RatVec(m.size()));
      for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
          rm[i][j] = Rational((long)m[i][j]);
      return rm;
    };
    ok = ok && det(to_rat(p.rhoS)) == Rational(1);
    ok = ok && det(to_rat(p.rhoT)) == Rational(1);
  }
  CHECK(report(5, "rho(S)^2 = (ST)^3 = (-1)^r id and det = 1 for r <= 8", ok));
}

TEST_CASE("criterion 6: fundamental systems and Wronskians") {
  bool ok = true;
  struct Case {
    int depth, w;
  };
  for (const Case c : {Case{1, 6}, Case{1, 12}, Case{2, 4}, Case{2, 8}}) {
    const Idx N = 51 + dim_qm(c.w, c.depth);
    const MDEOperator K = master_equation(c.depth, c.w, N);
    const FundamentalSystem fs = frobenius_fundamental(K, N);
    for (const auto& s : fs.solutions) {
      const ZUSeries res = apply_operator(K, s);
      ok = ok && res.is_zero() && res.truncation() >= 51;
    }
    const ZUSeries W = wronskian(fs.solutions, c.w, c.depth);
    const Idx expect_val = Idx(c.w) * (c.depth + 1) / 12;
    ok = ok && z_degree(W) == 0 && W.valuation() == expect_val;
    const ZUSeries quot =
        W / promote(pow(delta_series(N), expect_val));
    ok = ok && quot.valuation() == 0 && quot.data().size() == 1;
  }
  CHECK(report(6, "fundamental systems exact to q^50; Wronskian is c Delta^(w(r+1)/12)", ok));
}

TEST_CASE("criterion 7: balanced forms vs normalized equations at weight 12") {
  bool ok = true;
  int tuples = 0;
  for (int r = 1; r <= 4; ++r) {
    for (const auto& lams : admissible_tuples(12, r)) {
      if (std::all_of(lams.begin(), lams.end(),
                      [&](Idx v) { return v == lams[0]; }))
        continue;  // the all-equal case is the Delta-power degeneracy
      ++tuples;
      const ExponentTuple t{12, r, lams};
      const Idx N = lams[0] + 51;
      const QuasiForm f = balanced_form(t, N);
      const MDEOperator K = mde_from_exponents(t, N);
      const QSeries res = apply_operator(K, f.expansion());
      ok = ok && res.is_zero() && res.truncation() >= lams[0] + 50;
      const QSeries lead = frobenius_leading(K, lams[0], N);
      ok = ok && agree(lead, f.expansion());
    }
  }
  ok = ok && tuples == 13;  // 1 + 2 + 4 + 6 admissible tuples at weight 12
  CHECK(report(7, "kernel forms solve their equations and match the Frobenius solutions", ok));
}

TEST_CASE("criterion 8: Delta-power degenerate operators") {
  const Idx N = 26;
  bool ok = true;
  const ZUSeries dz = promote(delta_series(N));
  for (int r = 0; r <= 4; ++r) {
    const MDEOperator K = delta_power_operator(12, r, N);
    ok = ok && apply_operator(K, delta_series(N)).is_zero();
    const FundamentalSystem fs = frobenius_fundamental(K, N);
    for (int l = 0; l <= r; ++l)
      ok = ok && fs.solutions[std::size_t(l)] ==
                     dz.scaled(ZUPoly::monomial(l, 0, Rational(1)));
  }
  const MDEOperator k1 = delta_power_operator(12, 1, N);
  ok = ok && k1.coeffs[2].monomials ==
                 std::map<ModularMonomial, Rational>{{{1, 0}, rat(1, 144)}};
  CHECK(report(8, "delta_power_operator(12, r) has system {z^l Delta}, a4 = E4/144 at r=1", ok));
}

TEST_CASE("criterion 9: ladder forms equal Frobenius solutions") {
  bool ok = true;
  for (int depth = 1; depth <= 4; ++depth) {
    const int base = extremal_min_weight(depth);
    const int period = depth == 2 ? 4 : depth == 4 ? 12 : 6;
    for (int step = 0; step < 3; ++step) {
      const int w = base + step * period;
      const Idx val = dim_qm(w, depth) - 1;
      const Idx N = val + 51;
      const QuasiForm f = extremal_form(w, depth, N);
      const QSeries lead =
          frobenius_leading(master_equation(depth, w, N), val, N);
      ok = ok && agree(f.expansion(), lead) && f.truncation() >= val + 50;
    }
  }
  CHECK(report(9, "recursion ladder == Frobenius solution to valuation+50, depths 1-4", ok));
}

TEST_CASE("criterion 10: composition scalars certify the operator tables") {
  bool ok = true;
  const Idx N = 40;
  auto compose = [&](int depth, int w, int jump) {
    const QuasiForm f = extremal_form(w, depth, N);
    return std::pair<QuasiForm, QuasiForm>(
        kdown(depth, w + jump, kup(depth, w, f)), f);
  };
  for (int w : {6, 12}) {
    const auto [lhs, f] = compose(1, w, 6);
    ok = ok && agree(lhs.expansion(),
                     f.expansion().scaled(Rational(12L * (w + 1) * (w + 5))));
  }
  for (int w : {4, 8}) {
    const auto [lhs, f] = compose(2, w, 4);
    ok = ok &&
         agree(lhs.expansion(),
               f.expansion().scaled(rat(long(w + 1) * (w + 2) * (w + 2) * (w + 3), 3)));
  }
  for (int w : {6, 12}) {
    const auto [lhs, f] = compose(3, w, 6);
    Rational c = Rational(5184);
    c *= Integer(w + 1);
    c *= Integer(w + 2) * (w + 2) * (w + 2);
    c *= Integer(w + 3) * (w + 3);
    c *= Integer(w + 4) * (w + 4) * (w + 4);
    c *= Integer(w + 5);
    ok = ok && agree(lhs.expansion(), f.expansion().scaled(c));
  }
  for (int w : {12, 24}) {
    const auto [lhs, f] = compose(4, w, 12);
    Integer c2;
    mpz_ui_pow_ui(c2.get_mpz_t(), 2, 40);
    Integer c3;
    mpz_ui_pow_ui(c3.get_mpz_t(), 3, 23);
    Rational c = Rational(c2) * Rational(c3) / 5;
    auto mulpow = [&](long b, int e) {
      for (int i = 0; i < e; ++i) c *= Integer(b);
    };
    mulpow(w + 1, 1); mulpow(w + 2, 5); mulpow(w + 3, 5); mulpow(w + 4, 5);
    mulpow(w + 5, 1); mulpow(w + 6, 4); mulpow(w + 7, 1); mulpow(w + 8, 5);
    mulpow(w + 9, 5); mulpow(w + 10, 5); mulpow(w + 11, 1);
    ok = ok && agree(lhs.expansion(), f.expansion().scaled(c));
  }
  CHECK(report(10, "K^down K^up composition constants, two weights per depth", ok));
}

TEST_CASE("criterion 11: initial-form spot values") {
  const Idx N = 12;
  const QSeries e2 = e2_series(N), e4 = eisenstein_series(2, N),
                e6 = eisenstein_series(3, N);
  bool ok = true;
  // independent expansions of the initial-form formulas
  const QSeries i1 = (e2 * e4 - e6).scaled(rat(1, 720));
  ok = ok && i1.valuation() == 1 && i1.coeff(1) == 1 && i1.coeff(2) == 18;
  ok = ok && agree(i1, extremal_base(1, N).expansion());
  const QSeries i2 = (e4 - e2 * e2).scaled(rat(1, 288));
  ok = ok && i2.valuation() == 1 && i2.coeff(1) == 1 && i2.coeff(2) == 6;
  ok = ok && agree(i2, extremal_base(2, N).expansion());
  const QSeries i3 =
      (pow(e2, 3).scaled(Rational(5)) - (e2 * e4).scaled(Rational(3)) -
       e6.scaled(Rational(2)))
          .scaled(rat(1, 51840));
  ok = ok && i3.valuation() == 2 && i3.coeff(2) == 1 && i3.coeff(3) == 8;
  // the q-coefficient formula at w = 6: w(w^2+15w-18)/(w+3)^2
  ok = ok && i3.coeff(3) == rat(6 * (36 + 90 - 18), 81);
  ok = ok && agree(i3, extremal_base(3, N).expansion());
  const QSeries i4 = pow(e4, 3).scaled(Rational(13025)) -
                     (e6 * e6).scaled(Rational(12796)) +
                     (e2 * e4 * e6).scaled(Rational(3852)) -
                     (pow(e2, 2) * e4 * e4).scaled(Rational(2706)) +
                     (pow(e2, 3) * e6).scaled(Rational(27500)) -
                     (pow(e2, 4) * e4).scaled(Rational(28875));
  ok = ok && i4.valuation() == 5 &&
       i4.coeff(5) == Rational(Integer("7449432883200"));
  ok = ok && agree(i4.scaled(Rational(1) / i4.coeff(5)),
                   extremal_base(4, N).expansion());
  CHECK(report(11, "depth 1-4 initial forms: valuations and leading values", ok));
}

TEST_CASE("criterion 12: denominator primes of extremal forms") {
  bool ok = true;
  for (int depth = 1; depth <= 4; ++depth) {
    const int max_weight = depth == 4 ? 48 : 60;
    const auto rep = check_kaneko_koike(depth, max_weight, 30);
    const int expected = (max_weight - extremal_min_weight(depth)) / 2 + 1;
    ok = ok && int(rep.size()) == expected;
    for (const auto& e : rep) ok = ok && e.pass;
  }
  CHECK(report(12, "denominators contain only primes < w (depths 1-3 to 60, depth 4 to 48)", ok));
}
