#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "oracles.hpp"
#include "qm/extremal.hpp"

using namespace qm;

namespace {

Rational big(const char* s) { return Rational(Integer(s)); }

}  // namespace

TEST_CASE("depth-4 tables load with checksum and shape guards") {
  const Depth4Tables& t = depth4_tables();
  CHECK(t.p[0].size() == 15);
  CHECK(t.p[0][0] == 53567);
  CHECK(t.c[0].front().scale == Rational(212336640));
  // a single flipped digit is caught by the checksum at load time
  std::ifstream in(QM_DATA_DIR "/depth4_tables.json");
  REQUIRE(in.good());
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const auto pos = body.find("53567");
  REQUIRE(pos != std::string::npos);
  body.replace(pos, 5, "53568");
  const std::string tampered = "/tmp/qm_tampered_tables.json";
  {
    std::ofstream out(tampered);
    out << body;
  }
  CHECK_THROWS_AS(load_depth4_tables(tampered), error);
  std::remove(tampered.c_str());
}

TEST_CASE("initial ladder forms") {
  const Idx N = 20;
  const QuasiForm f1 = extremal_base(1, N);
  CHECK(f1.expansion().valuation() == 1);
  CHECK(f1.expansion().coeff(2) == Rational(18));
  CHECK(f1.expansion().coeff(3) == Rational(84));
  const QuasiForm f2 = extremal_base(2, N);
  CHECK(f2.expansion().valuation() == 1);
  CHECK(f2.expansion().coeff(2) == Rational(6));
  CHECK(f2.expansion().coeff(3) == Rational(12));
  const QuasiForm f3 = extremal_base(3, N);
  CHECK(f3.expansion().valuation() == 2);
  CHECK(f3.expansion().coeff(2) == Rational(1));
  CHECK(f3.expansion().coeff(3) == Rational(8));
  const QuasiForm f4 = extremal_base(4, N);
  CHECK(f4.expansion().valuation() == 5);
  CHECK(f4.expansion().coeff(5) == Rational(1));
  CHECK(f4.expansion().coeff(6) == rat(335, 27));
}

TEST_CASE("weight raising: known scalars") {
  const Idx N = 24;
  // depth 1 at w = 6: K^up f_6 = (72*7*11/12) f_12
  const QuasiForm up = kup(1, 6, extremal_base(1, N));
  const QuasiForm f12 = extremal_form(12, 1, N);
  CHECK(agree(up.expansion(),
              f12.expansion().scaled(rat(72 * 7 * 11, 12))));
  // depth 2 at w = 4 gains one order of vanishing
  const QuasiForm up2 = kup(2, 4, extremal_base(2, N));
  CHECK(up2.expansion().valuation() == 2);
  // depth 4 at w = 12 gains five
  const QuasiForm up4 = kup(4, 12, extremal_base(4, N));
  CHECK(up4.expansion().valuation() == 10);
}

TEST_CASE("weight lowering: known scalars") {
  const Idx N = 26;
  // depth 1 at w = 12: K^down f_12 = 2 f_6
  const QuasiForm down = kdown(1, 12, extremal_form(12, 1, N));
  CHECK(agree(down.expansion(), extremal_base(1, N).expansion().scaled(Rational(2))));
  // depth 2 at w = 8: (w/4)^2 = 4
  const QuasiForm down2 = kdown(2, 8, extremal_form(8, 2, N));
  CHECK(agree(down2.expansion(),
              extremal_base(2, N).expansion().scaled(Rational(4))));
  // depth 3 at w = 12: 16 (w-3)^2 (w/3)^3 = 82944
  const QuasiForm down3 = kdown(3, 12, extremal_form(12, 3, N));
  CHECK(agree(down3.expansion(),
              extremal_base(3, N).expansion().scaled(Rational(82944))));
}

TEST_CASE("depth-4 weight lowering scalar at w = 24") {
  // K^down f_24 = (5^4/2^4) w^4 (5w-12)^4 (5w-24)^4 (5w-36)^4 (5w-48)^4 f_12
  const Idx N = 30;
  const QuasiForm down = kdown(4, 24, extremal_form(24, 4, N));
  Rational c = rat(625, 16);
  for (long b : {24L, 108L, 96L, 84L, 72L}) {
    const Integer bb(b);
    c *= Rational(bb * bb * bb * bb);
  }
  CHECK(agree(down.expansion(), extremal_base(4, N).expansion().scaled(c)));
}

TEST_CASE("composition identities at the first ladder weights") {
  const Idx N = 24;
  // depth 1, w = 6: 12 (w+1)(w+5)
  const QuasiForm f6 = extremal_base(1, N);
  const QuasiForm c1 = kdown(1, 12, kup(1, 6, f6));
  CHECK(agree(c1.expansion(), f6.expansion().scaled(Rational(12 * 7 * 11))));
  // depth 2, w = 4: (1/3)(w+1)(w+2)^2(w+3)
  const QuasiForm f4 = extremal_base(2, N);
  const QuasiForm c2 = kdown(2, 8, kup(2, 4, f4));
  CHECK(agree(c2.expansion(), f4.expansion().scaled(rat(5 * 36 * 7, 3))));
}

TEST_CASE("residue lifts and their leading constants") {
  const Idx N = 24;
  // depth 1: f_{w+2} = (12/(w+1)) d_{w-1} f_w and f_{w+4} = E4 f_w
  const QuasiForm f6 = extremal_base(1, N);
  const QuasiForm f8 = extremal_form(8, 1, N);
  CHECK(agree(residue_lift_raw(1, 6, f6, 2).expansion(),
              f8.expansion().scaled(rat(7, 12))));
  const QuasiForm f10 = extremal_form(10, 1, N);
  CHECK(agree(residue_lift_raw(1, 6, f6, 4).expansion(),
              (eisenstein_series(2, N) * f6.expansion())));
  CHECK(f10.expansion().valuation() == 1);
  // depth 3: f_{w+4} has leading 27 (w+1)(w+2)^3 / (2 (w+3)^2) at w = 6
  const QuasiForm f3 = extremal_base(3, N);
  const QuasiForm l34 = residue_lift_raw(3, 6, f3, 4);
  CHECK(l34.expansion().valuation() == 3);
  CHECK(l34.expansion().coeff(3) == rat(27L * 7 * 512, 2 * 81));
}

TEST_CASE("depth-4 residue lifts: stated valuations and leading constants") {
  const Idx N = 22;
  const QuasiForm f12 = extremal_base(4, N);
  const int w = 12;
  struct Case {
    int offset;
    Idx val;
    Rational lead;
  };
  const Rational p12_4 = Rational(Integer(72) * 72 * 72 * 72);
  const Rational p24_4 = Rational(Integer(84) * 84 * 84 * 84);
  const Rational p36_4 = Rational(Integer(96) * 96 * 96 * 96);
  const std::vector<Case> cases = {
      {2, 5, rat(13, 3)},
      {4, 6, Rational(64 * 243) * 13 * big("537824") / p12_4},
      {6, 7,
       Rational(Integer(1) << 18) * 2187 * 13 * big("537824") *
           big("759375") * 16 * 17 / (p12_4 * p24_4)},
      {8, 8,
       Rational(Integer(1) << 24) * 1594323 * 13 * big("537824") *
           big("759375") * big("1048576") * 17 * big("104976") * 19 /
           (p12_4 * p24_4 * p36_4)},
      {10, 8,
       Rational(Integer(1) << 28) * 4782969 * 13 * big("537824") *
           big("759375") * 16 * 17 * big("104976") * 19 * 20 /
           (p12_4 * p24_4 * p36_4)},
  };
  for (const auto& c : cases) {
    const QuasiForm lift = residue_lift_raw(4, w, f12, c.offset);
    CHECK(lift.expansion().valuation() == c.val);
    CHECK(lift.expansion().coeff(c.val) == c.lead);
    // and it is the normalized extremal form of that weight
    CHECK(agree(lift.normalized().expansion(),
                extremal_form(w + c.offset, 4, N).expansion()));
  }
}

TEST_CASE("extremal forms agree with the leading Frobenius solutions") {
  const Idx N = 26;
  // (12, 1): lam0 = 2
  CHECK(agree(extremal_form(12, 1, N).expansion(),
              frobenius_leading(master_equation(1, 12, N), 2, N)));
  // (8, 2): lam0 = 2
  CHECK(agree(extremal_form(8, 2, N).expansion(),
              frobenius_leading(master_equation(2, 8, N), 2, N)));
  // off-class forms solve the matching residue equations
  const QuasiForm f14 = extremal_form(14, 3, N);
  CHECK(apply_operator(residue_equation(3, 14, {4, 0, 0, 0}, N),
                       f14.expansion())
            .is_zero());
}

TEST_CASE("extremality of produced valuations") {
  const Idx N = 40;
  for (int depth = 1; depth <= 4; ++depth)
    for (int w = extremal_min_weight(depth);
         w <= extremal_min_weight(depth) + 12; w += 2) {
      const QuasiForm f = extremal_form(w, depth, N);
      CHECK(f.expansion().valuation() == dim_qm(w, depth) - 1);
      CHECK(f.expansion().leading() == Rational(1));
      // the actual depth can sit below the bound where M_2 = 0 truncates
      // the decomposition (e.g. weight 6 at depth bound 2)
      CHECK(f.depth() <= depth);
      CHECK(f.depth() >= depth - 1);
    }
  CHECK_THROWS_AS(extremal_form(4, 1, N), error);
  CHECK_THROWS_AS(extremal_form(13, 1, N), error);
}

TEST_CASE("provenance tags") {
  CHECK(extremal_provenance(6, 1) == Provenance::init);
  CHECK(extremal_provenance(12, 1) == Provenance::kup_recursion);
  CHECK(extremal_provenance(8, 1) == Provenance::residue_lift);
  CHECK(extremal_provenance(24, 4) == Provenance::kup_recursion);
  CHECK(extremal_provenance(22, 4) == Provenance::residue_lift);
}

TEST_CASE("denominator primes") {
  const Idx N = 26;
  CHECK(denominator_primes(extremal_base(1, N), 20).empty());
  const QuasiForm sixth = QuasiForm::constant(rat(1, 6), N);
  CHECK(denominator_primes(sixth, 1) == std::set<Integer>{2, 3});
  const auto p12 = denominator_primes(extremal_base(4, N), 15);
  for (const auto& p : p12) CHECK(p < 12);
  CHECK_FALSE(p12.empty());
}

TEST_CASE("kaneko-koike sweep at small scale") {
  for (int depth : {1, 2}) {
    const auto report = check_kaneko_koike(depth, 24, 12);
    CHECK_FALSE(report.empty());
    for (const auto& e : report) {
      CHECK(e.pass);
      for (const auto& p : e.primes) CHECK(p < e.weight);
    }
  }
}
