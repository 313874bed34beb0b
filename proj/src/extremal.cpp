#include "qm/extremal.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qm {

namespace {

Rational pv(std::initializer_list<long> coeffs, int w) {
  Integer v(0);
  for (long c : coeffs) v = v * w + c;
  return Rational(v);
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string table_canonical(const Depth4Tables& t) {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << '|';
    first = false;
  };
  for (int k = 0; k < 6; ++k) {
    sep();
    os << 'p' << k << ':';
    for (std::size_t i = 0; i < t.p[std::size_t(k)].size(); ++i)
      os << (i ? "," : "") << t.p[std::size_t(k)][i].get_str();
  }
  const int ks[] = {40, 42, 44, 46, 48};
  for (int i = 0; i < 5; ++i) {
    for (const auto& term : t.c[std::size_t(i)]) {
      sep();
      os << 'c' << ks[i] << ':' << term.scale.get_num().get_str() << '/'
         << term.scale.get_den().get_str() << ':' << term.e4 << ',' << term.e6
         << ':';
      for (std::size_t j = 0; j < term.poly.size(); ++j)
        os << (j ? "," : "") << term.poly[j].get_str();
    }
  }
  return os.str();
}

std::string locate_data_file() {
  if (const char* env = std::getenv("QMODE_DATA_DIR"))
    return std::string(env) + "/depth4_tables.json";
  const char* candidates[] = {
      "data/depth4_tables.json",
      "../data/depth4_tables.json",
#ifdef QM_DATA_DIR
      QM_DATA_DIR "/depth4_tables.json",
#endif
  };
  for (const char* c : candidates) {
    std::ifstream probe(c);
    if (probe.good()) return c;
  }
  throw error("depth4_tables.json not found (set QMODE_DATA_DIR)");
}

}  // namespace

Depth4Tables load_depth4_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw error("cannot open table file: " + path);
  nlohmann::json j;
  in >> j;
  Depth4Tables t;
  for (int k = 0; k < 6; ++k)
    for (const auto& c : j.at("p").at(std::size_t(k)))
      t.p[std::size_t(k)].emplace_back(c.get<std::string>());
  const int ks[] = {40, 42, 44, 46, 48};
  for (int i = 0; i < 5; ++i) {
    for (const auto& term : j.at("c").at(std::to_string(ks[i]))) {
      Depth4Tables::CTerm ct;
      ct.scale = rat(Integer(term.at("num").get<std::string>()),
                     Integer(term.at("den").get<std::string>()));
      ct.e4 = term.at("e4").get<int>();
      ct.e6 = term.at("e6").get<int>();
      for (const auto& c : term.at("poly"))
        ct.poly.emplace_back(c.get<std::string>());
      t.c[std::size_t(i)].push_back(std::move(ct));
    }
  }
  const std::string want = j.at("checksum_fnv1a64").get<std::string>();
  char got[17];
  std::snprintf(got, sizeof got, "%016llx",
                (unsigned long long)fnv1a64(table_canonical(t)));
  if (want != got)
    throw error("depth4 table checksum mismatch (file corrupted?)");
  // structural invariants: degrees and leading terms
  const std::size_t pdeg[] = {14, 11, 16, 17, 17, 13};
  for (int k = 0; k < 6; ++k)
    if (t.p[std::size_t(k)].size() != pdeg[k] + 1)
      throw error("depth4 table: p" + std::to_string(k) + " degree mismatch");
  if (t.p[0][0] != 53567 || t.p[5][0] != 531441)
    throw error("depth4 table: leading p coefficients mismatch");
  const std::size_t cdeg[] = {16, 17, 18, 19, 20};
  for (int i = 0; i < 5; ++i) {
    for (const auto& term : t.c[std::size_t(i)]) {
      if (term.poly.size() != cdeg[i] + 1)
        throw error("depth4 table: C poly degree mismatch");
      if (4 * term.e4 + 6 * term.e6 != ks[i])
        throw error("depth4 table: C monomial weight mismatch");
    }
  }
  if (t.c[0].front().scale != Rational(212336640))
    throw error("depth4 table: C40 leading factor mismatch");
  return t;
}

namespace {

// weight-4/6 generators at a given truncation
struct Gens {
  QSeries e4, e6;
  explicit Gens(Idx t) : e4(eisenstein_series(2, t)), e6(eisenstein_series(3, t)) {}
};

}  // namespace

Rational wpoly_eval(const WPoly& p, int w) {
  Integer v(0);
  for (const Integer& c : p) v = v * w + c;
  return Rational(v);
}

const Depth4Tables& depth4_tables() {
  static const Depth4Tables t = load_depth4_tables(locate_data_file());
  return t;
}

int extremal_min_weight(int depth) {
  switch (depth) {
    case 1: return 6;
    case 2: return 4;
    case 3: return 6;
    case 4: return 12;
    default: throw error("depth must be 1..4");
  }
}

QuasiForm extremal_base(int depth, Idx order) {
  const QSeries e4 = eisenstein_series(2, order);
  const QSeries e6 = eisenstein_series(3, order);
  switch (depth) {
    case 1:  // (E2 E4 - E6)/720
      return QuasiForm(6, {e6.scaled(rat(-1, 720)), e4.scaled(rat(1, 720))});
    case 2:  // (E4 - E2^2)/288
      return QuasiForm(4, {e4.scaled(rat(1, 288)), QSeries::zero(order),
                           QSeries::constant(rat(-1, 288), order)});
    case 3:  // (5 E2^3 - 3 E2 E4 - 2 E6)/51840
      return QuasiForm(6, {e6.scaled(rat(-1, 25920)), e4.scaled(rat(-1, 17280)),
                           QSeries::zero(order),
                           QSeries::constant(rat(1, 10368), order)});
    case 4: {
      const Rational d = Rational(1) / Rational(Integer("7449432883200"));
      return QuasiForm(
          12, {(pow(e4, 3).scaled(Rational(13025)) -
                (e6 * e6).scaled(Rational(12796))).scaled(d),
               (e4 * e6).scaled(Rational(3852) * d),
               (e4 * e4).scaled(Rational(-2706) * d),
               e6.scaled(Rational(27500) * d),
               e4.scaled(Rational(-28875) * d)});
    }
    default:
      throw error("depth must be 1..4");
  }
}

QuasiForm kup(int depth, int w, const QuasiForm& f) {
  const Idx t = f.truncation();
  const Gens g(t);
  const Idx val = f.expansion().valuation();
  QuasiForm out = [&] {
    switch (depth) {
      case 1:
        return serre_derivative(f, w - 1).times_modular(g.e4, 4) -
               f.times_modular(g.e6, 6).scaled(rat(w + 1, 12));
      case 2:
        return f.times_modular(g.e4, 4).scaled(rat(long(w) * (w + 1), 36)) -
               serre_chain(f, w - 2, 2);
      case 3: {
        auto d1 = serre_derivative(f, w - 3);
        auto d3 = serre_chain(d1, w - 1, 2);
        return d3.scaled(48 * pv({7, 42, 60}, w)) -
               d1.times_modular(g.e4, 4).scaled(pv({15, 96, 151, -30, -116}, w)) -
               f.times_modular(g.e6, 6).scaled(pv({9, 45, 40, 24, 144}, w) *
                                               rat(w + 1, 6));
      }
      case 4: {
        const auto& tb = depth4_tables();
        auto d1 = serre_derivative(f, w - 4);
        auto d2 = serre_derivative(d1, w - 2);
        auto d3 = serre_derivative(d2, w);
        auto d4 = serre_derivative(d3, w + 2);
        Rational w4 = Rational(w + 4);
        w4 = w4 * w4 * w4 * w4;
        return f.times_modular(pow(g.e4, 3), 12)
                   .scaled(rat(w + 1, 25920) * wpoly_eval(tb.p[4], w)) +
               f.times_modular(delta_series(t), 12)
                   .scaled(Rational(w + 1) * w4 * wpoly_eval(tb.p[5], w) / 15) +
               d1.times_modular(g.e4 * g.e6, 10)
                   .scaled(wpoly_eval(tb.p[3], w) / 8640) +
               d2.times_modular(g.e4 * g.e4, 8)
                   .scaled(wpoly_eval(tb.p[2], w) / 720) +
               d3.times_modular(g.e6, 6).scaled(w4 * wpoly_eval(tb.p[1], w) / 12) -
               d4.times_modular(g.e4, 4).scaled(wpoly_eval(tb.p[0], w));
      }
      default:
        throw error("depth must be 1..4");
    }
  }();
  const Idx gain = depth == 4 ? 5 : depth == 3 ? 2 : 1;
  if (out.expansion().is_zero() || out.expansion().valuation() != val + gain)
    throw error("weight-raising step missed its valuation gain");
  return out;
}

QuasiForm kdown(int depth, int w, const QuasiForm& f) {
  const Idx t = f.truncation();
  const Gens g(t);
  switch (depth) {
    case 1:
      return (serre_derivative(f, w - 1).times_modular(g.e4, 4) +
              f.times_modular(g.e6, 6).scaled(rat(w - 1, 12)))
          .div_delta_power(1);
    case 2: {
      auto d1 = serre_derivative(f, w - 2);
      auto d2 = serre_derivative(d1, w);
      return (d2.times_modular(g.e4, 4) +
              d1.times_modular(g.e6, 6).scaled(rat(w - 1, 6)) +
              f.times_modular(g.e4 * g.e4, 8)
                  .scaled(rat((long(w) - 2) * (w - 2), 144)))
          .div_delta_power(1);
    }
    case 3: {
      auto d1 = serre_derivative(f, w - 3);
      auto d2 = serre_derivative(d1, w - 1);
      auto d3 = serre_derivative(d2, w + 1);
      const QSeries e43 = pow(g.e4, 3), e62 = g.e6 * g.e6;
      QuasiForm acc =
          d3.times_modular(e43.scaled(pv({9, -54, 84}, w)) +
                               e62.scaled(pv({7, -42, 60}, w)),
                           12)
              .scaled(Rational(864)) +
          d2.times_modular(g.e4 * g.e4 * g.e6, 14)
              .scaled(3456 * pv({1, -1}, w) * pv({1, -3}, w) * pv({1, -3}, w)) +
          d1.times_modular(
                g.e4 * (e62.scaled(pv({39, -336, 1099, -1626, 924}, w)) +
                        e43.scaled(3 * pv({3, -48, 231, -450, 316}, w))),
                16)
              .scaled(Rational(6)) +
          f.times_modular(
               g.e6 * (e43.scaled(3 * pv({3, -24, 64, -56}, w)) -
                       e62.scaled(pv({1, 0, -24, 48}, w))),
               18)
              .scaled(pv({1, -3}, w) * pv({1, -3}, w));
      return acc.scaled(rat(1, 864)).div_delta_power(2);
    }
    case 4: {
      const auto& tb = depth4_tables();
      auto cform = [&](int idx) {
        QSeries acc = QSeries::zero(t);
        for (const auto& term : tb.c[std::size_t(idx)])
          acc = acc + (pow(g.e4, term.e4) * pow(g.e6, term.e6))
                          .scaled(term.scale * wpoly_eval(term.poly, w));
        return acc;
      };
      auto d1 = serre_derivative(f, w - 4);
      auto d2 = serre_derivative(d1, w - 2);
      auto d3 = serre_derivative(d2, w);
      auto d4 = serre_derivative(d3, w + 2);
      return (d4.times_modular(cform(0), 40) + d3.times_modular(cform(1), 42) +
              d2.times_modular(cform(2), 44) + d1.times_modular(cform(3), 46) +
              f.times_modular(cform(4), 48))
          .div_delta_power(5);
    }
    default:
      throw error("depth must be 1..4");
  }
}

MDEOperator master_equation(int depth, int w, Idx order) {
  ExponentTuple t;
  t.w = w;
  t.r = depth;
  t.lams.assign(std::size_t(depth) + 1, 0);
  t.lams[0] = dim_qm(w, depth) - 1;
  return mde_from_exponents(t, order);
}

namespace {

int ladder_period(int depth) { return depth == 2 ? 4 : depth == 4 ? 12 : 6; }

// residue lifts from the on-class form below; all outputs are normalized by
// the caller
QuasiForm lift_from(int depth, int w0, const QuasiForm& f, int offset) {
  const Idx t = f.truncation();
  const Gens g(t);
  const int w = w0;  // weight of f
  switch (depth) {
    case 1:
      if (offset == 2) return serre_derivative(f, w - 1);
      if (offset == 4) return f.times_modular(g.e4, 4);
      break;
    case 2:
      if (offset == 2) return serre_derivative(f, w - 2);
      break;
    case 3:
      if (offset == 2) return serre_derivative(f, w - 3);
      if (offset == 4)
        return f.times_modular(g.e4, 4)
                   .scaled(rat((long(w) + 1) * (3 * w + 1), 48)) -
               serre_chain(f, w - 3, 2);
      break;
    case 4: {
      auto d1 = serre_derivative(f, w - 4);
      if (offset == 2) return d1;
      auto d2 = serre_derivative(d1, w - 2);
      if (offset == 4)
        return f.times_modular(g.e4, 4)
                   .scaled(rat((long(w) + 1) * (2 * w + 1), 18)) -
               d2;
      auto d3 = serre_derivative(d2, w);
      if (offset == 6)
        return d3.scaled(pv({17, 78, 90}, w)) -
               d1.times_modular(g.e4, 4)
                   .scaled(pv({191, 1008, 1504, 192, -576}, w) / 144) -
               f.times_modular(g.e6, 6)
                   .scaled(rat(w + 1, 432) * pv({81, 376, 560, 528, 576}, w));
      auto d4 = serre_derivative(d3, w + 2);
      if (offset == 8)
        return d2.times_modular(g.e4, 4)
                   .scaled(pv({13423, 295800, 2645368, 12166080, 29311504,
                               29020416, -15653376, -56692224, -33094656},
                              w) /
                           144) +
               d1.times_modular(g.e6, 6)
                   .scaled(pv({6561, 136994, 1139536, 4759344, 10294016,
                               11541472, 14671104, 41398272, 63016704,
                               31974912},
                              w) /
                           432) +
               f.times_modular(g.e4 * g.e4, 8)
                   .scaled(rat(w + 1, 2592) *
                           pv({2048, 38685, 287792, 1130616, 3110288, 8497968,
                               18484992, 14141952, -20570112, -30855168},
                              w)) -
               d4.scaled(pv({1313, 28678, 255122, 1183008, 3016512, 4012416,
                             2177280},
                            w));
      if (offset == 10)
        return d3.times_modular(g.e4, 4)
                   .scaled(pv({293, 4332, 22968, 51192, 40824}, w)) -
               d2.times_modular(g.e6, 6)
                   .scaled(rat(4, 3) * pv({1, 15, 90, 270, 405, 243}, w)) -
               d1.times_modular(g.e4 * g.e4, 8)
                   .scaled(pv({3311, 51234, 291550, 731040, 717696, -2592,
                               -256608},
                              w) /
                           144) -
               f.times_modular(g.e4 * g.e6, 10)
                   .scaled(rat(w + 1, 432) *
                           pv({1313, 19430, 104354, 251616, 310464, 300672,
                               248832},
                              w));
      break;
    }
  }
  throw error("no residue lift for this depth/offset");
}

}  // namespace

QuasiForm residue_lift_raw(int depth, int w, const QuasiForm& f, int offset) {
  return lift_from(depth, w, f, offset);
}

namespace {

struct LadderCache {
  std::mutex mutex;
  Idx order = 0;
  std::map<int, QuasiForm> forms;  // on-class weight -> normalized form
};

LadderCache& ladder_cache(int depth) {
  static LadderCache caches[5];
  return caches[depth];
}

QuasiForm ladder_entry(int depth, int w0, Idx order) {
  LadderCache& cache = ladder_cache(depth);
  std::lock_guard<std::mutex> lock(cache.mutex);
  if (cache.order < order) {
    cache.forms.clear();
    cache.order = order;
  }
  const int base = extremal_min_weight(depth);
  const int period = ladder_period(depth);
  int have = base;
  if (cache.forms.empty())
    cache.forms.emplace(base, extremal_base(depth, cache.order));
  else
    have = cache.forms.rbegin()->first;
  for (int v = have; v < w0; v += period) {
    const QuasiForm next =
        kup(depth, v, cache.forms.at(v)).normalized();
    cache.forms.emplace(v + period, next);
  }
  return cache.forms.at(w0).truncated(order);
}

}  // namespace

QuasiForm extremal_form(int w, int depth, Idx order) {
  if (depth < 1 || depth > 4) throw error("depth must be 1..4");
  if (w % 2 != 0) throw error("weight must be even");
  const int base = extremal_min_weight(depth);
  if (w < base)
    throw error("weight below the first ladder weight for this depth");
  // every ladder base weight is divisible by its period, so the on-class
  // weights are exactly the multiples of the period
  const int period = ladder_period(depth);
  const int offset = ((w % period) + period) % period;
  const int w0 = w - offset;
  const Idx val = dim_qm(w, depth) - 1;
  if (order <= val) throw error("order must exceed the extremal valuation");
  QuasiForm on_class = ladder_entry(depth, w0, order);
  QuasiForm out =
      offset == 0 ? on_class : lift_from(depth, w0, on_class, offset).normalized();
  if (out.expansion().valuation() != val)
    throw error("extremal form misses its expected vanishing order");
  return out;
}

Provenance extremal_provenance(int w, int depth) {
  const int base = extremal_min_weight(depth);
  if (w == base) return Provenance::init;
  const int period = ladder_period(depth);
  return ((w - base) % period == 0) ? Provenance::kup_recursion
                                    : Provenance::residue_lift;
}

std::set<Integer> denominator_primes(const QuasiForm& f, Idx upto) {
  const QSeries& s = f.expansion();
  if (s.truncation() < s.valuation() + upto)
    throw error("insufficient truncation for denominator scan");
  std::set<Integer> dens;
  for (Idx i = 0; i < upto && i < Idx(s.data().size()); ++i)
    dens.insert(s.data()[std::size_t(i)].get_den());
  std::set<Integer> primes;
  for (Integer d : dens) {
    for (Integer p = 2; p * p <= d && p < 2000000;
         p = (p == 2 ? Integer(3) : Integer(p + 2))) {
      if (d % p == 0) {
        primes.insert(p);
        while (d % p == 0) d /= p;
      }
    }
    if (d > 1) primes.insert(d);  // prime (or a product of primes) beyond trial range
  }
  return primes;
}

std::vector<KKEntry> check_kaneko_koike(int depth, int max_weight, Idx upto) {
  const int base = extremal_min_weight(depth);
  std::vector<int> weights;
  for (int w = base; w <= max_weight; w += 2) weights.push_back(w);
  std::vector<KKEntry> report(weights.size());
  if (weights.empty()) return report;
  // one order serves the whole sweep; build the on-class ladder once, then
  // the independent residue lifts can run concurrently
  const Idx order = dim_qm(max_weight, depth) - 1 + upto;
  const int period = ladder_period(depth);
  int top = base;
  for (int w : weights)
    if ((w - base) % period == 0) top = std::max(top, w);
  ladder_entry(depth, top, order);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const int w = weights[i];
    KKEntry e;
    e.weight = w;
    const auto primes = denominator_primes(extremal_form(w, depth, order), upto);
    e.primes.assign(primes.begin(), primes.end());
    e.pass = true;
    for (const auto& p : e.primes) e.pass = e.pass && p < w;
    report[i] = std::move(e);
  }
  return report;
}

}  // namespace qm
