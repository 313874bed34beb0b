#include "qm/json_io.hpp"

#include <fstream>
#include <sstream>

namespace qm {

Json series_to_json(const QSeries& s) {
  Json j;
  j["valuation"] = s.valuation();
  j["truncation"] = s.truncation();
  Json coeffs = Json::array();
  for (const auto& c : s.data()) coeffs.push_back(rat_str(c));
  j["coefficients"] = std::move(coeffs);
  return j;
}

QSeries series_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("valuation") || !j.contains("truncation") ||
      !j.contains("coefficients"))
    throw error("series document needs valuation/truncation/coefficients");
  std::vector<Rational> coeffs;
  for (const auto& c : j.at("coefficients"))
    coeffs.push_back(rat_parse(c.get<std::string>()));
  return QSeries(j.at("valuation").get<Idx>(), std::move(coeffs),
                 j.at("truncation").get<Idx>());
}

Json zuseries_to_json(const ZUSeries& s) {
  Json j;
  j["valuation"] = s.valuation();
  j["truncation"] = s.truncation();
  Json coeffs = Json::array();
  for (const auto& poly : s.data()) {
    Json terms = Json::array();
    for (const auto& [k, c] : poly.terms()) {
      Json t;
      t["z"] = k.first;
      t["u"] = k.second;
      t["value"] = rat_str(c);
      terms.push_back(std::move(t));
    }
    coeffs.push_back(std::move(terms));
  }
  j["coefficients"] = std::move(coeffs);
  return j;
}

ZUSeries zuseries_from_json(const Json& j) {
  std::vector<ZUPoly> coeffs;
  for (const auto& terms : j.at("coefficients")) {
    ZUPoly p;
    for (const auto& t : terms)
      p += ZUPoly::monomial(t.at("z").get<int>(), t.at("u").get<int>(),
                            rat_parse(t.at("value").get<std::string>()));
    coeffs.push_back(std::move(p));
  }
  return ZUSeries(j.at("valuation").get<Idx>(), std::move(coeffs),
                  j.at("truncation").get<Idx>());
}

Json quasiform_to_json(const QuasiForm& f) {
  Json j;
  j["weight"] = f.weight();
  j["depth"] = f.depth();
  Json comps = Json::array();
  for (const auto& h : f.components()) comps.push_back(series_to_json(h));
  j["components"] = std::move(comps);
  return j;
}

QuasiForm quasiform_from_json(const Json& j) {
  std::vector<QSeries> comps;
  for (const auto& h : j.at("components")) comps.push_back(series_from_json(h));
  QuasiForm f(j.at("weight").get<int>(), std::move(comps));
  if (f.depth() != j.at("depth").get<int>())
    throw error("quasimodular document depth disagrees with its components");
  return f;
}

Json operator_to_json(const MDEOperator& K) {
  Json j;
  j["weight"] = K.w;
  j["depth_bound"] = K.r;
  Json coeffs = Json::array();
  for (const auto& B : K.coeffs) {
    Json c;
    c["weight"] = B.weight;
    Json mono = Json::object();
    if (!B.monomials)
      throw error("operator coefficient lacks monomial resolution");
    for (const auto& [m, x] : *B.monomials)
      mono[std::to_string(m.e4) + "," + std::to_string(m.e6)] = rat_str(x);
    c["monomials"] = std::move(mono);
    coeffs.push_back(std::move(c));
  }
  j["coeffs"] = std::move(coeffs);
  return j;
}

MDEOperator operator_from_json(const Json& j, Idx order) {
  if (!j.is_object() || !j.contains("weight") || !j.contains("depth_bound") ||
      !j.contains("coeffs"))
    throw error("operator document needs weight/depth_bound/coeffs");
  const int w = j.at("weight").get<int>();
  const int r = j.at("depth_bound").get<int>();
  const auto& coeffs = j.at("coeffs");
  if (!coeffs.is_array() || Idx(coeffs.size()) != Idx(r) + 2)
    throw error("operator document needs r + 2 coefficient entries");
  std::vector<ModularForm> forms;
  int expect_weight = coeffs.at(0).at("weight").get<int>();
  const int m = expect_weight;
  for (const auto& c : coeffs) {
    const int cw = c.at("weight").get<int>();
    if (cw != expect_weight)
      throw error("operator coefficient weights must ascend by 2 (found " +
                  std::to_string(cw) + ", expected " +
                  std::to_string(expect_weight) + ")");
    expect_weight += 2;
    std::map<ModularMonomial, Rational> mono;
    for (const auto& [key, val] : c.at("monomials").items()) {
      const auto comma = key.find(',');
      if (comma == std::string::npos)
        throw error("monomial key must be \"a,b\": " + key);
      ModularMonomial mm{std::stoi(key.substr(0, comma)),
                         std::stoi(key.substr(comma + 1))};
      if (mm.e4 < 0 || mm.e6 < 0 || mm.weight() != cw)
        throw error("monomial " + key + " has the wrong weight for B_" +
                    std::to_string(cw));
      mono[mm] = rat_parse(val.get<std::string>());
    }
    forms.push_back(make_form(cw, mono, order));
  }
  if (j.contains("normalized") && j.at("normalized").get<bool>()) {
    if (m != 0 || !(forms[0].expansion ==
                    QSeries::constant(Rational(1), order)))
      throw error("operator flagged normalized but B_0 is not the constant 1");
  }
  return make_operator(m, r, w, std::move(forms));
}

MDEOperator parse_operator_file(const std::string& path, Idx order) {
  std::ifstream in(path);
  if (!in.good()) throw error("cannot open operator file: " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw error("operator file " + path + ": " + e.what());
  }
  return operator_from_json(j, order);
}

Json kk_report_to_json(const std::vector<KKEntry>& report) {
  Json arr = Json::array();
  for (const auto& e : report) {
    Json row;
    row["weight"] = e.weight;
    Json primes = Json::array();
    for (const auto& p : e.primes) {
      if (p.fits_slong_p())
        primes.push_back(p.get_si());
      else
        primes.push_back(p.get_str());
    }
    row["primes"] = std::move(primes);
    row["pass"] = e.pass;
    arr.push_back(std::move(row));
  }
  return arr;
}

std::string series_to_text(const QSeries& s) {
  std::ostringstream os;
  bool first = true;
  for (Idx i = 0; i < Idx(s.data().size()); ++i) {
    const Rational& c = s.data()[std::size_t(i)];
    if (qm::is_zero(c)) continue;
    const Idx e = s.valuation() + i;
    const bool neg = sgn(c) < 0;
    const Rational a = abs(c);
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    const bool unit = a == Rational(1);
    std::string lit = a.get_den() == 1 ? a.get_num().get_str()
                                       : "(" + rat_str(a) + ")";
    if (e == 0)
      os << lit;
    else if (unit)
      os << "q" << (e == 1 ? "" : "^" + std::to_string(e));
    else
      os << lit << "q" << (e == 1 ? "" : "^" + std::to_string(e));
  }
  if (first) os << "0";
  os << " + O(q^" << s.truncation() << ")";
  return os.str();
}

}  // namespace qm
