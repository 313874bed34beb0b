#include "qm/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qm/json_io.hpp"

namespace qm::cli {

namespace {

constexpr const char* kSchemaVersion = "1.0";

Idx default_order() {
  if (const char* env = std::getenv("QMODE_ORDER")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return v;
    } catch (...) {
    }
  }
  return 50;
}

void emit(std::ostream& out, const std::string& command, Json payload,
          Idx truncation) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  doc["payload"] = std::move(payload);
  doc["exactness"] = Json{{"truncation", truncation}};
  out << doc.dump(1) << "\n";
}

std::vector<Idx> parse_exponents(const std::string& s) {
  std::vector<Idx> lams;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string tok =
        s.substr(pos, comma == std::string::npos ? std::string::npos
                                                 : comma - pos);
    if (tok.empty()) throw error("empty entry in exponent list");
    try {
      lams.push_back(std::stoll(tok));
    } catch (...) {
      throw error("malformed exponent: " + tok);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return lams;
}

QSeries named_series(const std::string& name, Idx order) {
  std::string n = name;
  for (auto& c : n) c = char(std::tolower((unsigned char)c));
  if (n == "delta") return delta_series(order);
  if (n.size() >= 2 && n[0] == 'e') {
    int w = 0;
    try {
      w = std::stoi(n.substr(1));
    } catch (...) {
      w = 0;
    }
    if (w >= 2 && w % 2 == 0) return eisenstein_series(w / 2, order);
  }
  throw error("unknown series " + name +
              " (expected E2, E4, E6, ..., or delta)");
}

int named_weight(const std::string& name) {
  std::string n = name;
  for (auto& c : n) c = char(std::tolower((unsigned char)c));
  return n == "delta" ? 12 : std::stoi(n.substr(1));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"exact q-expansion engine for quasimodular forms"};
  app.require_subcommand(1);
  Idx order = default_order();

  std::string series_name;
  auto* expand = app.add_subcommand("expand", "q-expansion of a named series");
  expand->add_option("--series", series_name, "E2 | E4 | E6 | ... | delta")
      ->required();
  expand->add_option("--order", order, "truncation exponent bound");

  int weight = 0, depth = 1;
  std::string format = "json";
  auto* extremal = app.add_subcommand(
      "extremal", "normalized extremal quasimodular form");
  extremal->add_option("--weight", weight)->required();
  extremal->add_option("--depth", depth)->required();
  extremal->add_option("--order", order);
  extremal->add_option("--format", format)
      ->check(CLI::IsMember({"json", "text"}));

  std::string exponents;
  auto* balanced =
      app.add_subcommand("balanced", "balanced form with given exponents");
  balanced->add_option("--weight", weight)->required();
  balanced->add_option("--depth", depth)->required();
  balanced->add_option("--exponents", exponents, "L0,L1,...")->required();
  balanced->add_option("--order", order);

  auto* mde = app.add_subcommand(
      "mde-from-exponents", "normalized operator with given indicial roots");
  mde->add_option("--weight", weight)->required();
  mde->add_option("--depth", depth)->required();
  mde->add_option("--exponents", exponents, "L0,L1,...")->required();
  mde->add_option("--order", order);

  std::string operator_path;
  long lambda = -1;
  bool fundamental = false;
  auto* solve =
      app.add_subcommand("solve", "power-series solutions of an operator file");
  solve->add_option("--operator", operator_path)->required();
  solve->add_option("--order", order);
  solve->add_option("--lambda", lambda,
                    "leading exponent (default: largest indicial root)");
  solve->add_flag("--fundamental", fundamental,
                  "emit the full fundamental system");

  int max_weight = 0;
  auto* check = app.add_subcommand("check", "mechanical verifications");
  check->require_subcommand(1);
  auto* denoms = check->add_subcommand(
      "denominators", "denominator primes of extremal forms");
  denoms->add_option("--depth", depth)->required();
  denoms->add_option("--max-weight", max_weight)->required();
  denoms->add_option("--order", order);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*expand) {
      const QSeries s = named_series(series_name, order);
      Json payload;
      payload["weight"] = named_weight(series_name);
      const Json sj = series_to_json(s);
      for (const auto& [k, v] : sj.items()) payload[k] = v;
      emit(out, "expand", std::move(payload), order);
      return 0;
    }
    if (*extremal) {
      const QuasiForm f = extremal_form(weight, depth, order);
      if (format == "text") {
        out << series_to_text(f.expansion()) << "\n";
        return 0;
      }
      emit(out, "extremal", quasiform_to_json(f), order);
      return 0;
    }
    if (*balanced) {
      ExponentTuple t{weight, depth, parse_exponents(exponents)};
      emit(out, "balanced", quasiform_to_json(balanced_form(t, order)), order);
      return 0;
    }
    if (*mde) {
      ExponentTuple t{weight, depth, parse_exponents(exponents)};
      emit(out, "mde-from-exponents",
           operator_to_json(mde_from_exponents(t, order)), order);
      return 0;
    }
    if (*solve) {
      const MDEOperator K = parse_operator_file(operator_path, order);
      const IndicialRoots roots = indicial_roots(K);
      Json payload;
      Json roots_json = Json::array();
      for (Idx r : roots.roots) roots_json.push_back(r);
      payload["indicial_roots"] = std::move(roots_json);
      payload["all_integer"] = roots.all_integer;
      if (fundamental) {
        const FundamentalSystem fs = frobenius_fundamental(K, order);
        Json sols = Json::array();
        for (const auto& s : fs.solutions) sols.push_back(zuseries_to_json(s));
        payload["system"] = std::move(sols);
      } else {
        if (roots.roots.empty())
          throw error("operator has no non-negative integer indicial root");
        const Idx lam0 = lambda >= 0 ? lambda : roots.roots.front();
        payload["solution"] = series_to_json(frobenius_leading(K, lam0, order));
      }
      emit(out, "solve", std::move(payload), order);
      return 0;
    }
    if (*denoms) {
      const auto report = check_kaneko_koike(depth, max_weight, order);
      emit(out, "check denominators", kk_report_to_json(report), order);
      return 0;
    }
  } catch (const error& e) {
    Json doc;
    doc["error"] = Json{{"message", e.what()}};
    err << doc.dump(1) << "\n";
    return 1;
  } catch (const std::exception& e) {
    Json doc;
    doc["error"] = Json{{"message", std::string("internal: ") + e.what()}};
    err << doc.dump(1) << "\n";
    return 1;
  }
  err << "no command dispatched\n";
  return 2;
}

}  // namespace qm::cli
