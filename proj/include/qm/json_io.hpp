#pragma once

#include <string>

#include <json.hpp>

#include "qm/extremal.hpp"

namespace qm {

// Field order in emitted documents is fixed, so identical invocations are
// byte-identical.
using Json = nlohmann::ordered_json;

Json series_to_json(const QSeries& s);
QSeries series_from_json(const Json& j);

Json zuseries_to_json(const ZUSeries& s);
ZUSeries zuseries_from_json(const Json& j);

Json quasiform_to_json(const QuasiForm& f);
QuasiForm quasiform_from_json(const Json& j);

// Operator document: {"weight": w, "depth_bound": r,
//   "coeffs": [{"weight": m+2l, "monomials": {"a,b": "p/q"}}, ...]}.
// Parsing validates the schema, ascending weights, and the normalization
// B_m(i oo) = 1; an optional "normalized": true additionally requires m = 0
// and B_0 = 1 exactly.
Json operator_to_json(const MDEOperator& K);
MDEOperator operator_from_json(const Json& j, Idx order);
MDEOperator parse_operator_file(const std::string& path, Idx order);

Json kk_report_to_json(const std::vector<KKEntry>& report);

// Plain-text rendering "q + 18q^2 + ... + O(q^N)"; informational only.
std::string series_to_text(const QSeries& s);

}  // namespace qm
