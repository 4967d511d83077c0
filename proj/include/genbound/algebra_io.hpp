#pragma once

#include <string>

#include <json.hpp>

#include "genbound/algebra.hpp"
#include "genbound/field.hpp"

namespace genbound {

using Json = nlohmann::ordered_json;

// Algebra file format (schema_version 1):
// {
//   "schema_version": 1,
//   "n": 4,
//   "field": {"p": 2, "m": 1} | "rational",
//   "name": "my algebra",
//   "ops": [
//     {"arity": 2, "label": "product",
//      "tensor": [[j1, j2, l, value], ...]}   // sparse; omitted entries are 0
//   ]
// }
// Values are integers or strings like "3/4"; they are reduced mod p when the
// field is finite.

FieldSpec field_spec_from_json(const Json& j);
Json field_spec_to_json(const FieldSpec& spec);

template <class F>
Algebra<F> algebra_from_json(const Json& j, const F& field) {
  if (!j.is_object()) throw UsageError("algebra file: top level must be an object");
  if (j.contains("schema_version") && j["schema_version"] != 1)
    throw UsageError("algebra file: unsupported schema_version");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw UsageError("algebra file: missing integer field \"n\"");
  Algebra<F> alg;
  alg.field = field;
  alg.n = j["n"].get<int>();
  if (alg.n < 1) throw UsageError("algebra file: n must be >= 1");
  alg.name = j.value("name", std::string("user_algebra"));
  if (!j.contains("ops") || !j["ops"].is_array() || j["ops"].empty())
    throw UsageError("algebra file: \"ops\" must be a nonempty array");

  auto parse_value = [&](const Json& v) -> typename F::Elem {
    if (v.is_number_integer()) return alg.field.from_int(v.get<long long>());
    if (v.is_string()) {
      if constexpr (std::is_same_v<F, QQ>) {
        return QQ::parse(v.get<std::string>());
      } else {
        Rational r = QQ::parse(v.get<std::string>());
        if (r.get_den() != 1)
          throw UsageError("algebra file: non-integer value over a finite field");
        return alg.field.from_int(static_cast<long long>(r.get_num().get_si()));
      }
    }
    throw UsageError("algebra file: tensor values must be integers or strings");
  };

  for (const auto& opj : j["ops"]) {
    MultiOp<F> op;
    if (!opj.contains("arity") || !opj["arity"].is_number_integer())
      throw UsageError("algebra file: op missing integer \"arity\"");
    op.arity = opj["arity"].get<int>();
    if (op.arity < 0 || op.arity > 4)
      throw UsageError("algebra file: arity must be in 0..4");
    op.label = op_label_from_string(opj.value("label", std::string("other")));
    if (!opj.contains("tensor") || !opj["tensor"].is_array())
      throw UsageError("algebra file: op missing \"tensor\" array");
    for (const auto& trip : opj["tensor"]) {
      if (!trip.is_array() || static_cast<int>(trip.size()) != op.arity + 2)
        throw UsageError("algebra file: tensor entry for arity " + std::to_string(op.arity) +
                         " must have " + std::to_string(op.arity + 2) +
                         " items (indices..., out, value)");
      std::vector<std::uint32_t> in;
      for (int k = 0; k < op.arity; ++k) {
        long long idx = trip[static_cast<std::size_t>(k)].get<long long>();
        if (idx < 0 || idx >= alg.n)
          throw UsageError("algebra file: tensor index out of range [0, n)");
        in.push_back(static_cast<std::uint32_t>(idx));
      }
      long long out = trip[static_cast<std::size_t>(op.arity)].get<long long>();
      if (out < 0 || out >= alg.n)
        throw UsageError("algebra file: tensor output index out of range [0, n)");
      auto value = parse_value(trip[static_cast<std::size_t>(op.arity) + 1]);
      if (!alg.field.is_zero(value))
        op.add_term(std::move(in), static_cast<std::uint32_t>(out), std::move(value));
    }
    alg.ops.push_back(std::move(op));
  }
  return alg;
}

template <class F>
Json algebra_to_json(const Algebra<F>& alg, const FieldSpec& spec) {
  Json j;
  j["schema_version"] = 1;
  j["n"] = alg.n;
  j["field"] = field_spec_to_json(spec);
  j["name"] = alg.name;
  Json ops = Json::array();
  for (const auto& op : alg.ops) {
    Json oj;
    oj["arity"] = op.arity;
    oj["label"] = to_string(op.label);
    Json tensor = Json::array();
    for (const auto& t : op.terms) {
      Json trip = Json::array();
      for (auto i : t.in) trip.push_back(i);
      trip.push_back(t.out);
      if constexpr (std::is_same_v<F, QQ>)
        trip.push_back(QQ::to_string(t.coeff));
      else
        trip.push_back(t.coeff);
      tensor.push_back(std::move(trip));
    }
    oj["tensor"] = std::move(tensor);
    ops.push_back(std::move(oj));
  }
  j["ops"] = std::move(ops);
  return j;
}

}  // namespace genbound
