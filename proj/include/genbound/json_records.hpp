#pragma once

#include <json.hpp>

#include "genbound/counting.hpp"
#include "genbound/generation.hpp"
#include "genbound/strata.hpp"

namespace genbound {

using Json = nlohmann::ordered_json;

inline Json record_json(const CountResult& c) {
  Json j;
  j["record"] = "count";
  j["algebra"] = c.algebra;
  j["q"] = c.q;
  j["r"] = c.r;
  j["predicate"] = c.predicate;
  j["count"] = c.count;
  j["total"] = c.total;
  j["workers"] = c.workers;
  j["elapsed_ms"] = c.elapsed_ms;
  return j;
}

inline Json record_json(const McResult& m) {
  Json j;
  j["record"] = "monte_carlo";
  j["algebra"] = m.algebra;
  j["q"] = m.q;
  j["r"] = m.r;
  j["p_hat"] = m.p_hat;
  j["nongen_count"] = m.nongen_count;
  j["samples"] = m.samples;
  j["wilson_lo"] = m.wilson_lo;
  j["wilson_hi"] = m.wilson_hi;
  j["seed"] = m.seed;
  j["workers"] = m.workers;
  j["elapsed_ms"] = m.elapsed_ms;
  return j;
}

inline Json record_json(const CodimEstimate& e) {
  Json j;
  j["record"] = "codim_estimate";
  j["method"] = e.method;
  j["c_hat"] = e.c_hat;
  j["c_lo"] = e.c_lo;
  j["c_hi"] = e.c_hi;
  Json inputs = Json::array();
  for (const auto& in : e.inputs) {
    Json ij;
    ij["q"] = in.q;
    ij["value"] = in.value;
    ij["samples"] = in.samples;
    inputs.push_back(std::move(ij));
  }
  j["inputs"] = std::move(inputs);
  if (e.sandwich_ok.has_value()) j["sandwich_ok"] = *e.sandwich_ok;
  j["note"] = e.note;
  return j;
}

template <class F>
Json span_json(const Span<F>& sp) {
  Json rows = Json::array();
  for (const auto& row : sp.rows()) {
    Json r = Json::array();
    for (const auto& x : row) {
      if constexpr (std::is_same_v<F, QQ>)
        r.push_back(QQ::to_string(x));
      else
        r.push_back(x);
    }
    rows.push_back(std::move(r));
  }
  Json j;
  j["dim"] = sp.dim();
  j["basis"] = std::move(rows);
  return j;
}

template <class F>
Json tuple_json(const F&, const Tuple<F>& t) {
  Json out = Json::array();
  for (const auto& v : t) {
    Json r = Json::array();
    for (const auto& x : v) {
      if constexpr (std::is_same_v<F, QQ>)
        r.push_back(QQ::to_string(x));
      else
        r.push_back(x);
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// Removes timing fields so reruns with identical configs compare byte-equal.
inline void strip_timing(Json& j) {
  if (j.is_object()) {
    j.erase("elapsed_ms");
    for (auto& [k, v] : j.items()) strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_timing(v);
  }
}

}  // namespace genbound
