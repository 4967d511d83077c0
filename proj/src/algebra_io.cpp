#include "genbound/algebra_io.hpp"

namespace genbound {

FieldSpec field_spec_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "rational") return FieldSpec::rational();
    throw UsageError("field must be \"rational\" or {\"p\":..,\"m\":..}");
  }
  if (!j.is_object() || !j.contains("p"))
    throw UsageError("field must be \"rational\" or {\"p\":..,\"m\":..}");
  FieldSpec spec;
  spec.p = j["p"].get<std::uint64_t>();
  spec.m = j.value("m", 1);
  spec.kind = spec.m == 1 ? FieldSpec::Kind::Prime : FieldSpec::Kind::Extension;
  if (j.contains("modulus")) {
    for (const auto& c : j["modulus"]) spec.modulus.push_back(c.get<std::uint32_t>());
  }
  return spec;
}

Json field_spec_to_json(const FieldSpec& spec) {
  if (spec.is_rational()) return Json("rational");
  Json j;
  j["p"] = spec.p;
  j["m"] = spec.m;
  if (!spec.modulus.empty()) j["modulus"] = spec.modulus;
  return j;
}

}  // namespace genbound
