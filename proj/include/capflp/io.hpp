#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "capflp/audit.hpp"
#include "capflp/model.hpp"
#include "capflp/solvers.hpp"

namespace capflp {

using OrderedJson = nlohmann::ordered_json;

// Instance file schema:
//   {"positions": [0, "2.5", "1/3"], "class": {"type": "equicap", "m": 3, "k": 3}}
//   {"positions": [...], "class": {"type": "two", "c1": 4, "c2": 4}}
// Positions given as strings are parsed exactly; numbers are converted from
// their exact binary value (integers and dyadic decimals are exact).
struct Instance {
  std::vector<Rational> positions;  // raw reporting order
  std::optional<ProblemClass> cls;
};

inline Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  throw ParseError("expected a number or a numeric string");
}

inline OrderedJson rational_to_json(const Rational& r) {
  return to_fraction_string(r);
}

inline std::optional<ProblemClass> class_from_json(const nlohmann::json& j) {
  if (!j.contains("class")) return std::nullopt;
  const auto& c = j.at("class");
  std::string type = c.at("type").get<std::string>();
  if (type == "equicap")
    return ProblemClass(EquiCapNoSpare{c.at("m").get<Count>(), c.at("k").get<Count>()});
  if (type == "two")
    return ProblemClass(TwoAbundant{c.at("c1").get<Count>(), c.at("c2").get<Count>()});
  throw ParseError("class.type must be 'equicap' or 'two'");
}

inline Instance instance_from_json(const nlohmann::json& j) {
  Instance inst;
  if (!j.contains("positions") || !j.at("positions").is_array())
    throw ParseError("instance needs a 'positions' array");
  for (const auto& v : j.at("positions"))
    inst.positions.push_back(rational_from_json(v));
  if (inst.positions.empty()) throw EmptyInstance("instance has no agents");
  inst.cls = class_from_json(j);
  return inst;
}

inline OrderedJson class_to_json(const ProblemClass& cls) {
  OrderedJson c;
  if (cls.is_equicap()) {
    c["type"] = "equicap";
    c["m"] = cls.equicap().m;
    c["k"] = cls.equicap().k;
  } else {
    c["type"] = "two";
    c["c1"] = cls.two().c1;
    c["c2"] = cls.two().c2;
  }
  return c;
}

inline OrderedJson instance_to_json(const Instance& inst) {
  OrderedJson j;
  auto& arr = j["positions"] = OrderedJson::array();
  for (const Rational& r : inst.positions) arr.push_back(rational_to_json(r));
  if (inst.cls) j["class"] = class_to_json(*inst.cls);
  return j;
}

inline OrderedJson placement_to_json(const Placement& pl) {
  OrderedJson j;
  auto& y = j["y"] = OrderedJson::array();
  for (const Rational& v : pl.y) y.push_back(rational_to_json(v));
  j["pi"] = pl.pi;
  j["mu"] = pl.mu;
  if (pl.overflow_repaired) j["capacity_overflow_diagnostic"] = true;
  return j;
}

inline OrderedJson witness_to_json(const AuditWitness& w) {
  OrderedJson j;
  j["agents"] = w.agents;
  auto dump = [](const std::vector<Rational>& v) {
    OrderedJson a = OrderedJson::array();
    for (const Rational& r : v) a.push_back(rational_to_json(r));
    return a;
  };
  j["true_positions"] = dump(w.true_positions);
  j["misreports"] = dump(w.misreports);
  j["cost_before"] = dump(w.cost_before);
  j["cost_after"] = dump(w.cost_after);
  return j;
}

inline OrderedJson verdict_to_json(const AuditVerdict& v) {
  OrderedJson j;
  j["passed"] = v.passed;
  if (v.budget_exceeded) j["budget_exceeded"] = true;
  j["evaluations"] = v.evaluations;
  if (v.witness) j["witness"] = witness_to_json(*v.witness);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

// Stable decimal rendering for the CSV companion columns.
inline std::string decimal_string(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", r.to_double());
  return buf;
}

// FNV-1a 64-bit over the raw bytes; stable across runs so reports can
// reference their input by content.
inline std::string content_hash_hex(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace capflp
