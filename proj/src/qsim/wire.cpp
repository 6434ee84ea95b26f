#include "qcaas/qsim/wire.hpp"

#include <limits>
#include <string>
#include <vector>

#include "qcaas/common/error.hpp"

namespace qcaas::qsim {

namespace {

using nlohmann::json;

class Diagnostics {
 public:
  void add(const std::string& path, const std::string& message) {
    problems_.push_back(path + ": " + message);
  }

  void raise_if_any(const char* what) const {
    if (!problems_.empty()) {
      throw Error(ErrorCode::MalformedCircuit,
                  std::string(what) + " failed to parse with " +
                      std::to_string(problems_.size()) + " problem(s)",
                  json(problems_));
    }
  }

 private:
  std::vector<std::string> problems_;
};

// JSON has no signedness: a signed integer value >= 0 is the same document
// as its unsigned twin, so both spellings are accepted.
bool is_nonneg_int(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

bool want_u32(const json& obj, const std::string& path, const char* field, Diagnostics& diag,
              std::uint32_t& out) {
  if (!obj.contains(field)) {
    diag.add(path, std::string("missing field '") + field + "'");
    return false;
  }
  const json& v = obj.at(field);
  if (!is_nonneg_int(v) || v.get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
    diag.add(path + "." + field, "expected a non-negative integer");
    return false;
  }
  out = v.get<std::uint32_t>();
  return true;
}

bool want_double(const json& obj, const std::string& path, const char* field, Diagnostics& diag,
                 double& out) {
  if (!obj.contains(field)) {
    diag.add(path, std::string("missing field '") + field + "'");
    return false;
  }
  const json& v = obj.at(field);
  if (!v.is_number()) {
    diag.add(path + "." + field, "expected a number");
    return false;
  }
  out = v.get<double>();
  return true;
}

bool want_u32_array(const json& obj, const std::string& path, const char* field, Diagnostics& diag,
                    std::vector<std::uint32_t>& out) {
  if (!obj.contains(field)) {
    diag.add(path, std::string("missing field '") + field + "'");
    return false;
  }
  const json& v = obj.at(field);
  if (!v.is_array()) {
    diag.add(path + "." + field, "expected an array of non-negative integers");
    return false;
  }
  out.clear();
  bool ok = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& e = v[i];
    if (!is_nonneg_int(e) ||
        e.get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
      diag.add(path + "." + field + "[" + std::to_string(i) + "]",
               "expected a non-negative integer");
      ok = false;
      continue;
    }
    out.push_back(e.get<std::uint32_t>());
  }
  return ok;
}

bool want_u64_array(const json& obj, const std::string& path, const char* field, Diagnostics& diag,
                    std::vector<std::uint64_t>& out) {
  if (!obj.contains(field)) {
    diag.add(path, std::string("missing field '") + field + "'");
    return false;
  }
  const json& v = obj.at(field);
  if (!v.is_array()) {
    diag.add(path + "." + field, "expected an array of non-negative integers");
    return false;
  }
  out.clear();
  bool ok = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& e = v[i];
    if (!is_nonneg_int(e)) {
      diag.add(path + "." + field + "[" + std::to_string(i) + "]",
               "expected a non-negative integer");
      ok = false;
      continue;
    }
    out.push_back(e.get<std::uint64_t>());
  }
  return ok;
}

}  // namespace

Circuit circuit_from_wire(const json& doc) {
  Diagnostics diag;
  Circuit circuit;

  if (!doc.is_object()) {
    diag.add("$", "circuit document must be a JSON object");
    diag.raise_if_any("circuit");
  }

  want_u32(doc, "$", "num_qubits", diag, circuit.num_qubits);
  want_u32(doc, "$", "num_clbits", diag, circuit.num_clbits);

  if (!doc.contains("ops")) {
    diag.add("$", "missing field 'ops'");
  } else if (!doc.at("ops").is_array()) {
    diag.add("$.ops", "expected an array of gate records");
  } else {
    const json& ops = doc.at("ops");
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const std::string path = "$.ops[" + std::to_string(i) + "]";
      const json& op = ops[i];
      if (!op.is_object()) {
        diag.add(path, "expected an object");
        continue;
      }
      if (!op.contains("gate") || !op.at("gate").is_string()) {
        diag.add(path, "missing string field 'gate'");
        continue;
      }
      const std::string gate = op.at("gate").get<std::string>();
      if (gate == "h") {
        HGate g{};
        if (want_u32(op, path, "target", diag, g.target)) {
          circuit.ops.emplace_back(g);
        }
      } else if (gate == "x") {
        XGate g{};
        if (want_u32(op, path, "target", diag, g.target)) {
          circuit.ops.emplace_back(g);
        }
      } else if (gate == "cphase") {
        CPhaseGate g{};
        const bool c = want_u32(op, path, "control", diag, g.control);
        const bool t = want_u32(op, path, "target", diag, g.target);
        const bool a = want_double(op, path, "theta", diag, g.theta);
        if (c && t && a) {
          circuit.ops.emplace_back(g);
        }
      } else if (gate == "swap") {
        SwapGate g{};
        const bool a = want_u32(op, path, "a", diag, g.a);
        const bool b = want_u32(op, path, "b", diag, g.b);
        if (a && b) {
          circuit.ops.emplace_back(g);
        }
      } else if (gate == "cperm") {
        CPermGate g{};
        const bool c = want_u32_array(op, path, "controls", diag, g.controls);
        const bool t = want_u32_array(op, path, "targets", diag, g.targets);
        const bool m = want_u64_array(op, path, "mapping", diag, g.mapping);
        if (c && t && m) {
          circuit.ops.emplace_back(std::move(g));
        }
      } else if (gate == "measure") {
        MeasureOp g{};
        const bool q = want_u32(op, path, "qubit", diag, g.qubit);
        const bool c = want_u32(op, path, "clbit", diag, g.clbit);
        if (q && c) {
          circuit.ops.emplace_back(g);
        }
      } else {
        diag.add(path + ".gate", "unknown gate '" + gate + "'");
      }
    }
  }

  diag.raise_if_any("circuit");
  return circuit;
}

json circuit_to_wire(const Circuit& circuit) {
  json ops = json::array();
  for (const GateOp& op : circuit.ops) {
    if (const auto* h = std::get_if<HGate>(&op)) {
      ops.push_back({{"gate", "h"}, {"target", h->target}});
    } else if (const auto* x = std::get_if<XGate>(&op)) {
      ops.push_back({{"gate", "x"}, {"target", x->target}});
    } else if (const auto* cp = std::get_if<CPhaseGate>(&op)) {
      ops.push_back(
          {{"gate", "cphase"}, {"control", cp->control}, {"target", cp->target}, {"theta", cp->theta}});
    } else if (const auto* sw = std::get_if<SwapGate>(&op)) {
      ops.push_back({{"gate", "swap"}, {"a", sw->a}, {"b", sw->b}});
    } else if (const auto* perm = std::get_if<CPermGate>(&op)) {
      ops.push_back({{"gate", "cperm"},
                     {"controls", perm->controls},
                     {"targets", perm->targets},
                     {"mapping", perm->mapping}});
    } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
      ops.push_back({{"gate", "measure"}, {"qubit", m->qubit}, {"clbit", m->clbit}});
    }
  }
  return json{{"num_qubits", circuit.num_qubits}, {"num_clbits", circuit.num_clbits}, {"ops", ops}};
}

json shot_result_to_wire(const ShotResult& result) {
  json counts = json::object();
  for (const auto& [bits, count] : result.counts) {
    counts[bits] = count;
  }
  return json{{"shots", result.shots}, {"seed", result.seed}, {"counts", counts}};
}

ShotResult shot_result_from_wire(const json& doc) {
  if (!doc.is_object() || !doc.contains("shots") || !doc.contains("seed") ||
      !doc.contains("counts") || !doc.at("counts").is_object()) {
    throw Error(ErrorCode::InvalidArgument, "malformed shot result document");
  }
  ShotResult result;
  result.shots = doc.at("shots").get<std::uint64_t>();
  result.seed = doc.at("seed").get<std::uint64_t>();
  for (const auto& [bits, count] : doc.at("counts").items()) {
    result.counts[bits] = count.get<std::uint64_t>();
  }
  return result;
}

}  // namespace qcaas::qsim
