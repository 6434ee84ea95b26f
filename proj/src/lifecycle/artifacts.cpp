#include "qcaas/lifecycle/artifacts.hpp"

#include <algorithm>
#include <set>

#include "qcaas/common/error.hpp"

namespace qcaas::lifecycle {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& message) {
  throw Error(ErrorCode::MalformedManifest, message);
}

std::string bound_to_text(const json& bound) {
  return bound.dump();
}

}  // namespace

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Warn: return "warn";
  }
  return "unknown";
}

const char* to_string(NodeKind kind) {
  return kind == NodeKind::Classical ? "classical" : "quantum";
}

QSRManifest parse_qsr_manifest(const json& doc) {
  if (!doc.is_object()) {
    malformed("manifest must be a JSON object");
  }
  QSRManifest manifest;

  if (!doc.contains("functional") || !doc.at("functional").is_array()) {
    malformed("manifest needs a 'functional' array");
  }
  for (const json& entry : doc.at("functional")) {
    if (!entry.is_object() || !entry.contains("name") || !entry.at("name").is_string()) {
      malformed("functional requirement needs a string 'name'");
    }
    FunctionalRequirement req;
    req.name = entry.at("name").get<std::string>();
    if (entry.contains("description")) {
      if (!entry.at("description").is_string()) {
        malformed("functional requirement 'description' must be a string");
      }
      req.description = entry.at("description").get<std::string>();
    }
    manifest.functional.push_back(std::move(req));
  }

  if (!doc.contains("quality") || !doc.at("quality").is_array()) {
    malformed("manifest needs a 'quality' array");
  }
  std::set<std::string> names;
  for (const json& entry : doc.at("quality")) {
    if (!entry.is_object() || !entry.contains("name") || !entry.at("name").is_string()) {
      malformed("quality attribute needs a string 'name'");
    }
    QualityAttribute attr;
    attr.name = entry.at("name").get<std::string>();
    if (!names.insert(attr.name).second) {
      malformed("quality attribute '" + attr.name + "' appears more than once");
    }
    if (!entry.contains("bound")) {
      malformed("quality attribute '" + attr.name + "' has no bound");
    }
    attr.bound = entry.at("bound");
    // Bounds must be machine checkable; prose does not count.
    if (!attr.bound.is_number() && !attr.bound.is_boolean()) {
      malformed("quality attribute '" + attr.name + "' bound must be a number or boolean");
    }
    manifest.quality.push_back(std::move(attr));
  }

  if (doc.contains("metadata") && doc.at("metadata").is_object()) {
    const json& meta = doc.at("metadata");
    if (meta.contains("author_role") && meta.at("author_role").is_string()) {
      manifest.author_role = meta.at("author_role").get<std::string>();
    }
  }
  return manifest;
}

json to_json(const QSRManifest& manifest) {
  json functional = json::array();
  for (const FunctionalRequirement& req : manifest.functional) {
    json entry{{"name", req.name}};
    if (!req.description.empty()) {
      entry["description"] = req.description;
    }
    functional.push_back(std::move(entry));
  }
  json quality = json::array();
  for (const QualityAttribute& attr : manifest.quality) {
    quality.push_back(json{{"name", attr.name}, {"bound", attr.bound}});
  }
  json doc{{"functional", functional}, {"quality", quality}};
  if (!manifest.author_role.empty()) {
    doc["metadata"] = json{{"author_role", manifest.author_role}};
  }
  return doc;
}

bool QsrReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const QualityCheck& c) { return c.status == CheckStatus::Fail; });
}

json to_json(const QsrReport& report) {
  json checks = json::array();
  for (const QualityCheck& check : report.checks) {
    checks.push_back(json{{"attribute", check.attribute},
                          {"status", to_string(check.status)},
                          {"measured", check.measured},
                          {"bound", check.bound},
                          {"detail", check.detail}});
  }
  return json{{"passed", report.passed()}, {"checks", checks}};
}

QsrReport validate_qsr(const QSRManifest& manifest, const FactorizationPlan& plan) {
  QsrReport report;
  for (const QualityAttribute& attr : manifest.quality) {
    QualityCheck check;
    check.attribute = attr.name;
    check.bound = bound_to_text(attr.bound);

    if (attr.name == "qubit_budget") {
      const bool usable = attr.bound.is_number_integer() &&
                          (attr.bound.is_number_unsigned() ||
                           attr.bound.get<std::int64_t>() >= 0);
      if (!usable) {
        check.status = CheckStatus::Fail;
        check.detail = "qubit_budget bound must be a non-negative integer";
      } else {
        const auto budget = attr.bound.get<std::uint64_t>();
        check.measured = std::to_string(plan.circuit_width);
        if (plan.circuit_width <= budget) {
          check.status = CheckStatus::Pass;
          check.detail = "widest planned circuit fits the budget";
        } else {
          check.status = CheckStatus::Fail;
          check.detail = "planned circuit width " + std::to_string(plan.circuit_width) +
                         " exceeds budget " + std::to_string(budget);
        }
      }
    } else if (attr.name == "split_required") {
      if (!attr.bound.is_boolean()) {
        check.status = CheckStatus::Fail;
        check.detail = "split_required bound must be a boolean";
      } else {
        const bool required = attr.bound.get<bool>();
        const bool split = !plan.classical_services.empty() && !plan.quantum_services.empty();
        check.measured = split ? "split" : "single-kind";
        if (!required || split) {
          check.status = CheckStatus::Pass;
          check.detail = required ? "plan declares both classical and quantum steps"
                                  : "no split demanded";
        } else {
          check.status = CheckStatus::Fail;
          check.detail = "plan does not declare both classical and quantum steps";
        }
      }
    } else if (attr.name == "validation_required") {
      if (!attr.bound.is_boolean()) {
        check.status = CheckStatus::Fail;
        check.detail = "validation_required bound must be a boolean";
      } else {
        const bool required = attr.bound.get<bool>();
        check.measured = plan.verifies_product ? "verified" : "unverified";
        if (!required || plan.verifies_product) {
          check.status = CheckStatus::Pass;
          check.detail = required ? "plan re-multiplies reported factors" : "no validation demanded";
        } else {
          check.status = CheckStatus::Fail;
          check.detail = "plan does not verify reported factor products";
        }
      }
    } else {
      check.status = CheckStatus::Warn;
      check.detail = "no built-in checker for this attribute";
    }
    report.checks.push_back(std::move(check));
  }
  return report;
}

DeploymentDescriptor parse_deployment_descriptor(const json& doc) {
  if (!doc.is_object()) {
    malformed("deployment descriptor must be a JSON object");
  }
  DeploymentDescriptor descriptor;

  if (!doc.contains("nodes") || !doc.at("nodes").is_array() || doc.at("nodes").empty()) {
    malformed("deployment descriptor needs a non-empty 'nodes' array");
  }
  std::set<std::string> node_ids;
  for (const json& entry : doc.at("nodes")) {
    if (!entry.is_object() || !entry.contains("node_id") || !entry.at("node_id").is_string() ||
        !entry.contains("kind") || !entry.at("kind").is_string()) {
      malformed("each node needs string fields 'node_id' and 'kind'");
    }
    DeploymentNode node;
    node.node_id = entry.at("node_id").get<std::string>();
    const std::string kind = entry.at("kind").get<std::string>();
    if (kind == "classical") {
      node.kind = NodeKind::Classical;
    } else if (kind == "quantum") {
      node.kind = NodeKind::Quantum;
    } else {
      malformed("node '" + node.node_id + "' has unknown kind '" + kind + "'");
    }
    if (!node_ids.insert(node.node_id).second) {
      malformed("node id '" + node.node_id + "' appears more than once");
    }
    descriptor.nodes.push_back(std::move(node));
  }

  if (!doc.contains("assignments") || !doc.at("assignments").is_object()) {
    malformed("deployment descriptor needs an 'assignments' object");
  }
  for (const auto& [service, node] : doc.at("assignments").items()) {
    if (!node.is_string()) {
      malformed("assignment for '" + service + "' must name a node id");
    }
    descriptor.assignments[service] = node.get<std::string>();
  }
  return descriptor;
}

json to_json(const DeploymentDescriptor& descriptor) {
  json nodes = json::array();
  for (const DeploymentNode& node : descriptor.nodes) {
    nodes.push_back(json{{"node_id", node.node_id}, {"kind", to_string(node.kind)}});
  }
  json assignments = json::object();
  for (const auto& [service, node] : descriptor.assignments) {
    assignments[service] = node;
  }
  return json{{"nodes", nodes}, {"assignments", assignments}};
}

DeploymentReport validate_deployment(
    const DeploymentDescriptor& descriptor,
    const std::map<std::string, orchestrator::StepKind>& classifications) {
  std::map<std::string, NodeKind> node_kinds;
  for (const DeploymentNode& node : descriptor.nodes) {
    node_kinds[node.node_id] = node.kind;
  }

  DeploymentReport report;
  for (const auto& [service, kind] : classifications) {
    const auto assignment = descriptor.assignments.find(service);
    if (assignment == descriptor.assignments.end()) {
      throw Error(ErrorCode::MalformedManifest,
                  "deployment descriptor does not assign service '" + service + "'");
    }
    const auto node = node_kinds.find(assignment->second);
    if (node == node_kinds.end()) {
      throw Error(ErrorCode::MalformedManifest,
                  "service '" + service + "' assigned to unknown node '" + assignment->second + "'");
    }
    const NodeKind expected =
        kind == orchestrator::StepKind::Classical ? NodeKind::Classical : NodeKind::Quantum;
    if (node->second != expected) {
      report.violations.push_back("service '" + service + "' is " +
                                  orchestrator::to_string(kind) + " but assigned to " +
                                  to_string(node->second) + " node '" + assignment->second + "'");
    }
  }
  report.passed = report.violations.empty();
  return report;
}

std::map<std::string, orchestrator::StepKind> workflow_classifications() {
  std::map<std::string, orchestrator::StepKind> result;
  for (const std::string& service : orchestrator::workflow_services()) {
    result[service] = orchestrator::classify_step(service);
  }
  return result;
}

}  // namespace qcaas::lifecycle
