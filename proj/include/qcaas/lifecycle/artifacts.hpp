#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcaas/orchestrator/workflow.hpp"

namespace qcaas::lifecycle {

/// One functional requirement: a named capability with free-text detail.
struct FunctionalRequirement {
  std::string name;
  std::string description;
};

/// One quality attribute with a machine-checkable bound (integer or
/// boolean). Free-text-only attributes are rejected at parse time.
struct QualityAttribute {
  std::string name;
  nlohmann::json bound;
};

/// Quantum software requirements manifest: what a quantum workload must do
/// and the measurable limits it must respect.
struct QSRManifest {
  std::vector<FunctionalRequirement> functional;
  std::vector<QualityAttribute> quality;
  std::string author_role;
};

QSRManifest parse_qsr_manifest(const nlohmann::json& doc);
nlohmann::json to_json(const QSRManifest& manifest);

/// Concrete execution plan summary checked against a manifest.
struct FactorizationPlan {
  std::uint32_t circuit_width = 0;
  std::vector<std::string> classical_services;
  std::vector<std::string> quantum_services;
  bool verifies_product = false;
};

enum class CheckStatus { Pass, Fail, Warn };

const char* to_string(CheckStatus status);

struct QualityCheck {
  std::string attribute;
  CheckStatus status = CheckStatus::Warn;
  std::string measured;
  std::string bound;
  std::string detail;
};

struct QsrReport {
  std::vector<QualityCheck> checks;

  /// True when no check failed (warnings allowed).
  bool passed() const;
};

nlohmann::json to_json(const QsrReport& report);

/// Evaluates each quality attribute against the plan:
///   qubit_budget        Pass iff plan.circuit_width <= bound
///   split_required      Pass iff the plan declares both step kinds
///   validation_required Pass iff the plan verifies reported products
/// Attributes without a built-in checker yield Warn, never Pass.
QsrReport validate_qsr(const QSRManifest& manifest, const FactorizationPlan& plan);

enum class NodeKind { Classical, Quantum };

const char* to_string(NodeKind kind);

struct DeploymentNode {
  std::string node_id;
  NodeKind kind = NodeKind::Classical;
};

/// Maps every workflow service onto a deployment node.
struct DeploymentDescriptor {
  std::vector<DeploymentNode> nodes;
  std::map<std::string, std::string> assignments;  // service -> node_id
};

DeploymentDescriptor parse_deployment_descriptor(const nlohmann::json& doc);
nlohmann::json to_json(const DeploymentDescriptor& descriptor);

struct DeploymentReport {
  bool passed = false;
  std::vector<std::string> violations;
};

/// Checks a descriptor against service classifications: every classified
/// service must be assigned to an existing node (missing assignment or
/// unknown node is an error, MalformedManifest), and the node's kind must
/// match the service's classification (mismatches fail the report, naming
/// the service).
DeploymentReport validate_deployment(
    const DeploymentDescriptor& descriptor,
    const std::map<std::string, orchestrator::StepKind>& classifications);

/// classify_step applied to every declared workflow service.
std::map<std::string, orchestrator::StepKind> workflow_classifications();

}  // namespace qcaas::lifecycle
