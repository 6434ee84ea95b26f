#pragma once

#include <json.hpp>

#include "qcaas/qsim/types.hpp"

namespace qcaas::qsim {

// Circuit wire format, the document shape accepted by the job API:
//
//   {
//     "num_qubits": 2,
//     "num_clbits": 2,
//     "ops": [
//       {"gate": "h", "target": 0},
//       {"gate": "x", "target": 1},
//       {"gate": "cphase", "control": 0, "target": 1, "theta": 3.14159},
//       {"gate": "swap", "a": 0, "b": 1},
//       {"gate": "cperm", "controls": [0], "targets": [1], "mapping": [1, 0]},
//       {"gate": "measure", "qubit": 0, "clbit": 0}
//     ]
//   }

/// Parses the wire document into a Circuit. Throws MalformedCircuit with
/// field-level diagnostics in details; all problems found are reported.
/// Structural circuit validation (index ranges, measure discipline) is a
/// separate step: validate_circuit.
Circuit circuit_from_wire(const nlohmann::json& doc);

nlohmann::json circuit_to_wire(const Circuit& circuit);

nlohmann::json shot_result_to_wire(const ShotResult& result);
ShotResult shot_result_from_wire(const nlohmann::json& doc);

}  // namespace qcaas::qsim
