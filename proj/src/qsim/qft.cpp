#include "qcaas/qsim/qft.hpp"

#include <algorithm>
#include <numbers>
#include <set>

#include "qcaas/common/error.hpp"

namespace qcaas::qsim {

namespace {

void require_distinct(const std::vector<std::uint32_t>& qubits) {
  if (qubits.empty()) {
    throw Error(ErrorCode::InvalidArgument, "transform needs at least one qubit");
  }
  std::set<std::uint32_t> seen;
  for (std::uint32_t q : qubits) {
    if (!seen.insert(q).second) {
      throw Error(ErrorCode::InvalidArgument,
                  "duplicate qubit " + std::to_string(q) + " in transform register");
    }
  }
}

}  // namespace

std::vector<GateOp> qft_ops(const std::vector<std::uint32_t>& qubits) {
  require_distinct(qubits);
  const std::size_t m = qubits.size();
  std::vector<GateOp> ops;
  for (std::size_t j = m; j-- > 0;) {
    ops.push_back(HGate{qubits[j]});
    for (std::size_t k = j; k-- > 0;) {
      const double theta = std::numbers::pi / static_cast<double>(std::uint64_t{1} << (j - k));
      ops.push_back(CPhaseGate{qubits[k], qubits[j], theta});
    }
  }
  for (std::size_t i = 0; i < m / 2; ++i) {
    ops.push_back(SwapGate{qubits[i], qubits[m - 1 - i]});
  }
  return ops;
}

std::vector<GateOp> inverse_qft_ops(const std::vector<std::uint32_t>& qubits) {
  std::vector<GateOp> ops = qft_ops(qubits);
  std::reverse(ops.begin(), ops.end());
  for (GateOp& op : ops) {
    if (auto* cp = std::get_if<CPhaseGate>(&op)) {
      cp->theta = -cp->theta;
    }
  }
  return ops;
}

}  // namespace qcaas::qsim
