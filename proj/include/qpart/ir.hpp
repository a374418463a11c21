#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qpart/qasm.hpp"

namespace qpart::ir {

/// Declaration-order flattening of a program's quantum registers. Global
/// indices are assigned register by register: with qreg a[2]; qreg b[2];
/// b[0] sits at global index 2.
class RegisterLayout {
public:
    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<qasm::RegisterDecl> qregs);

    int qubit_count() const { return total_; }
    int global_index(const qasm::QubitRef& ref) const;
    qasm::QubitRef ref(int global) const;
    const std::vector<qasm::RegisterDecl>& qregs() const { return qregs_; }
    bool operator==(const RegisterLayout& other) const { return qregs_ == other.qregs_; }

private:
    std::vector<qasm::RegisterDecl> qregs_;
    int total_ = 0;
};

struct GateOp {
    std::string name;
    std::vector<qasm::ParamExpr> params;
    std::vector<int> qubits;  // global indices, pairwise distinct
    bool operator==(const GateOp&) const = default;
};

/// Gate-only view of a program. Barriers, measurements, and comments are gone;
/// layout plus the carried header fields allow serialization back to QASM.
struct Circuit {
    RegisterLayout layout;
    std::string version;
    std::vector<std::string> includes;
    std::vector<std::string> decls;  // verbatim gate/opaque declarations
    std::vector<GateOp> gates;       // original statement order

    int qubit_count() const { return layout.qubit_count(); }
};

struct Schedule {
    std::vector<int> cycle;  // per gate position, cycles start at 0
    int depth() const;       // 1 + max cycle, 0 for an empty schedule
};

Circuit lower(const qasm::QasmProgram& program);

/// As-soon-as-possible cycles: a gate's cycle is 1 + the latest cycle among
/// the previous gates on its qubits, or 0 when it has none.
Schedule schedule_asap(const Circuit& circuit);

/// Gate positions sorted by (ASAP cycle, minimum qubit index, list position).
std::vector<std::size_t> execution_order(const Circuit& circuit);

/// Rewrites the gate list into execution order. Idempotent; per-qubit gate
/// sequences are unchanged.
Circuit reorder_to_execution_order(const Circuit& circuit);

}  // namespace qpart::ir
