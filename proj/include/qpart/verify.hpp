#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>

#include "qpart/ir.hpp"
#include "qpart/partition.hpp"

namespace qpart::verify {

class VerifyError : public std::runtime_error {
public:
    explicit VerifyError(const std::string& message) : std::runtime_error(message) {}
};

/// First per-qubit mismatch, ordered by (qubit index, position in that
/// qubit's gate sequence).
struct Divergence {
    int qubit = 0;
    std::size_t position = 0;
    bool operator==(const Divergence&) const = default;
};

struct VerifyReport {
    bool equivalent = false;
    bool gate_multiset_ok = false;
    bool per_qubit_order_ok = false;
    bool width_ok = false;
    std::optional<Divergence> first_divergence;
};

/// Equivalence holds iff the gate multisets are equal and every qubit sees
/// the same gate sequence on both sides. Gate identity is name, parameter
/// texts, and qubit operands; two gates on one shared qubit never commute
/// under this criterion, whatever their matrices. Equal per-qubit sequences
/// imply identical dependency structure, so the recomputed cycle schedules
/// agree as well. Throws VerifyError when qubit counts differ.
VerifyReport equivalent(const ir::Circuit& original, const ir::Circuit& candidate);
VerifyReport equivalent(const ir::Circuit& original, const part::PartitionedCircuit& partitioned);

/// Textual form: the candidate program may carry barriers between blocks;
/// they are ignored by lowering.
VerifyReport equivalent(const ir::Circuit& original, const qasm::QasmProgram& partitioned);

/// Structural block check: every block spans at most block_size qubits and
/// each block's qubit set covers exactly its gates' qubits.
VerifyReport validate_blocks(const part::PartitionedCircuit& partitioned, int block_size);

}  // namespace qpart::verify
