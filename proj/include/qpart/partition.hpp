#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "qpart/ir.hpp"

namespace qpart::part {

class PartitionError : public std::runtime_error {
public:
    explicit PartitionError(const std::string& message) : std::runtime_error(message) {}
};

/// In-flight partition. blocked may contain qubits that never joined qubits:
/// once a gate on q lands elsewhere, q is barred here for good, whether or
/// not this partition ever held q.
struct ActivePartition {
    std::set<int> qubits;
    std::set<int> blocked;
    std::vector<ir::GateOp> gates;
    std::uint64_t birth = 0;
};

struct Block {
    std::set<int> qubits;
    std::vector<ir::GateOp> gates;  // relative execution order preserved
    bool operator==(const Block&) const = default;
};

struct PartitionedCircuit {
    int qubit_count = 0;
    int block_size = 0;
    std::vector<Block> blocks;
};

/// Greedy single-pass partitioner. Gates are consumed in execution order and
/// folded into active partitions of at most block_size qubits; fully blocked
/// partitions close and are committed through commit_block. Deterministic:
/// the same circuit and block_size always give the same blocks.
/// Throws PartitionError when a gate's arity exceeds block_size.
PartitionedCircuit quick_partition(const ir::Circuit& circuit, int block_size);

/// Commit rule for a closing partition. Blocking makes birth order equal
/// per-qubit gate order: when two partitions share a qubit, the elder's
/// gates on it all precede the younger's. The committed list therefore stays
/// sorted by source-partition birth (births runs parallel to blocks), and a
/// closing block enters at its own birth position regardless of close time.
///
/// Walking backward from that position, blocks disjoint from the closing one
/// are skipped. At the first block sharing a qubit the two merge, provided
/// either qubit set contains the other (the merged width never grows) and no
/// not-yet-committed partition born between the two shares a qubit with the
/// closing block; such a partition will land between them later, and gates
/// merged past it would replay out of order. Anything else inserts the
/// closing block unmerged.
void commit_block(std::vector<Block>& blocks, std::vector<std::uint64_t>& births, Block closing,
                  std::uint64_t birth, const std::vector<const ActivePartition*>& pending);

/// Blocks flattened back into one gate list, block by block.
ir::Circuit flatten(const PartitionedCircuit& partitioned, const ir::Circuit& origin);

/// QASM rendering with a bare "barrier;" between consecutive blocks.
qasm::QasmProgram to_program(const PartitionedCircuit& partitioned, const ir::Circuit& origin);

}  // namespace qpart::part
