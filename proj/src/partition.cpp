#include "qpart/partition.hpp"

#include <algorithm>

namespace qpart::part {

namespace {

bool disjoint(const std::set<int>& a, const std::set<int>& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else
            return false;
    }
    return true;
}

bool subset(const std::set<int>& inner, const std::set<int>& outer) {
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

}  // namespace

void commit_block(std::vector<Block>& blocks, std::vector<std::uint64_t>& births, Block closing,
                  std::uint64_t birth, const std::vector<const ActivePartition*>& pending) {
    const auto pos = static_cast<std::size_t>(
        std::upper_bound(births.begin(), births.end(), birth) - births.begin());
    for (std::size_t i = pos; i-- > 0;) {
        Block& candidate = blocks[i];
        if (disjoint(candidate.qubits, closing.qubits)) continue;
        const bool related =
            subset(closing.qubits, candidate.qubits) || subset(candidate.qubits, closing.qubits);
        // A still-open partition born between the candidate and the closing
        // one will commit into that gap later; merging across it would put
        // the closing gates ahead of that partition's earlier ones.
        bool shadowed = false;
        for (const ActivePartition* p : pending) {
            if (births[i] < p->birth && p->birth < birth && !disjoint(p->qubits, closing.qubits)) {
                shadowed = true;
                break;
            }
        }
        if (related && !shadowed) {
            candidate.qubits.insert(closing.qubits.begin(), closing.qubits.end());
            candidate.gates.insert(candidate.gates.end(), closing.gates.begin(),
                                   closing.gates.end());
            return;  // the merged block keeps the elder birth at births[i]
        }
        break;  // the nearest sharer refuses; merging past it would reorder
    }
    blocks.insert(blocks.begin() + static_cast<std::ptrdiff_t>(pos), std::move(closing));
    births.insert(births.begin() + static_cast<std::ptrdiff_t>(pos), birth);
}

PartitionedCircuit quick_partition(const ir::Circuit& circuit, int block_size) {
    if (block_size < 2)
        throw PartitionError("block size must be at least 2, got " + std::to_string(block_size));

    PartitionedCircuit result;
    result.qubit_count = circuit.qubit_count();
    result.block_size = block_size;

    std::vector<ActivePartition> active;  // in birth order throughout
    std::vector<std::uint64_t> births;    // parallel to result.blocks
    std::uint64_t next_birth = 0;

    for (std::size_t index : ir::execution_order(circuit)) {
        const ir::GateOp& gate = circuit.gates[index];
        std::set<int> gq(gate.qubits.begin(), gate.qubits.end());
        if (static_cast<int>(gq.size()) > block_size)
            throw PartitionError("gate '" + gate.name + "' touches " +
                                 std::to_string(gq.size()) +
                                 " qubits, more than the block size " +
                                 std::to_string(block_size));

        // Admissible hosts: share a qubit with the gate, none of the gate's
        // qubits blocked, and the union still fits the block size.
        std::size_t chosen = active.size();
        std::size_t fallback = active.size();
        for (std::size_t i = 0; i < active.size(); ++i) {
            const ActivePartition& p = active[i];
            if (disjoint(p.qubits, gq) || !disjoint(p.blocked, gq)) continue;
            std::set<int> merged = p.qubits;
            merged.insert(gq.begin(), gq.end());
            if (static_cast<int>(merged.size()) > block_size) continue;
            if (fallback == active.size()) fallback = i;
            if (subset(gq, p.qubits)) {
                chosen = i;
                break;
            }
        }
        if (chosen == active.size()) chosen = fallback;
        if (chosen == active.size()) {
            active.push_back({gq, {}, {}, next_birth++});
            chosen = active.size() - 1;
        }
        active[chosen].gates.push_back(gate);
        active[chosen].qubits.insert(gq.begin(), gq.end());
        for (std::size_t i = 0; i < active.size(); ++i)
            if (i != chosen) active[i].blocked.insert(gq.begin(), gq.end());

        // Partitions with every member qubit blocked close now, birth order.
        // The survivors and the later-closing siblings are still pending and
        // veto merges across their birth slots.
        std::vector<ActivePartition> closing;
        std::vector<ActivePartition> still_open;
        still_open.reserve(active.size());
        for (auto& p : active) {
            if (subset(p.qubits, p.blocked))
                closing.push_back(std::move(p));
            else
                still_open.push_back(std::move(p));
        }
        active = std::move(still_open);
        for (std::size_t k = 0; k < closing.size(); ++k) {
            std::vector<const ActivePartition*> pending;
            pending.reserve(closing.size() - k - 1 + active.size());
            for (std::size_t j = k + 1; j < closing.size(); ++j) pending.push_back(&closing[j]);
            for (const ActivePartition& p : active) pending.push_back(&p);
            commit_block(result.blocks, births,
                         Block{std::move(closing[k].qubits), std::move(closing[k].gates)},
                         closing[k].birth, pending);
        }
    }

    for (std::size_t k = 0; k < active.size(); ++k) {
        std::vector<const ActivePartition*> pending;
        for (std::size_t j = k + 1; j < active.size(); ++j) pending.push_back(&active[j]);
        commit_block(result.blocks, births,
                     Block{std::move(active[k].qubits), std::move(active[k].gates)},
                     active[k].birth, pending);
    }
    return result;
}

ir::Circuit flatten(const PartitionedCircuit& partitioned, const ir::Circuit& origin) {
    ir::Circuit circuit;
    circuit.layout = origin.layout;
    circuit.version = origin.version;
    circuit.includes = origin.includes;
    circuit.decls = origin.decls;
    for (const Block& block : partitioned.blocks)
        circuit.gates.insert(circuit.gates.end(), block.gates.begin(), block.gates.end());
    return circuit;
}

qasm::QasmProgram to_program(const PartitionedCircuit& partitioned, const ir::Circuit& origin) {
    qasm::QasmProgram program;
    program.version = origin.version;
    program.includes = origin.includes;
    program.qregs = origin.layout.qregs();
    for (const std::string& decl : origin.decls)
        program.statements.push_back(qasm::RawDeclStmt{decl});
    for (std::size_t b = 0; b < partitioned.blocks.size(); ++b) {
        if (b) program.statements.push_back(qasm::BarrierStmt{});
        for (const ir::GateOp& gate : partitioned.blocks[b].gates) {
            qasm::GateStmt st;
            st.name = gate.name;
            st.params = gate.params;
            for (int q : gate.qubits) st.qubits.push_back(origin.layout.ref(q));
            program.statements.push_back(std::move(st));
        }
    }
    return program;
}

}  // namespace qpart::part
