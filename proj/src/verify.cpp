#include "qpart/verify.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace qpart::verify {

namespace {

std::string gate_key(const ir::GateOp& gate) {
    std::ostringstream out;
    out << gate.name << '(';
    for (const auto& p : gate.params) out << p.text << ',';
    out << ')';
    for (int q : gate.qubits) out << ' ' << q;
    return out.str();
}

bool multisets_equal(const std::vector<ir::GateOp>& a, const std::vector<ir::GateOp>& b) {
    if (a.size() != b.size()) return false;
    std::vector<std::string> ka, kb;
    ka.reserve(a.size());
    kb.reserve(b.size());
    for (const auto& g : a) ka.push_back(gate_key(g));
    for (const auto& g : b) kb.push_back(gate_key(g));
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    return ka == kb;
}

std::vector<std::vector<const ir::GateOp*>> per_qubit(const std::vector<ir::GateOp>& gates,
                                                      int qubit_count) {
    std::vector<std::vector<const ir::GateOp*>> seq(qubit_count);
    for (const auto& g : gates)
        for (int q : g.qubits) seq[q].push_back(&g);
    return seq;
}

}  // namespace

VerifyReport equivalent(const ir::Circuit& original, const ir::Circuit& candidate) {
    if (original.qubit_count() != candidate.qubit_count())
        throw VerifyError("qubit count mismatch: " + std::to_string(original.qubit_count()) +
                          " vs " + std::to_string(candidate.qubit_count()));

    VerifyReport report;
    report.width_ok = true;
    report.gate_multiset_ok = multisets_equal(original.gates, candidate.gates);

    const int n = original.qubit_count();
    auto sa = per_qubit(original.gates, n);
    auto sb = per_qubit(candidate.gates, n);
    report.per_qubit_order_ok = true;
    for (int q = 0; q < n && report.per_qubit_order_ok; ++q) {
        const auto& a = sa[q];
        const auto& b = sb[q];
        std::size_t m = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < m; ++i) {
            if (!(*a[i] == *b[i])) {
                report.per_qubit_order_ok = false;
                report.first_divergence = Divergence{q, i};
                break;
            }
        }
        if (report.per_qubit_order_ok && a.size() != b.size()) {
            report.per_qubit_order_ok = false;
            report.first_divergence = Divergence{q, m};
        }
    }
    report.equivalent = report.gate_multiset_ok && report.per_qubit_order_ok;
    return report;
}

VerifyReport equivalent(const ir::Circuit& original, const part::PartitionedCircuit& partitioned) {
    if (original.qubit_count() != partitioned.qubit_count)
        throw VerifyError("qubit count mismatch: " + std::to_string(original.qubit_count()) +
                          " vs " + std::to_string(partitioned.qubit_count));
    return equivalent(original, part::flatten(partitioned, original));
}

VerifyReport equivalent(const ir::Circuit& original, const qasm::QasmProgram& partitioned) {
    return equivalent(original, ir::lower(partitioned));
}

VerifyReport validate_blocks(const part::PartitionedCircuit& partitioned, int block_size) {
    VerifyReport report;
    report.gate_multiset_ok = true;
    report.per_qubit_order_ok = true;
    report.width_ok = true;
    for (const part::Block& block : partitioned.blocks) {
        if (static_cast<int>(block.qubits.size()) > block_size) report.width_ok = false;
        std::set<int> used;
        for (const auto& gate : block.gates) used.insert(gate.qubits.begin(), gate.qubits.end());
        if (used != block.qubits) report.width_ok = false;
    }
    report.equivalent = report.width_ok;
    return report;
}

}  // namespace qpart::verify
