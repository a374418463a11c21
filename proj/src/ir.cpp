#include "qpart/ir.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace qpart::ir {

RegisterLayout::RegisterLayout(std::vector<qasm::RegisterDecl> qregs) : qregs_(std::move(qregs)) {
    for (const auto& r : qregs_) total_ += r.size;
}

int RegisterLayout::global_index(const qasm::QubitRef& ref) const {
    int offset = 0;
    for (const auto& r : qregs_) {
        if (r.name == ref.reg) {
            if (ref.index < 0 || ref.index >= r.size)
                throw std::out_of_range("qubit index out of range: " + qasm::to_string(ref));
            return offset + ref.index;
        }
        offset += r.size;
    }
    throw std::out_of_range("unknown quantum register '" + ref.reg + "'");
}

qasm::QubitRef RegisterLayout::ref(int global) const {
    int offset = 0;
    for (const auto& r : qregs_) {
        if (global < offset + r.size) return {r.name, global - offset};
        offset += r.size;
    }
    throw std::out_of_range("global qubit index out of range: " + std::to_string(global));
}

int Schedule::depth() const {
    int max_cycle = -1;
    for (int c : cycle) max_cycle = std::max(max_cycle, c);
    return max_cycle + 1;
}

Circuit lower(const qasm::QasmProgram& program) {
    Circuit circuit;
    circuit.layout = RegisterLayout(program.qregs);
    circuit.version = program.version;
    circuit.includes = program.includes;
    for (const auto& st : program.statements) {
        if (const auto* gate = std::get_if<qasm::GateStmt>(&st)) {
            GateOp op;
            op.name = gate->name;
            op.params = gate->params;
            for (const auto& ref : gate->qubits)
                op.qubits.push_back(circuit.layout.global_index(ref));
            circuit.gates.push_back(std::move(op));
        } else if (const auto* decl = std::get_if<qasm::RawDeclStmt>(&st)) {
            circuit.decls.push_back(decl->text);
        }
    }
    return circuit;
}

Schedule schedule_asap(const Circuit& circuit) {
    Schedule schedule;
    schedule.cycle.reserve(circuit.gates.size());
    std::vector<int> last(circuit.qubit_count(), -1);
    for (const auto& gate : circuit.gates) {
        int cycle = 0;
        for (int q : gate.qubits) cycle = std::max(cycle, last[q] + 1);
        for (int q : gate.qubits) last[q] = cycle;
        schedule.cycle.push_back(cycle);
    }
    return schedule;
}

std::vector<std::size_t> execution_order(const Circuit& circuit) {
    Schedule schedule = schedule_asap(circuit);
    std::vector<std::size_t> order(circuit.gates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto min_qubit = [&](std::size_t i) {
        return *std::min_element(circuit.gates[i].qubits.begin(), circuit.gates[i].qubits.end());
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::make_tuple(schedule.cycle[a], min_qubit(a), a) <
               std::make_tuple(schedule.cycle[b], min_qubit(b), b);
    });
    return order;
}

Circuit reorder_to_execution_order(const Circuit& circuit) {
    Circuit result = circuit;
    result.gates.clear();
    for (std::size_t i : execution_order(circuit)) result.gates.push_back(circuit.gates[i]);
    return result;
}

}  // namespace qpart::ir
