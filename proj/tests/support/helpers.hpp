#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpart/ir.hpp"

namespace testsupport {

inline std::filesystem::path data_dir() { return std::filesystem::path(QPART_DATA_DIR); }
inline std::string cli_binary() { return QPART_BIN; }

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::filesystem::path fresh_temp_dir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    auto dir = std::filesystem::temp_directory_path() /
               ("qpart_test_" + tag + "_" + std::to_string(rng()));
    std::filesystem::create_directories(dir);
    return dir;
}

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

inline CliResult run_cli(const std::string& args) {
    std::string command = cli_binary() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed");
    CliResult result;
    std::array<char, 4096> chunk{};
    std::size_t got = 0;
    while ((got = fread(chunk.data(), 1, chunk.size(), pipe)) > 0)
        result.output.append(chunk.data(), got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

// IR-level circuit construction for partitioner and verifier tests.
inline qpart::ir::GateOp g(std::string name, std::vector<int> qubits,
                           std::vector<std::string> params = {}) {
    qpart::ir::GateOp op;
    op.name = std::move(name);
    for (auto& p : params) op.params.push_back(qpart::qasm::ParamExpr::of(std::move(p)));
    op.qubits = std::move(qubits);
    return op;
}

inline qpart::ir::Circuit make_circuit(int qubits, std::vector<qpart::ir::GateOp> gates) {
    qpart::ir::Circuit circuit;
    circuit.layout = qpart::ir::RegisterLayout({{"q", qubits}});
    circuit.version = "2.0";
    circuit.includes = {"qelib1.inc"};
    circuit.gates = std::move(gates);
    return circuit;
}

// Deterministic random circuits over {h, x, rz, cx} (plus ccx when the
// gate arity cap allows it).
inline qpart::ir::Circuit random_circuit(std::mt19937_64& rng, int max_qubits, int max_gates,
                                         int max_arity = 2) {
    std::uniform_int_distribution<int> qubit_count(2, max_qubits);
    int n = qubit_count(rng);
    std::uniform_int_distribution<int> gate_count(1, max_gates);
    std::uniform_int_distribution<int> kind(0, max_arity >= 3 && n >= 3 ? 4 : 3);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_real_distribution<double> angle(0.0, 6.28);
    std::vector<qpart::ir::GateOp> gates;
    int m = gate_count(rng);
    for (int i = 0; i < m; ++i) {
        switch (kind(rng)) {
            case 0: gates.push_back(g("h", {pick(rng)})); break;
            case 1: gates.push_back(g("x", {pick(rng)})); break;
            case 2: {
                std::ostringstream text;
                text.precision(12);
                text << std::fixed << angle(rng);
                gates.push_back(g("rz", {pick(rng)}, {text.str()}));
                break;
            }
            case 3: {
                int a = pick(rng);
                int b = pick(rng);
                while (b == a) b = pick(rng);
                gates.push_back(g("cx", {a, b}));
                break;
            }
            default: {
                int a = pick(rng);
                int b = pick(rng);
                int c = pick(rng);
                while (b == a) b = pick(rng);
                while (c == a || c == b) c = pick(rng);
                gates.push_back(g("ccx", {a, b, c}));
                break;
            }
        }
    }
    return make_circuit(n, std::move(gates));
}

}  // namespace testsupport
