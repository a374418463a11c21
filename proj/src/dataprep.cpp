#include "qpart/dataprep.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qpart/ir.hpp"
#include "qpart/partition.hpp"

namespace qpart::dataprep {

using ordered_json = nlohmann::ordered_json;

const std::string* SymbolTable::symbol_for(const std::string& float_text) const {
    auto it = by_float_.find(float_text);
    return it == by_float_.end() ? nullptr : &entries_[it->second].second;
}

const std::string* SymbolTable::float_for(const std::string& symbol) const {
    auto it = by_symbol_.find(symbol);
    return it == by_symbol_.end() ? nullptr : &entries_[it->second].first;
}

std::string SymbolTable::add(const std::string& float_text) {
    if (const std::string* existing = symbol_for(float_text)) return *existing;
    std::string symbol = "F" + std::to_string(entries_.size());
    by_float_[float_text] = entries_.size();
    by_symbol_[symbol] = entries_.size();
    entries_.emplace_back(float_text, symbol);
    return symbol;
}

qasm::QasmProgram clean(const qasm::QasmProgram& program) {
    qasm::QasmProgram cleaned;
    cleaned.version = program.version;
    cleaned.includes = program.includes;
    cleaned.qregs = program.qregs;

    std::vector<qasm::GateStmt> gates;
    for (const auto& st : program.statements) {
        if (const auto* gate = std::get_if<qasm::GateStmt>(&st))
            gates.push_back(*gate);
        else if (const auto* decl = std::get_if<qasm::RawDeclStmt>(&st))
            cleaned.statements.push_back(*decl);
    }

    // The lowering visits gate statements in order, so gate i of the circuit
    // is gates[i]; the execution order permutation applies directly.
    qasm::QasmProgram gate_view = cleaned;
    for (const auto& g : gates) gate_view.statements.push_back(g);
    ir::Circuit circuit = ir::lower(gate_view);
    for (std::size_t i : ir::execution_order(circuit))
        cleaned.statements.push_back(std::move(gates[i]));
    return cleaned;
}

std::pair<qasm::QasmProgram, SymbolTable> symbolize(const qasm::QasmProgram& program) {
    qasm::QasmProgram result = program;
    SymbolTable table;
    for (auto& st : result.statements) {
        auto* gate = std::get_if<qasm::GateStmt>(&st);
        if (!gate) continue;
        for (auto& param : gate->params) {
            if (param.kind != qasm::ParamKind::FloatLiteral) continue;
            param = {qasm::ParamKind::Symbol, table.add(param.text)};
        }
    }
    return {std::move(result), std::move(table)};
}

qasm::QasmProgram desymbolize(const qasm::QasmProgram& program, const SymbolTable& table) {
    qasm::QasmProgram result = program;
    for (auto& st : result.statements) {
        auto* gate = std::get_if<qasm::GateStmt>(&st);
        if (!gate) continue;
        for (auto& param : gate->params) {
            if (param.kind != qasm::ParamKind::Symbol) continue;
            const std::string* text = table.float_for(param.text);
            if (!text) throw DataError("unknown symbol '" + param.text + "'");
            param = {qasm::ParamKind::FloatLiteral, *text};
        }
    }
    return result;
}

TokenEstimator TokenEstimator::external(std::unordered_map<std::string, long> counts) {
    return {TokenMode::External, std::move(counts)};
}

TokenEstimator TokenEstimator::external_from_json(const std::string& json_text) {
    ordered_json parsed = ordered_json::parse(json_text, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object())
        throw DataError("token sidecar must be a JSON object of name -> count");
    std::unordered_map<std::string, long> counts;
    for (const auto& [key, value] : parsed.items()) {
        if (!value.is_number_integer())
            throw DataError("token sidecar entry '" + key + "' is not an integer");
        counts[key] = value.get<long>();
    }
    return external(std::move(counts));
}

long count_tokens(std::string_view text, const TokenEstimator& estimator,
                  const std::string& key) {
    if (estimator.mode == TokenMode::External) {
        auto it = estimator.sidecar.find(key);
        if (it == estimator.sidecar.end())
            throw DataError("no sidecar token count for '" + key + "'");
        return it->second;
    }
    long tokens = 0;
    bool in_word = false;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            if (!in_word) ++tokens;
            in_word = true;
        } else {
            in_word = false;
            if (!std::isspace(static_cast<unsigned char>(c))) ++tokens;
        }
    }
    return tokens;
}

std::string input_body(const DatasetRecord& record) {
    std::size_t nl = record.prompt.find('\n');
    return nl == std::string::npos ? std::string() : record.prompt.substr(nl + 1);
}

DatasetRecord build_record(const qasm::QasmProgram& program, int block_size, std::string id,
                           const TokenEstimator& estimator, const std::string& token_key) {
    auto [symbolized, table] = symbolize(clean(program));
    ir::Circuit circuit = ir::lower(symbolized);
    part::PartitionedCircuit partitioned = part::quick_partition(circuit, block_size);
    std::string input_text = qasm::serialize(symbolized);

    DatasetRecord record;
    record.id = std::move(id);
    record.prompt = std::string(kInstruction) + "\n" + input_text;
    record.target =
        qasm::serialize(part::to_program(partitioned, circuit)) + std::string(kTerminator);
    record.token_count = count_tokens(input_text, estimator, token_key);
    record.symbols = std::move(table);
    return record;
}

std::string build_fewshot_prompt(const std::vector<DatasetRecord>& examples,
                                 const DatasetRecord& query, int shots) {
    if (shots < 0 || static_cast<std::size_t>(shots) != examples.size())
        throw DataError("shots must match the number of examples");

    std::string instruction(kInstruction);
    std::ostringstream out;
    if (shots == 0) {
        out << instruction << '\n';
    } else {
        std::string stem = instruction.substr(0, instruction.size() - 1);  // drop the colon
        out << stem
            << (shots == 1 ? ". Here is one example:"
                           : ". Here are " + std::to_string(shots) + " examples:")
            << '\n';
        for (const auto& example : examples) {
            out << input_body(example);
            out << "- - -\n";
            out << "Answer: " << example.target << '\n';
        }
    }
    out << "Create partitions for this:\n";
    out << input_body(query);
    out << "- - -\n";
    out << "Answer: ";
    return out.str();
}

void TokenHistogram::add(long tokens) {
    for (std::size_t i = 0; i < kBounds.size(); ++i) {
        if (tokens <= kBounds[i]) {
            ++counts[i];
            return;
        }
    }
    ++counts.back();
}

long TokenHistogram::total() const {
    long sum = 0;
    for (long c : counts) sum += c;
    return sum;
}

DatasetSplit filter_and_split(const std::vector<DatasetRecord>& records, long max_tokens,
                              double train_fraction, std::uint64_t seed) {
    if (train_fraction < 0.0 || train_fraction > 1.0)
        throw DataError("train fraction must lie in [0, 1]");

    std::vector<std::string> ids;
    for (const auto& r : records)
        if (r.token_count <= max_tokens) ids.push_back(r.id);
    if (ids.empty()) throw DataError("no records left after the token filter");
    std::sort(ids.begin(), ids.end());

    // Explicit Fisher-Yates: std::shuffle draws are implementation-defined,
    // this stays byte-reproducible across standard libraries.
    std::mt19937_64 rng(seed);
    for (std::size_t i = ids.size() - 1; i > 0; --i)
        std::swap(ids[i], ids[rng() % (i + 1)]);

    auto train_size = static_cast<std::size_t>(
        std::lround(train_fraction * static_cast<double>(ids.size())));
    train_size = std::min(train_size, ids.size());

    DatasetSplit split;
    split.seed = seed;
    split.train_fraction = train_fraction;
    split.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(train_size));
    split.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(train_size), ids.end());
    return split;
}

std::string to_jsonl(const std::vector<DatasetRecord>& records) {
    std::ostringstream out;
    for (const auto& record : records) {
        ordered_json symbols = ordered_json::object();
        for (const auto& [float_text, symbol] : record.symbols.entries())
            symbols[float_text] = symbol;
        ordered_json line = {{"id", record.id},
                             {"prompt", record.prompt},
                             {"target", record.target},
                             {"token_count", record.token_count},
                             {"symbols", std::move(symbols)}};
        out << line.dump() << '\n';
    }
    return out.str();
}

std::vector<DatasetRecord> records_from_jsonl(const std::string& text) {
    std::vector<DatasetRecord> records;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json parsed = ordered_json::parse(line, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("id") ||
            !parsed.contains("prompt") || !parsed.contains("target") ||
            !parsed.contains("token_count") || !parsed.contains("symbols"))
            throw DataError("malformed dataset record on line " + std::to_string(line_no));
        DatasetRecord record;
        record.id = parsed["id"].get<std::string>();
        record.prompt = parsed["prompt"].get<std::string>();
        record.target = parsed["target"].get<std::string>();
        record.token_count = parsed["token_count"].get<long>();
        for (const auto& [float_text, symbol] : parsed["symbols"].items()) {
            std::string assigned = record.symbols.add(float_text);
            if (assigned != symbol.get<std::string>())
                throw DataError("non-canonical symbol table on line " + std::to_string(line_no));
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::string split_to_json(const DatasetSplit& split) {
    ordered_json out = {{"seed", split.seed},
                        {"train_fraction", split.train_fraction},
                        {"train", split.train},
                        {"test", split.test}};
    return out.dump(2) + "\n";
}

std::string histogram_to_json(const TokenHistogram& histogram) {
    ordered_json out = ordered_json::object();
    for (std::size_t i = 0; i < TokenHistogram::kBounds.size(); ++i)
        out[std::to_string(TokenHistogram::kBounds[i])] = histogram.counts[i];
    out["48000+"] = histogram.counts.back();
    out["total"] = histogram.total();
    return out.dump(2) + "\n";
}

}  // namespace qpart::dataprep
