#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qpart/qasm.hpp"

namespace qpart::dataprep {

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& message) : std::runtime_error(message) {}
};

/// Instruction line placed in front of every model input.
inline constexpr std::string_view kInstruction =
    "Create barriers for efficient processing. Make sure that you check gates "
    "with multiple qubits and do not change their order if they depend on each other:";

/// Line that closes every target and truncates completions.
inline constexpr std::string_view kTerminator = "End of barrier creation";

/// Bijective map from float literal text to placeholder symbols F0, F1, ...
/// in first-occurrence order. Identical literal text always maps to the same
/// symbol; distinct texts never collide.
class SymbolTable {
public:
    const std::string* symbol_for(const std::string& float_text) const;
    const std::string* float_for(const std::string& symbol) const;
    std::string add(const std::string& float_text);
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    bool operator==(const SymbolTable& other) const { return entries_ == other.entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;  // float text -> symbol
    std::unordered_map<std::string, std::size_t> by_float_;
    std::unordered_map<std::string, std::size_t> by_symbol_;
};

/// Drops comments, measurements, barriers, and classical registers, then
/// rewrites the remaining gates into execution order. Gate declarations stay
/// in front of the gate list. Idempotent.
qasm::QasmProgram clean(const qasm::QasmProgram& program);

/// Replaces every float literal parameter by a symbol.
std::pair<qasm::QasmProgram, SymbolTable> symbolize(const qasm::QasmProgram& program);

/// Inverse substitution. Throws DataError on a symbol missing from the table.
qasm::QasmProgram desymbolize(const qasm::QasmProgram& program, const SymbolTable& table);

enum class TokenMode { Heuristic, External };

/// Token counts either from the built-in character-class heuristic (a maximal
/// run of [A-Za-z0-9_] is one token, any other non-space character is one
/// token) or from a sidecar of externally computed counts keyed by file name.
struct TokenEstimator {
    TokenMode mode = TokenMode::Heuristic;
    std::unordered_map<std::string, long> sidecar;

    static TokenEstimator heuristic() { return {}; }
    static TokenEstimator external(std::unordered_map<std::string, long> counts);
    static TokenEstimator external_from_json(const std::string& json_text);
};

long count_tokens(std::string_view text, const TokenEstimator& estimator,
                  const std::string& key = {});

struct DatasetRecord {
    std::string id;
    std::string prompt;       // instruction line + symbolized circuit text
    std::string target;       // partitioned circuit text, ends with kTerminator
    long token_count = 0;     // tokens of the symbolized circuit text
    SymbolTable symbols;
};

/// Circuit text of a record, i.e. the prompt without its instruction line.
std::string input_body(const DatasetRecord& record);

/// clean -> symbolize -> quick_partition -> serialize. The token count is
/// taken over the symbolized input circuit text.
DatasetRecord build_record(const qasm::QasmProgram& program, int block_size, std::string id,
                           const TokenEstimator& estimator = TokenEstimator::heuristic(),
                           const std::string& token_key = {});

/// In-context prompt: instruction, then per example its circuit, a "- - -"
/// separator, and "Answer: " followed by the example target (terminator
/// included), then the query circuit behind "Create partitions for this:".
/// shots must equal examples.size(); zero shots degenerates to instruction
/// plus query.
std::string build_fewshot_prompt(const std::vector<DatasetRecord>& examples,
                                 const DatasetRecord& query, int shots);

/// Circuit counts bucketed by token count, upper bounds
/// 3000, 6000, 12000, 24000, 48000, and everything above.
struct TokenHistogram {
    static constexpr std::array<long, 5> kBounds{3000, 6000, 12000, 24000, 48000};
    std::array<long, 6> counts{};

    void add(long tokens);
    long total() const;
    bool operator==(const TokenHistogram&) const = default;
};

struct DatasetSplit {
    std::vector<std::string> train;  // record ids, shuffled order
    std::vector<std::string> test;
    std::uint64_t seed = 0;
    double train_fraction = 0.0;
};

/// Drops records whose token count exceeds max_tokens, shuffles the remaining
/// ids with a seeded Fisher-Yates over std::mt19937_64, and splits so that
/// |train| = round(train_fraction * retained). Throws DataError when nothing
/// survives the filter.
DatasetSplit filter_and_split(const std::vector<DatasetRecord>& records, long max_tokens,
                              double train_fraction, std::uint64_t seed);

// Line-delimited JSON dataset files and the structured reports around them.
std::string to_jsonl(const std::vector<DatasetRecord>& records);
std::vector<DatasetRecord> records_from_jsonl(const std::string& text);
std::string split_to_json(const DatasetSplit& split);
std::string histogram_to_json(const TokenHistogram& histogram);

}  // namespace qpart::dataprep
