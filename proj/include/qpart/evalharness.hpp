#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qpart/dataprep.hpp"

namespace qpart::evalharness {

class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string& message) : std::runtime_error(message) {}
};

struct Completion {
    std::string record_id;
    std::string text;  // raw model output
};

struct RecordScore {
    std::string id;
    bool parse_ok = false;
    bool exact = false;     // matches the reference target body
    bool repeated = false;  // copies the input circuit back
    bool correct = false;   // parses and is verifier-equivalent to the input
};

struct EvalReport {
    std::size_t n = 0;
    double exact_match_rate = 0.0;
    double repeated_code_rate = 0.0;
    double correct_code_rate = 0.0;
    std::size_t parse_failures = 0;
    std::size_t missing_completions = 0;   // dataset records without a completion
    std::size_t duplicate_completions = 0;
    std::vector<RecordScore> per_record;   // sorted by record id
};

/// Everything before the first line equal to "End of barrier creation"
/// (surrounding whitespace tolerated); the full text when absent.
std::string truncate(std::string_view raw);

/// Scores completions against their dataset records. Comparisons ignore
/// trailing line whitespace and blank lines; "correct" re-parses the
/// completion, undoes the symbol substitution, and runs the equivalence
/// check against the record's input circuit. Unparseable completions are
/// scored as not correct. Duplicate completions for one record keep the
/// latest and are counted; a completion for an unknown record id raises
/// EvalError.
EvalReport score(const std::vector<dataprep::DatasetRecord>& dataset,
                 const std::vector<Completion>& completions);

std::string report_to_json(const EvalReport& report);

}  // namespace qpart::evalharness
