#include "qpart/evalharness.hpp"

#include <algorithm>
#include <cctype>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "qpart/ir.hpp"
#include "qpart/verify.hpp"

namespace qpart::evalharness {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string_view trim_view(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

// Trims every line and drops blank ones; the comparison form for exact and
// repeated checks.
std::string normalized(std::string_view text) {
    std::string out;
    for (std::string_view line : split_lines(text)) {
        std::string_view t = trim_view(line);
        if (t.empty()) continue;
        out.append(t);
        out.push_back('\n');
    }
    return out;
}

bool is_correct(const dataprep::DatasetRecord& record, const std::string& truncated,
                bool& parse_ok) {
    parse_ok = false;
    try {
        qasm::QasmProgram completion = qasm::parse(truncated);
        parse_ok = true;
        qasm::QasmProgram input = qasm::parse(dataprep::input_body(record));
        ir::Circuit original = ir::lower(dataprep::desymbolize(input, record.symbols));
        qasm::QasmProgram candidate = dataprep::desymbolize(completion, record.symbols);
        return verify::equivalent(original, candidate).equivalent;
    } catch (const qasm::ParseError&) {
        return false;
    } catch (const dataprep::DataError&) {
        return false;
    } catch (const verify::VerifyError&) {
        return false;
    }
}

}  // namespace

std::string truncate(std::string_view raw) {
    std::size_t line_start = 0;
    while (line_start <= raw.size()) {
        std::size_t nl = raw.find('\n', line_start);
        std::size_t line_end = (nl == std::string_view::npos) ? raw.size() : nl;
        if (trim_view(raw.substr(line_start, line_end - line_start)) == dataprep::kTerminator) {
            if (line_start == 0) return std::string();
            return std::string(raw.substr(0, line_start - 1));  // drop the preceding newline
        }
        if (nl == std::string_view::npos) break;
        line_start = nl + 1;
    }
    return std::string(raw);
}

EvalReport score(const std::vector<dataprep::DatasetRecord>& dataset,
                 const std::vector<Completion>& completions) {
    std::map<std::string, const dataprep::DatasetRecord*> by_id;
    for (const auto& record : dataset) by_id[record.id] = &record;

    EvalReport report;
    std::map<std::string, const std::string*> latest;
    for (const auto& completion : completions) {
        if (!by_id.count(completion.record_id))
            throw EvalError("completion for unknown record id '" + completion.record_id + "'");
        if (latest.count(completion.record_id)) {
            ++report.duplicate_completions;
            std::cerr << "warning: duplicate completion for '" << completion.record_id
                      << "', keeping the latest\n";
        }
        latest[completion.record_id] = &completion.text;
    }

    for (const auto& [id, record] : by_id) {
        auto it = latest.find(id);
        if (it == latest.end()) {
            ++report.missing_completions;
            continue;
        }
        RecordScore rs;
        rs.id = id;
        std::string truncated = truncate(*it->second);
        rs.exact = normalized(truncated) == normalized(truncate(record->target));
        rs.repeated = normalized(truncated) == normalized(dataprep::input_body(*record));
        rs.correct = is_correct(*record, truncated, rs.parse_ok);
        if (!rs.parse_ok) ++report.parse_failures;
        report.per_record.push_back(std::move(rs));
    }

    report.n = report.per_record.size();
    if (report.n > 0) {
        auto rate = [&](auto member) {
            std::size_t count = 0;
            for (const auto& rs : report.per_record)
                if (rs.*member) ++count;
            return static_cast<double>(count) / static_cast<double>(report.n);
        };
        report.exact_match_rate = rate(&RecordScore::exact);
        report.repeated_code_rate = rate(&RecordScore::repeated);
        report.correct_code_rate = rate(&RecordScore::correct);
    }
    return report;
}

std::string report_to_json(const EvalReport& report) {
    ordered_json per_record = ordered_json::array();
    for (const auto& rs : report.per_record)
        per_record.push_back({{"id", rs.id},
                              {"parse_ok", rs.parse_ok},
                              {"exact", rs.exact},
                              {"repeated", rs.repeated},
                              {"correct", rs.correct}});
    ordered_json out = {{"n", report.n},
                        {"exact_match_rate", report.exact_match_rate},
                        {"repeated_code_rate", report.repeated_code_rate},
                        {"correct_code_rate", report.correct_code_rate},
                        {"parse_failures", report.parse_failures},
                        {"missing_completions", report.missing_completions},
                        {"duplicate_completions", report.duplicate_completions},
                        {"per_record", std::move(per_record)}};
    return out.dump(2) + "\n";
}

}  // namespace qpart::evalharness
