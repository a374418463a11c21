// Command line front end: partition, verify, prep, score, stats.
//
// Exit codes: 0 success, 1 verification or score failure, 2 usage error,
// 3 I/O or parse error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpart/dataprep.hpp"
#include "qpart/evalharness.hpp"
#include "qpart/ir.hpp"
#include "qpart/partition.hpp"
#include "qpart/qasm.hpp"
#include "qpart/verify.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Atomic replace: write a temporary sibling, then rename over the target.
void write_file(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw IoError("cannot write '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

std::vector<fs::path> qasm_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".qasm")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no .qasm files in '" + dir.string() + "'");
    return files;
}

struct Options {
    std::string input;
    std::string second;
    std::string out;
    std::string format = "text";
    std::string token_mode = "heuristic";
    std::string token_sidecar;
    int block_size = 4;
    long max_tokens = 6000;
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
    double max_parse_fail_rate = 1.0;
};

qpart::dataprep::TokenEstimator make_estimator(const Options& opt) {
    if (opt.token_mode == "heuristic") return qpart::dataprep::TokenEstimator::heuristic();
    if (opt.token_sidecar.empty())
        throw IoError("--token-mode external requires --token-sidecar");
    return qpart::dataprep::TokenEstimator::external_from_json(read_file(opt.token_sidecar));
}

int cmd_partition(const Options& opt) {
    namespace dp = qpart::dataprep;
    qpart::qasm::QasmProgram program = qpart::qasm::parse(read_file(opt.input));
    qpart::ir::Circuit circuit = qpart::ir::lower(dp::clean(program));
    qpart::part::PartitionedCircuit partitioned;
    try {
        partitioned = qpart::part::quick_partition(circuit, opt.block_size);
    } catch (const qpart::part::PartitionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    emit(qpart::qasm::serialize(qpart::part::to_program(partitioned, circuit)), opt.out);
    return kExitOk;
}

int cmd_verify(const Options& opt) {
    qpart::ir::Circuit original = qpart::ir::lower(qpart::qasm::parse(read_file(opt.input)));
    qpart::qasm::QasmProgram partitioned = qpart::qasm::parse(read_file(opt.second));
    qpart::verify::VerifyReport report;
    try {
        report = qpart::verify::equivalent(original, partitioned);
    } catch (const qpart::verify::VerifyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    if (opt.format == "structured") {
        ordered_json out = {{"equivalent", report.equivalent},
                            {"gate_multiset_ok", report.gate_multiset_ok},
                            {"per_qubit_order_ok", report.per_qubit_order_ok},
                            {"width_ok", report.width_ok}};
        if (report.first_divergence)
            out["first_divergence"] = {{"qubit", report.first_divergence->qubit},
                                       {"position", report.first_divergence->position}};
        emit(out.dump(2) + "\n", opt.out);
    } else {
        std::ostringstream text;
        text << (report.equivalent ? "equivalent" : "NOT equivalent")
             << " (gate multiset " << (report.gate_multiset_ok ? "ok" : "mismatch")
             << ", per-qubit order " << (report.per_qubit_order_ok ? "ok" : "mismatch") << ")\n";
        if (report.first_divergence)
            text << "first divergence: qubit " << report.first_divergence->qubit << ", position "
                 << report.first_divergence->position << "\n";
        emit(text.str(), opt.out);
    }
    return report.equivalent ? kExitOk : kExitFailure;
}

int cmd_prep(const Options& opt) {
    namespace dp = qpart::dataprep;
    if (opt.out.empty()) throw IoError("prep requires --out <directory>");
    dp::TokenEstimator estimator = make_estimator(opt);

    std::vector<dp::DatasetRecord> records;
    dp::TokenHistogram histogram;
    for (const fs::path& file : qasm_files(opt.input)) {
        qpart::qasm::QasmProgram program = qpart::qasm::parse(read_file(file));
        dp::DatasetRecord record = dp::build_record(program, opt.block_size, file.stem().string(),
                                                    estimator, file.filename().string());
        histogram.add(record.token_count);
        records.push_back(std::move(record));
    }
    std::sort(records.begin(), records.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });

    dp::DatasetSplit split =
        dp::filter_and_split(records, opt.max_tokens, opt.train_fraction, opt.seed);
    std::vector<dp::DatasetRecord> retained;
    for (auto& record : records)
        if (record.token_count <= opt.max_tokens) retained.push_back(std::move(record));

    fs::create_directories(opt.out);
    fs::path out_dir(opt.out);
    write_file(out_dir / "dataset.jsonl", dp::to_jsonl(retained));
    write_file(out_dir / "split.json", dp::split_to_json(split));
    write_file(out_dir / "histogram.json", dp::histogram_to_json(histogram));

    if (opt.format == "structured") {
        ordered_json summary = {{"records", retained.size()},
                                {"dropped", records.size() - retained.size()},
                                {"train", split.train.size()},
                                {"test", split.test.size()}};
        std::cout << summary.dump(2) << "\n";
    } else {
        std::cout << retained.size() << " records (" << records.size() - retained.size()
                  << " dropped by token filter), " << split.train.size() << " train / "
                  << split.test.size() << " test\n";
    }
    return kExitOk;
}

std::vector<qpart::evalharness::Completion> load_completions(const fs::path& path) {
    std::vector<qpart::evalharness::Completion> completions;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path))
            if (entry.is_regular_file() && entry.path().extension() == ".txt")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const fs::path& file : files)
            completions.push_back({file.stem().string(), read_file(file)});
        return completions;
    }
    std::string text = read_file(path);
    if (path.extension() == ".jsonl") {
        std::istringstream in(text);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            ordered_json parsed = ordered_json::parse(line, nullptr, false);
            if (parsed.is_discarded() || !parsed.contains("id") || !parsed.contains("completion"))
                throw IoError("malformed completion on line " + std::to_string(line_no));
            completions.push_back(
                {parsed["id"].get<std::string>(), parsed["completion"].get<std::string>()});
        }
        return completions;
    }
    ordered_json parsed = ordered_json::parse(text, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object())
        throw IoError("completions file must be a JSON object of id -> text");
    for (const auto& [id, value] : parsed.items())
        completions.push_back({id, value.get<std::string>()});
    return completions;
}

int cmd_score(const Options& opt) {
    namespace eh = qpart::evalharness;
    auto dataset = qpart::dataprep::records_from_jsonl(read_file(opt.input));
    eh::EvalReport report = eh::score(dataset, load_completions(opt.second));

    if (opt.format == "structured") {
        emit(eh::report_to_json(report), opt.out);
    } else {
        std::ostringstream text;
        text << "scored " << report.n << " completions\n"
             << "accuracy (exact match): " << report.exact_match_rate * 100.0 << "%\n"
             << "repeated code:          " << report.repeated_code_rate * 100.0 << "%\n"
             << "correct code:           " << report.correct_code_rate * 100.0 << "%\n";
        if (report.missing_completions)
            text << report.missing_completions << " records had no completion\n";
        emit(text.str(), opt.out);
    }
    if (report.n == 0) return kExitFailure;
    double fail_rate =
        static_cast<double>(report.parse_failures) / static_cast<double>(report.n);
    return fail_rate > opt.max_parse_fail_rate ? kExitFailure : kExitOk;
}

int cmd_stats(const Options& opt) {
    namespace dp = qpart::dataprep;
    dp::TokenEstimator estimator = make_estimator(opt);
    dp::TokenHistogram histogram;
    for (const fs::path& file : qasm_files(opt.input)) {
        if (estimator.mode == dp::TokenMode::External) {
            histogram.add(dp::count_tokens({}, estimator, file.filename().string()));
        } else {
            auto [symbolized, table] = dp::symbolize(dp::clean(qpart::qasm::parse(read_file(file))));
            histogram.add(dp::count_tokens(qpart::qasm::serialize(symbolized), estimator));
        }
    }
    if (opt.format == "structured") {
        emit(dp::histogram_to_json(histogram), opt.out);
    } else {
        std::ostringstream text;
        for (std::size_t i = 0; i < dp::TokenHistogram::kBounds.size(); ++i)
            text << "<= " << dp::TokenHistogram::kBounds[i] << ": " << histogram.counts[i]
                 << "\n";
        text << " > 48000: " << histogram.counts.back() << "\n"
             << "total: " << histogram.total() << "\n";
        emit(text.str(), opt.out);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quick partitioning toolkit for quantum circuits"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from a config file");

    Options opt;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", opt.format, "Output format")
            ->check(CLI::IsMember({"text", "structured"}));
        cmd->add_option("--out", opt.out, "Write output to this path");
    };
    auto add_tokens = [&](CLI::App* cmd) {
        cmd->add_option("--token-mode", opt.token_mode, "Token counting mode")
            ->check(CLI::IsMember({"heuristic", "external"}));
        cmd->add_option("--token-sidecar", opt.token_sidecar,
                        "JSON file of externally computed token counts, keyed by file name");
    };

    CLI::App* partition = app.add_subcommand("partition", "Partition one circuit into blocks");
    partition->add_option("input", opt.input, "QASM circuit file")->required();
    partition->add_option("--block-size", opt.block_size, "Maximum qubits per block")
        ->check(CLI::Range(2, 8));
    add_format(partition);

    CLI::App* verify = app.add_subcommand("verify", "Check a partitioned circuit");
    verify->add_option("original", opt.input, "Original QASM circuit")->required();
    verify->add_option("partitioned", opt.second, "Partitioned QASM circuit")->required();
    add_format(verify);

    CLI::App* prep = app.add_subcommand("prep", "Build a fine-tuning dataset from a corpus");
    prep->add_option("corpus", opt.input, "Directory of .qasm files")->required();
    prep->add_option("--block-size", opt.block_size, "Maximum qubits per block")
        ->check(CLI::Range(2, 8));
    prep->add_option("--max-tokens", opt.max_tokens, "Drop circuits above this token count");
    prep->add_option("--train-fraction", opt.train_fraction, "Fraction of records in train")
        ->check(CLI::Range(0.0, 1.0));
    prep->add_option("--seed", opt.seed, "Shuffle seed");
    add_tokens(prep);
    add_format(prep);

    CLI::App* score = app.add_subcommand("score", "Score model completions against a dataset");
    score->add_option("dataset", opt.input, "dataset.jsonl produced by prep")->required();
    score->add_option("completions", opt.second,
                      "Directory of <id>.txt files, a JSON object, or a JSONL file")
        ->required();
    score->add_option("--max-parse-fail-rate", opt.max_parse_fail_rate,
                      "Fail when the parse failure rate exceeds this")
        ->check(CLI::Range(0.0, 1.0));
    add_format(score);

    CLI::App* stats = app.add_subcommand("stats", "Token histogram over a corpus");
    stats->add_option("corpus", opt.input, "Directory of .qasm files")->required();
    add_tokens(stats);
    add_format(stats);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (partition->parsed()) return cmd_partition(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (prep->parsed()) return cmd_prep(opt);
        if (score->parsed()) return cmd_score(opt);
        if (stats->parsed()) return cmd_stats(opt);
    } catch (const qpart::qasm::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitIo;
    } catch (const qpart::dataprep::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitIo;
    } catch (const qpart::evalharness::EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
