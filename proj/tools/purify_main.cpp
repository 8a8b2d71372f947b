#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "purify/contracts.hpp"
#include "purify/corpus.hpp"
#include "purify/interp.hpp"
#include "purify/json_io.hpp"
#include "purify/metrics.hpp"
#include "purify/mutation.hpp"
#include "purify/splitter.hpp"
#include "purify/trace.hpp"

namespace fs = std::filesystem;
using namespace purify;

namespace {

ElementKind parse_kind(const std::string& s) {
    if (s == "if") return ElementKind::If;
    if (s == "try") return ElementKind::Try;
    throw std::invalid_argument("element kind must be 'if' or 'try', got '" + s + "'");
}

ElementFilter filter_for(ElementKind kind) {
    return kind == ElementKind::If ? ElementFilter::If : ElementFilter::Try;
}

ElementId parse_element_address(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t colon = s.find(':', start);
        if (colon == std::string::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, colon - start));
        start = colon + 1;
    }
    if (parts.size() != 4 || parts[0].empty() || parts[1].empty() || parts[2].empty() ||
        parts[3].empty()) {
        throw std::invalid_argument("element address must be kind:file:function:ordinal, got '" +
                                    s + "'");
    }
    ElementId e;
    e.kind = parse_kind(parts[0]);
    e.file = parts[1];
    e.function = parts[2];
    try {
        std::size_t used = 0;
        e.ordinal = std::stoi(parts[3], &used);
        if (used != parts[3].size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw std::invalid_argument("element ordinal must be an integer, got '" + parts[3] + "'");
    }
    if (e.ordinal < 1) {
        throw std::invalid_argument("element ordinal must be positive, got '" + parts[3] + "'");
    }
    return e;
}

void write_file(const fs::path& p, const std::string& content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    out << content;
}

int do_run(const std::vector<std::string>& paths, std::int64_t budget, const std::string& format) {
    std::vector<ParsedFile> corpus = load_corpus(paths);
    SuiteResult run = run_suite(corpus, ElementFilter::None, budget);
    int passed = 0;
    for (const TestResult& r : run.results) {
        if (r.outcome.status == TestStatus::Passed) ++passed;
    }
    const int total = static_cast<int>(run.results.size());
    if (format == "json") {
        std::cout << to_output_string(suite_to_json(run));
    } else {
        for (const TestResult& r : run.results) {
            std::cout << r.file << "::" << r.test << ": " << to_string(r.outcome.status);
            if (!r.outcome.failure_detail.empty()) std::cout << " - " << r.outcome.failure_detail;
            std::cout << "\n";
        }
        std::cout << total << " tests: " << passed << " passed, " << (total - passed)
                  << " failed\n";
    }
    return passed == total ? 0 : 1;
}

int do_trace(const std::vector<std::string>& paths, ElementKind kind,
             const std::optional<std::string>& out_file, std::int64_t budget) {
    std::vector<ParsedFile> corpus = load_corpus(paths);
    SuiteResult run = run_suite(corpus, filter_for(kind), budget);
    std::string jsonl = trace_to_jsonl(run.trace);
    if (out_file) {
        write_file(*out_file, jsonl);
    } else {
        std::cout << jsonl;
    }
    return 0;
}

int do_refactor(const std::vector<std::string>& paths, ElementKind kind, const std::string& out_dir,
                std::int64_t budget, const std::string& format) {
    std::vector<ParsedFile> corpus = load_corpus(paths);
    RefactorPlan plan = refactor_suite(corpus, kind, budget);
    fs::create_directories(out_dir);
    for (const OutputFile& f : plan.files) {
        write_file(fs::path(out_dir) / f.path, f.content);
    }
    fs::path plan_path = fs::path(out_dir) / "refactor_plan.json";
    write_file(plan_path, to_output_string(plan_to_json(plan)));

    if (format == "json") {
        std::cout << to_output_string(plan_to_json(plan));
        return 0;
    }
    for (const OutputFile& f : plan.files) {
        int split = 0, fragments = 0, kept = 0;
        for (const TestPlan& tp : plan.tests) {
            if (tp.file != f.path) continue;
            if (tp.action == "split") {
                ++split;
                fragments += static_cast<int>(tp.ranges.size());
            } else {
                ++kept;
            }
        }
        std::cout << f.path << ": split " << split << " tests into " << fragments
                  << " fragments, kept " << kept << "\n";
    }
    std::cout << "wrote " << plan_path.generic_string() << "\n";
    return 0;
}

int do_metrics(const std::vector<std::string>& paths, ElementKind kind,
               const std::optional<std::string>& compare_dir, std::int64_t budget,
               const std::string& format) {
    std::vector<ParsedFile> corpus = load_corpus(paths);
    PurityReport before = purity_report(corpus, kind, budget);
    if (!compare_dir) {
        std::cout << (format == "json" ? to_output_string(purity_to_json(before))
                                       : render_purity_text(before));
        return 0;
    }
    std::vector<ParsedFile> refactored = load_corpus({*compare_dir});
    PurityReport after = purity_report(refactored, kind, budget);
    ImprovementReport imp = improvement_report(before, after);
    std::cout << (format == "json" ? to_output_string(improvement_to_json(imp))
                                   : render_improvement_text(imp));
    return 0;
}

int do_mutate(const std::vector<std::string>& paths, const std::string& against_dir,
              std::uint64_t seed, std::optional<int> max, std::int64_t budget,
              const std::string& format) {
    std::vector<ParsedFile> corpus = load_corpus(paths);
    std::vector<ParsedFile> refactored = load_corpus({against_dir});
    std::vector<Mutant> mutants = generate_mutants(corpus, seed, max);
    KillMatrix original = kill_matrix(corpus, mutants, budget);
    KillMatrix against = kill_matrix(refactored, mutants, budget);
    EquivalenceReport rep = compare_matrices(original, against);

    if (format == "json") {
        json doc{{"mutants", mutants_to_json(mutants)},
                 {"original", matrix_to_json(original)},
                 {"refactored", matrix_to_json(against)},
                 {"equivalence", equivalence_to_json(rep)}};
        std::cout << to_output_string(doc);
    } else {
        std::map<int, const Mutant*> by_id;
        for (const Mutant& m : mutants) by_id[m.id] = &m;
        std::cout << "Mutation equivalence\n";
        std::cout << "mutants: " << mutants.size() << "\n";
        std::cout << "killed both: " << rep.killed_both << "\n";
        std::cout << "alive both: " << rep.alive_both << "\n";
        std::cout << "hang both: " << rep.hang_both << "\n";
        if (!original.application_errors.empty() || !against.application_errors.empty()) {
            std::cout << "application errors: "
                      << original.application_errors.size() + against.application_errors.size()
                      << "\n";
        }
        std::cout << "disagreements: " << rep.disagreements.size() << "\n";
        for (const FateDisagreement& d : rep.disagreements) {
            const Mutant* m = by_id.at(d.id);
            std::cout << "  id " << d.id << " (" << m->file << ":" << m->function << " "
                      << to_string(m->op) << " '" << m->original << "' -> '" << m->mutated
                      << "'): original " << to_string(d.original) << ", refactored "
                      << to_string(d.refactored) << "\n";
        }
        std::cout << "verdict: " << (rep.equivalent ? "equivalent" : "NOT equivalent") << "\n";
    }
    return rep.equivalent ? 0 : 1;
}

int do_contracts(const std::vector<std::string>& paths,
                 const std::optional<std::string>& refactored_dir, std::int64_t budget,
                 const std::string& format) {
    std::vector<ParsedFile> corpus = load_corpus(paths);
    std::optional<std::vector<ParsedFile>> refactored;
    if (refactored_dir) refactored = load_corpus({*refactored_dir});
    ContractReport rep =
        classify_try_contracts(corpus, refactored ? &*refactored : nullptr, budget);
    std::cout << (format == "json" ? to_output_string(contracts_to_json(rep))
                                   : render_contracts_text(rep));
    return 0;
}

int do_repair_check(const std::vector<std::string>& paths, const std::string& address,
                    std::int64_t budget, const std::string& format) {
    std::vector<ParsedFile> corpus = load_corpus(paths);
    ElementId e = parse_element_address(address);
    RepairReadiness rr = repair_readiness(corpus, e, budget);
    std::cout << (format == "json" ? to_output_string(readiness_to_json(rr))
                                   : render_readiness_text(rr));
    return rr.ready ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"purity analysis and test splitting for .tl test suites"};
    app.require_subcommand(1);

    std::vector<std::string> paths;
    std::string elements;
    std::string format = "text";
    std::int64_t budget = default_budget;
    std::optional<std::string> out_file;
    std::string out_dir;
    std::optional<std::string> compare_dir;
    std::optional<std::string> refactored_dir;
    std::string against_dir;
    std::uint64_t seed = 0;
    int max_mutants = -1;
    std::string element_address;

    auto add_common = [&](CLI::App* cmd, bool with_format = true) {
        cmd->add_option("paths", paths, ".tl files or directories")->required()->expected(-1);
        cmd->add_option("--budget", budget, "step budget per test")
            ->envname("PURIFY_BUDGET")
            ->check(CLI::PositiveNumber);
        if (with_format) {
            cmd->add_option("--format", format, "output format")
                ->check(CLI::IsMember({"text", "json"}));
        }
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run every test and report outcomes");
    add_common(run_cmd);

    CLI::App* trace_cmd = app.add_subcommand("trace", "emit branch trace events as JSON lines");
    add_common(trace_cmd, false);
    trace_cmd->add_option("--elements", elements, "element kind to trace")
        ->required()
        ->check(CLI::IsMember({"if", "try"}));
    trace_cmd->add_option("-o,--output", out_file, "write the trace to a file");

    CLI::App* refactor_cmd =
        app.add_subcommand("refactor", "split impure tests into pure fragments");
    add_common(refactor_cmd);
    refactor_cmd->add_option("--elements", elements, "element kind to purify")
        ->required()
        ->check(CLI::IsMember({"if", "try"}));
    refactor_cmd->add_option("-o,--output", out_dir, "directory for the refactored suite")
        ->required();

    CLI::App* metrics_cmd = app.add_subcommand("metrics", "purity statistics of a corpus");
    add_common(metrics_cmd);
    metrics_cmd->add_option("--elements", elements, "element kind to measure")
        ->required()
        ->check(CLI::IsMember({"if", "try"}));
    metrics_cmd->add_option("--compare", compare_dir,
                            "refactored suite directory for an improvement report");

    CLI::App* mutate_cmd =
        app.add_subcommand("mutate", "check that a refactored suite kills the same mutants");
    add_common(mutate_cmd);
    mutate_cmd->add_option("--against", against_dir, "refactored suite directory")->required();
    mutate_cmd->add_option("--seed", seed, "seed for mutant sampling");
    mutate_cmd->add_option("--max", max_mutants, "sample at most this many mutants")
        ->check(CLI::PositiveNumber);

    CLI::App* contracts_cmd =
        app.add_subcommand("contracts", "classify exception contracts of try elements");
    add_common(contracts_cmd);
    contracts_cmd->add_option("--refactored", refactored_dir,
                              "refactored suite directory for before/after comparison");

    CLI::App* repair_cmd =
        app.add_subcommand("repair-check", "repair readiness of one if element");
    add_common(repair_cmd);
    repair_cmd->add_option("--element", element_address, "element as kind:file:function:ordinal")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) return do_run(paths, budget, format);
        if (trace_cmd->parsed()) return do_trace(paths, parse_kind(elements), out_file, budget);
        if (refactor_cmd->parsed()) {
            return do_refactor(paths, parse_kind(elements), out_dir, budget, format);
        }
        if (metrics_cmd->parsed()) {
            return do_metrics(paths, parse_kind(elements), compare_dir, budget, format);
        }
        if (mutate_cmd->parsed()) {
            std::optional<int> max;
            if (max_mutants >= 0) max = max_mutants;
            return do_mutate(paths, against_dir, seed, max, budget, format);
        }
        if (contracts_cmd->parsed()) return do_contracts(paths, refactored_dir, budget, format);
        if (repair_cmd->parsed()) return do_repair_check(paths, element_address, budget, format);
        std::cerr << "purify: no subcommand given\n";
        return 2;
    } catch (const CorpusError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
