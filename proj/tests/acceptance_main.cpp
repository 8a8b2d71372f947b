// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Usage: acceptance <fixtures-dir> <cli-binary>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "purify/contracts.hpp"
#include "purify/corpus.hpp"
#include "purify/metrics.hpp"
#include "purify/mutation.hpp"
#include "purify/parser.hpp"
#include "purify/printer.hpp"
#include "purify/splitter.hpp"
#include "purify/trace.hpp"

using namespace purify;
namespace fs = std::filesystem;

namespace {

std::string g_fixtures;
std::string g_cli;
int g_failures = 0;

void report(int number, const std::string& what, bool ok, double seconds, double limit) {
    bool in_time = limit <= 0.0 || seconds <= limit;
    bool pass = ok && in_time;
    if (!pass) ++g_failures;
    std::printf("criterion %2d: %s  %s (%.2fs%s)\n", number, pass ? "PASS" : "FAIL", what.c_str(),
                seconds, in_time ? "" : ", over time limit");
    std::fflush(stdout);
}

void criterion(int number, const std::string& what, double limit_seconds,
               const std::function<bool()>& body) {
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        ok = body();
    } catch (const std::exception& e) {
        detail = e.what();
        ok = false;
    }
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    report(number, detail.empty() ? what : what + " [" + detail + "]", ok, elapsed.count(),
           limit_seconds);
}

std::vector<ParsedFile> corpus() { return load_corpus({g_fixtures}); }

const TestPlan* plan_for(const RefactorPlan& plan, const std::string& test) {
    for (const TestPlan& t : plan.tests) {
        if (t.test == test) return &t;
    }
    return nullptr;
}

const TestCase* test_named(const ParsedFile& f, const std::string& name) {
    for (const TestCase& t : f.tests) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

bool is_hook_call(const ParsedFile& f, StmtId sid, HookKind kind) {
    const Stmt& s = f.stmt(sid);
    return s.kind == StmtKind::HookCall && s.hook == kind;
}

// ---- criterion 6 support: brute-force minimal partition oracle ----

SignatureRow oracle_row(std::vector<Signature> sigs, int ordinal, ElementKind kind) {
    SignatureRow r;
    r.element = ElementId{kind, "o.tl", "f", ordinal};
    r.constituents = std::move(sigs);
    return r;
}

// Minimal fragment count under persisted-value homogeneity: per element the
// last pure value carries across unexecuted gaps and resets at an impure
// constituent, and impure constituents must sit alone.
int min_fragments_bruteforce(int n, const SignatureTable& table) {
    struct PState {
        int kind{0};  // 0 undefined, 1 value, 2 impure
        DomainValue v{DomainValue::ThenBranch};
    };
    std::vector<std::vector<PState>> persisted(table.size());
    for (std::size_t r = 0; r < table.size(); ++r) {
        persisted[r].resize(std::size_t(n) + 1);
        PState cur;
        for (int i = 1; i <= n; ++i) {
            const Signature& s = table[r].constituents[std::size_t(i - 1)];
            if (s.kind == SigKind::Impure) {
                persisted[r][std::size_t(i)] = PState{2, DomainValue::ThenBranch};
                cur = PState{};
            } else if (s.kind == SigKind::Pure) {
                cur = PState{1, s.value};
                persisted[r][std::size_t(i)] = cur;
            } else {
                persisted[r][std::size_t(i)] = cur;
            }
        }
    }
    auto valid = [&](int a, int b) {
        for (std::size_t r = 0; r < table.size(); ++r) {
            bool has_value = false;
            DomainValue value = DomainValue::ThenBranch;
            for (int i = a; i <= b; ++i) {
                const PState& p = persisted[r][std::size_t(i)];
                if (p.kind == 2) {
                    if (a != b) return false;
                } else if (p.kind == 1) {
                    if (!has_value) {
                        has_value = true;
                        value = p.v;
                    } else if (value != p.v) {
                        return false;
                    }
                }
            }
        }
        return true;
    };
    const int unreachable = n + 1;
    std::vector<int> best(std::size_t(n) + 1, unreachable);
    best[0] = 0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 0; j < i; ++j) {
            if (best[std::size_t(j)] == unreachable) continue;
            if (valid(j + 1, i)) {
                best[std::size_t(i)] = std::min(best[std::size_t(i)], best[std::size_t(j)] + 1);
            }
        }
    }
    return best[std::size_t(n)];
}

// ---- criterion 10 support: drive the installed CLI ----

std::string run_cli(const std::string& args) {
    std::string cmd = g_cli + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    pclose(pipe);
    return out;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool same_tree(const fs::path& a, const fs::path& b) {
    std::set<std::string> rels;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (e.is_regular_file()) rels.insert(fs::relative(e.path(), a).generic_string());
    }
    std::set<std::string> rels_b;
    for (const auto& e : fs::recursive_directory_iterator(b)) {
        if (e.is_regular_file()) rels_b.insert(fs::relative(e.path(), b).generic_string());
    }
    if (rels != rels_b) return false;
    for (const std::string& rel : rels) {
        if (read_file(a / rel) != read_file(b / rel)) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: acceptance <fixtures-dir> <cli-binary>\n";
        return 2;
    }
    g_fixtures = argv[1];
    g_cli = argv[2];

    criterion(1, "scattered signature sequence groups as 1-3, 4-6, 7", 1.0, [] {
        SignatureTable table;
        const Signature B = Signature::bottom();
        const Signature T = Signature::pure(DomainValue::ThenBranch);
        const Signature E = Signature::pure(DomainValue::ElseBranch);
        table.push_back(oracle_row({B, T, B, E, B, E, T}, 1, ElementKind::If));
        std::vector<int> cuts = compute_cuts(7, table);
        if (cuts != std::vector<int>{3, 6, 7}) return false;
        auto ranges = fragment_ranges(7, cuts, table);
        if (ranges.size() != 3) return false;
        bool shape = ranges[0].first == 1 && ranges[0].last == 3 && ranges[1].first == 4 &&
                     ranges[1].last == 6 && ranges[2].first == 7 && ranges[2].last == 7;

        // The same sequence arises from the bundled fixture end to end.
        std::vector<ParsedFile> one = load_corpus({g_fixtures + "/table1_shape.tl"});
        RefactorPlan plan = refactor_suite(one, ElementKind::If);
        const TestPlan* tp = plan_for(plan, "testScattered");
        return shape && tp && tp->action == "split" && tp->cuts == std::vector<int>{3, 6, 7};
    });

    criterion(2, "factorial fixture: 2 hook-wrapped fragments, readiness flips", 5.0, [] {
        std::vector<ParsedFile> one = load_corpus({g_fixtures + "/fig1.tl"});
        RefactorPlan plan = refactor_suite(one, ElementKind::If);
        const TestPlan* split = plan_for(plan, "testFactorial");
        const TestPlan* kept = plan_for(plan, "testFactorialFail");
        if (!split || split->action != "split" || split->fragment_names.size() != 2) return false;
        if (!kept || kept->action != "kept") return false;

        std::vector<ParsedFile> after = parse_plan_output(plan);
        const TestCase* f1 = test_named(after[0], "testFactorial_fragment_1");
        const TestCase* f2 = test_named(after[0], "testFactorial_fragment_2");
        if (!f1 || !f2 || f1->constituents.empty() || f2->constituents.empty()) return false;
        if (!is_hook_call(after[0], f1->constituents.front(), HookKind::Before)) return false;
        if (!is_hook_call(after[0], f2->constituents.back(), HookKind::After)) return false;

        ElementId guard{ElementKind::If, "fig1.tl", "factorialLog", 1};
        if (repair_readiness(one, guard).ready) return false;
        return repair_readiness(after, guard).ready;
    });

    criterion(3, "alternating test yields 4 fragments; suite keeps pure, splits mixed", 0.0, [] {
        std::vector<ParsedFile> alt = load_corpus({g_fixtures + "/clamp_alternation.tl"});
        RefactorPlan ap = refactor_suite(alt, ElementKind::If);
        const TestPlan* four = plan_for(ap, "testClampAlternating");
        if (!four || four->action != "split" || four->fragment_names.size() != 4) return false;

        std::vector<ParsedFile> pkg = load_corpus({g_fixtures + "/pkg/report_suite.tl"});
        RefactorPlan pp = refactor_suite(pkg, ElementKind::If);
        const TestPlan* clean = plan_for(pp, "testCleanReports");
        const TestPlan* dirty = plan_for(pp, "testDirtyReports");
        const TestPlan* full = plan_for(pp, "testFullReport");
        return clean && clean->action == "kept" && dirty && dirty->action == "kept" && full &&
               full->action == "split" && full->fragment_names.size() == 2;
    });

    criterion(4, "mutation fates agree 100% between original and refactored", 300.0, [] {
        std::vector<ParsedFile> before = corpus();
        if (before.size() < 20) return false;
        std::vector<Mutant> ms = generate_mutants(before, 0);
        if (ms.size() < 100) return false;
        KillMatrix original = kill_matrix(before, ms);
        for (ElementKind kind : {ElementKind::If, ElementKind::Try}) {
            std::vector<ParsedFile> after = parse_plan_output(refactor_suite(before, kind));
            KillMatrix mirrored = kill_matrix(after, ms);
            EquivalenceReport rep = compare_matrices(original, mirrored);
            if (!rep.equivalent || !rep.disagreements.empty()) return false;
            if (rep.killed_both + rep.alive_both + rep.hang_both !=
                static_cast<int>(ms.size())) {
                return false;
            }
        }
        return true;
    });

    criterion(5, "pure coverage never drops; 5 designed fixtures strictly gain", 0.0, [] {
        const std::set<std::string> designed = {
            "purity_gain_01.tl", "purity_gain_02.tl", "purity_gain_03.tl",
            "purity_gain_04.tl", "purity_gain_05.tl"};
        for (ElementKind kind : {ElementKind::If, ElementKind::Try}) {
            std::vector<ParsedFile> before = corpus();
            std::vector<ParsedFile> after = parse_plan_output(refactor_suite(before, kind));
            if (before.size() != after.size()) return false;
            int strict = 0;
            for (std::size_t i = 0; i < before.size(); ++i) {
                if (before[i].path != after[i].path) return false;
                std::vector<ParsedFile> fb{before[i]};
                std::vector<ParsedFile> fa{after[i]};
                PurityReport rb = purity_report(fb, kind);
                PurityReport ra = purity_report(fa, kind);
                if (ra.elements_purely_covered < rb.elements_purely_covered) return false;
                if (ra.elements_at_least_one_pure < rb.elements_at_least_one_pure) return false;
                if (designed.count(before[i].path) &&
                    ra.elements_purely_covered > rb.elements_purely_covered &&
                    ra.elements_at_least_one_pure > rb.elements_at_least_one_pure) {
                    ++strict;
                }
            }
            if (strict < 5) return false;
        }
        return true;
    });

    criterion(6, "fragment counts match the brute-force minimum on 1000 instances", 30.0, [] {
        std::mt19937 rng(20260817);
        std::uniform_int_distribution<int> n_dist(1, 10);
        std::uniform_int_distribution<int> rows_dist(1, 3);
        std::uniform_int_distribution<int> kind_dist(0, 1);
        std::uniform_int_distribution<int> shape_dist(0, 9);
        std::uniform_int_distribution<int> if_val(0, 1);
        std::uniform_int_distribution<int> try_val(0, 2);
        const DomainValue if_domain[2] = {DomainValue::ThenBranch, DomainValue::ElseBranch};
        const DomainValue try_domain[3] = {DomainValue::NoException,
                                           DomainValue::ExceptionCaught,
                                           DomainValue::ExceptionNotCaught};
        for (int iter = 0; iter < 1000; ++iter) {
            int n = n_dist(rng);
            int rows = rows_dist(rng);
            bool use_if = kind_dist(rng) == 0;
            ElementKind kind = use_if ? ElementKind::If : ElementKind::Try;
            SignatureTable table;
            for (int r = 0; r < rows; ++r) {
                std::vector<Signature> sigs;
                for (int i = 0; i < n; ++i) {
                    int shape = shape_dist(rng);
                    if (shape < 4) {
                        sigs.push_back(Signature::bottom());
                    } else if (shape < 9) {
                        sigs.push_back(Signature::pure(use_if ? if_domain[if_val(rng)]
                                                              : try_domain[try_val(rng)]));
                    } else {
                        sigs.push_back(Signature::impure());
                    }
                }
                table.push_back(oracle_row(std::move(sigs), r + 1, kind));
            }
            std::vector<int> cuts = compute_cuts(n, table);
            auto ranges = fragment_ranges(n, cuts, table);
            if (static_cast<int>(ranges.size()) != min_fragments_bruteforce(n, table)) {
                return false;
            }
        }
        return true;
    });

    criterion(7, "re-refactoring a refactored corpus adds no cuts", 0.0, [] {
        for (ElementKind kind : {ElementKind::If, ElementKind::Try}) {
            std::vector<ParsedFile> once = parse_plan_output(refactor_suite(corpus(), kind));
            RefactorPlan again = refactor_suite(once, kind);
            for (const TestPlan& t : again.tests) {
                if (t.action == "split") return false;
            }
            std::vector<ParsedFile> twice = parse_plan_output(again);
            if (twice.size() != once.size()) return false;
            for (std::size_t i = 0; i < once.size(); ++i) {
                if (serialize_file(twice[i]) != serialize_file(once[i])) return false;
            }
        }
        return true;
    });

    criterion(8, "handler contracts: unknown resolves after split, never grows", 0.0, [] {
        std::vector<ParsedFile> before = corpus();
        std::vector<ParsedFile> after = parse_plan_output(refactor_suite(before, ElementKind::Try));
        ContractReport rep = classify_try_contracts(before, &after);
        bool resolved = false;
        for (const TryClassification& c : rep.elements) {
            if (!c.after.has_value()) return false;
            if (c.before != TryContract::Unknown && *c.after != c.before) return false;
            if (c.element.file == "try_contract_unknown.tl") {
                if (c.before != TryContract::Unknown) return false;
                if (*c.after == TryContract::Unknown) return false;
                resolved = true;
            }
        }
        if (!resolved || rep.unknown_after > rep.unknown_before) return false;

        // Per-suite monotonicity of the unknown count.
        for (std::size_t i = 0; i < before.size(); ++i) {
            std::vector<ParsedFile> fb{before[i]};
            std::vector<ParsedFile> fa{after[i]};
            ContractReport one = classify_try_contracts(fb, &fa);
            if (one.unknown_after > one.unknown_before) return false;
        }
        return percent_string(15, 22) == "68.18%";
    });

    criterion(9, "reported percentages reproduce to two decimals", 0.0, [] {
        return percent_string(539, 2254) == "23.91%" &&
               relative_change_string(451, 1701) == "277.16%";
    });

    criterion(10, "every subcommand is byte-identical across reruns", 0.0, [] {
        fs::path scratch = fs::temp_directory_path() / "purify_acceptance";
        fs::remove_all(scratch);
        fs::create_directories(scratch);
        fs::path out_a = scratch / "if_a";
        fs::path out_b = scratch / "if_b";
        fs::path out_try = scratch / "try_out";

        std::string fx = g_fixtures;
        std::string refactor_first =
            run_cli("refactor " + fx + " --elements if -o " + out_a.string());
        std::string refactor_again =
            run_cli("refactor " + fx + " --elements if -o " + out_a.string());
        if (refactor_first != refactor_again || refactor_first.empty()) return false;
        run_cli("refactor " + fx + " --elements if -o " + out_b.string());
        if (!same_tree(out_a, out_b)) return false;
        run_cli("refactor " + fx + " --elements try -o " + out_try.string());

        const std::string commands[] = {
            "run " + fx,
            "trace " + fx + "/try_basic.tl --elements try",
            "metrics " + fx + " --elements if",
            "metrics " + fx + " --elements try --compare " + out_try.string(),
            "mutate " + fx + " --against " + out_a.string() + " --seed 0 --max 60",
            "mutate " + fx + " --against " + out_a.string() + " --seed 0 --max 60 --format json",
            "contracts " + fx + " --refactored " + out_try.string(),
            "repair-check " + fx + "/fig1.tl --element if:fig1.tl:factorialLog:1",
        };
        for (const std::string& cmd : commands) {
            std::string first = run_cli(cmd);
            std::string second = run_cli(cmd);
            if (first.empty() || first != second) return false;
        }
        fs::remove_all(scratch);
        return true;
    });

    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria failed\n", g_failures);
    return 1;
}
