#include "purify/contracts.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "purify/metrics.hpp"
#include "purify/trace.hpp"

namespace purify {

namespace {

const ParsedFile* find_file(const std::vector<ParsedFile>& files, const std::string& path) {
    for (const ParsedFile& f : files) {
        if (f.path == path) return &f;
    }
    return nullptr;
}

bool element_exists(const ParsedFile& f, const ElementId& e) {
    std::vector<ElementId> ids = element_ids(f, e.kind);
    return std::find(ids.begin(), ids.end(), e) != ids.end();
}

Signature signature_on(const std::vector<TraceEvent>& trace, const ParsedFile& f,
                       const TestCase& t, const ElementId& e) {
    SignatureTable table = signature_table(trace, f, t, e.kind);
    for (const SignatureRow& row : table) {
        if (row.element == e) return test_signature(row.constituents);
    }
    return Signature::bottom();
}

const TestOutcome* outcome_of(const SuiteResult& run, const std::string& file,
                              const std::string& test) {
    for (const TestResult& r : run.results) {
        if (r.file == file && r.test == test) return &r.outcome;
    }
    return nullptr;
}

// The contiguous block of tests sharing `origin` that contains index `i`;
// tests without origin metadata form a group of one.
std::pair<std::size_t, std::size_t> group_span(const ParsedFile& f, std::size_t i) {
    if (!f.tests[i].origin) return {i, i + 1};
    const std::string& key = f.tests[i].origin->origin;
    std::size_t lo = i;
    while (lo > 0 && f.tests[lo - 1].origin && f.tests[lo - 1].origin->origin == key) --lo;
    std::size_t hi = i + 1;
    while (hi < f.tests.size() && f.tests[hi].origin && f.tests[hi].origin->origin == key) ++hi;
    return {lo, hi};
}

// Runs the group around `test_index` under injection and returns that test's
// outcome, honoring the skip-after-failure rule for fragment groups.
TestStatus run_group_injected(const ParsedFile& f, std::size_t test_index, const ElementId& e,
                              std::int64_t budget) {
    auto [lo, hi] = group_span(f, test_index);
    Interpreter::Options opts;
    opts.filter = ElementFilter::None;
    opts.budget = budget;
    opts.injection = InjectionConfig{e};
    Interpreter interp(f, opts);
    std::vector<TraceEvent> events;
    for (std::size_t j = lo; j < hi; ++j) {
        TestOutcome out = interp.run_test(f.tests[j], events, j == lo);
        if (j == test_index) return out.status;
        if (out.status != TestStatus::Passed) return TestStatus::Skipped;
    }
    return TestStatus::Skipped;  // unreachable: test_index lies in [lo, hi)
}

}  // namespace

RepairReadiness repair_readiness(const std::vector<ParsedFile>& files, const ElementId& element,
                                 std::int64_t budget) {
    if (element.kind != ElementKind::If) {
        throw std::invalid_argument("repair readiness requires an if element");
    }
    const ParsedFile* f = find_file(files, element.file);
    if (!f || !element_exists(*f, element)) {
        throw std::invalid_argument("unknown element '" + element_address(element) + "'");
    }

    SuiteResult run = run_suite(files, ElementFilter::If, budget);
    RepairReadiness rr;
    rr.element = element;

    ElementCoverage cov = element_coverage(run.trace, *f, element);
    rr.purely_covered = cov.purely_covered;

    for (const TestCase& t : f->tests) {
        Signature sig = signature_on(run.trace, *f, t, element);
        if (sig.kind == SigKind::Impure) {
            rr.impure_tests.push_back(t.name);
            continue;
        }
        if (sig.kind != SigKind::Pure) continue;
        const TestOutcome* out = outcome_of(run, f->path, t.name);
        bool usable = out && (out->status == TestStatus::Passed ||
                              out->status == TestStatus::AssertionFailed ||
                              out->status == TestStatus::UncaughtException);
        if (!usable) continue;
        if (sig.value == DomainValue::ThenBranch) {
            rr.then_pure_tests.push_back(t.name);
        } else {
            rr.else_pure_tests.push_back(t.name);
        }
        if (out->status == TestStatus::Passed) rr.has_passing = true;
        if (out->status != TestStatus::Passed) rr.has_failing = true;
    }

    rr.ready = rr.purely_covered && !rr.then_pure_tests.empty() && !rr.else_pure_tests.empty() &&
               rr.has_failing && rr.has_passing;
    return rr;
}

InjectionVerdict inject_and_run(const std::vector<ParsedFile>& files, const ElementId& element,
                                const std::string& file_path, const std::string& test_name,
                                std::int64_t budget) {
    if (element.kind != ElementKind::Try) {
        throw std::invalid_argument("injection requires a try element");
    }
    const ParsedFile* f = find_file(files, file_path);
    if (!f) throw std::invalid_argument("unknown file '" + file_path + "'");
    const ParsedFile* owner = find_file(files, element.file);
    if (!owner || !element_exists(*owner, element)) {
        throw std::invalid_argument("unknown element '" + element_address(element) + "'");
    }

    std::size_t index = f->tests.size();
    for (std::size_t i = 0; i < f->tests.size(); ++i) {
        if (f->tests[i].name == test_name) index = i;
    }
    if (index == f->tests.size()) {
        throw std::invalid_argument("unknown test '" + test_name + "' in '" + file_path + "'");
    }

    SuiteResult baseline = run_suite(files, ElementFilter::Try, budget);
    Signature sig = signature_on(baseline.trace, *f, f->tests[index], element);
    if (sig.kind != SigKind::Pure) {
        throw std::invalid_argument("test '" + test_name + "' has no pure signature on '" +
                                    element_address(element) + "'");
    }

    TestStatus status = run_group_injected(*f, index, element, budget);
    return status == TestStatus::Passed ? InjectionVerdict::Passes : InjectionVerdict::Fails;
}

namespace {

// Classification of one executed try element against one corpus run.
TryContract classify_element(const ParsedFile& f, const SuiteResult& run, const ElementId& e,
                             std::int64_t budget) {
    bool any_candidate = false;
    bool any_fail = false;
    for (std::size_t i = 0; i < f.tests.size(); ++i) {
        const TestCase& t = f.tests[i];
        Signature sig = signature_on(run.trace, f, t, e);
        if (sig.kind != SigKind::Pure) continue;
        const TestOutcome* out = outcome_of(run, f.path, t.name);
        if (!out || out->status != TestStatus::Passed) continue;
        any_candidate = true;
        if (run_group_injected(f, i, e, budget) != TestStatus::Passed) any_fail = true;
    }
    if (!any_candidate) return TryContract::Unknown;
    return any_fail ? TryContract::SourceDependent : TryContract::SourceIndependent;
}

}  // namespace

ContractReport classify_try_contracts(const std::vector<ParsedFile>& files,
                                      const std::vector<ParsedFile>* refactored,
                                      std::int64_t budget) {
    ContractReport rep;
    SuiteResult before_run = run_suite(files, ElementFilter::Try, budget);

    std::optional<SuiteResult> after_run;
    if (refactored) {
        after_run = run_suite(*refactored, ElementFilter::Try, budget);
        rep.has_after = true;
    }

    for (const ParsedFile& f : files) {
        for (const ElementId& e : element_ids(f, ElementKind::Try)) {
            ElementCoverage cov = element_coverage(before_run.trace, f, e);
            if (!cov.executed) continue;
            TryClassification tc;
            tc.element = e;
            tc.before = classify_element(f, before_run, e, budget);
            switch (tc.before) {
                case TryContract::SourceIndependent: ++rep.independent_before; break;
                case TryContract::SourceDependent: ++rep.dependent_before; break;
                case TryContract::Unknown: ++rep.unknown_before; break;
            }
            if (refactored) {
                const ParsedFile* rf = find_file(*refactored, e.file);
                TryContract after = TryContract::Unknown;
                if (rf && element_exists(*rf, e)) {
                    after = classify_element(*rf, *after_run, e, budget);
                }
                tc.after = after;
                switch (after) {
                    case TryContract::SourceIndependent: ++rep.independent_after; break;
                    case TryContract::SourceDependent: ++rep.dependent_after; break;
                    case TryContract::Unknown: ++rep.unknown_after; break;
                }
            }
            rep.elements.push_back(std::move(tc));
        }
    }

    if (rep.has_after) {
        rep.unknown_reduction = rep.unknown_before - rep.unknown_after;
        rep.unknown_reduction_percent = percent_string(rep.unknown_reduction, rep.unknown_before);
    }
    return rep;
}

std::string element_address(const ElementId& e) {
    return std::string(to_string(e.kind)) + ":" + e.file + ":" + e.function + ":" +
           std::to_string(e.ordinal);
}

namespace {

std::string name_list(const std::vector<std::string>& names) {
    std::string out;
    for (const std::string& n : names) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

}  // namespace

std::string render_readiness_text(const RepairReadiness& r) {
    auto yesno = [](bool b) { return b ? "yes" : "no"; };
    auto listed = [](const std::vector<std::string>& names) {
        return names.empty() ? std::string() : " " + name_list(names);
    };
    std::string out;
    out += "Repair readiness: " + element_address(r.element) + "\n";
    out += std::string("purely covered: ") + yesno(r.purely_covered) + "\n";
    out += "then-branch pure tests (" + std::to_string(r.then_pure_tests.size()) +
           "):" + listed(r.then_pure_tests) + "\n";
    out += "else-branch pure tests (" + std::to_string(r.else_pure_tests.size()) +
           "):" + listed(r.else_pure_tests) + "\n";
    out += "impure tests discarded (" + std::to_string(r.impure_tests.size()) +
           "):" + listed(r.impure_tests) + "\n";
    out += std::string("failing evidence: ") + yesno(r.has_failing) + "\n";
    out += std::string("passing evidence: ") + yesno(r.has_passing) + "\n";
    out += std::string("ready: ") + yesno(r.ready) + "\n";
    return out;
}

std::string render_contracts_text(const ContractReport& r) {
    std::string out = "Exception contract report (try elements)\n";
    std::size_t width = 0;
    for (const TryClassification& tc : r.elements) {
        width = std::max(width, element_address(tc.element).size());
    }
    for (const TryClassification& tc : r.elements) {
        std::string addr = element_address(tc.element);
        addr.resize(width, ' ');
        out += "  " + addr + "  " + to_string(tc.before);
        if (tc.after) out += std::string("  ->  ") + to_string(*tc.after);
        out += "\n";
    }
    out += "totals before: source-independent " + std::to_string(r.independent_before) +
           ", source-dependent " + std::to_string(r.dependent_before) + ", unknown " +
           std::to_string(r.unknown_before) + "\n";
    if (r.has_after) {
        out += "totals after:  source-independent " + std::to_string(r.independent_after) +
               ", source-dependent " + std::to_string(r.dependent_after) + ", unknown " +
               std::to_string(r.unknown_after) + "\n";
        out += "unknown reduction: " + std::to_string(r.unknown_reduction) + " (" +
               r.unknown_reduction_percent + ")\n";
    }
    return out;
}

const char* to_string(TryContract c) {
    switch (c) {
        case TryContract::SourceIndependent: return "source-independent";
        case TryContract::SourceDependent: return "source-dependent";
        case TryContract::Unknown: return "unknown";
    }
    return "?";
}

const char* to_string(InjectionVerdict v) {
    return v == InjectionVerdict::Passes ? "passes" : "fails";
}

}  // namespace purify
