#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "purify/ast.hpp"
#include "purify/interp.hpp"
#include "purify/trace.hpp"

namespace purify {

struct TestClassRow {
    std::string file;
    std::string test;
    PurityClass cls{PurityClass::NotCovering};
};

struct ElementCoverageRow {
    ElementId element;
    bool executed{false};
    bool purely_covered{false};
    bool at_least_one_pure{false};
};

// Aggregate purity statistics of a corpus with respect to one element kind.
// Test percentages are taken against tests_total; element percentages against
// elements_executed.
struct PurityReport {
    ElementKind kind{ElementKind::If};

    int tests_total{0};
    int tests_pure{0};
    int tests_non_absolutely_impure{0};
    int tests_absolutely_impure{0};
    int tests_not_covering{0};

    int constituents_total{0};
    int constituents_impure{0};

    int elements_total{0};
    int elements_executed{0};
    int elements_purely_covered{0};
    int elements_at_least_one_pure{0};

    std::vector<TestClassRow> per_test;
    std::vector<ElementCoverageRow> per_element;
};

// Runs the corpus under the matching trace filter and aggregates.
PurityReport purity_report(const std::vector<ParsedFile>& files, ElementKind kind,
                           std::int64_t budget = default_budget);

// Same aggregation over an existing run (its trace must come from the
// matching filter).
PurityReport purity_report_from(const std::vector<ParsedFile>& files, const SuiteResult& run,
                                ElementKind kind);

struct DeltaRow {
    std::string metric;
    long long before{0};
    long long after{0};
    long long absolute{0};
    std::string relative;  // "(after-before)/before" as a percentage, or "n/a"
};

struct ImprovementReport {
    PurityReport before;
    PurityReport after;
    std::vector<DeltaRow> deltas;
};

// Throws std::invalid_argument when the reports cover different element kinds.
ImprovementReport improvement_report(const PurityReport& before, const PurityReport& after);

// "23.91%" style, two decimals; "n/a" when the denominator is zero.
std::string percent_string(long long numerator, long long denominator);

// Relative change (after-before)/before as "277.16%"; "n/a" when before is 0.
std::string relative_change_string(long long before, long long after);

std::string render_purity_text(const PurityReport& r);
std::string render_improvement_text(const ImprovementReport& r);

}  // namespace purify
