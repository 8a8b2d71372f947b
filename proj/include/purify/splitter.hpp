#pragma once

#include <string>
#include <vector>

#include "purify/trace.hpp"

namespace purify {

// Shared cut positions for one test: each entry c means "a fragment ends after
// constituent c". The last entry is always n. An impure constituent is fenced
// by cuts on both sides, so it always ends up alone in its fragment.
std::vector<int> compute_cuts(int n, const SignatureTable& table);

struct FragmentRange {
    int first{0};  // 1-based, inclusive
    int last{0};
    bool impure{false};  // holds a constituent that is impure on some element

    bool operator==(const FragmentRange&) const = default;
};

// Turns a cut set into contiguous ranges covering 1..n.
std::vector<FragmentRange> fragment_ranges(int n, const std::vector<int>& cuts,
                                           const SignatureTable& table);

struct HoistedVar {
    std::string variable;   // the let name inside the origin test
    std::string binding;    // the file-scope binding it became
    int constituent{0};     // 1-based position of the declaring constituent
};

struct TestPlan {
    std::string file;  // corpus-relative path
    std::string test;
    // "split", "kept", "kept-budget-exceeded", or "kept-unsupported"
    std::string action;
    std::vector<int> cuts;
    std::vector<std::string> fragment_names;
    std::vector<FragmentRange> ranges;
    std::vector<HoistedVar> hoisted;
};

struct OutputFile {
    std::string path;
    std::string content;
};

struct RefactorPlan {
    ElementKind kind{ElementKind::If};
    std::vector<OutputFile> files;
    std::vector<TestPlan> tests;
};

// Runs the suite with the matching trace filter and splits every impure test
// into the minimal chain of pure fragments. Tests that already yield a single
// fragment are kept verbatim, as are tests whose run exceeded the budget.
RefactorPlan refactor_suite(const std::vector<ParsedFile>& files, ElementKind kind,
                            std::int64_t budget = default_budget);

// Parses the output files of a plan back into ASTs.
std::vector<ParsedFile> parse_plan_output(const RefactorPlan& plan);

}  // namespace purify
