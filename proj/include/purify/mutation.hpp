#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "purify/ast.hpp"
#include "purify/interp.hpp"

namespace purify {

// Mutations touch function bodies only, never test bodies, hooks, or file
// bindings. Sites are mutation points found by a fixed pre-order walk of each
// function; `site` is the point's per-function index, so the same mutant can
// be applied to any structurally identical copy of the function (in
// particular to a refactored suite, whose functions are unchanged).
enum class MutationOperator {
    RelationalReplace,   // one of < <= > >= == != for another
    ArithmeticReplace,   // one of + - * / % for another
    NegateCondition,     // wraps an if/while condition in !(...)
    ConstantPerturb,     // integer literal k -> k+1, k-1, or 0
};

struct Mutant {
    int id{0};                 // position in the full enumeration
    std::string file;
    std::string function;
    int site{0};               // mutation-point index within the function
    MutationOperator op{MutationOperator::RelationalReplace};
    std::int64_t payload{0};   // replacement operator (as int) or literal value
    std::string original;      // affected expression, before
    std::string mutated;       // affected expression, after
};

inline const std::vector<MutationOperator>& all_mutation_operators() {
    static const std::vector<MutationOperator> ops{
        MutationOperator::RelationalReplace,
        MutationOperator::ArithmeticReplace,
        MutationOperator::NegateCondition,
        MutationOperator::ConstantPerturb,
    };
    return ops;
}

// Enumerates every mutant the operators admit, ordered by (file, function,
// site, replacement). With `max`, draws a uniform sample without replacement
// using a self-contained seeded generator (so the draw is identical across
// platforms); ids keep their enumeration values and ascend in the result.
std::vector<Mutant> generate_mutants(const std::vector<ParsedFile>& files, std::uint64_t seed = 0,
                                     std::optional<int> max = std::nullopt,
                                     const std::vector<MutationOperator>& operators =
                                         all_mutation_operators());

// Applies one mutant to its target file in `files` (in place). Throws
// std::invalid_argument when the file, function, or site cannot be resolved.
void apply_mutant(std::vector<ParsedFile>& files, const Mutant& m);

enum class MutantFate { Killed, Alive, Hang };

// One fate per mutant id. A mutant is judged by the tests of the file it
// lives in: each .tl file is a self-contained program with its own suite.
// Killed: at least one test ends AssertionFailed or UncaughtException.
// Hang: no such failure and at least one test ran out of budget.
struct KillMatrix {
    std::map<int, MutantFate> outcomes;
    std::map<int, std::string> application_errors;  // excluded from outcomes
};

KillMatrix kill_matrix(const std::vector<ParsedFile>& files, const std::vector<Mutant>& mutants,
                       std::int64_t budget = default_budget);

struct FateDisagreement {
    int id{0};
    MutantFate original{MutantFate::Alive};
    MutantFate refactored{MutantFate::Alive};
};

struct EquivalenceReport {
    int killed_both{0};
    int alive_both{0};
    int hang_both{0};
    std::vector<FateDisagreement> disagreements;
    bool equivalent{false};
};

// Requires identical id sets in both matrices; throws std::invalid_argument
// otherwise. Equivalent iff every mutant has the same fate on both sides.
EquivalenceReport compare_matrices(const KillMatrix& original, const KillMatrix& refactored);

const char* to_string(MutationOperator op);
const char* to_string(MutantFate f);

}  // namespace purify
