#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "purify/ast.hpp"
#include "purify/interp.hpp"

namespace purify {

// Whether an if element gives a branch-level repair tool what it needs: the
// element purely covered, each branch pinned down by at least one pure test
// with a usable outcome, and both failing and passing evidence among those
// tests. Impure tests are listed as discarded.
struct RepairReadiness {
    ElementId element;
    bool purely_covered{false};
    std::vector<std::string> then_pure_tests;
    std::vector<std::string> else_pure_tests;
    std::vector<std::string> impure_tests;
    bool has_failing{false};
    bool has_passing{false};
    bool ready{false};
};

// Throws std::invalid_argument when `element` is not an if element of the
// corpus.
RepairReadiness repair_readiness(const std::vector<ParsedFile>& files, const ElementId& element,
                                 std::int64_t budget = default_budget);

enum class InjectionVerdict { Passes, Fails };

// Reruns `test_name` (with its whole fragment group, when it is a fragment)
// while forcing a synthetic exception at every dynamic entry of the try
// element's body. Requires the test to have a pure signature on the element;
// throws std::invalid_argument otherwise, or when the element or test is
// unknown.
InjectionVerdict inject_and_run(const std::vector<ParsedFile>& files, const ElementId& element,
                                const std::string& file_path, const std::string& test_name,
                                std::int64_t budget = default_budget);

enum class TryContract { SourceIndependent, SourceDependent, Unknown };

struct TryClassification {
    ElementId element;
    TryContract before{TryContract::Unknown};
    std::optional<TryContract> after;
};

// Classification of every executed try element. Evidence comes from tests
// that are pure on the element and pass without injection: none -> Unknown;
// any such test failing under injection -> SourceDependent; all passing ->
// SourceIndependent.
struct ContractReport {
    std::vector<TryClassification> elements;
    int independent_before{0};
    int dependent_before{0};
    int unknown_before{0};
    bool has_after{false};
    int independent_after{0};
    int dependent_after{0};
    int unknown_after{0};
    int unknown_reduction{0};               // meaningful when has_after
    std::string unknown_reduction_percent;  // "68.18%" or "n/a"; when has_after
};

ContractReport classify_try_contracts(const std::vector<ParsedFile>& files,
                                      const std::vector<ParsedFile>* refactored = nullptr,
                                      std::int64_t budget = default_budget);

std::string render_readiness_text(const RepairReadiness& r);
std::string render_contracts_text(const ContractReport& r);

// "kind:file:function:ordinal", the address format the CLI accepts.
std::string element_address(const ElementId& e);

const char* to_string(TryContract c);
const char* to_string(InjectionVerdict v);

}  // namespace purify
