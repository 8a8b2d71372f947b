#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "purify/contracts.hpp"
#include "purify/interp.hpp"
#include "purify/metrics.hpp"
#include "purify/mutation.hpp"
#include "purify/splitter.hpp"

namespace purify {

using json = nlohmann::ordered_json;

json element_to_json(const ElementId& e);

// One compact JSON object per event, one per line, trailing newline.
std::string trace_to_jsonl(const std::vector<TraceEvent>& trace);

json suite_to_json(const SuiteResult& run);
json purity_to_json(const PurityReport& r);
json improvement_to_json(const ImprovementReport& r);
json plan_to_json(const RefactorPlan& plan);
json mutants_to_json(const std::vector<Mutant>& mutants);
json matrix_to_json(const KillMatrix& m);
json equivalence_to_json(const EquivalenceReport& r);
json contracts_to_json(const ContractReport& r);
json readiness_to_json(const RepairReadiness& r);

// Serialization used everywhere JSON reaches the user: 2-space indent plus a
// trailing newline, so repeated runs are byte-identical.
std::string to_output_string(const json& j);

}  // namespace purify
