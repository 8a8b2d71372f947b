#include "purify/json_io.hpp"

#include <map>

namespace purify {

json element_to_json(const ElementId& e) {
    return json{{"kind", to_string(e.kind)},
                {"file", e.file},
                {"function", e.function},
                {"ordinal", e.ordinal}};
}

std::string trace_to_jsonl(const std::vector<TraceEvent>& trace) {
    std::string out;
    for (const TraceEvent& ev : trace) {
        json line{{"test", ev.test},
                  {"constituent", ev.constituent},
                  {"element", element_to_json(ev.element)},
                  {"value", to_string(ev.value)},
                  {"seq", ev.seq}};
        out += line.dump();
        out += '\n';
    }
    return out;
}

json suite_to_json(const SuiteResult& run) {
    json results = json::array();
    for (const TestResult& r : run.results) {
        json row{{"file", r.file},
                 {"test", r.test},
                 {"status", to_string(r.outcome.status)},
                 {"failure_detail", r.outcome.failure_detail},
                 {"assert_count", r.outcome.assert_count}};
        if (r.origin) {
            row["origin"] = r.origin->origin;
            row["order"] = r.origin->order;
        }
        results.push_back(std::move(row));
    }
    return json{{"results", std::move(results)}};
}

json purity_to_json(const PurityReport& r) {
    json per_test = json::array();
    for (const TestClassRow& row : r.per_test) {
        per_test.push_back(json{{"file", row.file}, {"test", row.test},
                                {"class", to_string(row.cls)}});
    }
    json per_element = json::array();
    for (const ElementCoverageRow& row : r.per_element) {
        per_element.push_back(json{{"element", element_to_json(row.element)},
                                   {"executed", row.executed},
                                   {"purely_covered", row.purely_covered},
                                   {"at_least_one_pure", row.at_least_one_pure}});
    }
    return json{
        {"element_kind", to_string(r.kind)},
        {"tests",
         {{"total", r.tests_total},
          {"pure", r.tests_pure},
          {"non_absolutely_impure", r.tests_non_absolutely_impure},
          {"absolutely_impure", r.tests_absolutely_impure},
          {"not_covering", r.tests_not_covering},
          {"pure_percent", percent_string(r.tests_pure, r.tests_total)},
          {"non_absolutely_impure_percent",
           percent_string(r.tests_non_absolutely_impure, r.tests_total)},
          {"absolutely_impure_percent",
           percent_string(r.tests_absolutely_impure, r.tests_total)},
          {"not_covering_percent", percent_string(r.tests_not_covering, r.tests_total)}}},
        {"constituents",
         {{"total", r.constituents_total},
          {"impure", r.constituents_impure},
          {"impure_percent", percent_string(r.constituents_impure, r.constituents_total)}}},
        {"elements",
         {{"total", r.elements_total},
          {"executed", r.elements_executed},
          {"purely_covered", r.elements_purely_covered},
          {"at_least_one_pure", r.elements_at_least_one_pure},
          {"executed_percent", percent_string(r.elements_executed, r.elements_total)},
          {"purely_covered_percent",
           percent_string(r.elements_purely_covered, r.elements_executed)},
          {"at_least_one_pure_percent",
           percent_string(r.elements_at_least_one_pure, r.elements_executed)}}},
        {"per_test", std::move(per_test)},
        {"per_element", std::move(per_element)},
    };
}

json improvement_to_json(const ImprovementReport& r) {
    json deltas = json::array();
    for (const DeltaRow& d : r.deltas) {
        deltas.push_back(json{{"metric", d.metric},
                              {"before", d.before},
                              {"after", d.after},
                              {"absolute", d.absolute},
                              {"relative", d.relative}});
    }
    return json{{"element_kind", to_string(r.before.kind)},
                {"before", purity_to_json(r.before)},
                {"after", purity_to_json(r.after)},
                {"deltas", std::move(deltas)}};
}

json plan_to_json(const RefactorPlan& plan) {
    // Group the flat per-test plans by file, preserving encounter order.
    std::vector<std::string> file_order;
    std::map<std::string, std::vector<const TestPlan*>> by_file;
    for (const TestPlan& tp : plan.tests) {
        if (!by_file.count(tp.file)) file_order.push_back(tp.file);
        by_file[tp.file].push_back(&tp);
    }

    auto kept_reason = [](const std::string& action) {
        if (action == "kept") return "no-split-needed";
        if (action == "kept-budget-exceeded") return "budget-exceeded";
        return "unsupported";
    };

    json files = json::array();
    for (const std::string& path : file_order) {
        json kept = json::array();
        json split = json::object();
        json hoisted = json::array();
        for (const TestPlan* tp : by_file[path]) {
            if (tp->action != "split") {
                kept.push_back(json{{"name", tp->test}, {"reason", kept_reason(tp->action)}});
                continue;
            }
            json fragments = json::array();
            for (std::size_t i = 0; i < tp->ranges.size(); ++i) {
                fragments.push_back(
                    json{{"order", static_cast<int>(i + 1)},
                         {"range", json::array({tp->ranges[i].first, tp->ranges[i].last})},
                         {"purity", tp->ranges[i].impure ? "impure" : "pure"},
                         {"name", tp->fragment_names[i]}});
            }
            split[tp->test] = std::move(fragments);
            for (const HoistedVar& h : tp->hoisted) {
                hoisted.push_back(json{{"origin", tp->test},
                                       {"variable", h.variable},
                                       {"binding", h.binding},
                                       {"constituent", h.constituent}});
            }
        }
        files.push_back(json{{"path", path},
                             {"kept", std::move(kept)},
                             {"split", std::move(split)},
                             {"hoisted", std::move(hoisted)}});
    }
    return json{{"element_kind", to_string(plan.kind)}, {"files", std::move(files)}};
}

json mutants_to_json(const std::vector<Mutant>& mutants) {
    json arr = json::array();
    for (const Mutant& m : mutants) {
        arr.push_back(json{{"id", m.id},
                           {"file", m.file},
                           {"function", m.function},
                           {"site", m.site},
                           {"operator", to_string(m.op)},
                           {"original", m.original},
                           {"mutated", m.mutated}});
    }
    return arr;
}

json matrix_to_json(const KillMatrix& m) {
    json outcomes = json::object();
    for (const auto& [id, fate] : m.outcomes) {
        outcomes[std::to_string(id)] = to_string(fate);
    }
    json errors = json::object();
    for (const auto& [id, msg] : m.application_errors) {
        errors[std::to_string(id)] = msg;
    }
    return json{{"outcomes", std::move(outcomes)}, {"application_errors", std::move(errors)}};
}

json equivalence_to_json(const EquivalenceReport& r) {
    json disagreements = json::array();
    for (const FateDisagreement& d : r.disagreements) {
        disagreements.push_back(json{{"id", d.id},
                                     {"original", to_string(d.original)},
                                     {"refactored", to_string(d.refactored)}});
    }
    return json{{"killed_both", r.killed_both},
                {"alive_both", r.alive_both},
                {"hang_both", r.hang_both},
                {"disagreements", std::move(disagreements)},
                {"equivalent", r.equivalent}};
}

json contracts_to_json(const ContractReport& r) {
    json elements = json::array();
    for (const TryClassification& tc : r.elements) {
        json row{{"element", element_to_json(tc.element)}, {"before", to_string(tc.before)}};
        if (tc.after) row["after"] = to_string(*tc.after);
        elements.push_back(std::move(row));
    }
    json totals{{"before",
                 {{"source_independent", r.independent_before},
                  {"source_dependent", r.dependent_before},
                  {"unknown", r.unknown_before}}}};
    if (r.has_after) {
        totals["after"] = json{{"source_independent", r.independent_after},
                               {"source_dependent", r.dependent_after},
                               {"unknown", r.unknown_after}};
    }
    json out{{"elements", std::move(elements)}, {"totals", std::move(totals)}};
    if (r.has_after) {
        out["unknown_reduction"] = r.unknown_reduction;
        out["unknown_reduction_percent"] = r.unknown_reduction_percent;
    }
    return out;
}

json readiness_to_json(const RepairReadiness& r) {
    return json{{"element", element_to_json(r.element)},
                {"purely_covered", r.purely_covered},
                {"then_pure_tests", r.then_pure_tests},
                {"else_pure_tests", r.else_pure_tests},
                {"impure_tests", r.impure_tests},
                {"has_failing", r.has_failing},
                {"has_passing", r.has_passing},
                {"ready", r.ready}};
}

std::string to_output_string(const json& j) { return j.dump(2) + "\n"; }

}  // namespace purify
