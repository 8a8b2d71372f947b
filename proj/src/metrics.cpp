#include "purify/metrics.hpp"

#include <cstdio>
#include <stdexcept>

namespace purify {

PurityReport purity_report(const std::vector<ParsedFile>& files, ElementKind kind,
                           std::int64_t budget) {
    ElementFilter filter = kind == ElementKind::If ? ElementFilter::If : ElementFilter::Try;
    SuiteResult run = run_suite(files, filter, budget);
    return purity_report_from(files, run, kind);
}

PurityReport purity_report_from(const std::vector<ParsedFile>& files, const SuiteResult& run,
                                ElementKind kind) {
    PurityReport rep;
    rep.kind = kind;

    for (const ParsedFile& f : files) {
        for (const TestCase& t : f.tests) {
            SignatureTable table = signature_table(run.trace, f, t, kind);
            PurityClass cls = classify_test(table);
            rep.per_test.push_back(TestClassRow{f.path, t.name, cls});
            ++rep.tests_total;
            switch (cls) {
                case PurityClass::Pure: ++rep.tests_pure; break;
                case PurityClass::NonAbsolutelyImpure: ++rep.tests_non_absolutely_impure; break;
                case PurityClass::AbsolutelyImpure: ++rep.tests_absolutely_impure; break;
                case PurityClass::NotCovering: ++rep.tests_not_covering; break;
            }
            const int n = static_cast<int>(t.constituents.size());
            rep.constituents_total += n;
            for (int c = 0; c < n; ++c) {
                for (const SignatureRow& row : table) {
                    if (row.constituents[static_cast<std::size_t>(c)].kind == SigKind::Impure) {
                        ++rep.constituents_impure;
                        break;
                    }
                }
            }
        }
        for (const ElementId& e : element_ids(f, kind)) {
            ElementCoverage cov = element_coverage(run.trace, f, e);
            rep.per_element.push_back(ElementCoverageRow{e, cov.executed, cov.purely_covered,
                                                         cov.at_least_one_pure});
            ++rep.elements_total;
            if (cov.executed) ++rep.elements_executed;
            if (cov.purely_covered) ++rep.elements_purely_covered;
            if (cov.at_least_one_pure) ++rep.elements_at_least_one_pure;
        }
    }
    return rep;
}

ImprovementReport improvement_report(const PurityReport& before, const PurityReport& after) {
    if (before.kind != after.kind) {
        throw std::invalid_argument("improvement report requires matching element kinds");
    }
    ImprovementReport rep;
    rep.before = before;
    rep.after = after;
    auto add = [&rep](const char* metric, long long b, long long a) {
        rep.deltas.push_back(DeltaRow{metric, b, a, a - b, relative_change_string(b, a)});
    };
    add("pure tests", before.tests_pure, after.tests_pure);
    add("non-absolutely impure tests", before.tests_non_absolutely_impure,
        after.tests_non_absolutely_impure);
    add("absolutely impure tests", before.tests_absolutely_impure, after.tests_absolutely_impure);
    add("not covering tests", before.tests_not_covering, after.tests_not_covering);
    add("executed elements", before.elements_executed, after.elements_executed);
    add("purely covered elements", before.elements_purely_covered,
        after.elements_purely_covered);
    add("elements with at least one pure test", before.elements_at_least_one_pure,
        after.elements_at_least_one_pure);
    return rep;
}

std::string percent_string(long long numerator, long long denominator) {
    if (denominator == 0) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f%%",
                  100.0 * static_cast<double>(numerator) / static_cast<double>(denominator));
    return buf;
}

std::string relative_change_string(long long before, long long after) {
    if (before == 0) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f%%",
                  100.0 * static_cast<double>(after - before) / static_cast<double>(before));
    return buf;
}

namespace {

std::string line(const char* label, long long count, const std::string& pct) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %-22s %6lld  %s\n", label, count, pct.c_str());
    return buf;
}

}  // namespace

std::string render_purity_text(const PurityReport& r) {
    std::string out;
    out += std::string("Purity report (") + to_string(r.kind) + " elements)\n";
    out += "tests: total " + std::to_string(r.tests_total) + "\n";
    out += line("pure", r.tests_pure, percent_string(r.tests_pure, r.tests_total));
    out += line("non-absolutely impure", r.tests_non_absolutely_impure,
                percent_string(r.tests_non_absolutely_impure, r.tests_total));
    out += line("absolutely impure", r.tests_absolutely_impure,
                percent_string(r.tests_absolutely_impure, r.tests_total));
    out += line("not covering", r.tests_not_covering,
                percent_string(r.tests_not_covering, r.tests_total));
    out += "constituents: total " + std::to_string(r.constituents_total) + ", impure " +
           std::to_string(r.constituents_impure) + " (" +
           percent_string(r.constituents_impure, r.constituents_total) + ")\n";
    out += "elements: total " + std::to_string(r.elements_total) + ", executed " +
           std::to_string(r.elements_executed) + " (" +
           percent_string(r.elements_executed, r.elements_total) + ")\n";
    out += line("purely covered", r.elements_purely_covered,
                percent_string(r.elements_purely_covered, r.elements_executed));
    out += line("at least one pure", r.elements_at_least_one_pure,
                percent_string(r.elements_at_least_one_pure, r.elements_executed));
    return out;
}

std::string render_improvement_text(const ImprovementReport& r) {
    std::string out;
    out += std::string("Improvement report (") + to_string(r.before.kind) + " elements)\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-38s %8s %8s %8s %10s\n", "metric", "before", "after",
                  "delta", "relative");
    out += buf;
    for (const DeltaRow& d : r.deltas) {
        std::string delta = d.absolute > 0 ? "+" + std::to_string(d.absolute)
                                           : std::to_string(d.absolute);
        std::snprintf(buf, sizeof buf, "%-38s %8lld %8lld %8s %10s\n", d.metric.c_str(), d.before,
                      d.after, delta.c_str(), d.relative.c_str());
        out += buf;
    }
    return out;
}

}  // namespace purify
