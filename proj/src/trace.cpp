#include "purify/trace.hpp"

namespace purify {

Signature constituent_signature(const std::vector<DomainValue>& values) {
    if (values.empty()) return Signature::bottom();
    DomainValue first = values.front();
    for (DomainValue v : values) {
        if (v != first) return Signature::impure();
    }
    return Signature::pure(first);
}

Signature test_signature(const std::vector<Signature>& constituents) {
    Signature folded = Signature::bottom();
    for (const Signature& c : constituents) {
        switch (c.kind) {
            case SigKind::NotExecuted: break;
            case SigKind::Impure: return Signature::impure();
            case SigKind::Pure:
                if (folded.kind == SigKind::NotExecuted) {
                    folded = c;
                } else if (folded.value != c.value) {
                    return Signature::impure();
                }
                break;
        }
    }
    return folded;
}

SignatureTable signature_table(const std::vector<TraceEvent>& trace, const ParsedFile& file,
                               const TestCase& test, ElementKind kind) {
    SignatureTable table;
    const int n = static_cast<int>(test.constituents.size());
    for (const ElementId& id : element_ids(file, kind)) {
        table.push_back(SignatureRow{id, std::vector<Signature>(static_cast<std::size_t>(n))});
    }
    if (table.empty()) return table;

    // Collect per (row, constituent) the observed values, then fold.
    std::vector<std::vector<std::vector<DomainValue>>> buckets(table.size());
    for (auto& rows : buckets) rows.resize(static_cast<std::size_t>(n));
    for (const TraceEvent& ev : trace) {
        if (ev.test != test.name) continue;
        if (ev.constituent < 1 || ev.constituent > n) continue;
        for (std::size_t r = 0; r < table.size(); ++r) {
            if (table[r].element == ev.element) {
                buckets[r][static_cast<std::size_t>(ev.constituent - 1)].push_back(ev.value);
                break;
            }
        }
    }
    for (std::size_t r = 0; r < table.size(); ++r) {
        for (std::size_t c = 0; c < static_cast<std::size_t>(n); ++c) {
            table[r].constituents[c] = constituent_signature(buckets[r][c]);
        }
    }
    return table;
}

PurityClass classify_test(const SignatureTable& table) {
    bool any_impure_constituent = false;
    bool any_impure_test = false;
    bool any_pure = false;
    for (const SignatureRow& row : table) {
        for (const Signature& c : row.constituents) {
            if (c.kind == SigKind::Impure) any_impure_constituent = true;
        }
        Signature f = test_signature(row.constituents);
        if (f.kind == SigKind::Impure) any_impure_test = true;
        if (f.kind == SigKind::Pure) any_pure = true;
    }
    if (any_impure_constituent) return PurityClass::AbsolutelyImpure;
    if (any_impure_test) return PurityClass::NonAbsolutelyImpure;
    if (any_pure) return PurityClass::Pure;
    return PurityClass::NotCovering;
}

ElementCoverage element_coverage(const std::vector<TraceEvent>& trace, const ParsedFile& file,
                                 const ElementId& element) {
    ElementCoverage cov;
    cov.element = element;
    bool any_impure = false;
    for (const TestCase& t : file.tests) {
        const int n = static_cast<int>(t.constituents.size());
        std::vector<std::vector<DomainValue>> buckets(static_cast<std::size_t>(n));
        for (const TraceEvent& ev : trace) {
            if (ev.test != t.name || !(ev.element == element)) continue;
            if (ev.constituent < 1 || ev.constituent > n) continue;
            buckets[static_cast<std::size_t>(ev.constituent - 1)].push_back(ev.value);
        }
        std::vector<Signature> sigs;
        for (const auto& b : buckets) sigs.push_back(constituent_signature(b));
        Signature f = test_signature(sigs);
        cov.per_test.emplace_back(t.name, f);
        if (f.kind != SigKind::NotExecuted) cov.executed = true;
        if (f.kind == SigKind::Pure) cov.at_least_one_pure = true;
        if (f.kind == SigKind::Impure) any_impure = true;
    }
    cov.purely_covered = cov.executed && !any_impure;
    return cov;
}

const char* to_string(SigKind k) {
    switch (k) {
        case SigKind::NotExecuted: return "not-executed";
        case SigKind::Pure: return "pure";
        case SigKind::Impure: return "impure";
    }
    return "?";
}

const char* to_string(PurityClass c) {
    switch (c) {
        case PurityClass::Pure: return "pure";
        case PurityClass::NonAbsolutelyImpure: return "non-absolutely-impure";
        case PurityClass::AbsolutelyImpure: return "absolutely-impure";
        case PurityClass::NotCovering: return "not-covering";
    }
    return "?";
}

}  // namespace purify
