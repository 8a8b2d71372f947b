#pragma once

#include <vector>

#include "purify/ast.hpp"
#include "purify/interp.hpp"

namespace purify {

enum class SigKind { NotExecuted, Pure, Impure };

// Execution signature of one (element, constituent) or (element, test) pair.
// Pure carries the single domain value observed.
struct Signature {
    SigKind kind{SigKind::NotExecuted};
    DomainValue value{DomainValue::ThenBranch};

    static Signature bottom() { return Signature{}; }
    static Signature pure(DomainValue v) { return Signature{SigKind::Pure, v}; }
    static Signature impure() { return Signature{SigKind::Impure, DomainValue::ThenBranch}; }

    bool operator==(const Signature&) const = default;
};

// Folds the domain values one constituent produced on one element:
// none seen -> NotExecuted, one distinct value -> Pure, several -> Impure.
Signature constituent_signature(const std::vector<DomainValue>& values);

// Folds constituent signatures into the signature of the whole test on one
// element: any impure constituent or two distinct pure values -> Impure.
Signature test_signature(const std::vector<Signature>& constituents);

// One row per element: the test's constituent signatures (index 0 holds
// constituent 1) on that element.
struct SignatureRow {
    ElementId element;
    std::vector<Signature> constituents;
};
using SignatureTable = std::vector<SignatureRow>;

// Builds the rows of `test` for every element of `kind` declared in `file`,
// from a trace produced with the matching filter.
SignatureTable signature_table(const std::vector<TraceEvent>& trace, const ParsedFile& file,
                               const TestCase& test, ElementKind kind);

enum class PurityClass { Pure, NonAbsolutelyImpure, AbsolutelyImpure, NotCovering };

// Classifies one test from its signature table: an impure constituent on any
// element makes it absolutely impure; otherwise an impure test signature makes
// it non-absolutely impure; otherwise executing any element makes it pure.
PurityClass classify_test(const SignatureTable& table);

const char* to_string(SigKind k);
const char* to_string(PurityClass c);

// How one element is covered by the tests of its file. purely_covered means
// it was executed and no test is impure on it; per_test lists every test of
// the file with its signature on the element, in declaration order.
struct ElementCoverage {
    ElementId element;
    bool executed{false};
    bool purely_covered{false};
    bool at_least_one_pure{false};
    std::vector<std::pair<std::string, Signature>> per_test;
};

ElementCoverage element_coverage(const std::vector<TraceEvent>& trace, const ParsedFile& file,
                                 const ElementId& element);

}  // namespace purify
