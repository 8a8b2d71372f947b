#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "purify/ast.hpp"

namespace purify {

inline constexpr std::int64_t default_budget = 1'000'000;
inline constexpr int max_call_depth = 512;

struct Value {
    enum class Type { Null, Int, Bool, Str };
    Type type{Type::Null};
    std::int64_t i{0};
    bool b{false};
    std::string s;

    static Value null() { return Value{}; }
    static Value integer(std::int64_t v) { return Value{Type::Int, v, false, {}}; }
    static Value boolean(bool v) { return Value{Type::Bool, 0, v, {}}; }
    static Value string(std::string v) { return Value{Type::Str, 0, false, std::move(v)}; }

    bool equals(const Value& other) const;
    std::string render() const;
};

enum class ElementFilter { None, If, Try };

enum class DomainValue { ThenBranch, ElseBranch, NoException, ExceptionCaught, ExceptionNotCaught };

// Raises a synthetic catchable exception at every dynamic entry of the target
// try element's body.
struct InjectionConfig {
    ElementId element;
};

enum class TestStatus { Passed, AssertionFailed, UncaughtException, BudgetExceeded, Skipped };

struct TestOutcome {
    TestStatus status{TestStatus::Passed};
    std::string failure_detail;
    int assert_count{0};
};

struct TraceEvent {
    std::string test;
    int constituent{0};  // 1-based; 0 never appears (hooks are untraced)
    ElementId element;
    DomainValue value{DomainValue::ThenBranch};
    int seq{0};  // 1-based, strictly increasing within one test execution
};

struct TestResult {
    std::string file;
    std::string test;
    std::optional<OriginMeta> origin;
    TestOutcome outcome;
};

struct SuiteResult {
    std::vector<TestResult> results;
    std::vector<TraceEvent> trace;
};

// Executes tests of one file. State persists across run_test calls unless
// init_state is set, which is how fragments of one origin share hoisted
// file-scope variables.
class Interpreter {
public:
    struct Options {
        ElementFilter filter{ElementFilter::None};
        std::int64_t budget{default_budget};
        std::optional<InjectionConfig> injection;
    };

    Interpreter(const ParsedFile& file, Options opts);
    ~Interpreter();
    Interpreter(const Interpreter&) = delete;
    Interpreter& operator=(const Interpreter&) = delete;

    // init_state clears the file scope and re-evaluates file bindings as part
    // of this run (failures there count against this test). Automatic hooks
    // run only for tests without origin metadata.
    TestOutcome run_test(const TestCase& test, std::vector<TraceEvent>& events, bool init_state);

private:
    class Impl;
    std::unique_ptr<Impl> impl_;
};

// Fresh state, one test; throws std::invalid_argument for an unknown test name.
std::pair<TestOutcome, std::vector<TraceEvent>> execute_test(
    const ParsedFile& file, const std::string& test_name, ElementFilter filter,
    std::int64_t budget = default_budget, std::optional<InjectionConfig> injection = {});

// Runs every test of every file in declaration order. Ordinary tests get a
// fresh state each; contiguous fragments of one origin share state, and once a
// fragment does not pass, the rest of its group is reported Skipped.
SuiteResult run_suite(const std::vector<ParsedFile>& files, ElementFilter filter,
                      std::int64_t budget = default_budget);

const char* to_string(TestStatus s);
const char* to_string(DomainValue v);
const char* to_string(ElementKind k);

}  // namespace purify
