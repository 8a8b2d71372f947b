#include "purify/interp.hpp"

#include <deque>
#include <limits>
#include <map>

namespace purify {

bool Value::equals(const Value& other) const {
    if (type != other.type) return false;
    switch (type) {
        case Type::Null: return true;
        case Type::Int: return i == other.i;
        case Type::Bool: return b == other.b;
        case Type::Str: return s == other.s;
    }
    return false;
}

std::string Value::render() const {
    switch (type) {
        case Type::Null: return "null";
        case Type::Int: return std::to_string(i);
        case Type::Bool: return b ? "true" : "false";
        case Type::Str: return s;
    }
    return "";
}

namespace {

// test-language exception; catchable by try/catch
struct RuntimeSignal {
    Value payload;
};
// assertion failure; never catchable
struct AssertSignal {
    std::string message;
};
// step budget exhausted; never catchable
struct BudgetSignal {};

struct Scope {
    std::map<std::string, Value> vars;
};

struct Frame {
    std::string function;  // empty for test bodies, hooks, and initializers
    std::vector<Scope> scopes;
    Value ret;
};

enum class Flow { Normal, Return };

[[noreturn]] void raise(std::string message) {
    throw RuntimeSignal{Value::string(std::move(message))};
}

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) +
                                     static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) -
                                     static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) *
                                     static_cast<std::uint64_t>(b));
}
std::int64_t wrap_neg(std::int64_t a) {
    return static_cast<std::int64_t>(0 - static_cast<std::uint64_t>(a));
}

struct Increment {
    explicit Increment(int& v) : v_(v) { ++v_; }
    ~Increment() { --v_; }
    int& v_;
};

}  // namespace

class Interpreter::Impl {
public:
    Impl(const ParsedFile& file, Options opts) : f_(file), opts_(opts) {
        for (const auto& fn : f_.functions) fn_map_[fn.name] = &fn;
    }

    TestOutcome run_test(const TestCase& t, std::vector<TraceEvent>& events, bool init_state) {
        budget_left_ = opts_.budget;
        seq_ = 0;
        assert_count_ = 0;
        call_depth_ = 0;
        hook_depth_ = 0;
        current_test_ = t.name;
        current_constituent_ = 0;
        sink_ = &events;
        frames_.clear();
        TestOutcome out;
        try {
            if (init_state) init_file_scope();
            frames_.push_back(Frame{"", {Scope{}}, Value::null()});
            bool auto_hooks = !t.origin.has_value();
            if (auto_hooks) run_hook(HookKind::Before);
            for (std::size_t i = 0; i < t.constituents.size(); ++i) {
                current_constituent_ = static_cast<int>(i) + 1;
                exec_stmt(t.constituents[i]);
            }
            current_constituent_ = 0;
            if (auto_hooks) run_hook(HookKind::After);
        } catch (const RuntimeSignal& sig) {
            out.status = TestStatus::UncaughtException;
            out.failure_detail = "uncaught exception: " + sig.payload.render();
        } catch (const AssertSignal& sig) {
            out.status = TestStatus::AssertionFailed;
            out.failure_detail = sig.message;
        } catch (const BudgetSignal&) {
            out.status = TestStatus::BudgetExceeded;
            out.failure_detail = "step budget exceeded";
        }
        out.assert_count = assert_count_;
        frames_.clear();
        sink_ = nullptr;
        return out;
    }

private:
    void step() {
        if (--budget_left_ < 0) throw BudgetSignal{};
    }

    void init_file_scope() {
        file_scope_.clear();
        Increment hook_guard(hook_depth_);
        frames_.push_back(Frame{"", {Scope{}}, Value::null()});
        for (const auto& b : f_.bindings) {
            file_scope_[b.name] = eval(b.init);
        }
        frames_.pop_back();
    }

    void run_hook(HookKind which) {
        const std::vector<StmtId>* body = nullptr;
        if (which == HookKind::Before && f_.before_hook) body = &*f_.before_hook;
        if (which == HookKind::After && f_.after_hook) body = &*f_.after_hook;
        if (!body) return;
        if (call_depth_ >= max_call_depth) raise("call depth limit exceeded");
        Increment depth_guard(call_depth_);
        Increment hook_guard(hook_depth_);
        struct FramePop {
            std::deque<Frame>& frames;
            ~FramePop() { frames.pop_back(); }
        };
        frames_.push_back(Frame{"", {Scope{}}, Value::null()});
        FramePop pop{frames_};
        for (StmtId id : *body) exec_stmt(id);
    }

    Value* find_var(const std::string& name) {
        auto& scopes = frames_.back().scopes;
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            auto hit = it->vars.find(name);
            if (hit != it->vars.end()) return &hit->second;
        }
        auto hit = file_scope_.find(name);
        if (hit != file_scope_.end()) return &hit->second;
        return nullptr;
    }

    void emit(ElementKind kind, int ordinal, DomainValue value) {
        bool filter_match = (kind == ElementKind::If && opts_.filter == ElementFilter::If) ||
                            (kind == ElementKind::Try && opts_.filter == ElementFilter::Try);
        if (!filter_match || hook_depth_ > 0) return;
        sink_->push_back(TraceEvent{current_test_, current_constituent_,
                                    ElementId{kind, f_.path, frames_.back().function, ordinal},
                                    value, ++seq_});
    }

    Flow exec_block(const std::vector<StmtId>& block) {
        auto& scopes = frames_.back().scopes;
        struct ScopePop {
            std::vector<Scope>& scopes;
            ~ScopePop() { scopes.pop_back(); }
        };
        scopes.push_back(Scope{});
        ScopePop pop{scopes};
        for (StmtId id : block) {
            if (exec_stmt(id) == Flow::Return) return Flow::Return;
        }
        return Flow::Normal;
    }

    Flow exec_stmt(StmtId id) {
        step();
        const Stmt& s = f_.stmt(id);
        switch (s.kind) {
            case StmtKind::Let: {
                Value v = eval(s.e1);
                Scope& sc = frames_.back().scopes.back();
                if (sc.vars.count(s.name)) {
                    raise("variable '" + s.name + "' already declared in this scope");
                }
                sc.vars[s.name] = std::move(v);
                return Flow::Normal;
            }
            case StmtKind::Assign: {
                Value v = eval(s.e1);
                Value* slot = find_var(s.name);
                if (!slot) raise("assignment to undeclared variable '" + s.name + "'");
                *slot = std::move(v);
                return Flow::Normal;
            }
            case StmtKind::If: {
                Value c = eval(s.e1);
                if (c.type != Value::Type::Bool) raise("type error: condition must be boolean");
                if (s.element_ordinal > 0) {
                    emit(ElementKind::If, s.element_ordinal,
                         c.b ? DomainValue::ThenBranch : DomainValue::ElseBranch);
                }
                return exec_block(c.b ? s.body : s.orelse);
            }
            case StmtKind::While: {
                for (;;) {
                    step();
                    Value c = eval(s.e1);
                    if (c.type != Value::Type::Bool) raise("type error: condition must be boolean");
                    if (!c.b) break;
                    if (exec_block(s.body) == Flow::Return) return Flow::Return;
                }
                return Flow::Normal;
            }
            case StmtKind::Try: return exec_try(s);
            case StmtKind::Throw: {
                Value v = eval(s.e1);
                throw RuntimeSignal{std::move(v)};
            }
            case StmtKind::Return: {
                frames_.back().ret = s.e1 == no_expr ? Value::null() : eval(s.e1);
                return Flow::Return;
            }
            case StmtKind::ExprStmt: {
                eval(s.e1);
                return Flow::Normal;
            }
            case StmtKind::Assert: {
                Value v = eval(s.e1);
                if (v.type != Value::Type::Bool) raise("type error: assert requires a boolean");
                ++assert_count_;
                if (!v.b) throw AssertSignal{"assertion failed"};
                return Flow::Normal;
            }
            case StmtKind::AssertEquals: {
                Value a = eval(s.e1);
                Value b = eval(s.e2);
                ++assert_count_;
                if (!a.equals(b)) {
                    throw AssertSignal{"assertEquals failed: expected " + a.render() +
                                       " but was " + b.render()};
                }
                return Flow::Normal;
            }
            case StmtKind::Fail: {
                Value m = eval(s.e1);
                ++assert_count_;
                throw AssertSignal{m.render()};
            }
            case StmtKind::HookCall: {
                run_hook(s.hook);
                return Flow::Normal;
            }
        }
        return Flow::Normal;
    }

    Flow exec_try(const Stmt& s) {
        bool is_element = s.element_ordinal > 0 && !frames_.back().function.empty();
        ElementId eid;
        if (is_element) {
            eid = ElementId{ElementKind::Try, f_.path, frames_.back().function,
                            s.element_ordinal};
        }
        Flow fl;
        try {
            if (is_element && opts_.injection && opts_.injection->element == eid) {
                raise("injected exception");
            }
            fl = exec_block(s.body);
        } catch (const RuntimeSignal& ex) {
            Flow cfl;
            try {
                auto& scopes = frames_.back().scopes;
                struct ScopePop {
                    std::vector<Scope>& scopes;
                    ~ScopePop() { scopes.pop_back(); }
                };
                scopes.push_back(Scope{});
                ScopePop pop{scopes};
                scopes.back().vars[s.name] = ex.payload;
                cfl = exec_block(s.orelse);
            } catch (const RuntimeSignal&) {
                if (s.element_ordinal > 0) {
                    emit(ElementKind::Try, s.element_ordinal, DomainValue::ExceptionNotCaught);
                }
                throw;
            }
            if (s.element_ordinal > 0) {
                emit(ElementKind::Try, s.element_ordinal, DomainValue::ExceptionCaught);
            }
            return cfl;
        }
        if (s.element_ordinal > 0) {
            emit(ElementKind::Try, s.element_ordinal, DomainValue::NoException);
        }
        return fl;
    }

    Value eval(ExprId id) {
        step();
        const Expr& e = f_.expr(id);
        switch (e.kind) {
            case ExprKind::IntLit: return Value::integer(e.int_val);
            case ExprKind::BoolLit: return Value::boolean(e.bool_val);
            case ExprKind::StrLit: return Value::string(e.text);
            case ExprKind::NullLit: return Value::null();
            case ExprKind::Var: {
                Value* slot = find_var(e.text);
                if (!slot) raise("unknown variable '" + e.text + "'");
                return *slot;
            }
            case ExprKind::Call: return eval_call(e);
            case ExprKind::Unary: {
                Value v = eval(e.lhs);
                if (e.uop == UnOp::Not) {
                    if (v.type != Value::Type::Bool) {
                        raise("type error: '!' requires a boolean operand");
                    }
                    return Value::boolean(!v.b);
                }
                if (v.type != Value::Type::Int) {
                    raise("type error: unary '-' requires an integer operand");
                }
                return Value::integer(wrap_neg(v.i));
            }
            case ExprKind::Binary: return eval_binary(e);
        }
        return Value::null();
    }

    Value eval_binary(const Expr& e) {
        if (e.bop == BinOp::And || e.bop == BinOp::Or) {
            Value l = eval(e.lhs);
            if (l.type != Value::Type::Bool) {
                raise("type error: logical operator requires boolean operands");
            }
            if (e.bop == BinOp::And && !l.b) return Value::boolean(false);
            if (e.bop == BinOp::Or && l.b) return Value::boolean(true);
            Value r = eval(e.rhs);
            if (r.type != Value::Type::Bool) {
                raise("type error: logical operator requires boolean operands");
            }
            return Value::boolean(r.b);
        }
        Value l = eval(e.lhs);
        Value r = eval(e.rhs);
        auto require_ints = [&](const char* op) {
            if (l.type != Value::Type::Int || r.type != Value::Type::Int) {
                raise(std::string("type error: '") + op + "' requires integer operands");
            }
        };
        switch (e.bop) {
            case BinOp::Add:
                if (l.type == Value::Type::Str && r.type == Value::Type::Str) {
                    return Value::string(l.s + r.s);
                }
                if (l.type == Value::Type::Int && r.type == Value::Type::Int) {
                    return Value::integer(wrap_add(l.i, r.i));
                }
                raise("type error: '+' requires two integers or two strings");
            case BinOp::Sub: require_ints("-"); return Value::integer(wrap_sub(l.i, r.i));
            case BinOp::Mul: require_ints("*"); return Value::integer(wrap_mul(l.i, r.i));
            case BinOp::Div: {
                require_ints("/");
                if (r.i == 0) raise("division by zero");
                if (l.i == std::numeric_limits<std::int64_t>::min() && r.i == -1) {
                    raise("integer overflow in division");
                }
                return Value::integer(l.i / r.i);
            }
            case BinOp::Mod: {
                require_ints("%");
                if (r.i == 0) raise("modulo by zero");
                if (l.i == std::numeric_limits<std::int64_t>::min() && r.i == -1) {
                    return Value::integer(0);
                }
                return Value::integer(l.i % r.i);
            }
            case BinOp::Eq: return Value::boolean(l.equals(r));
            case BinOp::Ne: return Value::boolean(!l.equals(r));
            case BinOp::Lt: require_ints("<"); return Value::boolean(l.i < r.i);
            case BinOp::Le: require_ints("<="); return Value::boolean(l.i <= r.i);
            case BinOp::Gt: require_ints(">"); return Value::boolean(l.i > r.i);
            case BinOp::Ge: require_ints(">="); return Value::boolean(l.i >= r.i);
            default: break;
        }
        return Value::null();
    }

    Value eval_call(const Expr& e) {
        auto it = fn_map_.find(e.text);
        if (it == fn_map_.end()) raise("unknown function '" + e.text + "'");
        const FunctionDecl& fn = *it->second;
        if (fn.params.size() != e.args.size()) {
            raise("wrong argument count for '" + fn.name + "': expected " +
                  std::to_string(fn.params.size()) + ", got " + std::to_string(e.args.size()));
        }
        std::vector<Value> argv;
        argv.reserve(e.args.size());
        for (ExprId a : e.args) argv.push_back(eval(a));
        if (call_depth_ >= max_call_depth) raise("call depth limit exceeded");
        Increment depth_guard(call_depth_);
        struct FramePop {
            std::deque<Frame>& frames;
            ~FramePop() { frames.pop_back(); }
        };
        frames_.push_back(Frame{fn.name, {Scope{}}, Value::null()});
        FramePop pop{frames_};
        Scope& params = frames_.back().scopes.back();
        for (std::size_t i = 0; i < fn.params.size(); ++i) {
            params.vars[fn.params[i]] = std::move(argv[i]);
        }
        Flow fl = Flow::Normal;
        for (StmtId id : fn.body) {
            fl = exec_stmt(id);
            if (fl == Flow::Return) break;
        }
        return fl == Flow::Return ? frames_.back().ret : Value::null();
    }

    const ParsedFile& f_;
    Options opts_;
    std::map<std::string, const FunctionDecl*> fn_map_;
    std::map<std::string, Value> file_scope_;
    std::deque<Frame> frames_;
    std::int64_t budget_left_{0};
    int call_depth_{0};
    int hook_depth_{0};
    int seq_{0};
    int assert_count_{0};
    std::string current_test_;
    int current_constituent_{0};
    std::vector<TraceEvent>* sink_{nullptr};
};

Interpreter::Interpreter(const ParsedFile& file, Options opts)
    : impl_(std::make_unique<Impl>(file, opts)) {}

Interpreter::~Interpreter() = default;

TestOutcome Interpreter::run_test(const TestCase& test, std::vector<TraceEvent>& events,
                                  bool init_state) {
    return impl_->run_test(test, events, init_state);
}

std::pair<TestOutcome, std::vector<TraceEvent>> execute_test(
    const ParsedFile& file, const std::string& test_name, ElementFilter filter,
    std::int64_t budget, std::optional<InjectionConfig> injection) {
    const TestCase* t = file.find_test(test_name);
    if (!t) throw std::invalid_argument("unknown test '" + test_name + "'");
    Interpreter interp(file, Interpreter::Options{filter, budget, std::move(injection)});
    std::vector<TraceEvent> events;
    TestOutcome outcome = interp.run_test(*t, events, /*init_state=*/true);
    return {outcome, std::move(events)};
}

SuiteResult run_suite(const std::vector<ParsedFile>& files, ElementFilter filter,
                      std::int64_t budget) {
    SuiteResult out;
    for (const ParsedFile& file : files) {
        Interpreter interp(file, Interpreter::Options{filter, budget, std::nullopt});
        const auto& tests = file.tests;
        std::size_t i = 0;
        while (i < tests.size()) {
            if (!tests[i].origin) {
                TestOutcome oc = interp.run_test(tests[i], out.trace, /*init_state=*/true);
                out.results.push_back(TestResult{file.path, tests[i].name, std::nullopt, oc});
                ++i;
                continue;
            }
            const std::string origin = tests[i].origin->origin;
            bool failed = false;
            std::size_t j = i;
            for (; j < tests.size() && tests[j].origin && tests[j].origin->origin == origin;
                 ++j) {
                TestOutcome oc;
                if (!failed) {
                    oc = interp.run_test(tests[j], out.trace, /*init_state=*/j == i);
                    if (oc.status != TestStatus::Passed) failed = true;
                } else {
                    oc = TestOutcome{TestStatus::Skipped,
                                     "skipped: earlier fragment of origin '" + origin +
                                         "' did not pass",
                                     0};
                }
                out.results.push_back(TestResult{file.path, tests[j].name, tests[j].origin, oc});
            }
            i = j;
        }
    }
    return out;
}

const char* to_string(TestStatus s) {
    switch (s) {
        case TestStatus::Passed: return "passed";
        case TestStatus::AssertionFailed: return "assertion-failed";
        case TestStatus::UncaughtException: return "uncaught-exception";
        case TestStatus::BudgetExceeded: return "budget-exceeded";
        case TestStatus::Skipped: return "skipped";
    }
    return "?";
}

const char* to_string(DomainValue v) {
    switch (v) {
        case DomainValue::ThenBranch: return "then-branch";
        case DomainValue::ElseBranch: return "else-branch";
        case DomainValue::NoException: return "no-exception";
        case DomainValue::ExceptionCaught: return "exception-caught";
        case DomainValue::ExceptionNotCaught: return "exception-not-caught";
    }
    return "?";
}

const char* to_string(ElementKind k) {
    return k == ElementKind::If ? "if" : "try";
}

}  // namespace purify
