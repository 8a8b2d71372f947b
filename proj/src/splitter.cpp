#include "purify/splitter.hpp"

#include <map>
#include <optional>
#include <set>

#include "purify/parser.hpp"
#include "purify/printer.hpp"

namespace purify {

std::vector<int> compute_cuts(int n, const SignatureTable& table) {
    std::set<int> cuts;
    for (const SignatureRow& row : table) {
        std::optional<DomainValue> persisted;
        for (int i = 1; i <= n; ++i) {
            const Signature& s = row.constituents[static_cast<std::size_t>(i - 1)];
            if (s.kind == SigKind::Impure) {
                if (i > 1) cuts.insert(i - 1);
                cuts.insert(i);
                persisted.reset();
            } else if (s.kind == SigKind::Pure) {
                if (!persisted) {
                    persisted = s.value;
                } else if (*persisted != s.value) {
                    cuts.insert(i - 1);
                    persisted = s.value;
                }
            }
        }
    }
    if (n > 0) cuts.insert(n);
    return {cuts.begin(), cuts.end()};
}

std::vector<FragmentRange> fragment_ranges(int n, const std::vector<int>& cuts,
                                           const SignatureTable& table) {
    std::vector<FragmentRange> ranges;
    int first = 1;
    for (int cut : cuts) {
        FragmentRange r{first, cut, false};
        for (const SignatureRow& row : table) {
            for (int i = r.first; i <= r.last; ++i) {
                if (row.constituents[static_cast<std::size_t>(i - 1)].kind == SigKind::Impure) {
                    r.impure = true;
                }
            }
        }
        ranges.push_back(r);
        first = cut + 1;
    }
    (void)n;
    return ranges;
}

namespace {

using RenameMap = std::map<std::string, std::string>;

// Copies subtrees from one file's pools into another, applying variable
// renames with lexical shadowing: a local let or catch binding of a renamed
// name turns the rename off for the rest of its block.
class AstBuilder {
public:
    AstBuilder(const ParsedFile& src, ParsedFile& dst) : src_(src), dst_(dst) {}

    ExprId copy_expr(ExprId id, const RenameMap& renames) {
        if (id == no_expr) return no_expr;
        const Expr& e = src_.expr(id);
        Expr out = e;
        if (e.kind == ExprKind::Var) {
            auto it = renames.find(e.text);
            if (it != renames.end()) out.text = it->second;
        }
        out.lhs = copy_expr(e.lhs, renames);
        out.rhs = copy_expr(e.rhs, renames);
        out.args.clear();
        for (ExprId a : e.args) out.args.push_back(copy_expr(a, renames));
        dst_.exprs.push_back(std::move(out));
        dst_.expr_pos.push_back(src_.expr_pos[static_cast<std::size_t>(id)]);
        return static_cast<ExprId>(dst_.exprs.size() - 1);
    }

    StmtId copy_stmt(StmtId id, const RenameMap& renames) {
        const Stmt& s = src_.stmt(id);
        Stmt out = s;
        out.element_ordinal = 0;
        out.e1 = copy_expr(s.e1, renames);
        out.e2 = copy_expr(s.e2, renames);
        if (s.kind == StmtKind::Assign) {
            auto it = renames.find(s.name);
            if (it != renames.end()) out.name = it->second;
        }
        if (s.kind == StmtKind::Try) {
            out.body = copy_block(s.body, renames);
            RenameMap catch_renames = renames;
            catch_renames.erase(s.name);
            out.orelse = copy_block(s.orelse, catch_renames);
        } else {
            out.body = copy_block(s.body, renames);
            out.orelse = copy_block(s.orelse, renames);
        }
        dst_.stmts.push_back(std::move(out));
        dst_.stmt_pos.push_back(src_.stmt_pos[static_cast<std::size_t>(id)]);
        return static_cast<StmtId>(dst_.stmts.size() - 1);
    }

    std::vector<StmtId> copy_block(const std::vector<StmtId>& stmts, RenameMap renames) {
        std::vector<StmtId> out;
        for (StmtId id : stmts) {
            out.push_back(copy_stmt(id, renames));
            const Stmt& s = src_.stmt(id);
            if (s.kind == StmtKind::Let) renames.erase(s.name);
        }
        return out;
    }

    StmtId make_hook_call(HookKind which) {
        Stmt s;
        s.kind = StmtKind::HookCall;
        s.hook = which;
        dst_.stmts.push_back(std::move(s));
        dst_.stmt_pos.push_back(SrcPos{0, 0});
        return static_cast<StmtId>(dst_.stmts.size() - 1);
    }

    StmtId make_assign(std::string name, ExprId value) {
        Stmt s;
        s.kind = StmtKind::Assign;
        s.name = std::move(name);
        s.e1 = value;
        dst_.stmts.push_back(std::move(s));
        dst_.stmt_pos.push_back(SrcPos{0, 0});
        return static_cast<StmtId>(dst_.stmts.size() - 1);
    }

    ExprId make_null() {
        Expr e;
        e.kind = ExprKind::NullLit;
        dst_.exprs.push_back(std::move(e));
        dst_.expr_pos.push_back(SrcPos{0, 0});
        return static_cast<ExprId>(dst_.exprs.size() - 1);
    }

private:
    const ParsedFile& src_;
    ParsedFile& dst_;
};

bool expr_uses(const ParsedFile& f, ExprId id, const std::string& v) {
    if (id == no_expr) return false;
    const Expr& e = f.expr(id);
    if (e.kind == ExprKind::Var) return e.text == v;
    if (expr_uses(f, e.lhs, v) || expr_uses(f, e.rhs, v)) return true;
    for (ExprId a : e.args) {
        if (expr_uses(f, a, v)) return true;
    }
    return false;
}

bool stmt_uses_outward(const ParsedFile& f, StmtId id, const std::string& v);

// True when some reference to v inside the block resolves past the block,
// i.e. is not shadowed by a local let: a let of v ends the search since the
// rest of the block refers to the local.
bool block_uses_outward(const ParsedFile& f, const std::vector<StmtId>& stmts,
                        const std::string& v) {
    for (StmtId id : stmts) {
        if (stmt_uses_outward(f, id, v)) return true;
        const Stmt& s = f.stmt(id);
        if (s.kind == StmtKind::Let && s.name == v) return false;
    }
    return false;
}

bool stmt_uses_outward(const ParsedFile& f, StmtId id, const std::string& v) {
    const Stmt& s = f.stmt(id);
    switch (s.kind) {
        case StmtKind::Let: return expr_uses(f, s.e1, v);
        case StmtKind::Assign: return s.name == v || expr_uses(f, s.e1, v);
        case StmtKind::If:
        case StmtKind::While:
            return expr_uses(f, s.e1, v) || block_uses_outward(f, s.body, v) ||
                   block_uses_outward(f, s.orelse, v);
        case StmtKind::Try:
            return block_uses_outward(f, s.body, v) ||
                   (s.name != v && block_uses_outward(f, s.orelse, v));
        case StmtKind::Throw:
        case StmtKind::Return:
        case StmtKind::ExprStmt:
        case StmtKind::Assert:
        case StmtKind::Fail: return expr_uses(f, s.e1, v);
        case StmtKind::AssertEquals: return expr_uses(f, s.e1, v) || expr_uses(f, s.e2, v);
        case StmtKind::HookCall: return false;
    }
    return false;
}

std::set<std::string> collect_identifiers(const ParsedFile& f) {
    std::set<std::string> out;
    for (const Expr& e : f.exprs) {
        if (e.kind == ExprKind::Var || e.kind == ExprKind::Call) out.insert(e.text);
    }
    for (const Stmt& s : f.stmts) {
        if (!s.name.empty()) out.insert(s.name);
    }
    for (const FunctionDecl& fn : f.functions) {
        out.insert(fn.name);
        for (const auto& p : fn.params) out.insert(p);
    }
    for (const TestCase& t : f.tests) out.insert(t.name);
    for (const FileBinding& b : f.bindings) out.insert(b.name);
    return out;
}

std::string allocate_name(const std::string& base, std::set<std::string>& used) {
    std::string candidate = base;
    int suffix = 2;
    while (used.count(candidate)) {
        candidate = base + "_" + std::to_string(suffix);
        ++suffix;
    }
    used.insert(candidate);
    return candidate;
}

bool has_duplicate_top_level_lets(const ParsedFile& f, const TestCase& t) {
    std::set<std::string> seen;
    for (StmtId id : t.constituents) {
        const Stmt& s = f.stmt(id);
        if (s.kind == StmtKind::Let && !seen.insert(s.name).second) return true;
    }
    return false;
}

class FileRefactorer {
public:
    FileRefactorer(const ParsedFile& src, const SuiteResult& suite, ElementKind kind)
        : src_(src), suite_(suite), kind_(kind), builder_(src, out_) {
        out_.path = src.path;
        for (const TestCase& t : src.tests) used_tests_.insert(t.name);
        used_idents_ = collect_identifiers(src);
    }

    ParsedFile run(std::vector<TestPlan>& plans) {
        for (const DeclRef& d : src_.decl_order) {
            switch (d.kind) {
                case DeclKind::Function: copy_function(src_.functions[std::size_t(d.index)]); break;
                case DeclKind::BeforeHook:
                    out_.before_hook = builder_.copy_block(*src_.before_hook, {});
                    out_.decl_order.push_back(DeclRef{DeclKind::BeforeHook, 0});
                    break;
                case DeclKind::AfterHook:
                    out_.after_hook = builder_.copy_block(*src_.after_hook, {});
                    out_.decl_order.push_back(DeclRef{DeclKind::AfterHook, 0});
                    break;
                case DeclKind::FileBinding: {
                    const FileBinding& b = src_.bindings[std::size_t(d.index)];
                    add_binding(b.name, builder_.copy_expr(b.init, {}));
                    break;
                }
                case DeclKind::Test:
                    plans.push_back(handle_test(src_.tests[std::size_t(d.index)]));
                    break;
            }
        }
        return std::move(out_);
    }

private:
    void copy_function(const FunctionDecl& fn) {
        FunctionDecl out;
        out.name = fn.name;
        out.params = fn.params;
        out.body = builder_.copy_block(fn.body, {});
        out_.functions.push_back(std::move(out));
        out_.decl_order.push_back(
            DeclRef{DeclKind::Function, static_cast<int>(out_.functions.size() - 1)});
    }

    void add_binding(const std::string& name, ExprId init) {
        out_.bindings.push_back(FileBinding{name, init});
        out_.decl_order.push_back(
            DeclRef{DeclKind::FileBinding, static_cast<int>(out_.bindings.size() - 1)});
    }

    void copy_test(const TestCase& t) {
        TestCase out;
        out.name = t.name;
        out.origin = t.origin;
        out.constituents = builder_.copy_block(t.constituents, {});
        out_.tests.push_back(std::move(out));
        out_.decl_order.push_back(
            DeclRef{DeclKind::Test, static_cast<int>(out_.tests.size() - 1)});
    }

    const TestOutcome& outcome_of(const TestCase& t) const {
        for (const TestResult& r : suite_.results) {
            if (r.file == src_.path && r.test == t.name) return r.outcome;
        }
        throw std::logic_error("no suite result for test '" + t.name + "'");
    }

    TestPlan handle_test(const TestCase& t) {
        TestPlan plan;
        plan.file = src_.path;
        plan.test = t.name;
        const int n = static_cast<int>(t.constituents.size());

        if (outcome_of(t).status == TestStatus::BudgetExceeded) {
            plan.action = "kept-budget-exceeded";
            copy_test(t);
            return plan;
        }

        SignatureTable table = signature_table(suite_.trace, src_, t, kind_);
        plan.cuts = compute_cuts(n, table);
        if (n == 0 || plan.cuts.size() <= 1) {
            plan.action = "kept";
            plan.ranges = fragment_ranges(n, plan.cuts, table);
            copy_test(t);
            return plan;
        }
        if (t.origin || has_duplicate_top_level_lets(src_, t)) {
            plan.action = "kept-unsupported";
            copy_test(t);
            return plan;
        }

        plan.action = "split";
        plan.ranges = fragment_ranges(n, plan.cuts, table);
        split_test(t, plan);
        return plan;
    }

    void split_test(const TestCase& t, TestPlan& plan) {
        const int n = static_cast<int>(t.constituents.size());
        const auto& ranges = plan.ranges;

        // Which fragment each constituent lands in.
        std::vector<int> frag_of(static_cast<std::size_t>(n) + 1, 0);
        for (std::size_t r = 0; r < ranges.size(); ++r) {
            for (int i = ranges[r].first; i <= ranges[r].last; ++i) {
                frag_of[static_cast<std::size_t>(i)] = static_cast<int>(r);
            }
        }

        // Top-level lets referenced from a later fragment get hoisted to file
        // scope; everything else stays local to its fragment.
        std::map<int, HoistedVar> hoist_at;  // keyed by 1-based constituent
        for (int i = 1; i <= n; ++i) {
            const Stmt& s = src_.stmt(t.constituents[static_cast<std::size_t>(i - 1)]);
            if (s.kind != StmtKind::Let) continue;
            bool crosses = false;
            for (int j = i + 1; j <= n && !crosses; ++j) {
                if (frag_of[static_cast<std::size_t>(j)] == frag_of[static_cast<std::size_t>(i)]) {
                    continue;
                }
                crosses = stmt_uses_outward(src_, t.constituents[static_cast<std::size_t>(j - 1)],
                                            s.name);
            }
            if (crosses) {
                HoistedVar hv;
                hv.variable = s.name;
                hv.binding = allocate_name(t.name + "__" + s.name, used_idents_);
                hv.constituent = i;
                hoist_at.emplace(i, hv);
                plan.hoisted.push_back(hv);
            }
        }

        // Null-initialized bindings go right before the fragments.
        for (const auto& [pos, hv] : hoist_at) {
            add_binding(hv.binding, builder_.make_null());
        }

        for (std::size_t r = 0; r < ranges.size(); ++r) {
            plan.fragment_names.push_back(allocate_name(
                t.name + "_fragment_" + std::to_string(r + 1), used_tests_));
        }

        RenameMap active;
        for (std::size_t r = 0; r < ranges.size(); ++r) {
            TestCase frag;
            frag.name = plan.fragment_names[r];
            frag.origin = OriginMeta{t.name, static_cast<int>(r + 1)};
            if (r == 0 && src_.before_hook) {
                frag.constituents.push_back(builder_.make_hook_call(HookKind::Before));
            }
            for (int i = ranges[r].first; i <= ranges[r].last; ++i) {
                StmtId cid = t.constituents[static_cast<std::size_t>(i - 1)];
                const Stmt& s = src_.stmt(cid);
                auto hoist = hoist_at.find(i);
                if (s.kind == StmtKind::Let && hoist != hoist_at.end()) {
                    ExprId init = builder_.copy_expr(s.e1, active);
                    frag.constituents.push_back(
                        builder_.make_assign(hoist->second.binding, init));
                    active[s.name] = hoist->second.binding;
                } else {
                    frag.constituents.push_back(builder_.copy_stmt(cid, active));
                    if (s.kind == StmtKind::Let) active.erase(s.name);
                }
            }
            if (r + 1 == ranges.size() && src_.after_hook) {
                frag.constituents.push_back(builder_.make_hook_call(HookKind::After));
            }
            out_.tests.push_back(std::move(frag));
            out_.decl_order.push_back(
                DeclRef{DeclKind::Test, static_cast<int>(out_.tests.size() - 1)});
        }
    }

    const ParsedFile& src_;
    const SuiteResult& suite_;
    ElementKind kind_;
    ParsedFile out_;
    AstBuilder builder_;
    std::set<std::string> used_tests_;
    std::set<std::string> used_idents_;
};

}  // namespace

RefactorPlan refactor_suite(const std::vector<ParsedFile>& files, ElementKind kind,
                            std::int64_t budget) {
    RefactorPlan plan;
    plan.kind = kind;
    ElementFilter filter = kind == ElementKind::If ? ElementFilter::If : ElementFilter::Try;
    SuiteResult suite = run_suite(files, filter, budget);
    for (const ParsedFile& f : files) {
        FileRefactorer refactorer(f, suite, kind);
        ParsedFile out = refactorer.run(plan.tests);
        plan.files.push_back(OutputFile{f.path, serialize_file(out)});
    }
    return plan;
}

std::vector<ParsedFile> parse_plan_output(const RefactorPlan& plan) {
    std::vector<ParsedFile> out;
    out.reserve(plan.files.size());
    for (const OutputFile& f : plan.files) {
        out.push_back(parse_file(f.content, f.path));
    }
    return out;
}

}  // namespace purify
