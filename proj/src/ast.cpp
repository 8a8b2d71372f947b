#include "purify/ast.hpp"

namespace purify {

const FunctionDecl* ParsedFile::find_function(const std::string& name) const {
    for (const auto& f : functions) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

const TestCase* ParsedFile::find_test(const std::string& name) const {
    for (const auto& t : tests) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

ElementId make_element_id(const ParsedFile& file, const ElementInfo& info) {
    return ElementId{info.kind, file.path, info.function, info.ordinal};
}

std::vector<ElementId> element_ids(const ParsedFile& file, ElementKind kind) {
    std::vector<ElementId> out;
    for (const auto& info : file.elements) {
        if (info.kind == kind) out.push_back(make_element_id(file, info));
    }
    return out;
}

bool expr_equal(const ParsedFile& fa, ExprId a, const ParsedFile& fb, ExprId b) {
    if (a == no_expr || b == no_expr) return a == b;
    const Expr& ea = fa.expr(a);
    const Expr& eb = fb.expr(b);
    if (ea.kind != eb.kind) return false;
    switch (ea.kind) {
        case ExprKind::IntLit:
            return ea.int_val == eb.int_val;
        case ExprKind::BoolLit:
            return ea.bool_val == eb.bool_val;
        case ExprKind::NullLit:
            return true;
        case ExprKind::StrLit:
        case ExprKind::Var:
            return ea.text == eb.text;
        case ExprKind::Call: {
            if (ea.text != eb.text || ea.args.size() != eb.args.size()) return false;
            for (std::size_t i = 0; i < ea.args.size(); ++i) {
                if (!expr_equal(fa, ea.args[i], fb, eb.args[i])) return false;
            }
            return true;
        }
        case ExprKind::Binary:
            return ea.bop == eb.bop && expr_equal(fa, ea.lhs, fb, eb.lhs) &&
                   expr_equal(fa, ea.rhs, fb, eb.rhs);
        case ExprKind::Unary:
            return ea.uop == eb.uop && expr_equal(fa, ea.lhs, fb, eb.lhs);
    }
    return false;
}

namespace {

bool block_equal(const ParsedFile& fa, const std::vector<StmtId>& a, const ParsedFile& fb,
                 const std::vector<StmtId>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!stmt_equal(fa, a[i], fb, b[i])) return false;
    }
    return true;
}

}  // namespace

bool stmt_equal(const ParsedFile& fa, StmtId a, const ParsedFile& fb, StmtId b) {
    const Stmt& sa = fa.stmt(a);
    const Stmt& sb = fb.stmt(b);
    if (sa.kind != sb.kind) return false;
    if (sa.name != sb.name) return false;
    if (sa.kind == StmtKind::HookCall && sa.hook != sb.hook) return false;
    if (!expr_equal(fa, sa.e1, fb, sb.e1)) return false;
    if (!expr_equal(fa, sa.e2, fb, sb.e2)) return false;
    return block_equal(fa, sa.body, fb, sb.body) && block_equal(fa, sa.orelse, fb, sb.orelse);
}

bool ast_equal(const ParsedFile& a, const ParsedFile& b) {
    if (a.decl_order.size() != b.decl_order.size()) return false;
    for (std::size_t i = 0; i < a.decl_order.size(); ++i) {
        const DeclRef& da = a.decl_order[i];
        const DeclRef& db = b.decl_order[i];
        if (da.kind != db.kind) return false;
        switch (da.kind) {
            case DeclKind::Function: {
                const FunctionDecl& x = a.functions[static_cast<std::size_t>(da.index)];
                const FunctionDecl& y = b.functions[static_cast<std::size_t>(db.index)];
                if (x.name != y.name || x.params != y.params) return false;
                if (!block_equal(a, x.body, b, y.body)) return false;
                break;
            }
            case DeclKind::Test: {
                const TestCase& x = a.tests[static_cast<std::size_t>(da.index)];
                const TestCase& y = b.tests[static_cast<std::size_t>(db.index)];
                if (x.name != y.name) return false;
                if (x.origin.has_value() != y.origin.has_value()) return false;
                if (x.origin &&
                    (x.origin->origin != y.origin->origin || x.origin->order != y.origin->order)) {
                    return false;
                }
                if (!block_equal(a, x.constituents, b, y.constituents)) return false;
                break;
            }
            case DeclKind::BeforeHook:
                if (!block_equal(a, *a.before_hook, b, *b.before_hook)) return false;
                break;
            case DeclKind::AfterHook:
                if (!block_equal(a, *a.after_hook, b, *b.after_hook)) return false;
                break;
            case DeclKind::FileBinding: {
                const FileBinding& x = a.bindings[static_cast<std::size_t>(da.index)];
                const FileBinding& y = b.bindings[static_cast<std::size_t>(db.index)];
                if (x.name != y.name || !expr_equal(a, x.init, b, y.init)) return false;
                break;
            }
        }
    }
    return true;
}

}  // namespace purify
