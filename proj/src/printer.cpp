#include "purify/printer.hpp"

namespace purify {

namespace {

int prec_of(const Expr& e) {
    if (e.kind == ExprKind::Unary) return 7;
    if (e.kind != ExprKind::Binary) return 8;
    switch (e.bop) {
        case BinOp::Or: return 1;
        case BinOp::And: return 2;
        case BinOp::Eq:
        case BinOp::Ne: return 3;
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge: return 4;
        case BinOp::Add:
        case BinOp::Sub: return 5;
        case BinOp::Mul:
        case BinOp::Div:
        case BinOp::Mod: return 6;
    }
    return 8;
}

const char* bop_text(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::Mod: return "%";
        case BinOp::Eq: return "==";
        case BinOp::Ne: return "!=";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::And: return "&&";
        case BinOp::Or: return "||";
    }
    return "?";
}

std::string quote_string(const std::string& raw) {
    std::string out = "\"";
    for (char c : raw) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

class Printer {
public:
    explicit Printer(const ParsedFile& f) : f_(f) {}

    std::string file() {
        std::string out;
        bool first = true;
        for (const DeclRef& d : f_.decl_order) {
            if (!first) out += "\n";
            first = false;
            switch (d.kind) {
                case DeclKind::Function: out += function(f_.functions[std::size_t(d.index)]); break;
                case DeclKind::Test: out += test(f_.tests[std::size_t(d.index)]); break;
                case DeclKind::BeforeHook: out += hook("before", *f_.before_hook); break;
                case DeclKind::AfterHook: out += hook("after", *f_.after_hook); break;
                case DeclKind::FileBinding: {
                    const FileBinding& b = f_.bindings[std::size_t(d.index)];
                    out += "let " + b.name + " = " + expr(b.init) + ";\n";
                    break;
                }
            }
        }
        return out;
    }

    std::string expr(ExprId id) const {
        const Expr& e = f_.expr(id);
        switch (e.kind) {
            case ExprKind::IntLit: return std::to_string(e.int_val);
            case ExprKind::BoolLit: return e.bool_val ? "true" : "false";
            case ExprKind::StrLit: return quote_string(e.text);
            case ExprKind::NullLit: return "null";
            case ExprKind::Var: return e.text;
            case ExprKind::Call: {
                std::string out = e.text + "(";
                for (std::size_t i = 0; i < e.args.size(); ++i) {
                    if (i) out += ", ";
                    out += expr(e.args[i]);
                }
                return out + ")";
            }
            case ExprKind::Unary: {
                std::string operand = expr(e.lhs);
                if (prec_of(f_.expr(e.lhs)) < 8) operand = "(" + operand + ")";
                return (e.uop == UnOp::Not ? "!" : "-") + operand;
            }
            case ExprKind::Binary: {
                int my = prec_of(e);
                std::string l = expr(e.lhs);
                if (prec_of(f_.expr(e.lhs)) < my) l = "(" + l + ")";
                std::string r = expr(e.rhs);
                if (prec_of(f_.expr(e.rhs)) <= my) r = "(" + r + ")";
                return l + " " + bop_text(e.bop) + " " + r;
            }
        }
        return "?";
    }

    std::string stmt(StmtId id, int indent) const {
        const Stmt& s = f_.stmt(id);
        std::string pad(std::size_t(indent) * 4, ' ');
        switch (s.kind) {
            case StmtKind::Let: return pad + "let " + s.name + " = " + expr(s.e1) + ";\n";
            case StmtKind::Assign: return pad + s.name + " = " + expr(s.e1) + ";\n";
            case StmtKind::If: {
                std::string out = pad + "if (" + expr(s.e1) + ") {\n";
                out += block(s.body, indent + 1);
                out += pad + "}";
                const std::vector<StmtId>* orelse = &s.orelse;
                // else-if chains stay on one line
                while (orelse->size() == 1 &&
                       f_.stmt(orelse->front()).kind == StmtKind::If) {
                    const Stmt& nested = f_.stmt(orelse->front());
                    out += " else if (" + expr(nested.e1) + ") {\n";
                    out += block(nested.body, indent + 1);
                    out += pad + "}";
                    orelse = &nested.orelse;
                }
                if (!orelse->empty()) {
                    out += " else {\n";
                    out += block(*orelse, indent + 1);
                    out += pad + "}";
                }
                out += "\n";
                return out;
            }
            case StmtKind::While: {
                std::string out = pad + "while (" + expr(s.e1) + ") {\n";
                out += block(s.body, indent + 1);
                out += pad + "}\n";
                return out;
            }
            case StmtKind::Try: {
                std::string out = pad + "try {\n";
                out += block(s.body, indent + 1);
                out += pad + "} catch (" + s.name + ") {\n";
                out += block(s.orelse, indent + 1);
                out += pad + "}\n";
                return out;
            }
            case StmtKind::Throw: return pad + "throw " + expr(s.e1) + ";\n";
            case StmtKind::Return:
                return s.e1 == no_expr ? pad + "return;\n" : pad + "return " + expr(s.e1) + ";\n";
            case StmtKind::ExprStmt: return pad + expr(s.e1) + ";\n";
            case StmtKind::Assert: return pad + "assert(" + expr(s.e1) + ");\n";
            case StmtKind::AssertEquals:
                return pad + "assertEquals(" + expr(s.e1) + ", " + expr(s.e2) + ");\n";
            case StmtKind::Fail: return pad + "fail(" + expr(s.e1) + ");\n";
            case StmtKind::HookCall:
                return pad + (s.hook == HookKind::Before ? "before();\n" : "after();\n");
        }
        return pad + "?\n";
    }

private:
    std::string block(const std::vector<StmtId>& stmts, int indent) const {
        std::string out;
        for (StmtId id : stmts) out += stmt(id, indent);
        return out;
    }

    std::string hook(const char* keyword, const std::vector<StmtId>& body) const {
        return std::string(keyword) + " {\n" + block(body, 1) + "}\n";
    }

    std::string function(const FunctionDecl& fn) const {
        std::string out = "fn " + fn.name + "(";
        for (std::size_t i = 0; i < fn.params.size(); ++i) {
            if (i) out += ", ";
            out += fn.params[i];
        }
        out += ") {\n" + block(fn.body, 1) + "}\n";
        return out;
    }

    std::string test(const TestCase& t) const {
        std::string out;
        if (t.origin) {
            out += "//@fragment origin=" + t.origin->origin +
                   " order=" + std::to_string(t.origin->order) + "\n";
        }
        out += "test " + t.name + " {\n" + block(t.constituents, 1) + "}\n";
        return out;
    }

    const ParsedFile& f_;
};

}  // namespace

std::string serialize_file(const ParsedFile& file) { return Printer(file).file(); }

std::string serialize_expr(const ParsedFile& file, ExprId id) { return Printer(file).expr(id); }

std::string serialize_stmt(const ParsedFile& file, StmtId id, int indent) {
    return Printer(file).stmt(id, indent);
}

}  // namespace purify
