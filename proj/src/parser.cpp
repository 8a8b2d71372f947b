#include "purify/parser.hpp"

#include <map>
#include <set>

#include "purify/lexer.hpp"

namespace purify {

namespace {

class Parser {
public:
    Parser(std::vector<Token> toks, std::string path) : toks_(std::move(toks)) {
        file_.path = std::move(path);
    }

    ParsedFile run() {
        while (!at(TokKind::Eof)) {
            parse_decl();
        }
        validate_fragment_groups();
        assign_elements();
        return std::move(file_);
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& next() const { return toks_[pos_ + 1 < toks_.size() ? pos_ + 1 : pos_]; }
    bool at(TokKind k) const { return cur().kind == k; }

    Token eat(TokKind k) {
        if (!at(k)) {
            throw ParseError(std::string("expected ") + token_name(k) + " but found " +
                                 token_name(cur().kind),
                             cur().line, cur().col);
        }
        Token t = cur();
        ++pos_;
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, cur().line, cur().col);
    }

    ExprId add_expr(Expr e, const Token& t) {
        file_.exprs.push_back(std::move(e));
        file_.expr_pos.push_back(SrcPos{t.line, t.col});
        return static_cast<ExprId>(file_.exprs.size() - 1);
    }

    StmtId add_stmt(Stmt s, const Token& t) {
        file_.stmts.push_back(std::move(s));
        file_.stmt_pos.push_back(SrcPos{t.line, t.col});
        return static_cast<StmtId>(file_.stmts.size() - 1);
    }

    void parse_decl() {
        switch (cur().kind) {
            case TokKind::KwFn: parse_function(); return;
            case TokKind::KwTest: parse_test(std::nullopt); return;
            case TokKind::FragmentMeta: {
                Token meta = eat(TokKind::FragmentMeta);
                if (!at(TokKind::KwTest)) {
                    throw ParseError("fragment annotation must immediately precede a test",
                                     meta.line, meta.col);
                }
                if (meta.int_val < 1) {
                    throw ParseError("fragment order must be positive", meta.line, meta.col);
                }
                parse_test(OriginMeta{meta.text, static_cast<int>(meta.int_val)});
                return;
            }
            case TokKind::KwBefore:
            case TokKind::KwAfter: parse_hook(); return;
            case TokKind::KwLet: parse_file_binding(); return;
            default:
                fail(std::string("expected a declaration but found ") + token_name(cur().kind));
        }
    }

    void parse_function() {
        eat(TokKind::KwFn);
        Token name = eat(TokKind::Ident);
        if (file_.find_function(name.text)) {
            throw ParseError("duplicate function '" + name.text + "'", name.line, name.col);
        }
        FunctionDecl fn;
        fn.name = name.text;
        eat(TokKind::LParen);
        if (!at(TokKind::RParen)) {
            for (;;) {
                Token p = eat(TokKind::Ident);
                for (const auto& existing : fn.params) {
                    if (existing == p.text) {
                        throw ParseError("duplicate parameter '" + p.text + "'", p.line, p.col);
                    }
                }
                fn.params.push_back(p.text);
                if (!at(TokKind::Comma)) break;
                eat(TokKind::Comma);
            }
        }
        eat(TokKind::RParen);
        fn.body = parse_block(/*allow_return=*/true);
        file_.functions.push_back(std::move(fn));
        file_.decl_order.push_back(
            DeclRef{DeclKind::Function, static_cast<int>(file_.functions.size() - 1)});
    }

    void parse_test(std::optional<OriginMeta> origin) {
        eat(TokKind::KwTest);
        Token name = eat(TokKind::Ident);
        if (file_.find_test(name.text)) {
            throw ParseError("duplicate test '" + name.text + "'", name.line, name.col);
        }
        TestCase t;
        t.name = name.text;
        t.origin = std::move(origin);
        t.constituents = parse_block(/*allow_return=*/false);
        file_.tests.push_back(std::move(t));
        file_.decl_order.push_back(
            DeclRef{DeclKind::Test, static_cast<int>(file_.tests.size() - 1)});
    }

    void parse_hook() {
        Token kw = cur();
        bool is_before = at(TokKind::KwBefore);
        ++pos_;
        if (is_before) {
            if (file_.before_hook) {
                throw ParseError("duplicate before hook", kw.line, kw.col);
            }
            file_.before_hook = parse_block(/*allow_return=*/false);
            file_.decl_order.push_back(DeclRef{DeclKind::BeforeHook, 0});
        } else {
            if (file_.after_hook) {
                throw ParseError("duplicate after hook", kw.line, kw.col);
            }
            file_.after_hook = parse_block(/*allow_return=*/false);
            file_.decl_order.push_back(DeclRef{DeclKind::AfterHook, 0});
        }
    }

    void parse_file_binding() {
        eat(TokKind::KwLet);
        Token name = eat(TokKind::Ident);
        for (const auto& b : file_.bindings) {
            if (b.name == name.text) {
                throw ParseError("duplicate file-scope binding '" + name.text + "'", name.line,
                                 name.col);
            }
        }
        eat(TokKind::Assign);
        ExprId init = parse_expr();
        eat(TokKind::Semi);
        file_.bindings.push_back(FileBinding{name.text, init});
        file_.decl_order.push_back(
            DeclRef{DeclKind::FileBinding, static_cast<int>(file_.bindings.size() - 1)});
    }

    std::vector<StmtId> parse_block(bool allow_return) {
        eat(TokKind::LBrace);
        std::vector<StmtId> stmts;
        while (!at(TokKind::RBrace)) {
            stmts.push_back(parse_stmt(allow_return));
        }
        eat(TokKind::RBrace);
        return stmts;
    }

    StmtId parse_stmt(bool allow_return) {
        Token t = cur();
        switch (t.kind) {
            case TokKind::KwLet: {
                eat(TokKind::KwLet);
                Token name = eat(TokKind::Ident);
                eat(TokKind::Assign);
                Stmt s;
                s.kind = StmtKind::Let;
                s.name = name.text;
                s.e1 = parse_expr();
                eat(TokKind::Semi);
                return add_stmt(std::move(s), t);
            }
            case TokKind::KwIf: return parse_if(allow_return, t);
            case TokKind::KwWhile: {
                eat(TokKind::KwWhile);
                eat(TokKind::LParen);
                Stmt s;
                s.kind = StmtKind::While;
                s.e1 = parse_expr();
                eat(TokKind::RParen);
                s.body = parse_block(allow_return);
                return add_stmt(std::move(s), t);
            }
            case TokKind::KwTry: {
                eat(TokKind::KwTry);
                Stmt s;
                s.kind = StmtKind::Try;
                s.body = parse_block(allow_return);
                eat(TokKind::KwCatch);
                eat(TokKind::LParen);
                Token var = eat(TokKind::Ident);
                eat(TokKind::RParen);
                s.name = var.text;
                s.orelse = parse_block(allow_return);
                return add_stmt(std::move(s), t);
            }
            case TokKind::KwThrow: {
                eat(TokKind::KwThrow);
                Stmt s;
                s.kind = StmtKind::Throw;
                s.e1 = parse_expr();
                eat(TokKind::Semi);
                return add_stmt(std::move(s), t);
            }
            case TokKind::KwReturn: {
                if (!allow_return) {
                    throw ParseError("'return' is only allowed inside function bodies", t.line,
                                     t.col);
                }
                eat(TokKind::KwReturn);
                Stmt s;
                s.kind = StmtKind::Return;
                if (!at(TokKind::Semi)) s.e1 = parse_expr();
                eat(TokKind::Semi);
                return add_stmt(std::move(s), t);
            }
            case TokKind::KwAssert: {
                eat(TokKind::KwAssert);
                eat(TokKind::LParen);
                Stmt s;
                s.kind = StmtKind::Assert;
                s.e1 = parse_expr();
                eat(TokKind::RParen);
                eat(TokKind::Semi);
                return add_stmt(std::move(s), t);
            }
            case TokKind::KwAssertEquals: {
                eat(TokKind::KwAssertEquals);
                eat(TokKind::LParen);
                Stmt s;
                s.kind = StmtKind::AssertEquals;
                s.e1 = parse_expr();
                eat(TokKind::Comma);
                s.e2 = parse_expr();
                eat(TokKind::RParen);
                eat(TokKind::Semi);
                return add_stmt(std::move(s), t);
            }
            case TokKind::KwFail: {
                eat(TokKind::KwFail);
                eat(TokKind::LParen);
                Stmt s;
                s.kind = StmtKind::Fail;
                s.e1 = parse_expr();
                eat(TokKind::RParen);
                eat(TokKind::Semi);
                return add_stmt(std::move(s), t);
            }
            case TokKind::KwBefore:
            case TokKind::KwAfter: {
                bool is_before = t.kind == TokKind::KwBefore;
                ++pos_;
                eat(TokKind::LParen);
                eat(TokKind::RParen);
                eat(TokKind::Semi);
                Stmt s;
                s.kind = StmtKind::HookCall;
                s.hook = is_before ? HookKind::Before : HookKind::After;
                return add_stmt(std::move(s), t);
            }
            case TokKind::Ident: {
                if (next().kind == TokKind::Assign) {
                    Token name = eat(TokKind::Ident);
                    eat(TokKind::Assign);
                    Stmt s;
                    s.kind = StmtKind::Assign;
                    s.name = name.text;
                    s.e1 = parse_expr();
                    eat(TokKind::Semi);
                    return add_stmt(std::move(s), t);
                }
                Stmt s;
                s.kind = StmtKind::ExprStmt;
                s.e1 = parse_expr();
                eat(TokKind::Semi);
                return add_stmt(std::move(s), t);
            }
            default: {
                Stmt s;
                s.kind = StmtKind::ExprStmt;
                s.e1 = parse_expr();
                eat(TokKind::Semi);
                return add_stmt(std::move(s), t);
            }
        }
    }

    StmtId parse_if(bool allow_return, const Token& t) {
        eat(TokKind::KwIf);
        eat(TokKind::LParen);
        Stmt s;
        s.kind = StmtKind::If;
        s.e1 = parse_expr();
        eat(TokKind::RParen);
        s.body = parse_block(allow_return);
        if (at(TokKind::KwElse)) {
            eat(TokKind::KwElse);
            if (at(TokKind::KwIf)) {
                Token t2 = cur();
                s.orelse.push_back(parse_if(allow_return, t2));
            } else {
                s.orelse = parse_block(allow_return);
            }
        }
        return add_stmt(std::move(s), t);
    }

    ExprId parse_expr() { return parse_or(); }

    ExprId parse_or() {
        ExprId lhs = parse_and();
        while (at(TokKind::OrOr)) {
            Token t = eat(TokKind::OrOr);
            ExprId rhs = parse_and();
            Expr e;
            e.kind = ExprKind::Binary;
            e.bop = BinOp::Or;
            e.lhs = lhs;
            e.rhs = rhs;
            lhs = add_expr(std::move(e), t);
        }
        return lhs;
    }

    ExprId parse_and() {
        ExprId lhs = parse_eq();
        while (at(TokKind::AndAnd)) {
            Token t = eat(TokKind::AndAnd);
            ExprId rhs = parse_eq();
            Expr e;
            e.kind = ExprKind::Binary;
            e.bop = BinOp::And;
            e.lhs = lhs;
            e.rhs = rhs;
            lhs = add_expr(std::move(e), t);
        }
        return lhs;
    }

    ExprId parse_eq() {
        ExprId lhs = parse_rel();
        while (at(TokKind::EqEq) || at(TokKind::NotEq)) {
            Token t = cur();
            ++pos_;
            ExprId rhs = parse_rel();
            Expr e;
            e.kind = ExprKind::Binary;
            e.bop = t.kind == TokKind::EqEq ? BinOp::Eq : BinOp::Ne;
            e.lhs = lhs;
            e.rhs = rhs;
            lhs = add_expr(std::move(e), t);
        }
        return lhs;
    }

    ExprId parse_rel() {
        ExprId lhs = parse_add();
        while (at(TokKind::Lt) || at(TokKind::Le) || at(TokKind::Gt) || at(TokKind::Ge)) {
            Token t = cur();
            ++pos_;
            ExprId rhs = parse_add();
            Expr e;
            e.kind = ExprKind::Binary;
            switch (t.kind) {
                case TokKind::Lt: e.bop = BinOp::Lt; break;
                case TokKind::Le: e.bop = BinOp::Le; break;
                case TokKind::Gt: e.bop = BinOp::Gt; break;
                default: e.bop = BinOp::Ge; break;
            }
            e.lhs = lhs;
            e.rhs = rhs;
            lhs = add_expr(std::move(e), t);
        }
        return lhs;
    }

    ExprId parse_add() {
        ExprId lhs = parse_mul();
        while (at(TokKind::Plus) || at(TokKind::Minus)) {
            Token t = cur();
            ++pos_;
            ExprId rhs = parse_mul();
            Expr e;
            e.kind = ExprKind::Binary;
            e.bop = t.kind == TokKind::Plus ? BinOp::Add : BinOp::Sub;
            e.lhs = lhs;
            e.rhs = rhs;
            lhs = add_expr(std::move(e), t);
        }
        return lhs;
    }

    ExprId parse_mul() {
        ExprId lhs = parse_unary();
        while (at(TokKind::Star) || at(TokKind::Slash) || at(TokKind::Percent)) {
            Token t = cur();
            ++pos_;
            ExprId rhs = parse_unary();
            Expr e;
            e.kind = ExprKind::Binary;
            e.bop = t.kind == TokKind::Star    ? BinOp::Mul
                    : t.kind == TokKind::Slash ? BinOp::Div
                                               : BinOp::Mod;
            e.lhs = lhs;
            e.rhs = rhs;
            lhs = add_expr(std::move(e), t);
        }
        return lhs;
    }

    ExprId parse_unary() {
        if (at(TokKind::Bang) || at(TokKind::Minus)) {
            Token t = cur();
            ++pos_;
            ExprId operand = parse_unary();
            Expr e;
            e.kind = ExprKind::Unary;
            e.uop = t.kind == TokKind::Bang ? UnOp::Not : UnOp::Neg;
            e.lhs = operand;
            return add_expr(std::move(e), t);
        }
        return parse_primary();
    }

    ExprId parse_primary() {
        Token t = cur();
        switch (t.kind) {
            case TokKind::Int: {
                ++pos_;
                Expr e;
                e.kind = ExprKind::IntLit;
                e.int_val = t.int_val;
                return add_expr(std::move(e), t);
            }
            case TokKind::Str: {
                ++pos_;
                Expr e;
                e.kind = ExprKind::StrLit;
                e.text = t.text;
                return add_expr(std::move(e), t);
            }
            case TokKind::KwTrue:
            case TokKind::KwFalse: {
                ++pos_;
                Expr e;
                e.kind = ExprKind::BoolLit;
                e.bool_val = t.kind == TokKind::KwTrue;
                return add_expr(std::move(e), t);
            }
            case TokKind::KwNull: {
                ++pos_;
                Expr e;
                e.kind = ExprKind::NullLit;
                return add_expr(std::move(e), t);
            }
            case TokKind::LParen: {
                eat(TokKind::LParen);
                ExprId inner = parse_expr();
                eat(TokKind::RParen);
                return inner;
            }
            case TokKind::Ident: {
                ++pos_;
                if (at(TokKind::LParen)) {
                    eat(TokKind::LParen);
                    Expr e;
                    e.kind = ExprKind::Call;
                    e.text = t.text;
                    if (!at(TokKind::RParen)) {
                        for (;;) {
                            e.args.push_back(parse_expr());
                            if (!at(TokKind::Comma)) break;
                            eat(TokKind::Comma);
                        }
                    }
                    eat(TokKind::RParen);
                    return add_expr(std::move(e), t);
                }
                Expr e;
                e.kind = ExprKind::Var;
                e.text = t.text;
                return add_expr(std::move(e), t);
            }
            default:
                fail(std::string("expected an expression but found ") + token_name(t.kind));
        }
    }

    // Fragments of one origin must be contiguous, in order, and numbered 1..m.
    void validate_fragment_groups() {
        std::set<std::string> finished;
        for (std::size_t i = 0; i < file_.tests.size();) {
            if (!file_.tests[i].origin) {
                ++i;
                continue;
            }
            const std::string& origin = file_.tests[i].origin->origin;
            if (finished.count(origin)) {
                throw ParseError("fragments of origin '" + origin + "' are not contiguous", 0, 0);
            }
            int expected = 1;
            std::size_t j = i;
            while (j < file_.tests.size() && file_.tests[j].origin &&
                   file_.tests[j].origin->origin == origin) {
                if (file_.tests[j].origin->order != expected) {
                    throw ParseError("fragment orders for origin '" + origin +
                                         "' must be 1..m in declaration order",
                                     0, 0);
                }
                ++expected;
                ++j;
            }
            finished.insert(origin);
            i = j;
        }
    }

    void assign_elements() {
        for (auto& fn : file_.functions) {
            int if_count = 0;
            int try_count = 0;
            assign_in_block(fn.body, fn.name, if_count, try_count);
        }
    }

    void assign_in_block(const std::vector<StmtId>& block, const std::string& function,
                         int& if_count, int& try_count) {
        for (StmtId id : block) {
            Stmt& s = file_.stmts[static_cast<std::size_t>(id)];
            switch (s.kind) {
                case StmtKind::If:
                    s.element_ordinal = ++if_count;
                    file_.elements.push_back(
                        ElementInfo{ElementKind::If, function, s.element_ordinal, id});
                    assign_in_block(s.body, function, if_count, try_count);
                    assign_in_block(s.orelse, function, if_count, try_count);
                    break;
                case StmtKind::Try:
                    s.element_ordinal = ++try_count;
                    file_.elements.push_back(
                        ElementInfo{ElementKind::Try, function, s.element_ordinal, id});
                    assign_in_block(s.body, function, if_count, try_count);
                    assign_in_block(s.orelse, function, if_count, try_count);
                    break;
                case StmtKind::While:
                    assign_in_block(s.body, function, if_count, try_count);
                    break;
                default: break;
            }
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_{0};
    ParsedFile file_;
};

}  // namespace

ParsedFile parse_file(const std::string& source, const std::string& path) {
    return Parser(lex(source), path).run();
}

}  // namespace purify
