#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace purify {

// Indices into the per-file node pools. Children are referenced by id so the
// whole AST is value-semantic: copying a ParsedFile clones the tree.
using ExprId = std::int32_t;
using StmtId = std::int32_t;
inline constexpr ExprId no_expr = -1;

enum class ExprKind { IntLit, BoolLit, StrLit, NullLit, Var, Call, Binary, Unary };

enum class BinOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp { Not, Neg };

struct Expr {
    ExprKind kind{ExprKind::NullLit};
    std::int64_t int_val{0};
    bool bool_val{false};
    std::string text;  // string literal value, variable name, or callee name
    BinOp bop{BinOp::Add};
    UnOp uop{UnOp::Not};
    ExprId lhs{no_expr};
    ExprId rhs{no_expr};
    std::vector<ExprId> args;
};

enum class StmtKind {
    Let,
    Assign,
    If,
    While,
    Try,
    Throw,
    Return,
    ExprStmt,
    Assert,
    AssertEquals,
    Fail,
    HookCall,
};

enum class HookKind { Before, After };

enum class ElementKind { If, Try };

struct Stmt {
    StmtKind kind{StmtKind::ExprStmt};
    std::string name;             // let/assign target or catch binding
    ExprId e1{no_expr};           // condition, value, or first argument
    ExprId e2{no_expr};           // second argument of assertEquals
    std::vector<StmtId> body;     // then branch, loop body, or try body
    std::vector<StmtId> orelse;   // else branch or catch body
    HookKind hook{HookKind::Before};
    int element_ordinal{0};       // >0 when this if/try is a tracked element
};

struct SrcPos {
    int line{0};
    int col{0};
};

struct FunctionDecl {
    std::string name;
    std::vector<std::string> params;
    std::vector<StmtId> body;
};

struct OriginMeta {
    std::string origin;
    int order{0};
};

struct TestCase {
    std::string name;
    std::vector<StmtId> constituents;
    std::optional<OriginMeta> origin;
};

struct FileBinding {
    std::string name;
    ExprId init{no_expr};
};

enum class DeclKind { Function, Test, BeforeHook, AfterHook, FileBinding };

struct DeclRef {
    DeclKind kind{DeclKind::Function};
    int index{0};  // into the matching ParsedFile vector; 0 for hooks
};

struct ElementId {
    ElementKind kind{ElementKind::If};
    std::string file;
    std::string function;
    int ordinal{0};

    auto operator<=>(const ElementId&) const = default;
    bool operator==(const ElementId&) const = default;
};

struct ElementInfo {
    ElementKind kind{ElementKind::If};
    std::string function;
    int ordinal{0};
    StmtId stmt{-1};
};

struct ParsedFile {
    std::string path;  // corpus-relative identifier, also used in ElementIds

    std::vector<Expr> exprs;
    std::vector<Stmt> stmts;
    std::vector<SrcPos> expr_pos;
    std::vector<SrcPos> stmt_pos;

    std::vector<FunctionDecl> functions;
    std::vector<TestCase> tests;
    std::vector<FileBinding> bindings;
    std::optional<std::vector<StmtId>> before_hook;
    std::optional<std::vector<StmtId>> after_hook;
    std::vector<DeclRef> decl_order;

    // every if/try in a function body, in (function, source-order) order
    std::vector<ElementInfo> elements;

    const FunctionDecl* find_function(const std::string& name) const;
    const TestCase* find_test(const std::string& name) const;

    const Expr& expr(ExprId id) const { return exprs.at(static_cast<std::size_t>(id)); }
    const Stmt& stmt(StmtId id) const { return stmts.at(static_cast<std::size_t>(id)); }
};

struct ParseError : std::runtime_error {
    ParseError(std::string msg, int line, int col)
        : std::runtime_error(std::move(msg)), line(line), col(col) {}
    int line;
    int col;
};

ElementId make_element_id(const ParsedFile& file, const ElementInfo& info);

// All elements of one kind in the file, in (function, ordinal) order.
std::vector<ElementId> element_ids(const ParsedFile& file, ElementKind kind);

// Deep structural equality; ignores source positions and file path.
bool expr_equal(const ParsedFile& fa, ExprId a, const ParsedFile& fb, ExprId b);
bool stmt_equal(const ParsedFile& fa, StmtId a, const ParsedFile& fb, StmtId b);
bool ast_equal(const ParsedFile& a, const ParsedFile& b);

}  // namespace purify
