#pragma once

#include <string>

#include "purify/ast.hpp"

namespace purify {

// Canonical source rendering. Parsing the result reproduces the same AST
// (structurally), and serializing that AST again yields identical bytes.
std::string serialize_file(const ParsedFile& file);

std::string serialize_expr(const ParsedFile& file, ExprId id);
std::string serialize_stmt(const ParsedFile& file, StmtId id, int indent = 0);

}  // namespace purify
