#pragma once

#include <string>

#include "purify/ast.hpp"

namespace purify {

// Parses one test-language source file. `path` becomes ParsedFile::path and is
// the file component of every ElementId. Throws ParseError with line/column
// positions on syntax errors, duplicate declarations, malformed fragment
// annotations, or inconsistent fragment groups.
ParsedFile parse_file(const std::string& source, const std::string& path);

}  // namespace purify
