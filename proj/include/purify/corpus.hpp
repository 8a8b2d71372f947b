#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "purify/ast.hpp"

namespace purify {

struct CorpusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Loads .tl files from the given paths. A file argument contributes its
// basename as the corpus-relative path; a directory argument contributes
// every .tl file underneath it under its directory-relative path, sorted.
// Throws CorpusError for unreadable paths, duplicate relative paths, and
// malformed files (with file:line:col context prepended).
std::vector<ParsedFile> load_corpus(const std::vector<std::string>& paths);

}  // namespace purify
