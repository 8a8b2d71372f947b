#include "purify/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "purify/parser.hpp"

namespace purify {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw CorpusError("cannot read '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::vector<ParsedFile> load_corpus(const std::vector<std::string>& paths) {
    std::vector<std::pair<std::string, fs::path>> entries;  // (corpus path, disk path)
    for (const std::string& raw : paths) {
        fs::path p(raw);
        std::error_code ec;
        if (fs::is_regular_file(p, ec)) {
            entries.emplace_back(p.filename().generic_string(), p);
        } else if (fs::is_directory(p, ec)) {
            std::vector<std::pair<std::string, fs::path>> found;
            for (const auto& ent : fs::recursive_directory_iterator(p)) {
                if (!ent.is_regular_file()) continue;
                if (ent.path().extension() != ".tl") continue;
                found.emplace_back(fs::relative(ent.path(), p).generic_string(), ent.path());
            }
            std::sort(found.begin(), found.end());
            entries.insert(entries.end(), found.begin(), found.end());
        } else {
            throw CorpusError("no such file or directory: '" + raw + "'");
        }
    }

    std::set<std::string> seen;
    std::vector<ParsedFile> files;
    for (const auto& [rel, disk] : entries) {
        if (!seen.insert(rel).second) {
            throw CorpusError("duplicate corpus path '" + rel + "'");
        }
        try {
            files.push_back(parse_file(slurp(disk), rel));
        } catch (const ParseError& e) {
            throw CorpusError(rel + ":" + std::to_string(e.line) + ":" +
                              std::to_string(e.col) + ": " + e.what());
        }
    }
    return files;
}

}  // namespace purify
