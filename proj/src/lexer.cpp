#include "purify/lexer.hpp"

#include <cctype>
#include <unordered_map>

#include "purify/ast.hpp"

namespace purify {

namespace {

const std::unordered_map<std::string, TokKind>& keyword_table() {
    static const std::unordered_map<std::string, TokKind> table = {
        {"fn", TokKind::KwFn},
        {"test", TokKind::KwTest},
        {"before", TokKind::KwBefore},
        {"after", TokKind::KwAfter},
        {"let", TokKind::KwLet},
        {"if", TokKind::KwIf},
        {"else", TokKind::KwElse},
        {"while", TokKind::KwWhile},
        {"try", TokKind::KwTry},
        {"catch", TokKind::KwCatch},
        {"throw", TokKind::KwThrow},
        {"return", TokKind::KwReturn},
        {"assert", TokKind::KwAssert},
        {"assertEquals", TokKind::KwAssertEquals},
        {"fail", TokKind::KwFail},
        {"true", TokKind::KwTrue},
        {"false", TokKind::KwFalse},
        {"null", TokKind::KwNull},
    };
    return table;
}

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            if (pos_ >= src_.size()) break;
            int line = line_;
            int col = col_;
            char c = src_[pos_];
            if (c == '/' && peek(1) == '/') {
                Token meta;
                if (lex_comment(meta, line, col)) out.push_back(meta);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                out.push_back(lex_int(line, col));
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(lex_ident(line, col));
                continue;
            }
            if (c == '"') {
                out.push_back(lex_string(line, col));
                continue;
            }
            out.push_back(lex_punct(line, col));
        }
        out.push_back(Token{TokKind::Eof, "", 0, line_, col_});
        return out;
    }

private:
    char peek(std::size_t ahead = 0) const {
        std::size_t p = pos_ + ahead;
        return p < src_.size() ? src_[p] : '\0';
    }

    void advance() {
        if (pos_ < src_.size()) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            advance();
        }
    }

    // Returns true when the comment was a fragment annotation.
    bool lex_comment(Token& meta, int line, int col) {
        static const std::string tag = "//@fragment";
        bool is_meta = src_.compare(pos_, tag.size(), tag) == 0;
        std::string body;
        while (pos_ < src_.size() && src_[pos_] != '\n') {
            body.push_back(src_[pos_]);
            advance();
        }
        if (!is_meta) return false;
        // body is "//@fragment origin=<ident> order=<int>"
        std::size_t p = tag.size();
        auto skip_ws = [&] {
            while (p < body.size() && (body[p] == ' ' || body[p] == '\t')) ++p;
        };
        auto expect_key = [&](const std::string& key) {
            skip_ws();
            if (body.compare(p, key.size(), key) != 0) {
                throw ParseError("malformed fragment annotation: expected '" + key + "'", line,
                                 col);
            }
            p += key.size();
        };
        expect_key("origin=");
        std::string origin;
        while (p < body.size() &&
               (std::isalnum(static_cast<unsigned char>(body[p])) || body[p] == '_')) {
            origin.push_back(body[p]);
            ++p;
        }
        if (origin.empty()) {
            throw ParseError("malformed fragment annotation: missing origin name", line, col);
        }
        expect_key("order=");
        std::string digits;
        while (p < body.size() && std::isdigit(static_cast<unsigned char>(body[p]))) {
            digits.push_back(body[p]);
            ++p;
        }
        if (digits.empty()) {
            throw ParseError("malformed fragment annotation: missing order", line, col);
        }
        skip_ws();
        if (p != body.size()) {
            throw ParseError("malformed fragment annotation: trailing characters", line, col);
        }
        meta = Token{TokKind::FragmentMeta, origin, std::stoll(digits), line, col};
        return true;
    }

    Token lex_int(int line, int col) {
        std::string digits;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            digits.push_back(src_[pos_]);
            advance();
        }
        try {
            return Token{TokKind::Int, "", std::stoll(digits), line, col};
        } catch (const std::out_of_range&) {
            throw ParseError("integer literal out of range", line, col);
        }
    }

    Token lex_ident(int line, int col) {
        std::string name;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_')) {
            name.push_back(src_[pos_]);
            advance();
        }
        auto it = keyword_table().find(name);
        if (it != keyword_table().end()) return Token{it->second, name, 0, line, col};
        return Token{TokKind::Ident, name, 0, line, col};
    }

    Token lex_string(int line, int col) {
        advance();  // opening quote
        std::string value;
        for (;;) {
            if (pos_ >= src_.size() || src_[pos_] == '\n') {
                throw ParseError("unterminated string literal", line, col);
            }
            char c = src_[pos_];
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                advance();
                char esc = peek();
                switch (esc) {
                    case 'n': value.push_back('\n'); break;
                    case 't': value.push_back('\t'); break;
                    case '\\': value.push_back('\\'); break;
                    case '"': value.push_back('"'); break;
                    default:
                        throw ParseError("unknown escape sequence in string literal", line_, col_);
                }
                advance();
                continue;
            }
            value.push_back(c);
            advance();
        }
        return Token{TokKind::Str, value, 0, line, col};
    }

    Token lex_punct(int line, int col) {
        char c = peek();
        char c2 = peek(1);
        auto two = [&](TokKind k, const char* t) {
            advance();
            advance();
            return Token{k, t, 0, line, col};
        };
        auto one = [&](TokKind k, const char* t) {
            advance();
            return Token{k, t, 0, line, col};
        };
        switch (c) {
            case '(': return one(TokKind::LParen, "(");
            case ')': return one(TokKind::RParen, ")");
            case '{': return one(TokKind::LBrace, "{");
            case '}': return one(TokKind::RBrace, "}");
            case ',': return one(TokKind::Comma, ",");
            case ';': return one(TokKind::Semi, ";");
            case '+': return one(TokKind::Plus, "+");
            case '-': return one(TokKind::Minus, "-");
            case '*': return one(TokKind::Star, "*");
            case '/': return one(TokKind::Slash, "/");
            case '%': return one(TokKind::Percent, "%");
            case '=': return c2 == '=' ? two(TokKind::EqEq, "==") : one(TokKind::Assign, "=");
            case '!': return c2 == '=' ? two(TokKind::NotEq, "!=") : one(TokKind::Bang, "!");
            case '<': return c2 == '=' ? two(TokKind::Le, "<=") : one(TokKind::Lt, "<");
            case '>': return c2 == '=' ? two(TokKind::Ge, ">=") : one(TokKind::Gt, ">");
            case '&':
                if (c2 == '&') return two(TokKind::AndAnd, "&&");
                throw ParseError("unexpected character '&'", line, col);
            case '|':
                if (c2 == '|') return two(TokKind::OrOr, "||");
                throw ParseError("unexpected character '|'", line, col);
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
    }

    const std::string& src_;
    std::size_t pos_{0};
    int line_{1};
    int col_{1};
};

}  // namespace

std::vector<Token> lex(const std::string& source) { return Lexer(source).run(); }

const char* token_name(TokKind kind) {
    switch (kind) {
        case TokKind::Ident: return "identifier";
        case TokKind::Int: return "integer literal";
        case TokKind::Str: return "string literal";
        case TokKind::FragmentMeta: return "fragment annotation";
        case TokKind::LParen: return "'('";
        case TokKind::RParen: return "')'";
        case TokKind::LBrace: return "'{'";
        case TokKind::RBrace: return "'}'";
        case TokKind::Comma: return "','";
        case TokKind::Semi: return "';'";
        case TokKind::Assign: return "'='";
        case TokKind::EqEq: return "'=='";
        case TokKind::NotEq: return "'!='";
        case TokKind::Lt: return "'<'";
        case TokKind::Le: return "'<='";
        case TokKind::Gt: return "'>'";
        case TokKind::Ge: return "'>='";
        case TokKind::Plus: return "'+'";
        case TokKind::Minus: return "'-'";
        case TokKind::Star: return "'*'";
        case TokKind::Slash: return "'/'";
        case TokKind::Percent: return "'%'";
        case TokKind::AndAnd: return "'&&'";
        case TokKind::OrOr: return "'||'";
        case TokKind::Bang: return "'!'";
        case TokKind::KwFn: return "'fn'";
        case TokKind::KwTest: return "'test'";
        case TokKind::KwBefore: return "'before'";
        case TokKind::KwAfter: return "'after'";
        case TokKind::KwLet: return "'let'";
        case TokKind::KwIf: return "'if'";
        case TokKind::KwElse: return "'else'";
        case TokKind::KwWhile: return "'while'";
        case TokKind::KwTry: return "'try'";
        case TokKind::KwCatch: return "'catch'";
        case TokKind::KwThrow: return "'throw'";
        case TokKind::KwReturn: return "'return'";
        case TokKind::KwAssert: return "'assert'";
        case TokKind::KwAssertEquals: return "'assertEquals'";
        case TokKind::KwFail: return "'fail'";
        case TokKind::KwTrue: return "'true'";
        case TokKind::KwFalse: return "'false'";
        case TokKind::KwNull: return "'null'";
        case TokKind::Eof: return "end of file";
    }
    return "?";
}

}  // namespace purify
