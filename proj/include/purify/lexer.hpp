#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace purify {

enum class TokKind {
    Ident,
    Int,
    Str,
    FragmentMeta,  // //@fragment origin=<ident> order=<int>
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Assign,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    AndAnd,
    OrOr,
    Bang,
    KwFn,
    KwTest,
    KwBefore,
    KwAfter,
    KwLet,
    KwIf,
    KwElse,
    KwWhile,
    KwTry,
    KwCatch,
    KwThrow,
    KwReturn,
    KwAssert,
    KwAssertEquals,
    KwFail,
    KwTrue,
    KwFalse,
    KwNull,
    Eof,
};

struct Token {
    TokKind kind{TokKind::Eof};
    std::string text;          // identifier, string value, or fragment origin
    std::int64_t int_val{0};   // integer literal or fragment order
    int line{1};
    int col{1};
};

// Tokenizes source; throws ParseError on malformed input.
std::vector<Token> lex(const std::string& source);

const char* token_name(TokKind kind);

}  // namespace purify
