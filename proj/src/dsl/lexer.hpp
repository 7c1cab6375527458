#pragma once

#include "tdt/ast.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tdt::dsl {

enum class Tok {
    Ident,
    Number,
    Quoted,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Dot,
    Neck,     // :-
    QueryOp,  // ?-
    Naf,      // \+
    Plus,
    Minus,
    Star,
    Slash,
    Eq,       // = (also ==)
    Ne,       // !=
    Lt,
    Le,
    Gt,
    Ge,
    End,
};

std::string_view describe(Tok t);

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
    bool double_equals = false;
};

/// Splits `src` into tokens; '%' starts a line comment. Always ends with Tok::End.
std::vector<Token> tokenize(std::string_view src);

class Cursor {
public:
    explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(std::size_t ahead = 0) const
    {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_word(std::string_view w) const { return at(Tok::Ident) && peek().text == w; }
    bool done() const { return at(Tok::End); }

    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    bool accept(Tok k)
    {
        if (!at(k))
            return false;
        next();
        return true;
    }
    bool accept_word(std::string_view w)
    {
        if (!at_word(w))
            return false;
        next();
        return true;
    }

    const Token& expect(Tok k, std::string_view what);

    [[noreturn]] void fail(std::string_view expected) const;

    const std::vector<Token>& tokens() const { return tokens_; }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace tdt::dsl
