#include "lexer.hpp"

#include <cctype>

namespace tdt::dsl {

std::string_view describe(Tok t)
{
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Quoted: return "quoted atom";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Dot: return "'.'";
    case Tok::Neck: return "':-'";
    case Tok::QueryOp: return "'?-'";
    case Tok::Naf: return "'\\+'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view src)
{
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto push = [&](Tok kind, std::size_t len, std::size_t l, std::size_t c) {
        out.push_back(Token{kind, std::string(src.substr(i, len)), l, c});
        advance(len);
    };

    while (i < src.size()) {
        char ch = src[i];
        std::size_t l = line, c = col;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            advance(1);
            continue;
        }
        if (ch == '%') {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            push(Tok::Ident, j - i, l, c);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                    ++j;
            }
            push(Tok::Number, j - i, l, c);
            continue;
        }
        if (ch == '\'') {
            std::string text;
            std::size_t j = i + 1;
            bool closed = false;
            while (j < src.size()) {
                if (src[j] == '\'') {
                    if (j + 1 < src.size() && src[j + 1] == '\'') {
                        text += '\'';
                        j += 2;
                        continue;
                    }
                    closed = true;
                    break;
                }
                if (src[j] == '\n')
                    break;
                text += src[j++];
            }
            if (!closed)
                throw SyntaxError(l, c, "closing quote", "end of line");
            advance(j + 1 - i);
            out.push_back(Token{Tok::Quoted, text, l, c});
            continue;
        }
        auto two = src.substr(i, 2);
        if (two == ":-") { push(Tok::Neck, 2, l, c); continue; }
        if (two == "?-") { push(Tok::QueryOp, 2, l, c); continue; }
        if (two == "\\+") { push(Tok::Naf, 2, l, c); continue; }
        if (two == "<=") { push(Tok::Le, 2, l, c); continue; }
        if (two == ">=") { push(Tok::Ge, 2, l, c); continue; }
        if (two == "!=") { push(Tok::Ne, 2, l, c); continue; }
        if (two == "==") {
            push(Tok::Eq, 2, l, c);
            out.back().double_equals = true;
            continue;
        }
        switch (ch) {
        case '(': push(Tok::LParen, 1, l, c); continue;
        case ')': push(Tok::RParen, 1, l, c); continue;
        case '{': push(Tok::LBrace, 1, l, c); continue;
        case '}': push(Tok::RBrace, 1, l, c); continue;
        case ',': push(Tok::Comma, 1, l, c); continue;
        case ';': push(Tok::Semi, 1, l, c); continue;
        case '.': push(Tok::Dot, 1, l, c); continue;
        case '+': push(Tok::Plus, 1, l, c); continue;
        case '-': push(Tok::Minus, 1, l, c); continue;
        case '*': push(Tok::Star, 1, l, c); continue;
        case '/': push(Tok::Slash, 1, l, c); continue;
        case '=': push(Tok::Eq, 1, l, c); continue;
        case '<': push(Tok::Lt, 1, l, c); continue;
        case '>': push(Tok::Gt, 1, l, c); continue;
        default: break;
        }
        throw SyntaxError(l, c, "a token", std::string("'") + ch + "'");
    }
    out.push_back(Token{Tok::End, "", line, col});
    return out;
}

const Token& Cursor::expect(Tok k, std::string_view what)
{
    if (!at(k))
        fail(what.empty() ? describe(k) : what);
    return next();
}

void Cursor::fail(std::string_view expected) const
{
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.line, t.column, std::string(expected), found);
}

} // namespace tdt::dsl
