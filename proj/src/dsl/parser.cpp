#include "lexer.hpp"
#include "tdt/ast.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace tdt {

namespace {

using dsl::Cursor;
using dsl::Tok;
using dsl::Token;

enum class Dialect { Logic, Arith, Set };

constexpr std::array<std::string_view, 10> set_keywords{"Set",  "Elem", "in",     "notin", "inter",
                                                        "union", "diff", "subset", "empty", "Elems"};

bool is_set_keyword(std::string_view w)
{
    return std::find(set_keywords.begin(), set_keywords.end(), w) != set_keywords.end();
}

bool is_arith_token(Tok k)
{
    switch (k) {
    case Tok::Lt:
    case Tok::Le:
    case Tok::Gt:
    case Tok::Ge:
    case Tok::Plus:
    case Tok::Minus:
    case Tok::Star:
    case Tok::Slash:
    case Tok::Ne:
        return true;
    default:
        return false;
    }
}

Dialect detect(const std::vector<Token>& toks, CType hint)
{
    bool logic = false, set = false;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const Token& t = toks[i];
        if (t.kind == Tok::Neck || t.kind == Tok::QueryOp || t.kind == Tok::Naf)
            logic = true;
        if (t.kind == Tok::Ident && i + 1 < toks.size() && toks[i + 1].kind == Tok::LParen && !is_set_keyword(t.text))
            logic = true;
        if (t.kind == Tok::Quoted)
            logic = true;
        if ((t.kind == Tok::Ident && is_set_keyword(t.text)) || t.kind == Tok::LBrace)
            set = true;
    }
    if (toks.size() >= 2 && toks[toks.size() - 2].kind == Tok::Dot)
        logic = true;
    if (logic)
        return Dialect::Logic;
    if (set)
        return Dialect::Set;
    switch (hint) {
    case CType::Logical: return Dialect::Logic;
    case CType::AbstractSet:
    case CType::ConcreteSet: return Dialect::Set;
    default: return Dialect::Arith;
    }
}

[[noreturn]] void mixed(const Token& t, const std::string& what)
{
    throw MixedDialectError(t.line, t.column, what);
}

// ------------------------------------------------------------------ arithmetic

class ArithParser {
public:
    explicit ArithParser(Cursor& cur) : cur_(cur) {}

    ArithConj parse()
    {
        ArithConj out;
        while (!cur_.done()) {
            if (cur_.accept(Tok::Semi))
                continue;
            out.atoms.push_back(comparison());
            if (!cur_.done() && !cur_.at(Tok::Semi)) {
                if (cur_.at(Tok::Ident) && is_set_keyword(cur_.peek().text))
                    mixed(cur_.peek(), "set operator in an arithmetic expression");
                cur_.fail("';' or end of expression");
            }
        }
        return out;
    }

private:
    Comparison comparison()
    {
        Term lhs = expr();
        CmpOp op;
        const Token& t = cur_.peek();
        switch (t.kind) {
        case Tok::Eq: op = CmpOp::Eq; break;
        case Tok::Lt: op = CmpOp::Lt; break;
        case Tok::Le: op = CmpOp::Le; break;
        case Tok::Gt: op = CmpOp::Gt; break;
        case Tok::Ge: op = CmpOp::Ge; break;
        case Tok::Ne: cur_.fail("comparison operator (one of = < <= > >=; '!=' is not supported)");
        default:
            if (t.kind == Tok::Ident && is_set_keyword(t.text))
                mixed(t, "set operator '" + t.text + "' in an arithmetic expression");
            cur_.fail("comparison operator");
        }
        cur_.next();
        Term rhs = expr();
        return Comparison{std::move(lhs), op, std::move(rhs)};
    }

    Term expr()
    {
        Term lhs = term();
        while (cur_.at(Tok::Plus) || cur_.at(Tok::Minus)) {
            TermOp op = cur_.next().kind == Tok::Plus ? TermOp::Add : TermOp::Sub;
            lhs = Term::binary(op, std::move(lhs), term());
        }
        return lhs;
    }

    Term term()
    {
        Term lhs = unary();
        while (cur_.at(Tok::Star) || cur_.at(Tok::Slash)) {
            const Token& op_tok = cur_.next();
            TermOp op = op_tok.kind == Tok::Star ? TermOp::Mul : TermOp::Div;
            Term rhs = unary();
            if (op == TermOp::Div && rhs.op == TermOp::Num && rhs.value == 0)
                throw SyntaxError(op_tok.line, op_tok.column, "non-zero divisor", "division by literal zero");
            lhs = Term::binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Term unary()
    {
        if (cur_.accept(Tok::Minus))
            return Term::neg(unary());
        return primary();
    }

    Term primary()
    {
        const Token& t = cur_.peek();
        if (t.kind == Tok::Number) {
            cur_.next();
            return Term::num(*parse_rational(t.text));
        }
        if (t.kind == Tok::Ident) {
            if (is_set_keyword(t.text))
                mixed(t, "set keyword '" + t.text + "' in an arithmetic expression");
            cur_.next();
            return Term::var(t.text);
        }
        if (t.kind == Tok::LParen) {
            cur_.next();
            Term inner = expr();
            cur_.expect(Tok::RParen, "')'");
            return inner;
        }
        if (t.kind == Tok::LBrace)
            mixed(t, "set literal in an arithmetic expression");
        cur_.fail("number, variable or '('");
    }

    Cursor& cur_;
};

// ------------------------------------------------------------------------ sets

class SetParser {
public:
    explicit SetParser(Cursor& cur) : cur_(cur) {}

    ConstraintAst parse()
    {
        SetFormula f;
        std::vector<SetBinding> bindings;
        bool concrete = false;
        while (!cur_.done()) {
            if (cur_.accept(Tok::Semi))
                continue;
            if (cur_.at_word("Set") || cur_.at_word("Elem")) {
                bool is_set = cur_.next().text == "Set";
                do {
                    const Token& name = cur_.expect(Tok::Ident, "name");
                    if (is_set_keyword(name.text))
                        throw SyntaxError(name.line, name.column, "name", "keyword '" + name.text + "'");
                    (is_set ? f.sets : f.elems).push_back(name.text);
                    (is_set ? sets_ : elems_).push_back(name.text);
                } while (cur_.accept(Tok::Comma));
            } else if (is_binding()) {
                SetBinding b;
                b.name = cur_.next().text;
                cur_.expect(Tok::Eq, "'='");
                b.elements = literal();
                bindings.push_back(std::move(b));
                concrete = true;
            } else {
                f.atoms.push_back(atom());
            }
            if (!cur_.done() && !cur_.at(Tok::Semi)) {
                if (is_arith_token(cur_.peek().kind))
                    mixed(cur_.peek(), "arithmetic operator in a set expression");
                cur_.fail("';' or end of expression");
            }
        }
        concrete = concrete || literal_seen_;
        if (!concrete)
            return f;
        return ConcreteSetProgram{std::move(bindings), std::move(f)};
    }

private:
    bool is_binding() const
    {
        if (!cur_.at(Tok::Ident) || is_set_keyword(cur_.peek().text) || cur_.peek(1).kind != Tok::Eq ||
            cur_.peek(2).kind != Tok::LBrace)
            return false;
        std::size_t k = 3;
        while (cur_.peek(k).kind != Tok::RBrace && cur_.peek(k).kind != Tok::End)
            ++k;
        Tok after = cur_.peek(k + 1).kind;
        return after == Tok::Semi || after == Tok::End;
    }

    std::set<std::uint64_t> literal()
    {
        std::set<std::uint64_t> out;
        cur_.expect(Tok::LBrace, "'{'");
        if (cur_.accept(Tok::RBrace))
            return out;
        do {
            const Token& t = cur_.peek();
            if (t.kind != Tok::Number || t.text.find('.') != std::string::npos || t.text.size() > 18)
                cur_.fail("natural number");
            cur_.next();
            out.insert(std::stoull(t.text));
        } while (cur_.accept(Tok::Comma));
        cur_.expect(Tok::RBrace, "'}' or ','");
        literal_seen_ = true;
        return out;
    }

    SetAtom atom()
    {
        const Token& start = cur_.peek();
        if (start.kind == Tok::Number) {
            if (start.text.find('.') != std::string::npos || start.text.size() > 18)
                mixed(start, "non-natural number in a set expression");
            cur_.next();
            literal_seen_ = true;
            return membership(ElemRef{"", std::stoull(start.text)});
        }
        SetTerm lhs = set_expr();
        if (cur_.at_word("in") || cur_.at_word("notin")) {
            if (lhs.op != SetOp::Name)
                throw SyntaxError(start.line, start.column, "element name before 'in'", print(lhs));
            return membership(ElemRef{lhs.name, std::nullopt});
        }
        SetAtom a;
        a.lhs = std::move(lhs);
        if (cur_.accept(Tok::Eq))
            a.kind = SetAtomKind::Eq;
        else if (cur_.accept_word("subset"))
            a.kind = SetAtomKind::Subset;
        else if (is_arith_token(cur_.peek().kind))
            mixed(cur_.peek(), "arithmetic comparison in a set expression");
        else
            cur_.fail("'in', 'notin', '=' or 'subset'");
        a.rhs = set_expr();
        return a;
    }

    SetAtom membership(ElemRef e)
    {
        SetAtom a;
        a.kind = cur_.next().text == "in" ? SetAtomKind::In : SetAtomKind::NotIn;
        a.elem = std::move(e);
        a.rhs = set_expr();
        return a;
    }

    SetTerm set_expr()
    {
        SetTerm lhs = set_inter();
        while (cur_.at_word("union") || cur_.at_word("diff")) {
            SetTerm t;
            t.op = cur_.next().text == "union" ? SetOp::Union : SetOp::Diff;
            t.args.push_back(std::move(lhs));
            t.args.push_back(set_inter());
            lhs = std::move(t);
        }
        return lhs;
    }

    SetTerm set_inter()
    {
        SetTerm lhs = set_primary();
        while (cur_.accept_word("inter")) {
            SetTerm t;
            t.op = SetOp::Inter;
            t.args.push_back(std::move(lhs));
            t.args.push_back(set_primary());
            lhs = std::move(t);
        }
        return lhs;
    }

    SetTerm set_primary()
    {
        const Token& t = cur_.peek();
        SetTerm out;
        if (t.kind == Tok::Ident && t.text == "empty") {
            cur_.next();
            out.op = SetOp::Empty;
            return out;
        }
        if (t.kind == Tok::Ident && !is_set_keyword(t.text)) {
            cur_.next();
            out.op = SetOp::Name;
            out.name = t.text;
            return out;
        }
        if (t.kind == Tok::LBrace) {
            out.op = SetOp::Literal;
            out.elements = literal();
            return out;
        }
        if (t.kind == Tok::LParen) {
            cur_.next();
            out = set_expr();
            cur_.expect(Tok::RParen, "')'");
            return out;
        }
        if (t.kind == Tok::Number || is_arith_token(t.kind))
            mixed(t, "arithmetic term in a set expression");
        cur_.fail("set name, 'empty', literal or '('");
    }

    Cursor& cur_;
    std::vector<std::string> sets_;
    std::vector<std::string> elems_;
    bool literal_seen_ = false;
};

// ----------------------------------------------------------------------- logic

class LogicParser {
public:
    explicit LogicParser(Cursor& cur) : cur_(cur) {}

    LogicProgram parse()
    {
        LogicProgram prog;
        while (!cur_.done()) {
            if (cur_.accept(Tok::QueryOp)) {
                prog.queries.push_back(literals());
            } else {
                Literal first = literal();
                if (first.negated || cur_.at(Tok::Comma)) {
                    std::vector<Literal> q{std::move(first)};
                    while (cur_.accept(Tok::Comma))
                        q.push_back(literal());
                    prog.queries.push_back(std::move(q));
                } else if (cur_.accept(Tok::Neck)) {
                    if (cur_.at(Tok::Dot) || cur_.done())
                        cur_.fail("rule body");
                    prog.clauses.push_back(Clause{std::move(first.atom), literals()});
                } else {
                    prog.clauses.push_back(Clause{std::move(first.atom), {}});
                }
            }
            if (cur_.done())
                break;
            if (!cur_.accept(Tok::Dot)) {
                if (is_arith_token(cur_.peek().kind) || cur_.at(Tok::Eq))
                    mixed(cur_.peek(), "arithmetic in a logic program");
                cur_.fail("'.'");
            }
        }
        return prog;
    }

private:
    std::vector<Literal> literals()
    {
        std::vector<Literal> out{literal()};
        while (cur_.accept(Tok::Comma))
            out.push_back(literal());
        return out;
    }

    Literal literal()
    {
        Literal l;
        l.negated = cur_.accept(Tok::Naf);
        l.atom = atom();
        return l;
    }

    LAtom atom()
    {
        const Token& t = cur_.peek();
        LAtom a;
        if (t.kind == Tok::Quoted) {
            a.pred = t.text;
        } else if (t.kind == Tok::Ident) {
            if (is_logic_variable(t.text))
                throw SyntaxError(t.line, t.column, "predicate name (lowercase)", "variable '" + t.text + "'");
            a.pred = t.text;
        } else {
            if (is_arith_token(t.kind) || t.kind == Tok::Number)
                mixed(t, "arithmetic in a logic program");
            cur_.fail("atom");
        }
        cur_.next();
        if (cur_.accept(Tok::LParen)) {
            do
                a.args.push_back(term());
            while (cur_.accept(Tok::Comma));
            cur_.expect(Tok::RParen, "')' or ','");
        }
        return a;
    }

    LTerm term()
    {
        const Token& t = cur_.peek();
        if (t.kind == Tok::Ident) {
            cur_.next();
            if (cur_.at(Tok::LParen))
                cur_.fail("',' or ')' (compound terms are not supported)");
            return LTerm{is_logic_variable(t.text), t.text};
        }
        if (t.kind == Tok::Quoted || t.kind == Tok::Number) {
            cur_.next();
            return LTerm{false, t.text};
        }
        if (t.kind == Tok::Minus && cur_.peek(1).kind == Tok::Number) {
            cur_.next();
            return LTerm{false, "-" + cur_.next().text};
        }
        cur_.fail("term");
    }

    Cursor& cur_;
};

} // namespace

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::string expected, const std::string& found)
    : Error("SyntaxError", std::to_string(line) + ":" + std::to_string(column) + ": expected " + expected +
                               (found.empty() ? "" : ", found " + found)),
      line_(line), column_(column), expected_(std::move(expected))
{
}

MixedDialectError::MixedDialectError(std::size_t line, std::size_t column, const std::string& what)
    : Error("MixedDialect", std::to_string(line) + ":" + std::to_string(column) + ": " + what)
{
}

bool is_logic_variable(std::string_view name)
{
    return !name.empty() && (std::isupper(static_cast<unsigned char>(name.front())) || name.front() == '_');
}

ConstraintAst parse_constraint(std::string_view src, CType hint)
{
    auto tokens = dsl::tokenize(src);
    Dialect d = detect(tokens, hint);
    for (auto& t : tokens)
        if (t.kind == Tok::Eq && t.double_equals && d == Dialect::Logic)
            mixed(t, "'==' in a logic program");
    Cursor cur(std::move(tokens));
    switch (d) {
    case Dialect::Logic: return LogicParser(cur).parse();
    case Dialect::Set: return SetParser(cur).parse();
    case Dialect::Arith: break;
    }
    return ArithParser(cur).parse();
}

CType classify(const ConstraintAst& ast)
{
    switch (ast.index()) {
    case 0: return CType::Logical;
    case 1: return CType::Arithmetic;
    case 2: return CType::AbstractSet;
    default: return CType::ConcreteSet;
    }
}

} // namespace tdt
