#pragma once

// Unified constraint AST: Horn-clause programs, arithmetic conjunctions and
// set formulas (abstract or over concrete literal sets).

#include "tdt/error.hpp"
#include "tdt/model.hpp"
#include "tdt/rational.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace tdt {

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, std::string expected, const std::string& found);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string expected_;
};

class MixedDialectError : public Error {
public:
    MixedDialectError(std::size_t line, std::size_t column, const std::string& what);
};

// ---------------------------------------------------------------- arithmetic

enum class TermOp { Num, Var, Add, Sub, Mul, Div, Neg };

struct Term {
    TermOp op = TermOp::Num;
    Rational value;      // Num
    std::string name;    // Var
    std::vector<Term> args;

    static Term num(const Rational& v);
    static Term var(std::string n);
    static Term binary(TermOp op, Term lhs, Term rhs);
    static Term neg(Term t);

    bool operator==(const Term&) const = default;
};

enum class CmpOp { Eq, Lt, Le, Gt, Ge };

std::string_view to_string(CmpOp);

struct Comparison {
    Term lhs;
    CmpOp op = CmpOp::Eq;
    Term rhs;

    bool operator==(const Comparison&) const = default;
};

struct ArithConj {
    std::vector<Comparison> atoms;

    bool operator==(const ArithConj&) const = default;
};

// ----------------------------------------------------------------------- sets

enum class SetOp { Name, Empty, Literal, Inter, Union, Diff };

struct SetTerm {
    SetOp op = SetOp::Name;
    std::string name;
    std::set<std::uint64_t> elements; // Literal
    std::vector<SetTerm> args;

    bool operator==(const SetTerm&) const = default;
};

/// An element reference: a declared element name or a natural literal.
struct ElemRef {
    std::string name;
    std::optional<std::uint64_t> value;

    bool operator==(const ElemRef&) const = default;
};

enum class SetAtomKind { In, NotIn, Eq, Subset };

struct SetAtom {
    SetAtomKind kind = SetAtomKind::In;
    ElemRef elem;   // In / NotIn
    SetTerm lhs;    // Eq / Subset
    SetTerm rhs;

    bool operator==(const SetAtom&) const = default;
};

struct SetFormula {
    std::vector<std::string> sets;
    std::vector<std::string> elems;
    std::vector<SetAtom> atoms;

    bool operator==(const SetFormula&) const = default;
};

struct SetBinding {
    std::string name;
    std::set<std::uint64_t> elements;

    bool operator==(const SetBinding&) const = default;
};

struct ConcreteSetProgram {
    std::vector<SetBinding> bindings;
    SetFormula goal;

    bool operator==(const ConcreteSetProgram&) const = default;
};

// ---------------------------------------------------------------------- logic

/// Variables start with an uppercase letter or '_'; everything else is a constant.
struct LTerm {
    bool is_var = false;
    std::string name;

    bool operator==(const LTerm&) const = default;
    auto operator<=>(const LTerm&) const = default;
};

struct LAtom {
    std::string pred;
    std::vector<LTerm> args;

    bool operator==(const LAtom&) const = default;
};

struct Literal {
    bool negated = false; // \+
    LAtom atom;

    bool operator==(const Literal&) const = default;
};

struct Clause {
    LAtom head;
    std::vector<Literal> body; // empty for facts

    bool is_fact() const { return body.empty(); }
    bool operator==(const Clause&) const = default;
};

struct LogicProgram {
    std::vector<Clause> clauses;
    std::vector<std::vector<Literal>> queries;

    bool operator==(const LogicProgram&) const = default;
};

using ConstraintAst = std::variant<LogicProgram, ArithConj, SetFormula, ConcreteSetProgram>;

// -------------------------------------------------------------- entry points

/// Parses one expression. `hint` picks the dialect when the text alone is
/// ambiguous (None means "detect").
ConstraintAst parse_constraint(std::string_view src, CType hint = CType::None);

/// Total: LogicProgram -> Logical, ArithConj -> Arithmetic,
/// SetFormula -> AbstractSet, ConcreteSetProgram -> ConcreteSet.
CType classify(const ConstraintAst& ast);

/// Canonical source text; parse_constraint(print(a)) == a.
std::string print(const ConstraintAst& ast);
std::string print(const Term& t);
std::string print(const Comparison& c);
std::string print(const ArithConj& c);
std::string print(const SetTerm& t);
std::string print(const SetAtom& a);
std::string print(const SetFormula& f);
std::string print(const ConcreteSetProgram& p);
std::string print(const LTerm& t);
std::string print(const LAtom& a);
std::string print(const Literal& l);
std::string print(const Clause& c);
std::string print(const LogicProgram& p);

bool is_logic_variable(std::string_view name);

/// Variable names in order of first occurrence.
std::vector<std::string> variables_of(const Term& t);
std::vector<std::string> variables_of(const ArithConj& c);
void collect_variables(const Term& t, std::vector<std::string>& out);

} // namespace tdt
