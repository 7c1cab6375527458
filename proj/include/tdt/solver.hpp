#pragma once

// Proof obligations and the built-in decision procedures that discharge them.

#include "tdt/ast.hpp"
#include "tdt/error.hpp"
#include "tdt/model.hpp"
#include "tdt/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace tdt {

enum class Outcome { Unsat, Sat, Unknown };

std::string_view to_string(Outcome);
Outcome outcome_from_string(std::string_view);

struct ModelValue {
    enum class Kind { Number, Term, Set };

    Kind kind = Kind::Number;
    Rational number;
    std::string term;
    std::vector<std::uint64_t> set;

    static ModelValue of_number(const Rational& r);
    static ModelValue of_term(std::string t);
    static ModelValue of_set(std::vector<std::uint64_t> s);

    /// "0.9", "mr_a", "{0, 2}".
    std::string display() const;

    bool operator==(const ModelValue&) const = default;
};

struct Binding {
    std::string name;
    ModelValue value;

    bool operator==(const Binding&) const = default;
};

struct Verdict {
    Outcome outcome = Outcome::Unknown;
    std::vector<Binding> model; // non-empty only when outcome == Sat (may be empty for a variable-free Sat)
    nlohmann::json diagnostics = nlohmann::json::object();

    const ModelValue* find(std::string_view name) const;
    bool operator==(const Verdict&) const = default;
};

struct SolverBudget {
    std::uint64_t max_steps = 10000;    // SLD resolution steps
    std::uint64_t max_boxes = 100000;   // ICP boxes
    unsigned max_universe = 8;          // largest universe tried by the set search
    std::uint64_t wall_ms = 10000;      // per obligation

    bool operator==(const SolverBudget&) const = default;
};

// ------------------------------------------------------------------ queries

struct ArithFormula {
    enum class Kind { Atom, And, Or };

    Kind kind = Kind::And;
    Comparison atom;
    std::vector<ArithFormula> args;

    static ArithFormula leaf(Comparison c);
    static ArithFormula all(std::vector<ArithFormula> xs);
    static ArithFormula any(std::vector<ArithFormula> xs);

    bool operator==(const ArithFormula&) const = default;
};

struct SetQueryFormula {
    enum class Kind { Atom, And, Or, Not };

    Kind kind = Kind::And;
    SetAtom atom;
    std::vector<SetQueryFormula> args;

    bool operator==(const SetQueryFormula&) const = default;
};

struct SetQuery {
    bool concrete = false;
    std::vector<std::string> sets;  // declared, in declaration order
    std::vector<std::string> elems;
    std::vector<SetBinding> bindings;
    SetQueryFormula formula;

    bool operator==(const SetQuery&) const = default;
};

/// One way the negated conclusion can be witnessed.
struct LogicAlternative {
    std::vector<Clause> program;
    std::vector<Literal> required;
    /// Non-empty: the conclusion was a conjunction of negative literals, so its
    /// negation holds when any of these positive goals succeeds.
    std::vector<std::vector<Literal>> disjuncts;
    /// Otherwise: the negation holds when this goal finitely fails.
    std::vector<Literal> closed_goal;

    bool operator==(const LogicAlternative&) const = default;
};

struct LogicQuery {
    std::vector<LogicAlternative> alternatives;

    bool operator==(const LogicQuery&) const = default;
};

using Query = std::variant<LogicQuery, ArithFormula, SetQuery>;

struct Obligation {
    std::vector<ConstraintAst> premises;
    ConstraintAst conclusion;
    Relation relation = Relation::And;
    CType ctype = CType::Arithmetic;
};

/// And: F1 ∧ ... ∧ Fn ∧ ¬F.  Or: (F1 ∨ ... ∨ Fn) ∧ ¬F.
/// Throws Error("MixedCtypes") when a member does not fit `ctype`.
Query build_query(const Obligation& ob);

/// The premises-only part of the query (used for the vacuity check).
Query build_premise_query(const Obligation& ob);

/// Negation normal form of ¬(c1 ∧ ... ∧ cn).
ArithFormula negate(const ArithConj& c);
ArithFormula to_formula(const ArithConj& c);

// ------------------------------------------------------------------- solvers

Verdict solve_arith(const ArithFormula& q, const SolverBudget& budget = {});
Verdict solve_logic(const LogicQuery& q, const SolverBudget& budget = {});
Verdict solve_abstract_set(const SetQuery& q, const SolverBudget& budget = {});
Verdict solve_concrete_set(const SetQuery& q);
Verdict solve(const Query& q, const SolverBudget& budget = {});

/// Solves the obligation and, on Unsat, checks whether the premises alone are
/// unsatisfiable (diagnostics["vacuous_premises"] = true).
Verdict discharge(const Obligation& ob, const SolverBudget& budget = {});

std::string export_smtlib(const ArithFormula& q);

// -------------------------------------------------------- exact evaluation

using Assignment = std::map<std::string, Rational>;

/// nullopt when a variable is unassigned or a division by zero occurs.
std::optional<Rational> evaluate(const Term& t, const Assignment& a);
bool holds(const Comparison& c, const Assignment& a);
bool holds(const ArithFormula& f, const Assignment& a);

std::vector<std::string> variables_of(const ArithFormula& f);
std::size_t atom_count(const ArithFormula& f);

} // namespace tdt
