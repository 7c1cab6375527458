#include "tdt/solver.hpp"

namespace tdt {

std::string_view to_string(Outcome o)
{
    switch (o) {
    case Outcome::Unsat: return "unsat";
    case Outcome::Sat: return "sat";
    case Outcome::Unknown: return "unknown";
    }
    return "unknown";
}

Outcome outcome_from_string(std::string_view s)
{
    if (s == "unsat")
        return Outcome::Unsat;
    if (s == "sat")
        return Outcome::Sat;
    if (s == "unknown")
        return Outcome::Unknown;
    throw Error("ValidationFailed", "unknown solver outcome '" + std::string(s) + "'");
}

ModelValue ModelValue::of_number(const Rational& r)
{
    ModelValue v;
    v.kind = Kind::Number;
    v.number = r;
    return v;
}

ModelValue ModelValue::of_term(std::string t)
{
    ModelValue v;
    v.kind = Kind::Term;
    v.term = std::move(t);
    return v;
}

ModelValue ModelValue::of_set(std::vector<std::uint64_t> s)
{
    ModelValue v;
    v.kind = Kind::Set;
    v.set = std::move(s);
    return v;
}

std::string ModelValue::display() const
{
    switch (kind) {
    case Kind::Number: return to_display_string(number);
    case Kind::Term: return term;
    case Kind::Set: {
        std::string out = "{";
        for (std::size_t i = 0; i < set.size(); ++i)
            out += (i ? ", " : "") + std::to_string(set[i]);
        return out + "}";
    }
    }
    return "";
}

const ModelValue* Verdict::find(std::string_view name) const
{
    for (const auto& b : model)
        if (b.name == name)
            return &b.value;
    return nullptr;
}

Verdict solve(const Query& q, const SolverBudget& budget)
{
    if (const auto* a = std::get_if<ArithFormula>(&q))
        return solve_arith(*a, budget);
    if (const auto* l = std::get_if<LogicQuery>(&q))
        return solve_logic(*l, budget);
    const auto& s = std::get<SetQuery>(q);
    return s.concrete ? solve_concrete_set(s) : solve_abstract_set(s, budget);
}

Verdict discharge(const Obligation& ob, const SolverBudget& budget)
{
    Verdict v = solve(build_query(ob), budget);
    if (v.outcome == Outcome::Unsat && ob.ctype != CType::Logical && !ob.premises.empty()) {
        Verdict p = solve(build_premise_query(ob), budget);
        if (p.outcome == Outcome::Unsat)
            v.diagnostics["vacuous_premises"] = true;
    }
    return v;
}

} // namespace tdt
