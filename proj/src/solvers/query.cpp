#include "tdt/solver.hpp"

#include <algorithm>

namespace tdt {

namespace {

bool compatible(CType member, CType family)
{
    if (member == family)
        return true;
    // A concrete family may quote a plain set formula (no literals of its own).
    return family == CType::ConcreteSet && member == CType::AbstractSet;
}

void check_ctypes(const Obligation& ob)
{
    auto check = [&](const ConstraintAst& a, const char* what) {
        CType c = classify(a);
        if (!compatible(c, ob.ctype))
            throw Error("MixedCtypes", std::string(what) + " is " + std::string(to_string(c)) + " but the family is " +
                                           std::string(to_string(ob.ctype)));
    };
    for (const auto& p : ob.premises)
        check(p, "a premise");
    check(ob.conclusion, "the conclusion");
}

Comparison flip(const Comparison& c, CmpOp op)
{
    return Comparison{c.lhs, op, c.rhs};
}

ArithFormula negate_atom(const Comparison& c)
{
    switch (c.op) {
    case CmpOp::Lt: return ArithFormula::leaf(flip(c, CmpOp::Ge));
    case CmpOp::Le: return ArithFormula::leaf(flip(c, CmpOp::Gt));
    case CmpOp::Gt: return ArithFormula::leaf(flip(c, CmpOp::Le));
    case CmpOp::Ge: return ArithFormula::leaf(flip(c, CmpOp::Lt));
    case CmpOp::Eq: break;
    }
    return ArithFormula::any({ArithFormula::leaf(flip(c, CmpOp::Lt)), ArithFormula::leaf(flip(c, CmpOp::Gt))});
}

// ------------------------------------------------------------------ sets

struct SetParts {
    std::vector<std::string> sets;
    std::vector<std::string> elems;
    std::vector<SetBinding> bindings;
};

void absorb(SetParts& parts, const SetFormula& f)
{
    for (const auto& s : f.sets)
        if (std::find(parts.sets.begin(), parts.sets.end(), s) == parts.sets.end())
            parts.sets.push_back(s);
    for (const auto& e : f.elems)
        if (std::find(parts.elems.begin(), parts.elems.end(), e) == parts.elems.end())
            parts.elems.push_back(e);
}

const SetFormula& absorb(SetParts& parts, const ConstraintAst& ast)
{
    if (const auto* f = std::get_if<SetFormula>(&ast)) {
        absorb(parts, *f);
        return *f;
    }
    const auto& p = std::get<ConcreteSetProgram>(ast);
    for (const auto& b : p.bindings) {
        auto it = std::find_if(parts.bindings.begin(), parts.bindings.end(),
                               [&](const SetBinding& x) { return x.name == b.name; });
        if (it == parts.bindings.end())
            parts.bindings.push_back(b);
        else if (it->elements != b.elements)
            throw Error("ConflictingBinding", "set '" + b.name + "' is bound to two different literals");
    }
    absorb(parts, p.goal);
    return p.goal;
}

SetQueryFormula set_all(std::vector<SetQueryFormula> xs)
{
    if (xs.size() == 1)
        return std::move(xs.front());
    SetQueryFormula f;
    f.kind = SetQueryFormula::Kind::And;
    f.args = std::move(xs);
    return f;
}

SetQueryFormula set_any(std::vector<SetQueryFormula> xs)
{
    if (xs.size() == 1)
        return std::move(xs.front());
    SetQueryFormula f;
    f.kind = SetQueryFormula::Kind::Or;
    f.args = std::move(xs);
    return f;
}

SetQueryFormula set_conj(const SetFormula& f)
{
    std::vector<SetQueryFormula> atoms;
    for (const auto& a : f.atoms) {
        SetQueryFormula x;
        x.kind = SetQueryFormula::Kind::Atom;
        x.atom = a;
        atoms.push_back(std::move(x));
    }
    if (atoms.empty()) {
        SetQueryFormula t;
        t.kind = SetQueryFormula::Kind::And;
        return t;
    }
    return set_all(std::move(atoms));
}

SetQuery build_set_query(const Obligation& ob, bool with_conclusion)
{
    SetParts parts;
    std::vector<SetQueryFormula> premises;
    for (const auto& p : ob.premises)
        premises.push_back(set_conj(absorb(parts, p)));
    std::vector<SetQueryFormula> top;
    if (!premises.empty())
        top.push_back(ob.relation == Relation::And ? set_all(std::move(premises)) : set_any(std::move(premises)));
    if (with_conclusion) {
        SetQueryFormula neg;
        neg.kind = SetQueryFormula::Kind::Not;
        neg.args.push_back(set_conj(absorb(parts, ob.conclusion)));
        top.push_back(std::move(neg));
    } else {
        absorb(parts, ob.conclusion);
    }
    SetQuery q;
    q.concrete = ob.ctype == CType::ConcreteSet;
    q.sets = std::move(parts.sets);
    q.elems = std::move(parts.elems);
    q.bindings = std::move(parts.bindings);
    if (top.empty()) {
        q.formula.kind = SetQueryFormula::Kind::And;
    } else if (top.size() == 1 || ob.relation == Relation::And) {
        // Flatten And-of-And so the query reads as a plain conjunction.
        std::vector<SetQueryFormula> flat;
        for (auto& t : top) {
            if (t.kind == SetQueryFormula::Kind::And)
                for (auto& a : t.args)
                    flat.push_back(std::move(a));
            else
                flat.push_back(std::move(t));
        }
        q.formula = set_all(std::move(flat));
    } else {
        q.formula = set_all(std::move(top));
    }
    return q;
}

// ----------------------------------------------------------------- logic

LogicQuery build_logic_query(const Obligation& ob)
{
    const auto& concl = std::get<LogicProgram>(ob.conclusion);
    std::vector<Clause> concl_rules;
    std::vector<Literal> goal;
    for (const auto& c : concl.clauses) {
        if (c.is_fact())
            goal.push_back(Literal{false, c.head});
        else
            concl_rules.push_back(c);
    }
    for (const auto& q : concl.queries)
        goal.insert(goal.end(), q.begin(), q.end());

    bool all_negative = !goal.empty() && std::all_of(goal.begin(), goal.end(), [](const Literal& l) { return l.negated; });

    auto make = [&](const std::vector<const LogicProgram*>& members) {
        LogicAlternative alt;
        for (const auto* m : members) {
            alt.program.insert(alt.program.end(), m->clauses.begin(), m->clauses.end());
            for (const auto& q : m->queries)
                alt.required.insert(alt.required.end(), q.begin(), q.end());
        }
        alt.program.insert(alt.program.end(), concl_rules.begin(), concl_rules.end());
        if (all_negative) {
            for (const auto& l : goal)
                alt.disjuncts.push_back({Literal{false, l.atom}});
        } else {
            alt.closed_goal = goal;
        }
        return alt;
    };

    LogicQuery q;
    std::vector<const LogicProgram*> premises;
    for (const auto& p : ob.premises)
        premises.push_back(&std::get<LogicProgram>(p));
    if (ob.relation == Relation::And || premises.empty()) {
        q.alternatives.push_back(make(premises));
    } else {
        for (const auto* p : premises)
            q.alternatives.push_back(make({p}));
    }
    return q;
}

} // namespace

ArithFormula ArithFormula::leaf(Comparison c)
{
    ArithFormula f;
    f.kind = Kind::Atom;
    f.atom = std::move(c);
    return f;
}

ArithFormula ArithFormula::all(std::vector<ArithFormula> xs)
{
    if (xs.size() == 1)
        return std::move(xs.front());
    ArithFormula f;
    f.kind = Kind::And;
    for (auto& x : xs) {
        if (x.kind == Kind::And)
            for (auto& a : x.args)
                f.args.push_back(std::move(a));
        else
            f.args.push_back(std::move(x));
    }
    return f;
}

ArithFormula ArithFormula::any(std::vector<ArithFormula> xs)
{
    if (xs.size() == 1)
        return std::move(xs.front());
    ArithFormula f;
    f.kind = Kind::Or;
    for (auto& x : xs) {
        if (x.kind == Kind::Or)
            for (auto& a : x.args)
                f.args.push_back(std::move(a));
        else
            f.args.push_back(std::move(x));
    }
    return f;
}

ArithFormula to_formula(const ArithConj& c)
{
    std::vector<ArithFormula> atoms;
    for (const auto& a : c.atoms)
        atoms.push_back(ArithFormula::leaf(a));
    return ArithFormula::all(std::move(atoms));
}

ArithFormula negate(const ArithConj& c)
{
    std::vector<ArithFormula> alts;
    for (const auto& a : c.atoms)
        alts.push_back(negate_atom(a));
    return ArithFormula::any(std::move(alts));
}

Query build_query(const Obligation& ob)
{
    check_ctypes(ob);
    switch (ob.ctype) {
    case CType::Arithmetic: {
        std::vector<ArithFormula> premises;
        for (const auto& p : ob.premises)
            premises.push_back(to_formula(std::get<ArithConj>(p)));
        std::vector<ArithFormula> top;
        if (!premises.empty())
            top.push_back(ob.relation == Relation::And ? ArithFormula::all(std::move(premises))
                                                       : ArithFormula::any(std::move(premises)));
        top.push_back(negate(std::get<ArithConj>(ob.conclusion)));
        return ArithFormula::all(std::move(top));
    }
    case CType::AbstractSet:
    case CType::ConcreteSet:
        return build_set_query(ob, true);
    case CType::Logical:
        return build_logic_query(ob);
    case CType::None:
        break;
    }
    throw Error("MixedCtypes", "obligation has no constraint type");
}

Query build_premise_query(const Obligation& ob)
{
    check_ctypes(ob);
    switch (ob.ctype) {
    case CType::Arithmetic: {
        std::vector<ArithFormula> premises;
        for (const auto& p : ob.premises)
            premises.push_back(to_formula(std::get<ArithConj>(p)));
        if (premises.empty())
            return ArithFormula::all({});
        return ob.relation == Relation::And ? ArithFormula::all(std::move(premises))
                                            : ArithFormula::any(std::move(premises));
    }
    case CType::AbstractSet:
    case CType::ConcreteSet:
        return build_set_query(ob, false);
    case CType::Logical: {
        LogicQuery q = build_logic_query(ob);
        for (auto& alt : q.alternatives) {
            alt.disjuncts.clear();
            alt.closed_goal.clear();
        }
        return q;
    }
    case CType::None:
        break;
    }
    throw Error("MixedCtypes", "obligation has no constraint type");
}

} // namespace tdt
