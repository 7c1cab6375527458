#include "generators.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace gen {

using namespace tdt;

Rational small_number(Rng& rng, int lim, bool halves)
{
    if (halves && chance(rng, 0.25)) {
        Rational q(uniform(rng, -2 * lim, 2 * lim), 2);
        q.canonicalize();
        return q;
    }
    return Rational(uniform(rng, -lim, lim));
}

namespace {

const std::vector<std::string> arith_vars{"x", "y", "z"};

std::vector<std::string> choose_vars(Rng& rng)
{
    auto vs = arith_vars;
    std::shuffle(vs.begin(), vs.end(), rng);
    vs.resize(static_cast<std::size_t>(uniform(rng, 1, 3)));
    return vs;
}

Term scaled(Rng& rng, Term t)
{
    int c = uniform(rng, -3, 3);
    if (c == 0 || c == 1)
        return t;
    if (c == -1)
        return Term::neg(std::move(t));
    return Term::binary(TermOp::Mul, Term::num(Rational(c)), std::move(t));
}

Term sum(std::vector<Term> parts)
{
    Term out = std::move(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i)
        out = Term::binary(TermOp::Add, std::move(out), std::move(parts[i]));
    return out;
}

CmpOp random_op(Rng& rng)
{
    static const std::vector<CmpOp> ops{CmpOp::Eq, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
    // Equalities make most random systems infeasible; keep them rarer.
    if (chance(rng, 0.1))
        return CmpOp::Eq;
    return ops[static_cast<std::size_t>(uniform(rng, 1, 4))];
}

} // namespace

Term linear_term(Rng& rng, const std::vector<std::string>& vars)
{
    std::vector<Term> parts;
    for (const auto& v : vars)
        if (chance(rng, 0.6)) {
            Term t = scaled(rng, Term::var(v));
            if (chance(rng, 0.1))
                t = Term::binary(TermOp::Div, std::move(t), Term::num(Rational(uniform(rng, 2, 3))));
            parts.push_back(std::move(t));
        }
    if (parts.empty())
        parts.push_back(Term::var(pick(rng, vars)));
    if (chance(rng, 0.5))
        parts.push_back(Term::num(small_number(rng, 5)));
    return sum(std::move(parts));
}

Term nonlinear_term(Rng& rng, const std::vector<std::string>& vars)
{
    std::vector<Term> parts;
    const std::string& a = pick(rng, vars);
    const std::string& b = pick(rng, vars);
    parts.push_back(scaled(rng, Term::binary(TermOp::Mul, Term::var(a), Term::var(b))));
    if (chance(rng, 0.5))
        parts.push_back(scaled(rng, Term::var(pick(rng, vars))));
    if (chance(rng, 0.5))
        parts.push_back(Term::num(small_number(rng, 3)));
    return sum(std::move(parts));
}

Comparison comparison(Rng& rng, Term lhs, Term rhs)
{
    return Comparison{std::move(lhs), random_op(rng), std::move(rhs)};
}

namespace {

Comparison linear_atom(Rng& rng, const std::vector<std::string>& vars)
{
    Term rhs = chance(rng, 0.7) ? Term::num(small_number(rng, 5)) : linear_term(rng, vars);
    return comparison(rng, linear_term(rng, vars), std::move(rhs));
}

Comparison nonlinear_atom(Rng& rng, const std::vector<std::string>& vars)
{
    if (chance(rng, 0.4))
        return linear_atom(rng, vars);
    return comparison(rng, nonlinear_term(rng, vars), Term::num(small_number(rng, 4)));
}

ArithConj conj(Rng& rng, const std::vector<std::string>& vars, int max_atoms, bool nonlinear)
{
    ArithConj c;
    int n = uniform(rng, 1, max_atoms);
    for (int i = 0; i < n; ++i)
        c.atoms.push_back(nonlinear ? nonlinear_atom(rng, vars) : linear_atom(rng, vars));
    return c;
}

ArithFamily arith_family(Rng& rng, bool nonlinear)
{
    ArithFamily f;
    f.vars = choose_vars(rng);
    int np = uniform(rng, 1, 3);
    for (int i = 0; i < np; ++i)
        f.premises.push_back(conj(rng, f.vars, 3, nonlinear));
    f.conclusion = conj(rng, f.vars, 2, nonlinear);
    f.relation = chance(rng, 0.2) ? Relation::Or : Relation::And;
    if (nonlinear) {
        ArithConj box;
        for (const auto& v : f.vars) {
            box.atoms.push_back(Comparison{Term::num(Rational(-3)), CmpOp::Le, Term::var(v)});
            box.atoms.push_back(Comparison{Term::var(v), CmpOp::Le, Term::num(Rational(3))});
        }
        if (f.relation == Relation::And)
            f.premises.insert(f.premises.begin(), box);
        else
            for (auto& p : f.premises)
                p.atoms.insert(p.atoms.begin(), box.atoms.begin(), box.atoms.end());
    }
    return f;
}

} // namespace

ArithFamily linear_family(Rng& rng)
{
    return arith_family(rng, false);
}

ArithFamily nonlinear_family(Rng& rng)
{
    return arith_family(rng, true);
}

ArithConj random_arith_conj(Rng& rng, bool nonlinear)
{
    return conj(rng, choose_vars(rng), 4, nonlinear);
}

// --------------------------------------------------------------------- logic

namespace {

struct Pred {
    std::string name;
    std::size_t arity;
};

const std::vector<Pred> edb{{"e1", 1}, {"e2", 2}};
const std::vector<Pred> idb{{"p", 1}, {"q", 2}, {"r", 1}, {"s", 1}};
const std::vector<std::string> constants{"a", "b", "c"};
const std::vector<std::string> logic_vars{"X", "Y", "Z"};

LTerm constant_term(Rng& rng)
{
    return LTerm{false, pick(rng, constants)};
}

LAtom atom_over(Rng& rng, const Pred& p, const std::vector<std::string>& vars, double constant_rate)
{
    LAtom a{p.name, {}};
    for (std::size_t i = 0; i < p.arity; ++i) {
        if (vars.empty() || chance(rng, constant_rate))
            a.args.push_back(constant_term(rng));
        else
            a.args.push_back(LTerm{true, pick(rng, vars)});
    }
    return a;
}

Clause rule_for(Rng& rng, std::size_t idb_index)
{
    const Pred& head = idb[idb_index];
    std::vector<Pred> lower = edb;
    lower.insert(lower.end(), idb.begin(), idb.begin() + static_cast<long>(idb_index));

    Clause c;
    int npos = uniform(rng, 1, 2);
    std::vector<std::string> bound;
    for (int i = 0; i < npos; ++i) {
        LAtom a = atom_over(rng, pick(rng, lower), logic_vars, 0.15);
        for (const auto& t : a.args)
            if (t.is_var && std::find(bound.begin(), bound.end(), t.name) == bound.end())
                bound.push_back(t.name);
        c.body.push_back(Literal{false, std::move(a)});
    }
    if (chance(rng, 0.15))
        c.body.push_back(Literal{false, atom_over(rng, head, bound, 0.1)});
    if (chance(rng, 0.4))
        c.body.push_back(Literal{true, atom_over(rng, pick(rng, lower), bound, 0.2)});
    c.head = atom_over(rng, head, bound, 0.1);
    return c;
}

std::vector<Clause> random_program(Rng& rng)
{
    std::vector<Clause> out;
    for (const auto& c1 : constants)
        if (chance(rng, 0.4))
            out.push_back(Clause{LAtom{"e1", {LTerm{false, c1}}}, {}});
    for (const auto& c1 : constants)
        for (const auto& c2 : constants)
            if (chance(rng, 0.25))
                out.push_back(Clause{LAtom{"e2", {LTerm{false, c1}, LTerm{false, c2}}}, {}});
    for (std::size_t i = 0; i < idb.size(); ++i) {
        int n = uniform(rng, 0, 2);
        for (int k = 0; k < n; ++k)
            out.push_back(rule_for(rng, i));
    }
    return out;
}

} // namespace

LogicFamily logic_family(Rng& rng)
{
    LogicFamily f;
    auto program = random_program(rng);
    if (chance(rng, 0.2)) {
        f.relation = Relation::Or;
        f.premises.push_back(LogicProgram{program, {}});
        f.premises.push_back(LogicProgram{random_program(rng), {}});
    } else {
        // Split the clauses over one to three premises; they are conjoined.
        int parts = uniform(rng, 1, 3);
        f.premises.resize(static_cast<std::size_t>(parts));
        for (auto& c : program)
            f.premises[static_cast<std::size_t>(uniform(rng, 0, parts - 1))].clauses.push_back(std::move(c));
    }
    std::vector<Pred> all = edb;
    all.insert(all.end(), idb.begin(), idb.end());
    f.negative_goal = chance(rng, 0.4);
    std::vector<Literal> goal;
    int n = uniform(rng, 1, 2);
    for (int i = 0; i < n; ++i)
        goal.push_back(Literal{f.negative_goal, atom_over(rng, pick(rng, all), logic_vars, 0.7)});
    f.conclusion.queries.push_back(std::move(goal));
    return f;
}

// ---------------------------------------------------------------------- sets

namespace {

SetTerm set_term(Rng& rng, const std::vector<std::string>& sets, int depth)
{
    SetTerm t;
    if (depth == 0 || chance(rng, 0.5)) {
        if (chance(rng, 0.1)) {
            t.op = SetOp::Empty;
        } else {
            t.op = SetOp::Name;
            t.name = pick(rng, sets);
        }
        return t;
    }
    static const std::vector<SetOp> ops{SetOp::Inter, SetOp::Union, SetOp::Diff};
    t.op = pick(rng, ops);
    t.args.push_back(set_term(rng, sets, depth - 1));
    t.args.push_back(set_term(rng, sets, depth - 1));
    return t;
}

SetAtom set_atom(Rng& rng, const std::vector<std::string>& sets, const std::vector<std::string>& elems)
{
    SetAtom a;
    int k = uniform(rng, elems.empty() ? 2 : 0, 3);
    a.kind = std::vector<SetAtomKind>{SetAtomKind::In, SetAtomKind::NotIn, SetAtomKind::Eq, SetAtomKind::Subset}
        [static_cast<std::size_t>(k)];
    if (k < 2) {
        a.elem.name = pick(rng, elems);
        a.rhs = set_term(rng, sets, 2);
    } else {
        a.lhs = set_term(rng, sets, 2);
        a.rhs = set_term(rng, sets, 1);
    }
    return a;
}

} // namespace

SetFamily set_family(Rng& rng)
{
    SetFamily f;
    std::vector<std::string> set_pool{"A", "B", "C"};
    std::vector<std::string> elem_pool{"e", "f"};
    int S = uniform(rng, 1, 3);
    int E = uniform(rng, 0, std::min(2, 3 - S));
    f.sets.assign(set_pool.begin(), set_pool.begin() + S);
    f.elems.assign(elem_pool.begin(), elem_pool.begin() + E);

    int np = uniform(rng, 1, 2);
    for (int i = 0; i < np; ++i) {
        SetFormula p;
        int na = uniform(rng, 1, 3);
        for (int k = 0; k < na; ++k)
            p.atoms.push_back(set_atom(rng, f.sets, f.elems));
        f.premises.push_back(std::move(p));
    }
    f.premises.front().sets = f.sets;
    f.premises.front().elems = f.elems;
    int nc = uniform(rng, 1, 2);
    for (int k = 0; k < nc; ++k)
        f.conclusion.atoms.push_back(set_atom(rng, f.sets, f.elems));
    f.relation = chance(rng, 0.2) ? Relation::Or : Relation::And;
    if (f.relation == Relation::Or)
        for (auto& p : f.premises) {
            p.sets = f.sets;
            p.elems = f.elems;
        }
    return f;
}

ConcreteSetProgram random_concrete_program(Rng& rng)
{
    ConcreteSetProgram p;
    std::vector<std::string> names{"C", "D", "E"};
    int n = uniform(rng, 1, 3);
    for (int i = 0; i < n; ++i) {
        SetBinding b{names[static_cast<std::size_t>(i)], {}};
        for (std::uint64_t e = 0; e < 6; ++e)
            if (chance(rng, 0.4))
                b.elements.insert(e);
        p.bindings.push_back(std::move(b));
    }
    std::vector<std::string> sets(names.begin(), names.begin() + n);
    int na = uniform(rng, 1, 2);
    for (int k = 0; k < na; ++k) {
        SetAtom a;
        if (chance(rng, 0.5)) {
            a.kind = chance(rng, 0.5) ? SetAtomKind::In : SetAtomKind::NotIn;
            a.elem.value = static_cast<std::uint64_t>(uniform(rng, 0, 5));
            a.rhs = set_term(rng, sets, 1);
        } else {
            a.kind = chance(rng, 0.5) ? SetAtomKind::Eq : SetAtomKind::Subset;
            a.lhs = set_term(rng, sets, 1);
            a.rhs = set_term(rng, sets, 1);
        }
        p.goal.atoms.push_back(std::move(a));
    }
    return p;
}

// ---------------------------------------------------------------- documents

namespace {

const std::vector<std::string> words{"brake", "sensor", "timing", "load",   "friction", "speed",
                                     "route", "power",  "safe",   "margin", "obstacle", "shelf"};

std::string sentence(Rng& rng)
{
    std::string s;
    int n = uniform(rng, 2, 5);
    for (int i = 0; i < n; ++i)
        s += (i ? " " : "") + pick(rng, words);
    return s;
}

} // namespace

GsnDocument gsn_document(Rng& rng)
{
    GsnDocument doc;
    int counter = 0;
    auto add = [&](GsnKind kind) -> GsnElement& {
        GsnElement e;
        e.kind = kind;
        e.id = std::string(1, "GYSCAJ"[static_cast<int>(kind)]) + std::to_string(++counter);
        e.text = chance(rng, 0.05) && !doc.elements.empty() ? doc.elements.front().text : sentence(rng);
        if (kind == GsnKind::Goal || kind == GsnKind::Solution) {
            if (chance(rng, 0.4)) {
                e.ctype = CType::Arithmetic;
                e.expr = pick(rng, words) + " < " + std::to_string(uniform(rng, 1, 9));
            }
            if (chance(rng, 0.2))
                e.relation = Relation::Or;
            if (chance(rng, 0.5))
                e.layout = Layout{static_cast<double>(uniform(rng, 0, 800)), static_cast<double>(uniform(rng, 0, 600))};
        }
        doc.elements.push_back(std::move(e));
        return doc.elements.back();
    };
    auto attach_aux = [&](const std::string& owner) {
        static const std::vector<GsnKind> aux{GsnKind::Context, GsnKind::Assumption, GsnKind::Justification};
        int n = uniform(rng, 0, 2);
        for (int i = 0; i < n; ++i) {
            std::string id = add(pick(rng, aux)).id;
            doc.edges.push_back(GsnEdge{owner, id, GsnEdgeType::InContextOf});
        }
    };

    int budget = uniform(rng, 1, 14);
    std::function<void(const std::string&, GsnKind, int)> grow = [&](const std::string& id, GsnKind kind, int depth) {
        attach_aux(id);
        if (kind == GsnKind::Solution || depth >= 4)
            return;
        int n = uniform(rng, 0, 3);
        for (int i = 0; i < n && budget > 0; ++i) {
            --budget;
            GsnKind child;
            int r = uniform(rng, 0, 9);
            if (kind == GsnKind::Goal)
                child = r < 4 ? GsnKind::Goal : r < 7 ? GsnKind::Solution : GsnKind::Strategy;
            else
                child = r < 6 ? GsnKind::Goal : GsnKind::Solution;
            std::string cid = add(child).id;
            doc.edges.push_back(GsnEdge{id, cid, GsnEdgeType::SupportedBy});
            grow(cid, child, depth + 1);
        }
    };
    std::string root = add(GsnKind::Goal).id;
    grow(root, GsnKind::Goal, 0);

    std::shuffle(doc.elements.begin(), doc.elements.end(), rng);
    return doc;
}

RuleText rule_text(Rng& rng)
{
    RuleText rt;
    int counter = 0;
    int budget = uniform(rng, 1, 12);
    std::function<std::string(int)> grow = [&](int depth) {
        std::string name = "g" + std::to_string(counter++);
        if (depth >= 4 || budget <= 0 || (depth > 0 && chance(rng, 0.4)))
            return name;
        Rule r{name, {}};
        int n = uniform(rng, 1, 3);
        std::size_t slot = rt.rules.size();
        rt.rules.push_back(r);
        for (int i = 0; i < n && budget > 0; ++i) {
            --budget;
            std::string child = grow(depth + 1);
            rt.rules[slot].body.push_back(child);
        }
        if (rt.rules[slot].body.empty())
            rt.rules[slot].body.push_back("g" + std::to_string(counter++));
        return name;
    };
    grow(0);
    return rt;
}

} // namespace gen
