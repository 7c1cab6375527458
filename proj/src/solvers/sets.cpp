#include "tdt/solver.hpp"

#include <algorithm>
#include <map>

namespace tdt {

namespace {

constexpr std::uint64_t max_assignments = std::uint64_t(1) << 26;

// ------------------------------------------------------------- abstract search

struct Names {
    std::vector<std::string> sets;
    std::vector<std::string> elems;
    std::uint64_t max_literal = 0;
    bool has_literal = false;
};

void add_unique(std::vector<std::string>& v, const std::string& n)
{
    if (std::find(v.begin(), v.end(), n) == v.end())
        v.push_back(n);
}

void scan(const SetTerm& t, Names& names)
{
    if (t.op == SetOp::Name)
        add_unique(names.sets, t.name);
    for (const auto& a : t.args)
        scan(a, names);
}

void scan(const SetQueryFormula& f, Names& names)
{
    if (f.kind != SetQueryFormula::Kind::Atom) {
        for (const auto& a : f.args)
            scan(a, names);
        return;
    }
    const SetAtom& a = f.atom;
    if (a.kind == SetAtomKind::In || a.kind == SetAtomKind::NotIn) {
        if (a.elem.value) {
            names.has_literal = true;
            names.max_literal = std::max(names.max_literal, *a.elem.value);
        } else {
            add_unique(names.elems, a.elem.name);
        }
        scan(a.rhs, names);
    } else {
        scan(a.lhs, names);
        scan(a.rhs, names);
    }
}

struct Env {
    std::map<std::string, std::uint64_t> sets;
    std::map<std::string, std::uint64_t> elems;
};

std::uint64_t eval(const SetTerm& t, const Env& env)
{
    switch (t.op) {
    case SetOp::Name: return env.sets.at(t.name);
    case SetOp::Empty: return 0;
    case SetOp::Literal: {
        std::uint64_t m = 0;
        for (auto e : t.elements)
            if (e < 64)
                m |= std::uint64_t(1) << e;
        return m;
    }
    case SetOp::Inter: return eval(t.args[0], env) & eval(t.args[1], env);
    case SetOp::Union: return eval(t.args[0], env) | eval(t.args[1], env);
    case SetOp::Diff: return eval(t.args[0], env) & ~eval(t.args[1], env);
    }
    return 0;
}

bool holds(const SetQueryFormula& f, const Env& env)
{
    switch (f.kind) {
    case SetQueryFormula::Kind::And:
        return std::all_of(f.args.begin(), f.args.end(), [&](const SetQueryFormula& x) { return holds(x, env); });
    case SetQueryFormula::Kind::Or:
        return std::any_of(f.args.begin(), f.args.end(), [&](const SetQueryFormula& x) { return holds(x, env); });
    case SetQueryFormula::Kind::Not: return !holds(f.args.front(), env);
    case SetQueryFormula::Kind::Atom: break;
    }
    const SetAtom& a = f.atom;
    switch (a.kind) {
    case SetAtomKind::In:
    case SetAtomKind::NotIn: {
        std::uint64_t e = a.elem.value ? *a.elem.value : env.elems.at(a.elem.name);
        bool in = e < 64 && ((eval(a.rhs, env) >> e) & 1);
        return a.kind == SetAtomKind::In ? in : !in;
    }
    case SetAtomKind::Eq: return eval(a.lhs, env) == eval(a.rhs, env);
    case SetAtomKind::Subset: return (eval(a.lhs, env) & ~eval(a.rhs, env)) == 0;
    }
    return false;
}

std::vector<std::uint64_t> members(std::uint64_t mask)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < 64; ++i)
        if ((mask >> i) & 1)
            out.push_back(i);
    return out;
}

// ------------------------------------------------------------ concrete sets

using ElemSet = std::set<std::uint64_t>;

struct ConcreteEnv {
    std::map<std::string, ElemSet> sets;
};

ElemSet ceval(const SetTerm& t, const ConcreteEnv& env)
{
    switch (t.op) {
    case SetOp::Name: {
        auto it = env.sets.find(t.name);
        if (it == env.sets.end())
            throw Error("UnboundSetName", "set '" + t.name + "' has no literal binding");
        return it->second;
    }
    case SetOp::Empty: return {};
    case SetOp::Literal: return t.elements;
    default: break;
    }
    ElemSet l = ceval(t.args[0], env), r = ceval(t.args[1], env), out;
    switch (t.op) {
    case SetOp::Inter: std::set_intersection(l.begin(), l.end(), r.begin(), r.end(), std::inserter(out, out.end())); break;
    case SetOp::Union: std::set_union(l.begin(), l.end(), r.begin(), r.end(), std::inserter(out, out.end())); break;
    case SetOp::Diff: std::set_difference(l.begin(), l.end(), r.begin(), r.end(), std::inserter(out, out.end())); break;
    default: break;
    }
    return out;
}

bool cholds(const SetQueryFormula& f, const ConcreteEnv& env)
{
    switch (f.kind) {
    case SetQueryFormula::Kind::And:
        return std::all_of(f.args.begin(), f.args.end(), [&](const SetQueryFormula& x) { return cholds(x, env); });
    case SetQueryFormula::Kind::Or:
        return std::any_of(f.args.begin(), f.args.end(), [&](const SetQueryFormula& x) { return cholds(x, env); });
    case SetQueryFormula::Kind::Not: return !cholds(f.args.front(), env);
    case SetQueryFormula::Kind::Atom: break;
    }
    const SetAtom& a = f.atom;
    switch (a.kind) {
    case SetAtomKind::In:
    case SetAtomKind::NotIn: {
        if (!a.elem.value)
            throw Error("UnboundSetName", "element '" + a.elem.name + "' has no literal value");
        bool in = ceval(a.rhs, env).count(*a.elem.value) > 0;
        return a.kind == SetAtomKind::In ? in : !in;
    }
    case SetAtomKind::Eq: return ceval(a.lhs, env) == ceval(a.rhs, env);
    case SetAtomKind::Subset: {
        ElemSet l = ceval(a.lhs, env), r = ceval(a.rhs, env);
        return std::includes(r.begin(), r.end(), l.begin(), l.end());
    }
    }
    return false;
}

} // namespace

Verdict solve_abstract_set(const SetQuery& q, const SolverBudget& budget)
{
    Names names;
    names.sets = q.sets;
    names.elems = q.elems;
    scan(q.formula, names);
    // A name declared as an element is never a set, even if mentioned as one.
    std::erase_if(names.sets, [&](const std::string& s) {
        return std::find(names.elems.begin(), names.elems.end(), s) != names.elems.end();
    });
    for (const auto& b : q.bindings)
        std::erase(names.sets, b.name);

    const std::size_t S = names.sets.size();
    const std::size_t E = names.elems.size();
    const std::uint64_t K = 2 * (S + E);
    std::uint64_t first = std::max<std::uint64_t>(1, names.has_literal ? names.max_literal + 1 : 1);
    std::uint64_t cap = std::min<std::uint64_t>(std::max<std::uint64_t>(K, first), budget.max_universe);

    Verdict v;
    v.diagnostics["bound"] = K;
    Env env;
    for (const auto& b : q.bindings) {
        std::uint64_t m = 0;
        for (auto e : b.elements)
            if (e < 64)
                m |= std::uint64_t(1) << e;
        env.sets[b.name] = m;
    }
    std::uint64_t tried = 0;
    for (std::uint64_t n = first; n <= cap && n < 64; ++n) {
        // Total assignments for this universe: 2^(n*S) * n^E.
        long double total = 1;
        for (std::size_t i = 0; i < S; ++i)
            total *= static_cast<long double>(std::uint64_t(1) << n);
        for (std::size_t i = 0; i < E; ++i)
            total *= static_cast<long double>(n);
        if (total + static_cast<long double>(tried) > static_cast<long double>(max_assignments)) {
            v.outcome = Outcome::Unknown;
            v.diagnostics["universe"] = n - 1;
            v.diagnostics["unknown_reason"] = "BudgetExceeded";
            return v;
        }
        // Odometer: the first set is the most significant digit, elements vary fastest.
        std::vector<std::uint64_t> digits(S + E, 0);
        std::vector<std::uint64_t> radix(S + E);
        for (std::size_t i = 0; i < S; ++i)
            radix[i] = std::uint64_t(1) << n;
        for (std::size_t i = 0; i < E; ++i)
            radix[S + i] = n;
        for (;;) {
            ++tried;
            for (std::size_t i = 0; i < S; ++i)
                env.sets[names.sets[i]] = digits[i];
            for (std::size_t i = 0; i < E; ++i)
                env.elems[names.elems[i]] = digits[S + i];
            if (holds(q.formula, env)) {
                v.outcome = Outcome::Sat;
                for (std::size_t i = 0; i < S; ++i)
                    v.model.push_back(Binding{names.sets[i], ModelValue::of_set(members(digits[i]))});
                for (std::size_t i = 0; i < E; ++i)
                    v.model.push_back(Binding{names.elems[i], ModelValue::of_number(Rational(
                                                                 static_cast<unsigned long>(digits[S + i])))});
                v.diagnostics["universe"] = n;
                v.diagnostics["assignments"] = tried;
                return v;
            }
            std::size_t pos = S + E;
            while (pos > 0) {
                --pos;
                if (++digits[pos] < radix[pos])
                    break;
                digits[pos] = 0;
                if (pos == 0) {
                    pos = S + E + 1;
                    break;
                }
            }
            if (pos == S + E + 1 || S + E == 0)
                break;
        }
    }
    v.diagnostics["assignments"] = tried;
    if (K > cap) {
        v.outcome = Outcome::Unknown;
        v.diagnostics["unknown_reason"] = "UniverseTooLarge";
        return v;
    }
    v.outcome = Outcome::Unsat;
    return v;
}

Verdict solve_concrete_set(const SetQuery& q)
{
    ConcreteEnv env;
    for (const auto& b : q.bindings)
        env.sets[b.name] = b.elements;
    Verdict v;
    if (!cholds(q.formula, env)) {
        v.outcome = Outcome::Unsat;
        return v;
    }
    v.outcome = Outcome::Sat;
    for (const auto& b : q.bindings)
        v.model.push_back(Binding{b.name, ModelValue::of_set({b.elements.begin(), b.elements.end()})});
    return v;
}

} // namespace tdt
