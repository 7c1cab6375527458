#include "icp.hpp"
#include "linear.hpp"
#include "poly.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace tdt {

namespace {

using arith::Constraint;
using arith::Monomial;
using arith::Poly;
using arith::Rel;

constexpr std::size_t max_cases = 4096;

struct TooManyCases {};

using Case = std::vector<Comparison>;

std::vector<Case> dnf(const ArithFormula& f)
{
    switch (f.kind) {
    case ArithFormula::Kind::Atom: return {Case{f.atom}};
    case ArithFormula::Kind::Or: {
        std::vector<Case> out;
        for (const auto& a : f.args) {
            auto sub = dnf(a);
            out.insert(out.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
            if (out.size() > max_cases)
                throw TooManyCases{};
        }
        return out;
    }
    case ArithFormula::Kind::And: {
        std::vector<Case> out{Case{}};
        for (const auto& a : f.args) {
            auto sub = dnf(a);
            if (out.size() * sub.size() > max_cases)
                throw TooManyCases{};
            std::vector<Case> next;
            for (const auto& x : out)
                for (const auto& y : sub) {
                    Case c = x;
                    c.insert(c.end(), y.begin(), y.end());
                    next.push_back(std::move(c));
                }
            out = std::move(next);
        }
        return out;
    }
    }
    return {};
}

bool ground_holds(const Constraint& c)
{
    Rational v = c.p.constant_term();
    switch (c.rel) {
    case Rel::Eq: return v == 0;
    case Rel::Lt: return v < 0;
    case Rel::Le: return v <= 0;
    }
    return false;
}

struct Definition {
    std::string var;
    Poly value;
};

/// A variable that occurs only as a bare degree-1 monomial in `p` and whose
/// removal leaves a linear remainder.
std::optional<std::pair<std::string, Poly>> solvable(const Poly& p)
{
    for (const auto& v : p.variables()) {
        auto it = p.terms.find(Monomial{{v, 1}});
        if (it == p.terms.end())
            continue;
        bool elsewhere = false;
        for (const auto& [m, c] : p.terms)
            if (m != it->first)
                for (const auto& [u, e] : m)
                    if (u == v)
                        elsewhere = true;
        if (elsewhere)
            continue;
        Poly rest = p;
        rest.terms.erase(Monomial{{v, 1}});
        if (!rest.is_linear())
            continue;
        return std::make_pair(v, rest.scaled(Rational(-1 / it->second)));
    }
    return std::nullopt;
}

struct CaseResult {
    Outcome outcome = Outcome::Unknown;
    Assignment model;
    std::string path;
    std::uint64_t boxes = 0;
    std::string unknown_reason;
};

bool all_linear(const std::vector<Constraint>& cs)
{
    return std::all_of(cs.begin(), cs.end(), [](const Constraint& c) { return c.p.is_linear(); });
}

/// Replaces every nonlinear monomial by a fresh variable; squares get a sign constraint.
std::vector<Constraint> linear_relaxation(const std::vector<Constraint>& cs)
{
    std::vector<Constraint> out;
    std::set<std::string> squares;
    for (const auto& c : cs) {
        Poly p;
        for (const auto& [m, coef] : c.p.terms) {
            int degree = 0;
            bool even = true;
            for (const auto& [v, e] : m) {
                degree += e;
                even = even && e % 2 == 0;
            }
            if (degree <= 1) {
                p.terms.emplace(m, coef);
                continue;
            }
            std::string name = "$m:" + arith::monomial_name(m);
            p.terms.emplace(Monomial{{name, 1}}, coef);
            if (even)
                squares.insert(name);
        }
        out.push_back(Constraint{std::move(p), c.rel});
    }
    for (const auto& s : squares)
        out.push_back(Constraint{Poly::variable(s).scaled(-1), Rel::Le});
    return out;
}

CaseResult solve_case(const Case& atoms, const SolverBudget& budget, std::chrono::steady_clock::time_point deadline)
{
    CaseResult res;
    arith::Normalizer norm;
    std::vector<Constraint> cs;
    for (const auto& a : atoms)
        cs.push_back(norm.convert(a));
    for (const auto& s : norm.side_conditions())
        cs.push_back(s);

    // Eliminate equalities that define a variable linearly.
    std::vector<Definition> defs;
    for (;;) {
        std::vector<Constraint> kept;
        bool bad = false;
        for (auto& c : cs) {
            if (c.p.is_constant()) {
                if (!ground_holds(c))
                    bad = true;
                continue;
            }
            kept.push_back(std::move(c));
        }
        cs = std::move(kept);
        if (bad) {
            res.outcome = Outcome::Unsat;
            res.path = "ground";
            return res;
        }
        std::optional<std::size_t> pick;
        std::size_t fewest = 0;
        std::optional<std::pair<std::string, Poly>> def;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (cs[i].rel != Rel::Eq)
                continue;
            auto d = solvable(cs[i].p);
            if (!d)
                continue;
            std::size_t n = cs[i].p.variables().size();
            if (!pick || n < fewest) {
                pick = i;
                fewest = n;
                def = std::move(d);
            }
        }
        if (!pick)
            break;
        cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(*pick));
        for (auto& c : cs)
            c.p = c.p.substitute(def->first, def->second);
        defs.push_back(Definition{def->first, def->second});
    }

    auto finish = [&](Assignment model) {
        for (auto d = defs.rbegin(); d != defs.rend(); ++d) {
            for (const auto& v : d->value.variables())
                model.emplace(v, Rational(0));
            model[d->var] = *d->value.evaluate(model);
        }
        return model;
    };

    if (all_linear(cs)) {
        auto lr = arith::solve_linear(cs);
        res.path = "linear";
        res.outcome = lr.outcome;
        if (lr.outcome == Outcome::Sat)
            res.model = finish(std::move(lr.model));
        else if (lr.outcome == Outcome::Unknown)
            res.unknown_reason = "BudgetExceeded";
        return res;
    }

    auto relaxed = arith::solve_linear(linear_relaxation(cs));
    if (relaxed.outcome == Outcome::Unsat) {
        res.outcome = Outcome::Unsat;
        res.path = "relaxation";
        return res;
    }

    arith::IcpOptions opts;
    opts.max_boxes = budget.max_boxes;
    opts.deadline = deadline;
    auto ir = arith::solve_icp(cs, opts);
    res.path = "icp";
    res.boxes = ir.boxes;
    res.outcome = ir.outcome;
    res.unknown_reason = ir.unknown_reason;
    if (ir.outcome == Outcome::Sat)
        res.model = finish(std::move(ir.model));
    return res;
}

std::optional<Rational> eval_term(const Term& t, const Assignment& a)
{
    switch (t.op) {
    case TermOp::Num: return t.value;
    case TermOp::Var: {
        auto it = a.find(t.name);
        if (it == a.end())
            return std::nullopt;
        return it->second;
    }
    case TermOp::Neg: {
        auto x = eval_term(t.args[0], a);
        if (!x)
            return std::nullopt;
        return Rational(-*x);
    }
    default: break;
    }
    auto l = eval_term(t.args[0], a);
    auto r = eval_term(t.args[1], a);
    if (!l || !r)
        return std::nullopt;
    switch (t.op) {
    case TermOp::Add: return Rational(*l + *r);
    case TermOp::Sub: return Rational(*l - *r);
    case TermOp::Mul: return Rational(*l * *r);
    case TermOp::Div:
        if (*r == 0)
            return std::nullopt;
        return Rational(*l / *r);
    default: break;
    }
    return std::nullopt;
}

void collect(const ArithFormula& f, std::vector<std::string>& out)
{
    if (f.kind == ArithFormula::Kind::Atom) {
        collect_variables(f.atom.lhs, out);
        collect_variables(f.atom.rhs, out);
        return;
    }
    for (const auto& a : f.args)
        collect(a, out);
}

} // namespace

std::optional<Rational> evaluate(const Term& t, const Assignment& a)
{
    return eval_term(t, a);
}

bool holds(const Comparison& c, const Assignment& a)
{
    auto l = eval_term(c.lhs, a);
    auto r = eval_term(c.rhs, a);
    if (!l || !r)
        return false;
    switch (c.op) {
    case CmpOp::Eq: return *l == *r;
    case CmpOp::Lt: return *l < *r;
    case CmpOp::Le: return *l <= *r;
    case CmpOp::Gt: return *l > *r;
    case CmpOp::Ge: return *l >= *r;
    }
    return false;
}

bool holds(const ArithFormula& f, const Assignment& a)
{
    switch (f.kind) {
    case ArithFormula::Kind::Atom: return holds(f.atom, a);
    case ArithFormula::Kind::And:
        return std::all_of(f.args.begin(), f.args.end(), [&](const ArithFormula& x) { return holds(x, a); });
    case ArithFormula::Kind::Or:
        return std::any_of(f.args.begin(), f.args.end(), [&](const ArithFormula& x) { return holds(x, a); });
    }
    return false;
}

std::vector<std::string> variables_of(const ArithFormula& f)
{
    std::vector<std::string> out;
    collect(f, out);
    return out;
}

std::size_t atom_count(const ArithFormula& f)
{
    if (f.kind == ArithFormula::Kind::Atom)
        return 1;
    std::size_t n = 0;
    for (const auto& a : f.args)
        n += atom_count(a);
    return n;
}

Verdict solve_arith(const ArithFormula& q, const SolverBudget& budget)
{
    Verdict v;
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(budget.wall_ms);
    std::vector<Case> cases;
    try {
        cases = dnf(q);
    } catch (const TooManyCases&) {
        v.outcome = Outcome::Unknown;
        v.diagnostics["unknown_reason"] = "TooManyCases";
        return v;
    }
    v.diagnostics["cases"] = cases.size();

    std::vector<std::string> names = variables_of(q);
    std::uint64_t boxes = 0;
    std::set<std::string> paths;
    std::string unknown_reason;
    for (const auto& c : cases) {
        if (std::chrono::steady_clock::now() > deadline) {
            unknown_reason = "Timeout";
            break;
        }
        CaseResult r = solve_case(c, budget, deadline);
        boxes += r.boxes;
        paths.insert(r.path);
        if (r.outcome == Outcome::Sat) {
            Assignment model = r.model;
            for (const auto& n : names)
                model.emplace(n, Rational(0));
            if (!holds(q, model)) {
                if (unknown_reason.empty())
                    unknown_reason = "ModelCheckFailed";
                continue;
            }
            v.outcome = Outcome::Sat;
            for (const auto& n : names)
                v.model.push_back(Binding{n, ModelValue::of_number(model.at(n))});
            unknown_reason.clear();
            break;
        }
        if (r.outcome == Outcome::Unknown && unknown_reason.empty())
            unknown_reason = r.unknown_reason.empty() ? "Incomplete" : r.unknown_reason;
    }
    if (v.outcome != Outcome::Sat)
        v.outcome = unknown_reason.empty() ? Outcome::Unsat : Outcome::Unknown;
    v.diagnostics["paths"] = std::vector<std::string>(paths.begin(), paths.end());
    v.diagnostics["boxes"] = boxes;
    if (v.outcome == Outcome::Unknown)
        v.diagnostics["unknown_reason"] = unknown_reason;
    return v;
}

} // namespace tdt
