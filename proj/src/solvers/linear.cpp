#include "linear.hpp"

#include <algorithm>
#include <set>

namespace tdt::arith {

namespace {

struct Lin {
    std::map<std::string, Rational> a;
    Rational c;
    Rel rel = Rel::Le;
};

Lin to_lin(const Constraint& k)
{
    Lin l;
    l.rel = k.rel;
    for (const auto& [m, coef] : k.p.terms) {
        if (m.empty())
            l.c = coef;
        else
            l.a[m.front().first] = coef;
    }
    return l;
}

bool ground_holds(const Lin& l)
{
    switch (l.rel) {
    case Rel::Eq: return l.c == 0;
    case Rel::Lt: return l.c < 0;
    case Rel::Le: return l.c <= 0;
    }
    return false;
}

// l := l + k * m
void axpy(Lin& l, const Rational& k, const Lin& m)
{
    for (const auto& [v, coef] : m.a) {
        Rational& slot = l.a[v];
        slot += k * coef;
        if (slot == 0)
            l.a.erase(v);
    }
    l.c += k * m.c;
}

void normalize(Lin& l)
{
    if (l.a.empty())
        return;
    Rational scale = abs(l.a.begin()->second);
    if (l.rel == Rel::Eq)
        scale = l.a.begin()->second;
    if (scale == 1)
        return;
    for (auto& [v, coef] : l.a)
        coef /= scale;
    l.c /= scale;
}

/// Keeps only the tightest constraint per left-hand side.
void dedupe(std::vector<Lin>& cs)
{
    std::map<std::map<std::string, Rational>, std::size_t> best;
    std::vector<Lin> out;
    for (auto& l : cs) {
        auto it = best.find(l.a);
        if (it == best.end()) {
            best.emplace(l.a, out.size());
            out.push_back(std::move(l));
            continue;
        }
        Lin& cur = out[it->second];
        if (l.c > cur.c || (l.c == cur.c && l.rel == Rel::Lt))
            cur = std::move(l);
    }
    cs = std::move(out);
}

struct Stage {
    std::string var;
    std::vector<Lin> bounds; // constraints mentioning var at elimination time
};

struct Definition {
    std::string var;
    Lin expr; // var = -(expr.a . x + expr.c) / 1, stored already solved: var = sum a*x + c
};

} // namespace

LinearResult solve_linear(const std::vector<Constraint>& constraints, std::size_t limit)
{
    LinearResult res;
    std::vector<Lin> ineqs;
    std::vector<Lin> eqs;
    for (const auto& k : constraints) {
        Lin l = to_lin(k);
        if (l.a.empty()) {
            if (!ground_holds(l)) {
                res.outcome = Outcome::Unsat;
                return res;
            }
            continue;
        }
        (l.rel == Rel::Eq ? eqs : ineqs).push_back(std::move(l));
    }

    // Gaussian elimination of equalities.
    std::vector<Definition> defs;
    while (!eqs.empty()) {
        Lin e = std::move(eqs.back());
        eqs.pop_back();
        if (e.a.empty()) {
            if (!ground_holds(e)) {
                res.outcome = Outcome::Unsat;
                return res;
            }
            continue;
        }
        auto pivot = e.a.begin();
        std::string x = pivot->first;
        Rational k = pivot->second;
        // x = -(rest + c) / k
        Lin def;
        for (const auto& [v, coef] : e.a)
            if (v != x)
                def.a[v] = -coef / k;
        def.c = -e.c / k;
        auto substitute = [&](Lin& l) {
            auto it = l.a.find(x);
            if (it == l.a.end())
                return;
            Rational coef = it->second;
            l.a.erase(it);
            axpy(l, coef, def);
        };
        for (auto& l : eqs)
            substitute(l);
        for (auto& l : ineqs)
            substitute(l);
        defs.push_back(Definition{x, std::move(def)});
        ++res.eliminated;
    }

    // Fourier–Motzkin on the inequalities.
    std::vector<Stage> stages;
    for (auto& l : ineqs)
        normalize(l);
    dedupe(ineqs);
    res.peak_constraints = ineqs.size();
    for (;;) {
        std::vector<Lin> next;
        for (auto& l : ineqs) {
            if (l.a.empty()) {
                if (!ground_holds(l)) {
                    res.outcome = Outcome::Unsat;
                    return res;
                }
            } else {
                next.push_back(std::move(l));
            }
        }
        ineqs = std::move(next);
        if (ineqs.empty())
            break;

        std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
        for (const auto& l : ineqs)
            for (const auto& [v, coef] : l.a)
                (coef > 0 ? counts[v].first : counts[v].second)++;
        std::string x;
        long best = 0;
        for (const auto& [v, pn] : counts) {
            long cost = static_cast<long>(pn.first * pn.second) - static_cast<long>(pn.first + pn.second);
            if (x.empty() || cost < best) {
                x = v;
                best = cost;
            }
        }

        Stage stage{x, {}};
        std::vector<Lin> pos, neg, rest;
        for (auto& l : ineqs) {
            auto it = l.a.find(x);
            if (it == l.a.end())
                rest.push_back(std::move(l));
            else {
                stage.bounds.push_back(l);
                (it->second > 0 ? pos : neg).push_back(std::move(l));
            }
        }
        for (const auto& p : pos) {
            for (const auto& n : neg) {
                Rational ap = p.a.at(x);
                Rational an = -n.a.at(x);
                Lin combined = p;
                combined.c *= an;
                for (auto& [v, coef] : combined.a)
                    coef *= an;
                axpy(combined, ap, n);
                combined.a.erase(x);
                combined.rel = (p.rel == Rel::Lt || n.rel == Rel::Lt) ? Rel::Lt : Rel::Le;
                normalize(combined);
                rest.push_back(std::move(combined));
            }
        }
        dedupe(rest);
        stages.push_back(std::move(stage));
        ++res.eliminated;
        res.peak_constraints = std::max(res.peak_constraints, rest.size());
        if (rest.size() > limit) {
            res.outcome = Outcome::Unknown;
            return res;
        }
        ineqs = std::move(rest);
    }

    // Back-substitution, innermost elimination first.
    Assignment model;
    auto value_of = [&](const Lin& l, const std::string& skip) {
        Rational sum = l.c;
        for (const auto& [v, coef] : l.a) {
            if (v == skip)
                continue;
            auto it = model.find(v);
            if (it == model.end())
                it = model.emplace(v, Rational(0)).first;
            sum += coef * it->second;
        }
        return sum;
    };
    for (auto st = stages.rbegin(); st != stages.rend(); ++st) {
        std::optional<Rational> lo, hi;
        bool lo_strict = false, hi_strict = false;
        for (const auto& l : st->bounds) {
            Rational k = l.a.at(st->var);
            Rational bound = -value_of(l, st->var) / k;
            bool strict = l.rel == Rel::Lt;
            if (k > 0) {
                if (!hi || bound < *hi || (bound == *hi && strict)) {
                    hi = bound;
                    hi_strict = strict;
                }
            } else {
                if (!lo || bound > *lo || (bound == *lo && strict)) {
                    lo = bound;
                    lo_strict = strict;
                }
            }
        }
        Rational v;
        if (lo && hi)
            v = *lo == *hi ? *lo : Rational((*lo + *hi) / 2);
        else if (lo)
            v = lo_strict ? Rational(*lo + 1) : *lo;
        else if (hi)
            v = hi_strict ? Rational(*hi - 1) : *hi;
        else
            v = 0;
        model[st->var] = v;
    }
    for (auto d = defs.rbegin(); d != defs.rend(); ++d)
        model[d->var] = value_of(d->expr, "");

    for (const auto& k : constraints)
        for (const auto& v : k.p.variables())
            model.emplace(v, Rational(0));
    for (const auto& k : constraints) {
        if (!holds_exactly(k, model)) {
            // Would indicate an internal error; never report an unchecked model.
            res.outcome = Outcome::Unknown;
            return res;
        }
    }
    res.outcome = Outcome::Sat;
    res.model = std::move(model);
    return res;
}

} // namespace tdt::arith
