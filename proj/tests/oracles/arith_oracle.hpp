#pragma once

// Brute-force arithmetic oracles, independent of the solver code.
//
// Linear systems are decided exactly: the system with every strict
// inequality relaxed is intersected with a large box and all vertices of that
// polytope are enumerated; the centroid of the vertices lies in the relative
// interior of the closure, so the original system is satisfiable iff the
// centroid satisfies it.

#include "tdt/ast.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Point = std::map<std::string, Q>;

inline std::optional<Q> eval(const tdt::Term& t, const Point& p)
{
    using tdt::TermOp;
    switch (t.op) {
    case TermOp::Num: return Q(t.value);
    case TermOp::Var: {
        auto it = p.find(t.name);
        return it == p.end() ? Q(0) : it->second;
    }
    case TermOp::Neg: {
        auto a = eval(t.args[0], p);
        if (!a)
            return std::nullopt;
        return Q(-*a);
    }
    default: break;
    }
    auto a = eval(t.args[0], p);
    auto b = eval(t.args[1], p);
    if (!a || !b)
        return std::nullopt;
    switch (t.op) {
    case TermOp::Add: return Q(*a + *b);
    case TermOp::Sub: return Q(*a - *b);
    case TermOp::Mul: return Q(*a * *b);
    case TermOp::Div:
        if (*b == 0)
            return std::nullopt;
        return Q(*a / *b);
    default: return std::nullopt;
    }
}

inline bool holds(const tdt::Comparison& c, const Point& p)
{
    auto l = eval(c.lhs, p);
    auto r = eval(c.rhs, p);
    if (!l || !r)
        return false;
    switch (c.op) {
    case tdt::CmpOp::Eq: return *l == *r;
    case tdt::CmpOp::Lt: return *l < *r;
    case tdt::CmpOp::Le: return *l <= *r;
    case tdt::CmpOp::Gt: return *l > *r;
    case tdt::CmpOp::Ge: return *l >= *r;
    }
    return false;
}

inline bool holds(const tdt::ArithConj& c, const Point& p)
{
    for (const auto& a : c.atoms)
        if (!holds(a, p))
            return false;
    return true;
}

/// premises hold and the conclusion fails.
inline bool counterexample(const std::vector<tdt::ArithConj>& premises, const tdt::ArithConj& conclusion,
                           const Point& p)
{
    for (const auto& c : premises)
        if (!holds(c, p))
            return false;
    return !holds(conclusion, p);
}

// ------------------------------------------------------------ linear decision

/// sum coef[v] * v + constant  (rel)  0
struct LinRow {
    std::map<std::string, Q> coef;
    Q constant;
    enum Rel { Eq, Lt, Le } rel = Le;
};

/// Linear form of a term; nullopt when the term is not linear.
inline std::optional<std::pair<std::map<std::string, Q>, Q>> linear_form(const tdt::Term& t)
{
    using tdt::TermOp;
    using Form = std::pair<std::map<std::string, Q>, Q>;
    auto scale = [](Form f, const Q& k) {
        for (auto& [v, c] : f.first)
            c *= k;
        f.second *= k;
        return f;
    };
    auto add = [](Form a, const Form& b, int sign) {
        for (const auto& [v, c] : b.first)
            a.first[v] += sign * c;
        a.second += sign * b.second;
        return a;
    };
    auto is_const = [](const Form& f) {
        for (const auto& [v, c] : f.first)
            if (c != 0)
                return false;
        return true;
    };
    switch (t.op) {
    case TermOp::Num: return Form{{}, Q(t.value)};
    case TermOp::Var: return Form{{{t.name, Q(1)}}, Q(0)};
    case TermOp::Neg: {
        auto a = linear_form(t.args[0]);
        if (!a)
            return std::nullopt;
        return scale(*a, Q(-1));
    }
    default: break;
    }
    auto a = linear_form(t.args[0]);
    auto b = linear_form(t.args[1]);
    if (!a || !b)
        return std::nullopt;
    switch (t.op) {
    case TermOp::Add: return add(*a, *b, 1);
    case TermOp::Sub: return add(*a, *b, -1);
    case TermOp::Mul:
        if (is_const(*a))
            return scale(*b, a->second);
        if (is_const(*b))
            return scale(*a, b->second);
        return std::nullopt;
    case TermOp::Div:
        if (!is_const(*b) || b->second == 0)
            return std::nullopt;
        return scale(*a, Q(1 / b->second));
    default: return std::nullopt;
    }
}

/// Rows for one comparison (a Gt/Ge is flipped into Lt/Le).
inline std::optional<LinRow> to_row(const tdt::Comparison& c)
{
    auto l = linear_form(c.lhs);
    auto r = linear_form(c.rhs);
    if (!l || !r)
        return std::nullopt;
    LinRow row;
    int sign = (c.op == tdt::CmpOp::Gt || c.op == tdt::CmpOp::Ge) ? -1 : 1;
    for (const auto& [v, k] : l->first)
        row.coef[v] += sign * k;
    for (const auto& [v, k] : r->first)
        row.coef[v] -= sign * k;
    row.constant = sign * (l->second - r->second);
    switch (c.op) {
    case tdt::CmpOp::Eq: row.rel = LinRow::Eq; break;
    case tdt::CmpOp::Lt:
    case tdt::CmpOp::Gt: row.rel = LinRow::Lt; break;
    default: row.rel = LinRow::Le; break;
    }
    return row;
}

inline bool satisfies(const std::vector<LinRow>& rows, const Point& p, bool relaxed)
{
    for (const auto& r : rows) {
        Q s = r.constant;
        for (const auto& [v, c] : r.coef) {
            auto it = p.find(v);
            if (it != p.end())
                s += c * it->second;
        }
        if (r.rel == LinRow::Eq && s != 0)
            return false;
        if (r.rel == LinRow::Le && s > 0)
            return false;
        if (r.rel == LinRow::Lt && (relaxed ? s > 0 : s >= 0))
            return false;
    }
    return true;
}

/// Solves the square system exactly; nullopt when singular.
inline std::optional<std::vector<Q>> solve_square(std::vector<std::vector<Q>> a, std::vector<Q> b)
{
    std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0)
            ++piv;
        if (piv == n)
            return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0)
                continue;
            Q f = a[r][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k)
                a[r][k] -= f * a[col][k];
            b[r] -= f * b[col];
        }
    }
    std::vector<Q> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = b[i] / a[i][i];
    return x;
}

/// Exact satisfiability of a conjunction of linear rows; returns a witness.
inline std::optional<Point> decide_linear(const std::vector<LinRow>& rows, const Q& box = Q(1000000))
{
    std::vector<std::string> vars;
    for (const auto& r : rows)
        for (const auto& [v, c] : r.coef)
            if (std::find(vars.begin(), vars.end(), v) == vars.end())
                vars.push_back(v);
    std::size_t n = vars.size();
    if (n == 0)
        return satisfies(rows, {}, false) ? std::optional<Point>(Point{}) : std::nullopt;

    // Hyperplanes: every row plus the box faces.
    std::vector<std::pair<std::vector<Q>, Q>> planes; // a.x = b
    for (const auto& r : rows) {
        std::vector<Q> a(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto it = r.coef.find(vars[i]);
            if (it != r.coef.end())
                a[i] = it->second;
        }
        planes.emplace_back(a, Q(-r.constant));
    }
    std::vector<LinRow> bounded = rows;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Q> a(n);
        a[i] = 1;
        planes.emplace_back(a, box);
        planes.emplace_back(a, Q(-box));
        LinRow up, lo;
        up.coef[vars[i]] = 1;
        up.constant = -box;
        lo.coef[vars[i]] = -1;
        lo.constant = -box;
        bounded.push_back(up);
        bounded.push_back(lo);
    }

    std::vector<std::vector<Q>> vertices;
    std::vector<std::size_t> pick(n);
    std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t k, std::size_t from) {
        if (k == n) {
            std::vector<std::vector<Q>> a;
            std::vector<Q> b;
            for (auto idx : pick) {
                a.push_back(planes[idx].first);
                b.push_back(planes[idx].second);
            }
            auto x = solve_square(a, b);
            if (!x)
                return;
            Point p;
            for (std::size_t i = 0; i < n; ++i)
                p[vars[i]] = (*x)[i];
            if (satisfies(bounded, p, true) && std::find(vertices.begin(), vertices.end(), *x) == vertices.end())
                vertices.push_back(*x);
            return;
        }
        for (std::size_t i = from; i < planes.size(); ++i) {
            pick[k] = i;
            choose(k + 1, i + 1);
        }
    };
    choose(0, 0);
    if (vertices.empty())
        return std::nullopt;
    Point centroid;
    for (std::size_t i = 0; i < n; ++i) {
        Q s = 0;
        for (const auto& v : vertices)
            s += v[i];
        centroid[vars[i]] = s / static_cast<long>(vertices.size());
    }
    if (satisfies(rows, centroid, false))
        return centroid;
    return std::nullopt;
}

/// Exact decision of "premises hold and the conclusion fails" for linear
/// families; nullopt outer when some atom is not linear.
inline std::optional<std::optional<Point>> decide_family(const std::vector<tdt::ArithConj>& premises,
                                                         const tdt::ArithConj& conclusion)
{
    std::vector<LinRow> base;
    for (const auto& c : premises)
        for (const auto& a : c.atoms) {
            auto r = to_row(a);
            if (!r)
                return std::nullopt;
            base.push_back(*r);
        }
    std::vector<std::vector<LinRow>> cases;
    for (const auto& a : conclusion.atoms) {
        auto r = to_row(a);
        if (!r)
            return std::nullopt;
        // not (e rel 0)
        auto neg = [](LinRow row) {
            for (auto& [v, c] : row.coef)
                c = -c;
            row.constant = -row.constant;
            return row;
        };
        if (r->rel == LinRow::Eq) {
            LinRow lt = *r, gt = neg(*r);
            lt.rel = gt.rel = LinRow::Lt;
            cases.push_back({lt});
            cases.push_back({gt});
        } else {
            LinRow flipped = neg(*r);
            flipped.rel = r->rel == LinRow::Lt ? LinRow::Le : LinRow::Lt;
            cases.push_back({flipped});
        }
    }
    for (const auto& extra : cases) {
        auto rows = base;
        rows.insert(rows.end(), extra.begin(), extra.end());
        if (auto w = decide_linear(rows))
            return std::optional<Point>(*w);
    }
    return std::optional<Point>(std::nullopt);
}

/// Exhaustive search of a rational grid for a counterexample.
inline std::optional<Point> grid_search(const std::vector<tdt::ArithConj>& premises,
                                        const tdt::ArithConj& conclusion, const std::vector<std::string>& vars,
                                        const std::vector<Q>& values)
{
    Point p;
    std::function<std::optional<Point>(std::size_t)> rec = [&](std::size_t i) -> std::optional<Point> {
        if (i == vars.size())
            return counterexample(premises, conclusion, p) ? std::optional<Point>(p) : std::nullopt;
        for (const auto& v : values) {
            p[vars[i]] = v;
            if (auto w = rec(i + 1))
                return w;
        }
        return std::nullopt;
    };
    return rec(0);
}

} // namespace oracle
