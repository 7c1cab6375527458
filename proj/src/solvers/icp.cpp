#include "icp.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tdt::arith {

namespace {

struct Factor {
    std::size_t var;
    int power;
};

struct CTerm {
    Rational coef;
    std::vector<Factor> factors;
};

struct CCons {
    std::vector<CTerm> terms;
    Rational constant;
    Rel rel = Rel::Eq;
};

/// x solved out of p = A*x + B.
struct Solver {
    std::string var;
    Poly a;
    Poly b;
};

using Box = std::vector<Interval>;

Rational floor_of(const Rational& r)
{
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return Rational(q);
}

/// The rational with the smallest denominator strictly between a and b (a < b).
Rational simplest_between(const Rational& a, const Rational& b)
{
    if (a < 0 && b > 0)
        return 0;
    if (b <= 0)
        return -simplest_between(Rational(-b), Rational(-a));
    Rational n = floor_of(a) + 1;
    if (n < b)
        return n;
    Rational fl = floor_of(a);
    Rational lo = b - fl; // > 0
    if (a == fl)
        return fl + 1 / (floor_of(Rational(1 / lo)) + 1);
    Rational hi = a - fl;
    return fl + 1 / simplest_between(Rational(1 / lo), Rational(1 / hi));
}

class Icp {
public:
    Icp(const std::vector<Constraint>& cs, const IcpOptions& opts) : source_(cs), opts_(opts)
    {
        std::set<std::string> names;
        for (const auto& c : cs)
            for (const auto& v : c.p.variables())
                names.insert(v);
        vars_.assign(names.begin(), names.end());
        for (std::size_t i = 0; i < vars_.size(); ++i)
            index_[vars_[i]] = i;
        nonlinear_.assign(vars_.size(), false);

        for (const auto& c : cs) {
            CCons cc;
            cc.rel = c.rel;
            for (const auto& [m, coef] : c.p.terms) {
                if (m.empty()) {
                    cc.constant = coef;
                    continue;
                }
                CTerm t{coef, {}};
                int degree = 0;
                for (const auto& [v, e] : m) {
                    t.factors.push_back(Factor{index_.at(v), e});
                    degree += e;
                }
                if (degree > 1)
                    for (const auto& f : t.factors)
                        nonlinear_[f.var] = true;
                cc.terms.push_back(std::move(t));
            }
            compiled_.push_back(std::move(cc));

            if (c.rel == Rel::Eq) {
                std::vector<Solver> options;
                for (const auto& v : c.p.variables()) {
                    if (c.p.degree_in(v) != 1)
                        continue;
                    Solver s{v, {}, {}};
                    for (const auto& [m, coef] : c.p.terms) {
                        auto it = std::find_if(m.begin(), m.end(), [&](const auto& f) { return f.first == v; });
                        if (it == m.end()) {
                            s.b.terms.emplace(m, coef);
                        } else {
                            Monomial rest = m;
                            rest.erase(rest.begin() + (it - m.begin()));
                            s.a = s.a + Poly{{{rest, coef}}};
                        }
                    }
                    options.push_back(std::move(s));
                }
                solvers_.push_back(std::move(options));
            }
        }
    }

    IcpResult run()
    {
        IcpResult res;
        Box root(vars_.size(), Interval::entire());
        if (!propagate(root)) {
            res.outcome = Outcome::Unsat;
            return res;
        }
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (nonlinear_[i] && !root[i].bounded())
                res.unbounded.push_back(vars_[i]);
        if (!res.unbounded.empty()) {
            if (auto m = witness(root)) {
                res.outcome = Outcome::Sat;
                res.model = std::move(*m);
                return res;
            }
            res.unknown_reason = "UnboundedVariable";
            return res;
        }

        struct Item {
            Box box;
            std::size_t depth;
        };
        std::vector<Item> stack;
        stack.push_back(Item{std::move(root), 0});
        bool undecided = false;
        bool first = true;
        while (!stack.empty()) {
            Item item = std::move(stack.back());
            stack.pop_back();
            if (++res.boxes > opts_.max_boxes) {
                res.unknown_reason = "BudgetExceeded";
                return res;
            }
            if ((res.boxes & 63) == 0 && std::chrono::steady_clock::now() > opts_.deadline) {
                res.unknown_reason = "Timeout";
                return res;
            }
            res.max_depth = std::max(res.max_depth, item.depth);
            Box& box = item.box;
            if (!first && !propagate(box))
                continue;
            first = false;

            bool all_points = std::all_of(box.begin(), box.end(), [](const Interval& i) { return i.is_point(); });
            if (all_points) {
                Assignment a;
                for (std::size_t i = 0; i < vars_.size(); ++i)
                    a[vars_[i]] = box[i].lo.v;
                if (check(a)) {
                    res.outcome = Outcome::Sat;
                    res.model = std::move(a);
                    return res;
                }
                continue;
            }
            if (auto m = witness(box)) {
                res.outcome = Outcome::Sat;
                res.model = std::move(*m);
                return res;
            }

            std::optional<std::size_t> split;
            Rational widest = 0;
            for (std::size_t i = 0; i < box.size(); ++i) {
                if (!box[i].bounded())
                    continue;
                Rational w = box[i].width();
                if (w > opts_.min_width && (!split || w > widest)) {
                    split = i;
                    widest = w;
                }
            }
            if (!split) {
                undecided = true;
                continue;
            }
            Rational mid = (box[*split].lo.v + box[*split].hi.v) / 2;
            Box lower = box, upper = box;
            lower[*split].hi = XR::finite(mid);
            upper[*split].lo = XR::finite(mid);
            stack.push_back(Item{std::move(upper), item.depth + 1});
            stack.push_back(Item{std::move(lower), item.depth + 1});
        }
        if (undecided) {
            res.unknown_reason = "MinWidth";
            return res;
        }
        res.outcome = Outcome::Unsat;
        return res;
    }

private:
    static bool tighter(const Interval& now, const Interval& before)
    {
        if (now.lo.is_finite() != before.lo.is_finite() || now.hi.is_finite() != before.hi.is_finite())
            return true;
        if (!now.bounded())
            return now.lo.is_finite() ? now.lo.v > before.lo.v : now.hi.v < before.hi.v;
        Rational old_w = before.width();
        Rational new_w = now.width();
        return new_w * 1000 < old_w * 999;
    }

    bool propagate(Box& box) const
    {
        Interval allowed_eq = Interval::point(0);
        Interval allowed_le{XR::neg_inf(), XR::finite(0)};
        for (int round = 0; round < opts_.max_rounds; ++round) {
            bool changed = false;
            for (const auto& c : compiled_) {
                const Interval& allowed = c.rel == Rel::Eq ? allowed_eq : allowed_le;
                std::size_t n = c.terms.size();
                std::vector<Interval> values(n);
                for (std::size_t j = 0; j < n; ++j) {
                    Interval v = Interval::point(c.terms[j].coef);
                    for (const auto& f : c.terms[j].factors)
                        v = tidy(v * power(box[f.var], f.power));
                    values[j] = v;
                }
                // prefix[j] = constant + sum of values[0..j-1]; suffix[j] = sum of values[j..n-1]
                std::vector<Interval> prefix(n + 1), suffix(n + 1);
                prefix[0] = Interval::point(c.constant);
                for (std::size_t j = 0; j < n; ++j)
                    prefix[j + 1] = tidy(prefix[j] + values[j]);
                suffix[n] = Interval::point(0);
                for (std::size_t j = n; j-- > 0;)
                    suffix[j] = tidy(suffix[j + 1] + values[j]);
                if (intersect(prefix[n], allowed).empty())
                    return false;

                for (std::size_t j = 0; j < n; ++j) {
                    Interval others = tidy(prefix[j] + suffix[j + 1]);
                    Interval tj = intersect(values[j], tidy(allowed - others));
                    if (tj.empty())
                        return false;
                    const CTerm& term = c.terms[j];
                    Interval product = tidy(scale(tj, Rational(1 / term.coef)));
                    for (std::size_t k = 0; k < term.factors.size(); ++k) {
                        Interval rest = Interval::point(1);
                        for (std::size_t m = 0; m < term.factors.size(); ++m)
                            if (m != k)
                                rest = tidy(rest * power(box[term.factors[m].var], term.factors[m].power));
                        Interval target = product;
                        if (term.factors.size() > 1) {
                            if (rest.contains_zero())
                                continue;
                            target = tidy(divide(product, rest));
                        }
                        const Factor& f = term.factors[k];
                        Interval narrowed = tidy(root(target, f.power, box[f.var]));
                        if (narrowed.empty())
                            return false;
                        if (tighter(narrowed, box[f.var])) {
                            changed = true;
                            box[f.var] = narrowed;
                        } else {
                            box[f.var] = intersect(box[f.var], narrowed);
                        }
                    }
                }
            }
            if (!changed)
                break;
        }
        return true;
    }

    bool check(const Assignment& a) const
    {
        return std::all_of(source_.begin(), source_.end(), [&](const Constraint& c) { return holds_exactly(c, a); });
    }

    Assignment sample(const Box& box) const
    {
        Assignment a;
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            const Interval& d = box[i];
            Rational v;
            if (d.is_point())
                v = d.lo.v;
            else if (d.bounded())
                v = simplest_between(d.lo.v, d.hi.v);
            else if (d.lo.is_finite())
                v = d.lo.v + 1;
            else if (d.hi.is_finite())
                v = d.hi.v - 1;
            else
                v = 0;
            a[vars_[i]] = v;
        }
        return a;
    }

    std::optional<Assignment> witness(const Box& box) const
    {
        Assignment base = sample(box);
        if (check(base))
            return base;
        if (solvers_.empty())
            return std::nullopt;

        auto width_of = [&](const std::string& v) -> std::optional<Rational> {
            const Interval& d = box[index_.at(v)];
            if (!d.bounded())
                return std::nullopt;
            return d.width();
        };
        // Per equality, candidate variables ordered widest domain first.
        std::vector<std::vector<const Solver*>> ordered;
        for (const auto& options : solvers_) {
            std::vector<const Solver*> o;
            for (const auto& s : options)
                o.push_back(&s);
            std::stable_sort(o.begin(), o.end(), [&](const Solver* x, const Solver* y) {
                auto wx = width_of(x->var), wy = width_of(y->var);
                if (!wx || !wy)
                    return !wx && wy;
                return *wx > *wy;
            });
            ordered.push_back(std::move(o));
        }

        const int attempts = 8;
        std::vector<std::size_t> choice(ordered.size(), 0);
        // First attempt: greedy distinct designations.
        std::set<std::string> used;
        for (std::size_t e = 0; e < ordered.size(); ++e)
            for (std::size_t k = 0; k < ordered[e].size(); ++k)
                if (!used.count(ordered[e][k]->var)) {
                    choice[e] = k;
                    used.insert(ordered[e][k]->var);
                    break;
                }

        for (int attempt = 0; attempt < attempts; ++attempt) {
            Assignment a = base;
            for (int pass = 0; pass < 4; ++pass) {
                for (std::size_t e = 0; e < ordered.size(); ++e) {
                    if (ordered[e].empty())
                        continue;
                    const Solver& s = *ordered[e][choice[e] % ordered[e].size()];
                    auto av = s.a.evaluate(a);
                    auto bv = s.b.evaluate(a);
                    if (!av || !bv || *av == 0)
                        continue;
                    Rational x = -*bv / *av;
                    a[s.var] = x;
                }
            }
            if (check(a))
                return a;
            // Next designation (odometer over equalities).
            std::size_t e = 0;
            while (e < choice.size()) {
                if (ordered[e].size() > 1 && ++choice[e] < ordered[e].size())
                    break;
                choice[e] = 0;
                ++e;
            }
            if (e == choice.size())
                break;
        }
        return std::nullopt;
    }

    const std::vector<Constraint>& source_;
    const IcpOptions& opts_;
    std::vector<std::string> vars_;
    std::map<std::string, std::size_t> index_;
    std::vector<bool> nonlinear_;
    std::vector<CCons> compiled_;
    std::vector<std::vector<Solver>> solvers_;
};

} // namespace

IcpResult solve_icp(const std::vector<Constraint>& constraints, const IcpOptions& opts)
{
    Icp icp(constraints, opts);
    return icp.run();
}

} // namespace tdt::arith
