#include "tdt/solver.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <functional>
#include <map>
#include <optional>

namespace tdt {

namespace {

constexpr int unbound = INT_MIN;

struct OutOfSteps {
    const char* reason;
};

/// Argument encoding: >= 0 is an interned constant, < 0 is variable -(i+1).
struct CLit {
    bool negated = false;
    int pred = 0;
    std::vector<int> args;
};

struct CClause {
    std::vector<int> head;
    std::vector<CLit> body;
    int nvars = 0;
};

inline int var_term(int index)
{
    return -(index + 1);
}

inline int var_index(int term)
{
    return -term - 1;
}

class Engine {
public:
    Engine(const std::vector<Clause>& program, const SolverBudget& budget)
        : max_steps_(budget.max_steps),
          deadline_(std::chrono::steady_clock::now() + std::chrono::milliseconds(budget.wall_ms))
    {
        for (const auto& c : program) {
            std::map<std::string, int> locals;
            CClause cc;
            int pred = predicate(c.head.pred, c.head.args.size());
            cc.head = compile_args(c.head.args, locals);
            for (const auto& l : c.body)
                cc.body.push_back(CLit{l.negated, predicate(l.atom.pred, l.atom.args.size()),
                                       compile_args(l.atom.args, locals)});
            cc.nvars = static_cast<int>(locals.size());
            clauses_[pred].push_back(std::move(cc));
        }
    }

    /// Query variables occupy the first binding slots, in the order given.
    void declare_query_variables(const std::vector<std::string>& names)
    {
        query_vars_.clear();
        for (std::size_t i = 0; i < names.size(); ++i)
            query_vars_[names[i]] = static_cast<int>(i);
        bind_.assign(names.size(), unbound);
        trail_.clear();
    }

    std::vector<CLit> compile_goal(const std::vector<Literal>& lits)
    {
        std::vector<CLit> out;
        for (const auto& l : lits) {
            CLit c{l.negated, predicate(l.atom.pred, l.atom.args.size()), {}};
            for (const auto& a : l.atom.args)
                c.args.push_back(a.is_var ? var_term(query_vars_.at(a.name)) : constant(a.name));
            out.push_back(std::move(c));
        }
        return out;
    }

    /// Depth-first SLD resolution; `on_solution` returns true to stop.
    bool run(std::vector<CLit> goals, const std::function<bool()>& on_solution)
    {
        struct Frame {
            std::vector<CLit> goals;
            std::size_t selected;
            const std::vector<CClause>* clauses;
            std::size_t next;
            std::size_t trail_mark;
            std::size_t bind_size;
        };
        static const std::vector<CClause> none;
        std::size_t base_trail = trail_.size();
        std::size_t base_bind = bind_.size();
        std::vector<Frame> stack;
        std::optional<std::vector<CLit>> current = std::move(goals);

        auto leave = [&] {
            undo(base_trail);
            bind_.resize(base_bind);
        };

        for (;;) {
            if (current) {
                std::vector<CLit> g = std::move(*current);
                current.reset();
                if (g.empty()) {
                    if (on_solution()) {
                        leave();
                        return true;
                    }
                } else {
                    std::optional<std::size_t> sel;
                    for (std::size_t i = 0; i < g.size() && !sel; ++i)
                        if (!g[i].negated || ground(g[i]))
                            sel = i;
                    if (!sel)
                        throw Error("IllFormedQuery", "floundering: negated goal '" + describe(g.front()) +
                                                          "' has unbound variables");
                    tick();
                    if (g[*sel].negated) {
                        CLit positive = g[*sel];
                        positive.negated = false;
                        for (auto& a : positive.args)
                            a = deref(a);
                        std::size_t mark = trail_.size();
                        std::size_t size = bind_.size();
                        bool provable = run({positive}, [] { return true; });
                        undo(mark);
                        bind_.resize(size);
                        if (!provable) {
                            g.erase(g.begin() + static_cast<std::ptrdiff_t>(*sel));
                            current = std::move(g);
                            continue;
                        }
                    } else {
                        auto it = clauses_.find(g[*sel].pred);
                        const auto* list = it == clauses_.end() ? &none : &it->second;
                        stack.push_back(Frame{std::move(g), *sel, list, 0, trail_.size(), bind_.size()});
                    }
                }
            }

            // Try the next clause of the most recent choice point.
            if (stack.empty()) {
                leave();
                return false;
            }
            Frame& f = stack.back();
            undo(f.trail_mark);
            bind_.resize(f.bind_size);
            if (f.next >= f.clauses->size()) {
                stack.pop_back();
                continue;
            }
            const CClause& c = (*f.clauses)[f.next++];
            tick();
            int base = static_cast<int>(bind_.size());
            bind_.resize(bind_.size() + static_cast<std::size_t>(c.nvars), unbound);
            const CLit& goal = f.goals[f.selected];
            bool ok = true;
            for (std::size_t i = 0; i < c.head.size() && ok; ++i)
                ok = unify(rename(c.head[i], base), goal.args[i]);
            if (!ok)
                continue;
            std::vector<CLit> next;
            next.reserve(f.goals.size() - 1 + c.body.size());
            for (std::size_t i = 0; i < f.selected; ++i)
                next.push_back(f.goals[i]);
            for (const auto& b : c.body) {
                CLit r{b.negated, b.pred, {}};
                for (int a : b.args)
                    r.args.push_back(rename(a, base));
                next.push_back(std::move(r));
            }
            for (std::size_t i = f.selected + 1; i < f.goals.size(); ++i)
                next.push_back(f.goals[i]);
            current = std::move(next);
        }
    }

    std::string value_of(const std::string& var)
    {
        int t = deref(var_term(query_vars_.at(var)));
        if (t < 0)
            return "_";
        return print(LTerm{false, constants_[static_cast<std::size_t>(t)]});
    }

    std::uint64_t steps() const { return steps_; }

private:
    int predicate(const std::string& name, std::size_t arity)
    {
        std::string key = name + "/" + std::to_string(arity);
        auto [it, fresh] = predicates_.emplace(key, static_cast<int>(predicates_.size()));
        return it->second;
    }

    int constant(const std::string& name)
    {
        auto [it, fresh] = constant_ids_.emplace(name, static_cast<int>(constants_.size()));
        if (fresh)
            constants_.push_back(name);
        return it->second;
    }

    std::vector<int> compile_args(const std::vector<LTerm>& args, std::map<std::string, int>& locals)
    {
        std::vector<int> out;
        for (const auto& a : args) {
            if (!a.is_var) {
                out.push_back(constant(a.name));
                continue;
            }
            if (a.name == "_") {
                int k = static_cast<int>(locals.size());
                locals.emplace("_#" + std::to_string(k), k);
                out.push_back(var_term(k));
                continue;
            }
            auto [it, fresh] = locals.emplace(a.name, static_cast<int>(locals.size()));
            out.push_back(var_term(it->second));
        }
        return out;
    }

    static int rename(int t, int base) { return t >= 0 ? t : var_term(base + var_index(t)); }

    int deref(int t) const
    {
        while (t < 0) {
            int b = bind_[static_cast<std::size_t>(var_index(t))];
            if (b == unbound)
                return t;
            t = b;
        }
        return t;
    }

    bool ground(const CLit& l) const
    {
        for (int a : l.args)
            if (deref(a) < 0)
                return false;
        return true;
    }

    bool unify(int a, int b)
    {
        a = deref(a);
        b = deref(b);
        if (a == b)
            return true;
        if (a < 0) {
            bind(a, b);
            return true;
        }
        if (b < 0) {
            bind(b, a);
            return true;
        }
        return false;
    }

    void bind(int var, int value)
    {
        std::size_t i = static_cast<std::size_t>(var_index(var));
        bind_[i] = value;
        trail_.push_back(i);
    }

    void undo(std::size_t mark)
    {
        while (trail_.size() > mark) {
            std::size_t i = trail_.back();
            trail_.pop_back();
            if (i < bind_.size())
                bind_[i] = unbound;
        }
    }

    void tick()
    {
        if (++steps_ > max_steps_)
            throw OutOfSteps{"BudgetExceeded"};
        if ((steps_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_)
            throw OutOfSteps{"Timeout"};
    }

    std::string describe(const CLit& l) const
    {
        for (const auto& [key, id] : predicates_)
            if (id == l.pred)
                return key;
        return "?";
    }

    std::uint64_t max_steps_;
    std::chrono::steady_clock::time_point deadline_;
    std::uint64_t steps_ = 0;
    std::map<std::string, int> predicates_;
    std::map<std::string, int> constant_ids_;
    std::vector<std::string> constants_;
    std::map<int, std::vector<CClause>> clauses_;
    std::map<std::string, int> query_vars_;
    std::vector<int> bind_;
    std::vector<std::size_t> trail_;
};

void collect_vars(const std::vector<Literal>& lits, std::vector<std::string>& out)
{
    for (const auto& l : lits)
        for (const auto& a : l.atom.args)
            if (a.is_var && a.name != "_" && std::find(out.begin(), out.end(), a.name) == out.end())
                out.push_back(a.name);
}

/// Anonymous variables in queries become distinct named ones.
std::vector<Literal> name_anonymous(std::vector<Literal> lits, int& counter)
{
    for (auto& l : lits)
        for (auto& a : l.atom.args)
            if (a.is_var && a.name == "_")
                a.name = "_" + std::to_string(++counter);
    return lits;
}

} // namespace

Verdict solve_logic(const LogicQuery& q, const SolverBudget& budget)
{
    Verdict v;
    std::uint64_t steps = 0;
    std::string unknown_reason;

    for (const auto& alt : q.alternatives) {
        Engine engine(alt.program, budget);
        int anon = 0;
        auto required = name_anonymous(alt.required, anon);
        std::vector<std::vector<Literal>> disjuncts;
        for (const auto& d : alt.disjuncts)
            disjuncts.push_back(name_anonymous(d, anon));
        auto closed = name_anonymous(alt.closed_goal, anon);

        std::vector<std::string> shown;
        collect_vars(required, shown);
        std::vector<std::string> all = shown;
        for (const auto& d : disjuncts)
            collect_vars(d, all);
        collect_vars(closed, all);
        engine.declare_query_variables(all);

        std::vector<Binding> model;
        auto record = [&](const std::vector<std::string>& names) {
            model.clear();
            for (const auto& n : names)
                if (n.front() != '_')
                    model.push_back(Binding{n, ModelValue::of_term(engine.value_of(n))});
        };

        bool found = false;
        try {
            if (!disjuncts.empty()) {
                for (const auto& d : disjuncts) {
                    std::vector<Literal> goal = required;
                    goal.insert(goal.end(), d.begin(), d.end());
                    std::vector<std::string> names = shown;
                    collect_vars(d, names);
                    if (engine.run(engine.compile_goal(goal), [&] {
                            record(names);
                            return true;
                        })) {
                        found = true;
                        break;
                    }
                }
            } else if (!closed.empty()) {
                auto closed_goal = engine.compile_goal(closed);
                found = engine.run(engine.compile_goal(required), [&] {
                    bool holds = engine.run(closed_goal, [] { return true; });
                    if (holds)
                        return false;
                    record(shown);
                    return true;
                });
            }
        } catch (const OutOfSteps& e) {
            steps += engine.steps();
            if (unknown_reason.empty())
                unknown_reason = e.reason;
            continue;
        }
        steps += engine.steps();
        if (found) {
            v.outcome = Outcome::Sat;
            v.model = std::move(model);
            v.diagnostics["steps"] = steps;
            return v;
        }
    }
    v.outcome = unknown_reason.empty() ? Outcome::Unsat : Outcome::Unknown;
    v.diagnostics["steps"] = steps;
    if (!unknown_reason.empty())
        v.diagnostics["unknown_reason"] = unknown_reason;
    return v;
}

} // namespace tdt
