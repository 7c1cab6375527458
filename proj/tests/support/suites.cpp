#include "suites.hpp"

#include "generators.hpp"
#include "oracles/arith_oracle.hpp"
#include "oracles/logic_oracle.hpp"
#include "oracles/set_oracle.hpp"

#include "tdt/gsn.hpp"
#include "tdt/solver.hpp"

#include <algorithm>
#include <sstream>

namespace suites {

using namespace tdt;

std::string SuiteResult::summary() const
{
    std::ostringstream os;
    os << name << ": " << cases << " cases (sat " << sat << ", unsat " << unsat << ", unknown " << unknown
       << "), " << disagreements << " disagreements, " << models_checked - bad_models << "/" << models_checked
       << " models verified, " << errors << " errors";
    return os.str();
}

void SuiteResult::fail(const std::string& what)
{
    if (failures.size() < 5)
        failures.push_back(what);
}

namespace {

void tally(SuiteResult& r, Outcome o)
{
    ++r.cases;
    switch (o) {
    case Outcome::Sat: ++r.sat; break;
    case Outcome::Unsat: ++r.unsat; break;
    case Outcome::Unknown: ++r.unknown; break;
    }
}

std::string describe(const gen::ArithFamily& f)
{
    std::string s;
    for (const auto& p : f.premises)
        s += "[" + print(p) + "] ";
    return s + (f.relation == Relation::Or ? "(or) " : "") + "=> [" + print(f.conclusion) + "]";
}

Obligation arith_obligation(const gen::ArithFamily& f)
{
    Obligation ob;
    for (const auto& p : f.premises)
        ob.premises.push_back(p);
    ob.conclusion = f.conclusion;
    ob.relation = f.relation;
    ob.ctype = CType::Arithmetic;
    return ob;
}

bool arith_counterexample(const gen::ArithFamily& f, const oracle::Point& p)
{
    if (f.relation == Relation::And)
        return oracle::counterexample(f.premises, f.conclusion, p);
    for (const auto& prem : f.premises)
        if (oracle::counterexample({prem}, f.conclusion, p))
            return true;
    return false;
}

/// Checks a Sat model assigns every variable and witnesses the family.
void check_arith_model(SuiteResult& r, const gen::ArithFamily& f, const Verdict& v)
{
    ++r.models_checked;
    oracle::Point p;
    for (const auto& b : v.model)
        if (b.value.kind == ModelValue::Kind::Number)
            p[b.name] = b.value.number;
    std::vector<std::string> used;
    for (const auto& c : f.premises)
        for (const auto& x : variables_of(c))
            used.push_back(x);
    for (const auto& x : variables_of(f.conclusion))
        used.push_back(x);
    bool complete = std::all_of(used.begin(), used.end(), [&](const std::string& x) { return p.count(x) != 0; });
    if (!complete || !arith_counterexample(f, p)) {
        ++r.bad_models;
        r.fail("model does not verify: " + describe(f));
    }
}

} // namespace

SuiteResult linear_arith_suite(std::uint64_t seed, std::size_t n)
{
    SuiteResult r{"linear arithmetic"};
    gen::Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        auto f = gen::linear_family(rng);
        // Oracle: exact vertex enumeration, one premise group at a time for Or.
        std::optional<oracle::Point> witness;
        std::vector<std::vector<ArithConj>> groups;
        if (f.relation == Relation::And)
            groups.push_back(f.premises);
        else
            for (const auto& p : f.premises)
                groups.push_back({p});
        for (const auto& g : groups) {
            auto d = oracle::decide_family(g, f.conclusion);
            if (!d) {
                ++r.errors;
                r.fail("oracle rejected a linear family: " + describe(f));
                break;
            }
            if (*d) {
                witness = **d;
                break;
            }
        }
        if (witness && !arith_counterexample(f, *witness)) {
            ++r.errors;
            r.fail("oracle witness does not verify: " + describe(f));
        }
        try {
            Verdict v = discharge(arith_obligation(f));
            tally(r, v.outcome);
            if (v.outcome == Outcome::Sat) {
                check_arith_model(r, f, v);
                if (!witness) {
                    ++r.disagreements;
                    r.fail("solver Sat, oracle Unsat: " + describe(f));
                }
            } else if (v.outcome == Outcome::Unsat && witness) {
                ++r.disagreements;
                r.fail("solver Unsat, oracle Sat: " + describe(f));
            }
        } catch (const std::exception& e) {
            ++r.errors;
            r.fail(std::string("exception: ") + e.what() + " on " + describe(f));
        }
    }
    return r;
}

SuiteResult nonlinear_arith_suite(std::uint64_t seed, std::size_t n)
{
    SuiteResult r{"nonlinear arithmetic"};
    gen::Rng rng(seed);
    SolverBudget budget;
    budget.max_boxes = 5000;
    budget.wall_ms = 500;
    std::vector<oracle::Q> coarse, fine;
    for (int k = -6; k <= 6; ++k)
        coarse.emplace_back(k, 2);
    for (int k = -12; k <= 12; ++k)
        fine.emplace_back(k, 4);
    for (auto& q : coarse)
        q.canonicalize();
    for (auto& q : fine)
        q.canonicalize();

    for (std::size_t i = 0; i < n; ++i) {
        auto f = gen::nonlinear_family(rng);
        const auto& grid = f.vars.size() <= 2 ? fine : coarse;
        std::optional<oracle::Point> witness;
        if (f.relation == Relation::And) {
            witness = oracle::grid_search(f.premises, f.conclusion, f.vars, grid);
        } else {
            for (const auto& p : f.premises)
                if ((witness = oracle::grid_search({p}, f.conclusion, f.vars, grid)))
                    break;
        }
        try {
            Verdict v = discharge(arith_obligation(f), budget);
            tally(r, v.outcome);
            if (v.outcome == Outcome::Sat)
                check_arith_model(r, f, v);
            else if (v.outcome == Outcome::Unsat && witness) {
                ++r.disagreements;
                r.fail("solver Unsat, grid witness exists: " + describe(f));
            }
        } catch (const std::exception& e) {
            ++r.errors;
            r.fail(std::string("exception: ") + e.what() + " on " + describe(f));
        }
    }
    return r;
}

namespace {

std::string describe(const gen::LogicFamily& f)
{
    std::string s;
    for (const auto& p : f.premises)
        s += "[" + print(p) + "] ";
    return s + (f.relation == Relation::Or ? "(or) " : "") + "=> [" + print(f.conclusion) + "]";
}

/// Oracle verdict for one group of premises: does the conclusion fail?
bool logic_counterexample(const std::vector<LogicProgram>& premises, const gen::LogicFamily& f,
                          std::optional<std::map<std::string, std::string>> bindings, bool& ok)
{
    std::vector<Clause> program;
    for (const auto& p : premises)
        program.insert(program.end(), p.clauses.begin(), p.clauses.end());
    std::set<std::string> domain{"a", "b", "c"};
    const auto& goal = f.conclusion.queries.front();
    for (const auto& l : goal)
        oracle::collect_constants(l.atom, domain);
    auto model = oracle::perfect_model(program, domain);
    if (!model) {
        ok = false;
        return false;
    }
    std::vector<LAtom> atoms;
    for (const auto& l : goal)
        atoms.push_back(l.atom);
    if (f.negative_goal) {
        for (const auto& a : atoms)
            if (oracle::satisfiable_in({a}, *model, domain, bindings.value_or(std::map<std::string, std::string>{})))
                return true;
        return false;
    }
    return !oracle::satisfiable_in(atoms, *model, domain);
}

} // namespace

SuiteResult logic_suite(std::uint64_t seed, std::size_t n)
{
    SuiteResult r{"datalog"};
    gen::Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        auto f = gen::logic_family(rng);
        std::vector<std::vector<LogicProgram>> groups;
        if (f.relation == Relation::And)
            groups.push_back(f.premises);
        else
            for (const auto& p : f.premises)
                groups.push_back({p});
        bool ok = true;
        bool expected = false;
        for (const auto& g : groups)
            expected = logic_counterexample(g, f, std::nullopt, ok) || expected;
        if (!ok) {
            ++r.errors;
            r.fail("generator produced an unstratified program: " + describe(f));
            continue;
        }
        Obligation ob;
        for (const auto& p : f.premises) {
            if (!p.clauses.empty() && parse_constraint(print(p), CType::Logical) != ConstraintAst{p}) {
                ++r.errors;
                r.fail("program does not survive print/parse: " + print(p));
            }
            ob.premises.push_back(p);
        }
        ob.conclusion = f.conclusion;
        ob.relation = f.relation;
        ob.ctype = CType::Logical;
        try {
            Verdict v = discharge(ob);
            tally(r, v.outcome);
            if (v.outcome == Outcome::Unknown)
                continue;
            if ((v.outcome == Outcome::Sat) != expected) {
                ++r.disagreements;
                r.fail(std::string("solver ") + std::string(to_string(v.outcome)) + ", oracle " +
                       (expected ? "Sat" : "Unsat") + ": " + describe(f));
            }
            if (v.outcome == Outcome::Sat && f.negative_goal) {
                // The reported bindings must make one of the goal atoms true.
                ++r.models_checked;
                std::map<std::string, std::string> env;
                for (const auto& b : v.model)
                    env[b.name] = b.value.term;
                bool verified = false;
                for (const auto& g : groups)
                    verified = logic_counterexample(g, f, env, ok) || verified;
                if (!verified) {
                    ++r.bad_models;
                    r.fail("bindings do not witness the goal: " + describe(f));
                }
            }
        } catch (const std::exception& e) {
            ++r.errors;
            r.fail(std::string("exception: ") + e.what() + " on " + describe(f));
        }
    }
    return r;
}

namespace {

std::string describe(const gen::SetFamily& f)
{
    std::string s;
    for (const auto& p : f.premises)
        s += "[" + print(p) + "] ";
    return s + (f.relation == Relation::Or ? "(or) " : "") + "=> [" + print(f.conclusion) + "]";
}

} // namespace

SuiteResult set_suite(std::uint64_t seed, std::size_t n)
{
    SuiteResult r{"abstract sets"};
    gen::Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        auto f = gen::set_family(rng);
        // Small-model bound: one element per named element, plus one witness
        // element for each equality/inclusion of the conclusion, which are
        // the only atoms that occur negated.
        unsigned bound = static_cast<unsigned>(f.elems.size());
        for (const auto& a : f.conclusion.atoms)
            if (a.kind == SetAtomKind::Eq || a.kind == SetAtomKind::Subset)
                ++bound;
        bound = std::max(bound, 1u);
        bool any = f.relation == Relation::Or;
        auto witness = oracle::enumerate_sets(f.premises, any, f.conclusion, f.sets, f.elems, bound);

        Obligation ob;
        for (const auto& p : f.premises)
            ob.premises.push_back(p);
        ob.conclusion = f.conclusion;
        ob.relation = f.relation;
        ob.ctype = CType::AbstractSet;
        try {
            Verdict v = discharge(ob);
            tally(r, v.outcome);
            if (v.outcome == Outcome::Unknown)
                continue;
            if ((v.outcome == Outcome::Sat) != witness.has_value()) {
                ++r.disagreements;
                r.fail(std::string("solver ") + std::string(to_string(v.outcome)) + ", oracle " +
                       (witness ? "Sat" : "Unsat") + ": " + describe(f));
            }
            if (v.outcome == Outcome::Sat) {
                ++r.models_checked;
                oracle::SetWorld w;
                for (const auto& b : v.model) {
                    if (b.value.kind == ModelValue::Kind::Set) {
                        std::uint64_t m = 0;
                        for (auto e : b.value.set)
                            m |= std::uint64_t(1) << e;
                        w.sets[b.name] = m;
                    } else if (b.value.kind == ModelValue::Kind::Number) {
                        w.elems[b.name] = b.value.number.get_num().get_ui();
                    }
                }
                bool complete = w.sets.size() == f.sets.size() && w.elems.size() == f.elems.size();
                if (!complete || !oracle::set_counterexample(f.premises, any, f.conclusion, w)) {
                    ++r.bad_models;
                    r.fail("set model does not verify: " + describe(f));
                }
            }
        } catch (const std::exception& e) {
            ++r.errors;
            r.fail(std::string("exception: ") + e.what() + " on " + describe(f));
        }
    }
    return r;
}

namespace {

std::multiset<std::string> gsn_texts(const GsnDocument& d)
{
    std::multiset<std::string> out;
    for (const auto& e : d.elements)
        out.insert(e.text);
    return out;
}

} // namespace

SuiteResult gsn_suite(std::uint64_t seed, std::size_t n)
{
    SuiteResult r{"gsn round trip"};
    gen::Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        auto doc = gen::gsn_document(rng);
        ++r.cases;
        try {
            Project p = gsn_to_tdt(doc);
            if (!is_valid(validate(p))) {
                ++r.disagreements;
                r.fail("converted project is invalid: " + to_json(doc).dump());
                continue;
            }
            GsnDocument back = tdt_to_gsn(p);
            std::string problem;
            if (!isomorphic(doc, back))
                problem = "not isomorphic";
            else if (gsn_texts(doc) != gsn_texts(back))
                problem = "texts differ";
            else if (canonical_form(gsn_to_tdt(back)) != canonical_form(p))
                problem = "projects differ";
            else if (gsn_from_json(to_json(doc)) != doc)
                problem = "json differs";
            if (!problem.empty()) {
                ++r.disagreements;
                r.fail("lossy round trip (" + problem + "): " + to_json(doc).dump());
            }
        } catch (const std::exception& e) {
            ++r.errors;
            r.fail(std::string("exception: ") + e.what() + " on " + to_json(doc).dump());
        }
    }
    return r;
}

} // namespace suites
