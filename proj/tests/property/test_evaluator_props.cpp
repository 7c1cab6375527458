#include "support/generators.hpp"

#include "tdt/evaluator.hpp"
#include "tdt/project_io.hpp"
#include "tdt/solver.hpp"

#include <gtest/gtest.h>

using namespace tdt;

namespace {

Project fixture(const std::string& name)
{
    return load_project(std::string(TDT_FIXTURE_DIR) + "/" + name);
}

std::map<std::string, Status> statuses(const EvaluationReport& r)
{
    std::map<std::string, Status> out;
    for (const auto& [id, n] : r.nodes)
        out[id] = n.status;
    return out;
}

Obligation obligation_of(const gen::ArithFamily& f)
{
    Obligation ob;
    for (const auto& p : f.premises)
        ob.premises.push_back(p);
    ob.conclusion = f.conclusion;
    ob.relation = f.relation;
    return ob;
}

} // namespace

TEST(EvaluatorProperties, StrengtheningEvidenceNeverBreaksSoundFamily)
{
    gen::Rng rng(51);
    int sound = 0;
    for (int i = 0; i < 3000 && sound < 300; ++i) {
        auto f = gen::linear_family(rng);
        if (discharge(obligation_of(f)).outcome != Outcome::Unsat)
            continue;
        ++sound;
        auto stronger = f;
        auto& target = stronger.premises[static_cast<std::size_t>(gen::uniform(rng, 0, static_cast<int>(f.premises.size()) - 1))];
        auto extra = gen::random_arith_conj(rng, false);
        target.atoms.push_back(extra.atoms.front());
        EXPECT_NE(discharge(obligation_of(stronger)).outcome, Outcome::Sat)
            << print(target) << " => " << print(f.conclusion);
    }
    EXPECT_GE(sound, 100);
}

TEST(EvaluatorProperties, EvaluationIsDeterministic)
{
    for (const auto* name : {"agv.json", "agv_weak.json", "snapshot.json"}) {
        Project p = fixture(name);
        auto a = evaluate_tree(p);
        auto b = evaluate_tree(p);
        EXPECT_EQ(statuses(a), statuses(b)) << name;
        EXPECT_EQ(a.tainted, b.tainted) << name;
    }
}

TEST(EvaluatorProperties, ParallelismDoesNotChangeStatuses)
{
    for (const auto* name : {"agv.json", "agv_weak.json", "snapshot.json"}) {
        Project p = fixture(name);
        EvaluationOptions serial;
        serial.parallelism = 1;
        EvaluationOptions wide;
        wide.parallelism = 8;
        EXPECT_EQ(statuses(evaluate_tree(p, serial)), statuses(evaluate_tree(p, wide))) << name;
    }
}

TEST(EvaluatorProperties, FamiliesAreIndependent)
{
    for (const auto* name : {"agv.json", "agv_weak.json", "snapshot.json"}) {
        Project p = fixture(name);
        auto whole = evaluate_tree(p);
        auto order = p.tree.preorder();
        std::reverse(order.begin(), order.end());
        for (const auto& id : order)
            EXPECT_EQ(evaluate_subtree(p, id).status, whole.at(id).status) << name << " node " << id;
    }
}
