#include "support/generators.hpp"
#include "support/suites.hpp"

#include "tdt/ast.hpp"
#include "tdt/gsn.hpp"
#include "tdt/rules.hpp"

#include <gtest/gtest.h>

#include <iostream>

using namespace tdt;

namespace {

/// print∘parse is the identity on parsed trees, and classification is stable.
void expect_round_trip(const ConstraintAst& generated)
{
    std::string text = print(generated);
    ConstraintAst first = parse_constraint(text);
    ConstraintAst second = parse_constraint(print(first));
    EXPECT_EQ(first, second) << text;
    EXPECT_EQ(classify(first), classify(generated)) << text;
    EXPECT_EQ(classify(second), classify(first)) << text;
}

} // namespace

TEST(StructureProperties, ArithmeticPrintParseRoundTrip)
{
    gen::Rng rng(41);
    for (int i = 0; i < 1000; ++i)
        expect_round_trip(gen::random_arith_conj(rng, i % 3 == 0));
}

TEST(StructureProperties, LogicPrintParseRoundTrip)
{
    gen::Rng rng(42);
    for (int i = 0; i < 500; ++i) {
        auto f = gen::logic_family(rng);
        for (const auto& p : f.premises)
            if (!p.clauses.empty())
                expect_round_trip(p);
        expect_round_trip(f.conclusion);
    }
}

TEST(StructureProperties, SetPrintParseRoundTrip)
{
    gen::Rng rng(43);
    for (int i = 0; i < 500; ++i) {
        auto f = gen::set_family(rng);
        SetFormula all = f.premises.front();
        all.atoms.insert(all.atoms.end(), f.conclusion.atoms.begin(), f.conclusion.atoms.end());
        expect_round_trip(all);
        expect_round_trip(gen::random_concrete_program(rng));
    }
}

TEST(StructureProperties, GsnDocumentsRoundTrip)
{
    auto r = suites::gsn_suite(44, 300);
    std::cout << r.summary() << "\n";
    for (const auto& f : r.failures)
        std::cout << "  " << f << "\n";
    EXPECT_TRUE(r.ok());
}

TEST(StructureProperties, RuleTextRoundTrip)
{
    gen::Rng rng(45);
    for (int i = 0; i < 500; ++i) {
        RuleText rt = gen::rule_text(rng);
        std::string text = print_rule_text(rt);
        EXPECT_EQ(parse_rule_text(text), rt) << text;
        Project p = skeleton_from_rules(rt);
        EXPECT_TRUE(is_valid(validate(p))) << text;
        EXPECT_EQ(rules_from_tree(p), rt) << text;
        // Rebuilding from the printed rules gives the same shape.
        EXPECT_EQ(canonical_form(skeleton_from_rules(parse_rule_text(print_rule_text(rules_from_tree(p))))),
                  canonical_form(p));
    }
}
