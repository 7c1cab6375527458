#include "tdt/ast.hpp"

#include <gtest/gtest.h>

using namespace tdt;

namespace {

const char* eq1_premises = "developer(mr_a, alice). developer(mr_b, bob).\n"
                           "committer(mr_a, david). committer(mr_b, eve).\n"
                           "self_reviewed(M) :- developer(M, ID), committer(M, ID).";

template <typename T>
const T& as(const ConstraintAst& a)
{
    return std::get<T>(a);
}

} // namespace

TEST(Dsl, ProductEquality)
{
    auto ast = parse_constraint("v * v = 2 * a * x");
    const auto& c = as<ArithConj>(ast);
    ASSERT_EQ(c.atoms.size(), 1u);
    EXPECT_EQ(c.atoms[0].op, CmpOp::Eq);
    EXPECT_EQ(c.atoms[0].lhs, Term::binary(TermOp::Mul, Term::var("v"), Term::var("v")));
}

TEST(Dsl, DecimalLiteralsAreExact)
{
    auto ast = parse_constraint("friction_coefficient > 0.2");
    const auto& c = as<ArithConj>(ast);
    ASSERT_EQ(c.atoms.size(), 1u);
    EXPECT_EQ(c.atoms[0].op, CmpOp::Gt);
    EXPECT_EQ(c.atoms[0].rhs.op, TermOp::Num);
    EXPECT_EQ(c.atoms[0].rhs.value, Rational(1, 5));
}

TEST(Dsl, SemicolonSeparatesConjuncts)
{
    auto ast = parse_constraint("s = 3 ; 0 < dt ; dt < 0.1");
    const auto& c = as<ArithConj>(ast);
    EXPECT_EQ(c.atoms.size(), 3u);
    EXPECT_EQ(variables_of(c), (std::vector<std::string>{"s", "dt"}));
}

TEST(Dsl, DoubleEqualsIsNormalized)
{
    EXPECT_EQ(parse_constraint("obstacle_distance == 3"), parse_constraint("obstacle_distance = 3"));
    EXPECT_EQ(print(parse_constraint("s == 3")), "s = 3");
}

TEST(Dsl, AbstractSetDeclarations)
{
    auto ast = parse_constraint("Set C, D; Elem b; C inter D = empty;");
    const auto& f = as<SetFormula>(ast);
    EXPECT_EQ(f.sets, (std::vector<std::string>{"C", "D"}));
    EXPECT_EQ(f.elems, (std::vector<std::string>{"b"}));
    ASSERT_EQ(f.atoms.size(), 1u);
    EXPECT_EQ(f.atoms[0].kind, SetAtomKind::Eq);
    EXPECT_EQ(classify(ast), CType::AbstractSet);
}

TEST(Dsl, SetAtoms)
{
    auto ast = parse_constraint("C inter D = empty; b in (C union D);");
    const auto& f = as<SetFormula>(ast);
    ASSERT_EQ(f.atoms.size(), 2u);
    EXPECT_EQ(f.atoms[1].kind, SetAtomKind::In);
    EXPECT_EQ(f.atoms[1].elem.name, "b");
    EXPECT_EQ(f.atoms[1].rhs.op, SetOp::Union);
    auto ast2 = parse_constraint("b notin D; C subset (D diff C);");
    const auto& g = as<SetFormula>(ast2);
    EXPECT_EQ(g.atoms[0].kind, SetAtomKind::NotIn);
    EXPECT_EQ(g.atoms[1].kind, SetAtomKind::Subset);
}

TEST(Dsl, LiteralSetsMakeConcreteSets)
{
    auto ast = parse_constraint("C = {1,2}; D = {3}; C inter D = empty;");
    EXPECT_EQ(classify(ast), CType::ConcreteSet);
    const auto& p = as<ConcreteSetProgram>(ast);
    ASSERT_EQ(p.bindings.size(), 2u);
    EXPECT_EQ(p.bindings[0].elements, (std::set<std::uint64_t>{1, 2}));
}

TEST(Dsl, LogicProgram)
{
    auto ast = parse_constraint(eq1_premises);
    EXPECT_EQ(classify(ast), CType::Logical);
    const auto& p = as<LogicProgram>(ast);
    ASSERT_EQ(p.clauses.size(), 5u);
    EXPECT_TRUE(p.clauses[0].is_fact());
    const auto& rule = p.clauses[4];
    EXPECT_EQ(rule.head.pred, "self_reviewed");
    ASSERT_EQ(rule.body.size(), 2u);
    EXPECT_TRUE(rule.body[0].atom.args[1].is_var);
    EXPECT_EQ(rule.body[0].atom.args[0], (LTerm{true, "M"}));
    EXPECT_EQ(p.clauses[0].head.args[1], (LTerm{false, "alice"}));
}

TEST(Dsl, NegatedQuery)
{
    auto ast = parse_constraint("\\+ self_reviewed(M).");
    const auto& p = as<LogicProgram>(ast);
    ASSERT_EQ(p.queries.size(), 1u);
    ASSERT_EQ(p.queries[0].size(), 1u);
    EXPECT_TRUE(p.queries[0][0].negated);
    EXPECT_EQ(classify(ast), CType::Logical);
}

TEST(Dsl, ArithmeticClassification)
{
    EXPECT_EQ(classify(parse_constraint("response_time = proc_all_time + send_time")), CType::Arithmetic);
    EXPECT_EQ(classify(parse_constraint("proc_all_time < 1 ; send_time < 0.5")), CType::Arithmetic);
}

TEST(Dsl, SyntaxErrorsCarryPosition)
{
    try {
        parse_constraint("x < ");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.kind(), "SyntaxError");
        EXPECT_EQ(e.line(), 1u);
        EXPECT_GE(e.column(), 4u);
        EXPECT_FALSE(e.expected().empty());
    }
    try {
        parse_constraint("x < 1 ;\ny >");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(Dsl, DivisionByLiteralZeroIsRejected)
{
    EXPECT_THROW(parse_constraint("x / 0 < 1"), Error);
}

TEST(Dsl, MixedDialect)
{
    try {
        parse_constraint("Set C; Elem b; b in C; x < 1;");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "MixedDialect");
    }
}

TEST(Dsl, PrintParseIdentityOnExamples)
{
    for (const char* src : {"v * v = 2 * a * x", "x < s - v * dt", "0.18 <= a", "-x + 3 >= -(y - 2) / 4",
                            "Set C, D; Elem b; C inter D = empty;", "C = {1,2}; D = {3}; C inter D = empty;",
                            eq1_premises, "\\+ self_reviewed(M).", "?- p(X), \\+ q(X)."}) {
        auto a = parse_constraint(src);
        auto b = parse_constraint(print(a));
        EXPECT_EQ(a, b) << src << " printed as " << print(a);
    }
}

TEST(Dsl, HintSelectsDialect)
{
    EXPECT_EQ(classify(parse_constraint("p(a).", CType::Logical)), CType::Logical);
}
