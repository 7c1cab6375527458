#include "support/suites.hpp"

#include <gtest/gtest.h>

#include <iostream>

TEST(SetProperties, SearchAgreesWithEnumerator)
{
    auto r = suites::set_suite(3101, 600);
    std::cout << r.summary() << "\n";
    for (const auto& f : r.failures)
        std::cout << "  " << f << "\n";
    EXPECT_EQ(r.disagreements, 0u);
    EXPECT_EQ(r.bad_models, 0u);
    EXPECT_EQ(r.errors, 0u);
    EXPECT_EQ(r.unknown, 0u);
    EXPECT_GT(r.sat, 0u);
    EXPECT_GT(r.unsat, 0u);
}
