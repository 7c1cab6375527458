#include "support/fixtures.hpp"

#include "tdt/gsn.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace tdt;

namespace {

GsnDocument load_gsn(const std::string& name)
{
    return gsn_from_json(nlohmann::json::parse(fixtures::text(name)));
}

std::multiset<std::string> project_texts(const Project& p)
{
    std::multiset<std::string> out;
    for (const auto& [id, n] : p.tree.nodes) {
        out.insert(n.description);
        for (const auto& a : n.annotations)
            out.insert(a.text);
    }
    return out;
}

std::multiset<std::string> document_texts(const GsnDocument& d)
{
    std::multiset<std::string> out;
    for (const auto& e : d.elements)
        out.insert(e.text);
    return out;
}

std::size_t count_kind(const GsnDocument& d, GsnKind k)
{
    return static_cast<std::size_t>(
        std::count_if(d.elements.begin(), d.elements.end(), [&](const GsnElement& e) { return e.kind == k; }));
}

GsnElement element(const std::string& id, GsnKind kind, const std::string& text)
{
    GsnElement e;
    e.id = id;
    e.kind = kind;
    e.text = text;
    return e;
}

} // namespace

TEST(Gsn, StrategyBecomesAnnotation)
{
    GsnDocument d;
    d.elements = {element("G1", GsnKind::Goal, "top"), element("S1", GsnKind::Strategy, "argue per part"),
                  element("G2", GsnKind::Goal, "left"), element("G3", GsnKind::Goal, "right")};
    d.edges = {{"G1", "S1", GsnEdgeType::SupportedBy},
               {"S1", "G2", GsnEdgeType::SupportedBy},
               {"S1", "G3", GsnEdgeType::SupportedBy}};
    Project p = gsn_to_tdt(d);
    EXPECT_EQ(p.tree.root, "G1");
    EXPECT_EQ(p.tree.at("G1").children, (std::vector<std::string>{"G2", "G3"}));
    ASSERT_EQ(p.tree.at("G1").annotations.size(), 1u);
    EXPECT_EQ(p.tree.at("G1").annotations[0].role, AnnotationRole::Strategy);
    EXPECT_EQ(p.tree.at("G1").annotations[0].text, "argue per part");
    EXPECT_TRUE(isomorphic(tdt_to_gsn(p), d));
}

TEST(Gsn, SingleGoal)
{
    GsnDocument d;
    d.elements = {element("G1", GsnKind::Goal, "alone")};
    Project p = gsn_to_tdt(d);
    EXPECT_EQ(p.tree.nodes.size(), 1u);
    EXPECT_TRUE(p.tree.at("G1").annotations.empty());
}

TEST(Gsn, CubeSatFixture)
{
    GsnDocument d = load_gsn("cubesat_gsn.json");
    EXPECT_EQ(count_kind(d, GsnKind::Strategy), 2u);
    EXPECT_EQ(count_kind(d, GsnKind::Context), 4u);
    Project p = gsn_to_tdt(d);
    std::size_t annotations = 0;
    for (const auto& [id, n] : p.tree.nodes)
        annotations += n.annotations.size();
    EXPECT_EQ(annotations, 6u);
    EXPECT_EQ(p.tree.nodes.size(), count_kind(d, GsnKind::Goal) + count_kind(d, GsnKind::Solution));
    EXPECT_EQ(p.tree.nodes.size(), 8u);
    EXPECT_TRUE(is_valid(validate(p)));
    EXPECT_EQ(project_texts(p), document_texts(d));
    EXPECT_TRUE(isomorphic(tdt_to_gsn(p), d));
}

TEST(Gsn, AgvConvertsBothWays)
{
    Project p = fixtures::project("agv.json");
    GsnDocument d = tdt_to_gsn(p);
    EXPECT_EQ(count_kind(d, GsnKind::Strategy), 2u);
    EXPECT_EQ(document_texts(d), project_texts(p));
    Project back = gsn_to_tdt(d);
    Project bare = p;
    bare.variable_map.clear();
    EXPECT_EQ(canonical_form(back), canonical_form(bare));
    EXPECT_EQ(project_texts(back), project_texts(p));
    EXPECT_TRUE(isomorphic(tdt_to_gsn(back), d));
}

TEST(Gsn, PlainTreeHasOnlySupportEdges)
{
    Project p = fixtures::project("snapshot.json");
    GsnDocument d = tdt_to_gsn(p);
    for (const auto& e : d.elements)
        EXPECT_TRUE(e.kind == GsnKind::Goal || e.kind == GsnKind::Solution);
    for (const auto& e : d.edges)
        EXPECT_EQ(e.type, GsnEdgeType::SupportedBy);
}

TEST(Gsn, MultipleRootsRejected)
{
    GsnDocument d;
    d.elements = {element("G1", GsnKind::Goal, "a"), element("G2", GsnKind::Goal, "b")};
    try {
        gsn_to_tdt(d);
        FAIL();
    } catch (const ConversionError& e) {
        EXPECT_EQ(e.reason(), ConversionError::Kind::MultipleRoots);
    }
}

TEST(Gsn, CyclicSupportRejected)
{
    GsnDocument d;
    d.elements = {element("G1", GsnKind::Goal, "a"), element("G2", GsnKind::Goal, "b")};
    d.edges = {{"G1", "G2", GsnEdgeType::SupportedBy}, {"G2", "G1", GsnEdgeType::SupportedBy}};
    try {
        gsn_to_tdt(d);
        FAIL();
    } catch (const ConversionError& e) {
        EXPECT_EQ(e.reason(), ConversionError::Kind::CyclicSupport);
    }
}

TEST(Gsn, StrategyWithTwoParentsRejected)
{
    GsnDocument d;
    d.elements = {element("G1", GsnKind::Goal, "a"), element("G2", GsnKind::Goal, "b"),
                  element("S1", GsnKind::Strategy, "s"), element("G3", GsnKind::Goal, "c")};
    d.edges = {{"G1", "G2", GsnEdgeType::SupportedBy},
               {"G1", "S1", GsnEdgeType::SupportedBy},
               {"G2", "S1", GsnEdgeType::SupportedBy},
               {"S1", "G3", GsnEdgeType::SupportedBy}};
    EXPECT_THROW(gsn_to_tdt(d), ConversionError);
}

TEST(Gsn, ContextMustUseInContextOf)
{
    GsnDocument d;
    d.elements = {element("G1", GsnKind::Goal, "a"), element("C1", GsnKind::Context, "ctx")};
    d.edges = {{"G1", "C1", GsnEdgeType::SupportedBy}};
    EXPECT_THROW(gsn_to_tdt(d), ConversionError);
}

TEST(Gsn, StrategyContextIsAnchoredAndFlagged)
{
    GsnDocument d;
    d.elements = {element("G1", GsnKind::Goal, "a"), element("S1", GsnKind::Strategy, "s"),
                  element("C1", GsnKind::Context, "ctx"), element("G2", GsnKind::Goal, "b")};
    d.edges = {{"G1", "S1", GsnEdgeType::SupportedBy},
               {"S1", "C1", GsnEdgeType::InContextOf},
               {"S1", "G2", GsnEdgeType::SupportedBy}};
    Project p = gsn_to_tdt(d);
    const auto& notes = p.tree.at("G1").annotations;
    ASSERT_EQ(notes.size(), 2u);
    EXPECT_EQ(notes[1].anchor, std::optional<std::size_t>(0));
    auto vs = validate(p);
    EXPECT_TRUE(is_valid(vs));
    EXPECT_TRUE(std::any_of(vs.begin(), vs.end(), [](const Violation& v) {
        return v.kind == ViolationKind::StrategyContextHoisted && v.severity == Severity::Warning;
    }));
    EXPECT_TRUE(isomorphic(tdt_to_gsn(p), d));
}

TEST(Gsn, JsonRoundTrip)
{
    GsnDocument d = load_gsn("cubesat_gsn.json");
    EXPECT_EQ(gsn_from_json(to_json(d)), d);
    EXPECT_THROW(gsn_from_json(nlohmann::json::parse(R"({"elements":[{"id":"x","kind":"Blob","text":""}],"edges":[]})")),
                 Error);
}
