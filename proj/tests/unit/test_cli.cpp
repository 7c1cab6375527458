#include "support/fixtures.hpp"

#include "tdt/cli.hpp"
#include "tdt/gsn.hpp"
#include "tdt/report.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace tdt;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fx(const std::string& name)
{
    return fixtures::path(name).string();
}

} // namespace

TEST(Cli, CheckSoundProject)
{
    auto r = run({"check", fx("agv.json")});
    EXPECT_EQ(r.code, exit_ok) << r.err;
    EXPECT_NE(r.out.find("Sound: all checkable families"), std::string::npos);
}

TEST(Cli, CheckWeakProject)
{
    auto r = run({"check", fx("agv_weak.json")});
    EXPECT_EQ(r.code, exit_unsound);
    EXPECT_NE(r.out.find("Unsound: node 2 (yellow)"), std::string::npos);
    EXPECT_NE(r.out.find("x = "), std::string::npos);
    EXPECT_NE(r.out.find("a = "), std::string::npos);
}

TEST(Cli, CheckUnknownExitsTwo)
{
    Project p;
    p.tree.root = "r";
    p.tree.nodes["r"] = TdtNode{.id = "r", .ctype = CType::Arithmetic, .expr = "x < 0", .children = {"k"}};
    p.tree.nodes["k"] = TdtNode{.id = "k",
                                .kind = NodeKind::Solution,
                                .ctype = CType::Arithmetic,
                                .expr = "x * y = 1 ; x * x + y * y = 3 ; -2 <= x ; x <= 2"};
    auto file = fixtures::scratch_dir("cli-unknown") / "p.json";
    save_project(p, file);
    auto r = run({"check", file.string(), "--budget", "max_boxes=1"});
    EXPECT_EQ(r.code, exit_unknown) << r.out << r.err;
    EXPECT_NE(r.out.find("inconclusive (budget)"), std::string::npos);
}

TEST(Cli, BadInputExitsThree)
{
    auto r = run({"check", "/nonexistent/project.json"});
    EXPECT_EQ(r.code, exit_error);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(run({"check", fx("fig_a.pl")}).code, exit_error);
    EXPECT_EQ(run({"frobnicate"}).code, exit_error);
    EXPECT_EQ(run({"check", fx("agv.json"), "--budget", "max_boxes=lots"}).code, exit_error);
}

TEST(Cli, JsonOutputParsesAsReport)
{
    auto r = run({"--json", "check", fx("agv_weak.json")});
    EXPECT_EQ(r.code, exit_unsound);
    auto report = report_from_json(nlohmann::json::parse(r.out));
    EXPECT_EQ(report.at("2").status, Status::Unsound);
    auto after = run({"check", fx("agv.json"), "--json"});
    EXPECT_EQ(after.code, exit_ok);
    EXPECT_NO_THROW(report_from_json(nlohmann::json::parse(after.out)));
}

TEST(Cli, JsonErrors)
{
    auto r = run({"--json", "check", "/nonexistent/project.json"});
    EXPECT_EQ(r.code, exit_error);
    auto j = nlohmann::json::parse(r.err);
    EXPECT_EQ(j["error"], "IoError");
}

TEST(Cli, Skeleton)
{
    auto dir = fixtures::scratch_dir("cli-skeleton");
    auto out = (dir / "p.json").string();
    auto r = run({"skeleton", fx("fig_b.pl"), "-o", out});
    ASSERT_EQ(r.code, exit_ok) << r.err;
    Project p = load_project(out);
    EXPECT_EQ(p.tree.depth(), 3u);
    EXPECT_TRUE(is_valid(validate(p)));
    auto rec = run({"skeleton", fx("fig_a.pl")});
    ASSERT_EQ(rec.code, exit_ok);
    EXPECT_EQ(project_from_json(nlohmann::json::parse(rec.out)).tree.nodes.size(), 3u);
}

TEST(Cli, ConvertRoundTrip)
{
    auto dir = fixtures::scratch_dir("cli-convert");
    auto gsn = (dir / "g.json").string();
    auto back = (dir / "t.json").string();
    ASSERT_EQ(run({"convert", fx("cubesat_gsn.json"), "--to", "tdt", "-o", back}).code, exit_ok);
    ASSERT_EQ(run({"convert", back, "--to", "gsn", "-o", gsn}).code, exit_ok);
    auto original = gsn_from_json(fixtures::json("cubesat_gsn.json"));
    auto again = gsn_from_json(nlohmann::json::parse(read_file(gsn)));
    EXPECT_TRUE(isomorphic(original, again));
}

TEST(Cli, ReportMarkdown)
{
    auto r = run({"report", fx("agv_weak.json"), "--format", "md"});
    EXPECT_EQ(r.code, exit_ok) << r.err;
    EXPECT_NE(r.out.find("### Node `2`"), std::string::npos);
    EXPECT_EQ(run({"report", fx("agv.json"), "--format", "pdf"}).code, exit_error);
}

TEST(Cli, ExportDotAndSmtlib)
{
    auto dot = run({"export", fx("agv_weak.json"), "--dot"});
    EXPECT_EQ(dot.code, exit_ok);
    EXPECT_EQ(dot.out.rfind("digraph", 0), 0u);
    auto smt = run({"export", fx("snapshot.json"), "--smtlib", "--node", "19"});
    EXPECT_EQ(smt.code, exit_ok) << smt.err;
    EXPECT_NE(smt.out.find("(check-sat)"), std::string::npos);
    EXPECT_EQ(run({"export", fx("snapshot.json"), "--smtlib", "--node", "16"}).code, exit_error);
}

TEST(Cli, TranslateReplay)
{
    auto r = run({"translate", fx("agv.json"), "--node", "6", "--text", "Obstacle detection distance is 3m", "--sub",
                  "s = 3", "--replay", fx("translate_replay.json")});
    EXPECT_EQ(r.code, exit_ok) << r.err;
    EXPECT_NE(r.out.find("s = 3"), std::string::npos);
    auto failed = run({"translate", fx("agv.json"), "--node", "1", "--replay", fx("translate_replay.json")});
    EXPECT_EQ(failed.code, exit_unsound) << failed.err;
}

TEST(Cli, DecomposeReplay)
{
    auto dir = fixtures::scratch_dir("cli-decompose");
    auto out = (dir / "p.json").string();
    auto r = run({"decompose", fx("agv_goal.json"), "--node", "G", "--layers", "3", "--replay",
                  fx("decompose_replay.json"), "-o", out});
    ASSERT_EQ(r.code, exit_ok) << r.err;
    EXPECT_EQ(load_project(out).tree.nodes.size(), 37u);
    auto missing = run({"decompose", fx("agv_goal.json"), "--node", "G", "--layers", "2", "--replay",
                        fx("decompose_replay.json")});
    EXPECT_EQ(missing.code, exit_error);
}
