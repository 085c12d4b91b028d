#include "cli.hpp"

#include <gtest/gtest.h>

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sierpinski {
namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("sierpinski_cli_test_" + name);
}

TEST(CliTest, DistBoth)
{
    const auto r = run({"dist", "--level", "3", "lll", "uuu", "--method", "both"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "closed=4 bfs=4 MATCH\n");
    EXPECT_EQ(run({"dist", "--level", "3", "l", "u"}).out, "closed=1\n");
    EXPECT_EQ(run({"dist", "--level", "2", "u", "r", "--method", "bfs"}).out, "bfs=1\n");
}

TEST(CliTest, DistNeverMismatches)
{
    for (const char* x : {"l", "rru", "ulr", "uu", "rlul"})
        for (const char* y : {"u", "lr", "rrr", "ulul"})
            for (const char* level : {"4", "6", "9"})
                EXPECT_EQ(run({"dist", "--level", level, x, y, "--method", "both"}).out.find("MISMATCH"), std::string::npos);
}

TEST(CliTest, Corners) { EXPECT_EQ(run({"corners", "rru"}).out, "U=2 L=4 R=2\n"); }

TEST(CliTest, ClassifyAlternating)
{
    const auto r = run({"horo", "classify", "--family", "alt", "--radius", "2", "--max-level", "10"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(first_line(r.out), "DIVERGENT witness=u values={0,1}");
}

TEST(CliTest, ClassifyFamilies)
{
    EXPECT_EQ(first_line(run({"horo", "classify", "--family", "U", "--radius", "16"}).out), "BUSEMANN_U exact");
    EXPECT_EQ(first_line(run({"horo", "classify", "--family", "R", "--radius", "16"}).out), "BUSEMANN_R exact");
    EXPECT_EQ(first_line(run({"horo", "classify", "--family", "c"}).out), "SYMMETRIC exact");
    EXPECT_EQ(first_line(run({"horo", "classify", "--family", "c1", "--radius", "16"}).out).rfind("SYMMETRIC bound=1", 0), 0u);
}

TEST(CliTest, EvalCsvAndJson)
{
    EXPECT_EQ(run({"horo", "eval", "--family", "U", "--radius", "1"}).out, "address,distance_to_o,value\nl,0,0\nu,1,1\nr,1,0\n");
    const auto j = run({"horo", "eval", "--family", "alt", "--radius", "1", "--max-level", "8", "--format", "json"});
    EXPECT_EQ(j.code, 0);
    const auto doc = nlohmann::json::parse(j.out);
    EXPECT_EQ(doc["stabilized"], false);
    EXPECT_EQ(doc["history"]["u"].size(), 8u);
    const auto partial = run({"horo", "eval", "--family", "alt", "--radius", "1", "--max-level", "8"});
    EXPECT_NE(partial.err.find("not stabilized"), std::string::npos);
}

TEST(CliTest, SequenceFile)
{
    const auto path = temp_file("seq.txt");
    {
        std::ofstream f(path);
        f << "# u^n\n";
        for (int n = 1; n <= 8; ++n) f << std::string(n, 'u') << "\n";
    }
    const auto r = run({"horo", "classify", "--seq", path.string(), "--radius", "4"});
    EXPECT_EQ(first_line(r.out), "BUSEMANN_U exact");
    {
        std::ofstream f(path);
        f << "uu\nrr\n";
    }
    const auto bad = run({"horo", "classify", "--seq", path.string()});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("rr"), std::string::npos);
    std::filesystem::remove(path);
    EXPECT_EQ(run({"horo", "classify", "--seq", path.string()}).code, 1);
}

TEST(CliTest, ShortSequenceIsUnresolved)
{
    const auto path = temp_file("short.txt");
    {
        std::ofstream f(path);
        f << "u\nuu\n";
    }
    EXPECT_EQ(first_line(run({"horo", "classify", "--seq", path.string(), "--radius", "4"}).out).rfind("UNRESOLVED", 0), 0u);
    std::filesystem::remove(path);
}

TEST(CliTest, IsoOrbitCensus)
{
    EXPECT_EQ(first_line(run({"iso", "(lr)", "(rl)"}).out), "ISOMORPHIC witnesses=(l r)");
    const auto no = run({"iso", "(l)", "(ul)"});
    EXPECT_EQ(first_line(no.out), "NOT ISOMORPHIC");
    EXPECT_NE(no.out.find("census (l)=1 (ul)=0"), std::string::npos);
    EXPECT_EQ(run({"orbit", "(l)"}).out, "(l)\n(r)\n(u)\n");
    EXPECT_EQ(run({"census", "(l)"}).out, "census=1 vertex=l tail=l\n");
    EXPECT_EQ(run({"census", "(ul)"}).out, "census=0\n");
}

TEST(CliTest, BuildFormats)
{
    EXPECT_EQ(first_line(run({"build", "--level", "1"}).out), "graph gasket {");
    const auto path = temp_file("g.json");
    EXPECT_EQ(run({"build", "--level", "3", "--word", "(ul)", "--format", "json", "--out", path.string()}).code, 0);
    std::ifstream f(path);
    const auto doc = nlohmann::json::parse(f);
    EXPECT_EQ(doc["vertices"].size(), 15u);
    std::filesystem::remove(path);
}

TEST(CliTest, Deterministic)
{
    for (std::vector<std::string> args : {std::vector<std::string>{"build", "--level", "4", "--format", "json"},
                                          {"horo", "classify", "--family", "c1", "--radius", "32"},
                                          {"horo", "eval", "--family", "c", "--radius", "8", "--format", "json"},
                                          {"iso", "(lru)", "(ul)"}})
        EXPECT_EQ(run(args).out, run(args).out);
}

TEST(CliTest, BenchChecksumIsSeeded)
{
    const auto a = run({"bench", "--level", "8", "--pairs", "200", "--seed", "5"});
    const auto b = run({"bench", "--level", "8", "--pairs", "200", "--seed", "5"});
    EXPECT_EQ(a.code, 0);
    auto tail = [](const std::string& s) { return s.substr(s.find("mismatches=")); };
    EXPECT_EQ(tail(a.out), tail(b.out));
    EXPECT_NE(a.out.find("mismatches=0"), std::string::npos);
    EXPECT_NE(run({"bench", "--level", "30", "--pairs", "100"}).out.find("bfs: skipped"), std::string::npos);
}

TEST(CliTest, ExitCodes)
{
    const auto bad_char = run({"corners", "ulx"});
    EXPECT_EQ(bad_char.code, 1);
    EXPECT_NE(bad_char.err.find("'x'"), std::string::npos);
    const auto mismatch = run({"dist", "--level", "2", "lll", "uu"});
    EXPECT_EQ(mismatch.code, 1);
    EXPECT_NE(mismatch.err.find("lll"), std::string::npos);
    const auto cap = run({"dist", "--level", "13", "l", "u", "--method", "bfs"});
    EXPECT_EQ(cap.code, 1);
    EXPECT_NE(cap.err.find("oracle scale exceeded"), std::string::npos);
    EXPECT_EQ(run({"iso", "(l", "(u)"}).code, 1);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"dist", "lll"}).code, 2);
    EXPECT_EQ(run({"horo", "eval", "--radius", "2"}).code, 2);
    EXPECT_EQ(run({"horo", "eval", "--family", "U", "--seq", "x", "--radius", "2"}).code, 2);
    EXPECT_EQ(run({"build", "--level", "4", "--format", "png"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

} // namespace
} // namespace sierpinski
