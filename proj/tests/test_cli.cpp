#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tarski/cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "tarski");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = tarski::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("tarski_cli_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, CayleyWritesTheBall) {
  const auto dot = temp_file("cayley.dot");
  const Outcome o = run({"cayley", "--max-len", "3", "--pieces", "paradox", "--dot", dot.string()});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("nodes: 53"), std::string::npos) << o.out;
  const std::string text = slurp(dot);
  EXPECT_EQ(text.rfind("digraph F2 {", 0), 0u);
  EXPECT_NE(text.find("\"a\" -> \"aa\" [label=\"a\"]"), std::string::npos);
  EXPECT_NE(text.find("tooltip=\"A1\""), std::string::npos);
  std::filesystem::remove(dot);
}

TEST(Cli, JsonOutputIsIndependentOfThreads) {
  for (const std::vector<std::string>& cmd :
       {std::vector<std::string>{"verify", "independence", "--max-len", "6"},
        std::vector<std::string>{"verify", "free-paradox", "--max-len", "7"},
        std::vector<std::string>{"verify", "freeness", "--seed", "1,2,3", "--max-len", "4"}}) {
    std::vector<std::string> one{"--format", "json", "--no-timing", "--threads", "1"};
    std::vector<std::string> four{"--format", "json", "--no-timing", "--threads", "4"};
    one.insert(one.end(), cmd.begin(), cmd.end());
    four.insert(four.end(), cmd.begin(), cmd.end());
    const Outcome a = run(one), b = run(four);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["status"], "pass");
    EXPECT_EQ(j["elapsed_ms"], "0");
  }
}

TEST(Cli, GlobalOptionsAfterTheSubcommand) {
  const Outcome o = run({"verify", "five-adic", "--max-len", "5", "--format", "json", "--threads", "2"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(nlohmann::json::parse(o.out)["check"], "five-adic");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"verify", "cert", "nat-z", "--window", "100"}).code, 0);
  // A rotation of order 4 cannot give the circle certificate.
  const Outcome fail = run({"verify", "cert", "circle", "--window", "10", "--cos", "0", "--sin", "1"});
  EXPECT_EQ(fail.code, 1);
  EXPECT_NE(fail.out.find("k=4"), std::string::npos) << fail.out;
  EXPECT_EQ(run({"verify", "independence", "--max-len", "3", "--mode", "sideways"}).code, 2);
  EXPECT_EQ(run({"verify", "freeness", "--seed", "1,2", "--max-len", "3"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  const Outcome in_d = run({"verify", "sphere-paradox", "--seed", "0,0,1", "--max-len", "3"});
  EXPECT_EQ(in_d.code, 3);
  EXPECT_NE(in_d.out.find("sphere-paradox"), std::string::npos) << in_d.out;
  EXPECT_NE(in_d.out.find("inconclusive"), std::string::npos) << in_d.out;
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, BsbFromAFile) {
  const auto path = temp_file("bsb.json");
  std::ofstream(path) << R"({"A": [0, 1, 2], "B": ["x", "y", "z"], "f": [[0, "y"], [1, "z"], [2, "x"]],
                             "g": [[0, "x"], [1, "y"], [2, "z"]]})";
  const Outcome o = run({"--format", "json", "bsb", "--input", path.string(), "--window", "3"});
  EXPECT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["check"], "bsb");
  EXPECT_EQ(j["metrics"]["bijection"], "0->x, 1->y, 2->z");

  std::ofstream(path) << R"({"A": [0], "B": ["x", "y"], "f": [[0, "y"]], "g": [[0, "x"]]})";
  EXPECT_EQ(run({"bsb", "--input", path.string(), "--window", "3"}).code, 3);
  std::ofstream(path) << "{ not json";
  EXPECT_EQ(run({"bsb", "--input", path.string(), "--window", "3"}).code, 2);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"bsb", "--input", path.string(), "--window", "3"}).code, 2);
}

TEST(Cli, MuDisjointness) {
  EXPECT_EQ(run({"mu-disjoint", "--axis", "2,3,6", "--d-len", "2", "--powers", "10"}).code, 0);
  EXPECT_EQ(run({"mu-disjoint", "--axis", "2,1,2", "--d-len", "2", "--powers", "10"}).code, 1);
}

TEST(Cli, FixedPointsJson) {
  const auto path = temp_file("fixed.json");
  const Outcome o = run({"fixed-points", "--max-len", "2", "--json", path.string()});
  EXPECT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(j["counts"][0]["fixed"], "4");
  EXPECT_EQ(j["counts"][1]["fixed"], "12");
  std::filesystem::remove(path);
}

TEST(Cli, CertificatesAndParadoxes) {
  EXPECT_EQ(run({"verify", "cert", "circle", "--window", "100", "--order", "1000"}).code, 0);
  EXPECT_EQ(run({"verify", "cert", "ball-minus-point", "--window", "50", "--order", "100"}).code, 0);
  EXPECT_EQ(run({"verify", "ball-paradox", "--max-len", "3", "--radii", "1,1/2"}).code, 0);
  EXPECT_EQ(run({"verify", "ball-paradox", "--max-len", "3", "--radii", "2"}).code, 3);
  EXPECT_EQ(run({"verify", "ball-paradox", "--max-len", "3", "--radii", "1/0"}).code, 2);
  EXPECT_EQ(run({"verify", "sphere-paradox", "--max-len", "3"}).code, 0);
}
