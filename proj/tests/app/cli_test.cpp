#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "nhcurv/catalog.hpp"
#include "nhcurv/wagner.hpp"
#include "nhcurv_app/checks.hpp"
#include "nhcurv_app/cli.hpp"
#include "nhcurv_app/oracle.hpp"

namespace nhcurv::app {
namespace {

using json = nlohmann::json;

struct Invocation {
  int status = 0;
  std::string out;
  std::string err;
};

Invocation run(std::vector<std::string> args) {
  args.insert(args.begin(), "nhcurv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

TEST(Cli, AnalyzeDiscAtPoint) {
  const Invocation r = run({"analyze", "disc", "--at", "theta=pi/3", "--param", "A=1", "--param", "C=2"});
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["flag"]["degree"], 2);
  EXPECT_EQ(j["flag"]["dims"], json::array({3, 4, 5}));
  EXPECT_NEAR(j["blocks"]["wagner"]["values"][0][0][2][2].get<double>(), 4.0 / 12.0, 1e-12);
  EXPECT_EQ(j["drawn_coordinates"].size(), 4u);
}

TEST(Cli, AnalyzeBallDegreeOne) {
  const Invocation r = run({"analyze", "ball-sphere", "--param", "k=1"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["flag"]["degree"], 1);
}

TEST(Cli, ReportRoundTripIsByteIdentical) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"analyze", "disc", "--seed", "4"},
           {"analyze", "heisenberg"},
           {"verify", "disc", "--points", "3", "--draws", "2"},
           {"scan", "disc", "--param", "R", "--from", "0.5", "--to", "2", "--steps", "4", "--points", "2"},
           {"geodesic", "disc", "--q0", "0,0,0.3,0.1,1.2", "--u0", "1,0.5,0.2", "--t", "0.1",
            "--dt", "0.01"}}) {
    const Invocation r = run(args);
    ASSERT_EQ(r.status, 0) << args[0] << ": " << r.err;
    EXPECT_EQ(json::parse(r.out).dump(2) + "\n", r.out) << args[0];
  }
}

TEST(Cli, SeededRunsReproduce) {
  const Invocation a = run({"analyze", "ball-sphere", "--seed", "77"});
  const Invocation b = run({"analyze", "ball-sphere", "--seed", "77"});
  const Invocation c = run({"analyze", "ball-sphere", "--seed", "78"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  const Invocation v1 = run({"verify", "heisenberg", "--seed", "5", "--threads", "1"});
  const Invocation v2 = run({"verify", "heisenberg", "--seed", "5", "--threads", "4"});
  EXPECT_EQ(v1.out, v2.out);
}

TEST(Cli, ExitStatuses) {
  EXPECT_EQ(run({"verify", "disc", "--points", "2", "--draws", "2"}).status, 0);
  EXPECT_EQ(run({"verify", "ball-sphere", "--points", "2", "--draws", "2"}).status, 1);
  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"frobnicate"}).status, 2);
  EXPECT_EQ(run({"analyze", "no-such-system"}).status, 2);
  EXPECT_EQ(run({"analyze", "disc", "--at", "w=1"}).status, 2);
  EXPECT_EQ(run({"analyze", "disc", "--param", "k=1"}).status, 2);
  EXPECT_EQ(run({"analyze", "disc", "--at", "theta=1+"}).status, 2);
  const Invocation sing = run({"analyze", "disc", "--at", "theta=0"});
  EXPECT_EQ(sing.status, 3);
  EXPECT_EQ(sing.out, "");
  EXPECT_EQ(sing.err.rfind("error: ", 0), 0u);
  EXPECT_EQ(run({"analyze", "disc", "--order", "1"}).status, 3);
}

TEST(Cli, EmptyParameterRange) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"scan", "disc", "--param", "R", "--from", "2", "--to", "1", "--steps", "3"},
           {"scan", "disc", "--param", "R", "--from", "1", "--to", "2", "--steps", "0"}}) {
    const Invocation r = run(args);
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("empty parameter range"), std::string::npos) << r.err;
  }
}

TEST(Cli, SystemFileArgument) {
  const auto path = std::filesystem::temp_directory_path() / "nhcurv_cli_test.sys";
  {
    std::ofstream f(path);
    f << builtin_text("heisenberg");
  }
  const Invocation from_file = run({"analyze", path.string(), "--seed", "3"});
  const Invocation builtin = run({"analyze", "heisenberg", "--seed", "3"});
  std::filesystem::remove(path);
  ASSERT_EQ(from_file.status, 0) << from_file.err;
  EXPECT_EQ(json::parse(from_file.out)["blocks"]["wagner"], json::parse(builtin.out)["blocks"]["wagner"]);
}

TEST(Cli, GeodesicLines) {
  const Invocation r = run({"geodesic", "disc", "--q0", "0,0,0.3,0.1,1.2", "--u0", "1,0.5,0.2", "--t", "0.5",
                     "--dt", "0.01", "--every", "10", "--lines"});
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    const json j = json::parse(line);
    EXPECT_LT(j["residual"].get<double>(), 1e-12);
    ++count;
  }
  EXPECT_EQ(count, 6);
  EXPECT_EQ(run({"geodesic", "disc", "--q0", "0,0,0.3", "--u0", "1,0,0"}).status, 2);
}

TEST(Verify, DiscSuitePasses) {
  const VerifyReport rep = run_verify(load_system("disc"), {});
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.samples.size(), 100u);
  for (const auto& c : rep.checks) EXPECT_EQ(c.status, Status::pass) << c.name;
}

TEST(Verify, BallFlagsInconsistentReferences) {
  const VerifyReport rep = run_verify(load_system("ball-sphere"), {});
  const auto* open = rep.find("K0^2_132");
  ASSERT_NE(open, nullptr);
  EXPECT_EQ(open->status, Status::flagged);
  for (const char* name : {"g_11", "g_23", "K0^1_121", "gamma^3_11", "g^44"}) {
    const auto* c = rep.find(name);
    ASSERT_NE(c, nullptr) << name;
    EXPECT_EQ(c->status, Status::pass) << name;
  }
  for (const auto& c : rep.checks) {
    if (c.group == "identity") EXPECT_EQ(c.status, Status::pass) << c.name;
  }
}

TEST(Oracle, HeisenbergTable) {
  const auto sys = load_system("heisenberg");
  const auto table = heisenberg_oracle();
  ASSERT_FALSE(table.empty());
  for (const auto& q : heisenberg_oracle_points()) {
    const WagnerResult w = wagner_tensor(sys, q);
    std::map<std::pair<std::string, std::vector<std::size_t>>, double> want;
    for (const auto& e : table) {
      if (e.point == q) want[{e.block, e.index}] = e.value;
    }
    for (const auto* blk : {&w.schouten_block, &w.wagner}) {
      const std::string name = blk == &w.schouten_block ? "schouten" : "wagner";
      for (std::size_t d = 0; d < blk->m; ++d)
        for (std::size_t a = 0; a < blk->slots; ++a)
          for (std::size_t b = 0; b < blk->slots; ++b)
            for (std::size_t c = 0; c < blk->m; ++c) {
              const auto it = want.find({name, {d, a, b, c}});
              const double expect = it == want.end() ? 0.0 : it->second;
              EXPECT_NEAR((*blk)(d, a, b, c), expect, 1e-9) << name << d << a << b << c;
            }
    }
  }
}

}  // namespace
}  // namespace nhcurv::app
