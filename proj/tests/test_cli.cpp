#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "fixtures.hpp"

using namespace tropeig;
using namespace tropeig::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

template <typename Command>
Result call(Command command, const std::string& path, const Options& opt = {}) {
  std::ostringstream out, err;
  const int code = run(command, path, opt, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

std::string degenerate_example() {
  CMatrix b = random_complex_matrix(3, 7);
  b(0, 1) = b(1, 0) = b(0, 2) = b(2, 0) = 0;
  return write_temp("degenerate.json", serialize_spec(fixtures::example_spec(b)));
}

}  // namespace

TEST(Cli, Corners) {
  Result r = call(cmd_corners, fixtures::sample("example.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("corners: 0 (x2), 1 (x1)"), std::string::npos) << r.out;
}

TEST(Cli, PredictExample) {
  Result r = call(cmd_predict, fixtures::sample("example.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("branches: 3, identically zero: 0, unresolved: 0"), std::string::npos) << r.out;
  Options machine;
  machine.machine = true;
  Result m = call(cmd_predict, fixtures::sample("example.json"), machine);
  json doc = json::parse(m.out);
  EXPECT_TRUE(doc["all_generic"].get<bool>());
}

TEST(Cli, AssignmentAtOne) {
  Options opt;
  opt.gamma = "1";
  Result r = call(cmd_assignment, fixtures::sample("example.json"), opt);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("permanent: 1"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("U:"), std::string::npos);
  EXPECT_NE(r.out.find("Sat:"), std::string::npos);
  EXPECT_NE(r.out.find("Opt:"), std::string::npos);

  opt.machine = true;
  opt.mode = GraphMode::kSat;
  Result m = call(cmd_assignment, fixtures::sample("example.json"), opt);
  json doc = json::parse(m.out);
  EXPECT_EQ(doc["permanent"], json(1));
  EXPECT_EQ(doc["mode"], json("sat"));
  EXPECT_EQ(doc["layers"].size(), 2u);
}

TEST(Cli, AssignmentRejectsNonCorner) {
  Options opt;
  opt.gamma = "1/2";
  Result r = call(cmd_assignment, fixtures::sample("example.json"), opt);
  EXPECT_EQ(r.code, 20);
  EXPECT_NE(r.err.find("error 20"), std::string::npos);
  opt.gamma.reset();
  EXPECT_EQ(call(cmd_assignment, fixtures::sample("example.json"), opt).code, 20);
  opt.gamma = "x";
  EXPECT_EQ(call(cmd_assignment, fixtures::sample("example.json"), opt).code, 10);
}

TEST(Cli, BadFile) {
  Result r = call(cmd_predict, "/nonexistent.json");
  EXPECT_EQ(r.code, 10);
  Options machine;
  machine.machine = true;
  Result m = call(cmd_predict, write_temp("broken.json", "{\"n\": 1"), machine);
  EXPECT_EQ(m.code, 10);
  json err = json::parse(m.err);
  EXPECT_EQ(err["error"], json("ParseError"));
  EXPECT_EQ(err["code"], json(10));
}

TEST(Cli, VerifyDiagonalAndExample) {
  Result d = call(cmd_verify, fixtures::sample("diagonal.json"));
  EXPECT_EQ(d.code, 0) << d.out;
  EXPECT_NE(d.out.find("verified"), std::string::npos);
  Result e = call(cmd_verify, fixtures::sample("example.json"));
  EXPECT_EQ(e.code, 0) << e.out;
}

TEST(Cli, VerifyMismatchExitCode) {
  // Tolerances below the O(eps) truncation error at the smallest eps.
  Options opt;
  opt.coefficient_tolerance = 1e-12;
  Result r = call(cmd_verify, fixtures::sample("example.json"), opt);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("validation FAILED"), std::string::npos);
}

TEST(Cli, NonGenericExitCode) {
  const std::string path = degenerate_example();
  Result r = call(cmd_predict, path);
  EXPECT_EQ(r.code, 2) << r.out;
  EXPECT_NE(r.out.find("NON-GENERIC"), std::string::npos);
  EXPECT_NE(r.out.find("warning:"), std::string::npos);
}

TEST(Cli, Najman) {
  Result r = call(cmd_najman, fixtures::sample("najman.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("t = 7"), std::string::npos);
  EXPECT_EQ(r.out.find("MISMATCH"), std::string::npos);
  Result g = call(cmd_najman, fixtures::sample("najman_generic.json"));
  EXPECT_EQ(g.code, 0) << g.out;
}

TEST(Cli, MachineOutputIsJson) {
  Options opt;
  opt.machine = true;
  for (auto cmd : {cmd_corners, cmd_predict, cmd_verify}) {
    Result r = call(cmd, fixtures::sample("example.json"), opt);
    EXPECT_NO_THROW(json::parse(r.out));
  }
  EXPECT_NO_THROW(json::parse(call(cmd_najman, fixtures::sample("najman.json"), opt).out));
}

TEST(Cli, SeedIsDeterministic) {
  Options opt;
  opt.mode = GraphMode::kSat;
  opt.seed = 42;
  Result a = call(cmd_predict, fixtures::sample("example.json"), opt);
  Result b = call(cmd_predict, fixtures::sample("example.json"), opt);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.code, 0);
}

TEST(Cli, FormatIsCanonical) {
  Result once = call(cmd_format, fixtures::sample("diagonal.json"));
  EXPECT_EQ(once.code, 0);
  Result twice = call(cmd_format, write_temp("formatted.json", once.out));
  EXPECT_EQ(once.out, twice.out);
}

TEST(Cli, CornersOfWeierstrassFile) {
  Result r = call(cmd_corners, fixtures::sample("najman_generic.json"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("corners: -1 (x2), 0 (x2)"), std::string::npos) << r.out;
  Result p = call(cmd_predict, fixtures::sample("najman.json"));
  EXPECT_EQ(p.code, 0) << p.err;
  EXPECT_NE(p.out.find("branches: 13, identically zero: 3, unresolved: 0"), std::string::npos) << p.out;
}
