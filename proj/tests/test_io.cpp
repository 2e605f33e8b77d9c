#include <random>
#include <string>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tropeig/io.hpp"

using namespace tropeig;

namespace {

std::string one_by_one(const std::string& coeff, const std::string& exponent) {
  return R"({"n": 1, "d": 0, "terms": [{"degree": 0, "coeff": [[)" + coeff + R"(]], "exponent": [[)" +
         exponent + "]]}]}";
}

// Message of the ParseError thrown by `f`, or "" when nothing is thrown.
template <class F>
std::string parse_error(F f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(SpecIo, LoadsSamples) {
  PencilSpec ex = load_spec(fixtures::sample("example.json"));
  EXPECT_EQ(ex.n, 3);
  EXPECT_EQ(ex.d, 1);
  EXPECT_EQ(ex.exponents[0](1, 1), ExtRat(1));
  EXPECT_TRUE(ex.exponents[1](0, 1).is_zero());
  PencilSpec diag = load_spec(fixtures::sample("diagonal.json"));
  EXPECT_EQ(diag.exponents[0](1, 1), ExtRat(1, 2));
  EXPECT_EQ(diag.exponents[0](2, 2), ExtRat(-2));
  EXPECT_EQ(diag.coeffs[0](2, 2), Complex(0.5, -1.5));
}

TEST(SpecIo, ExponentForms) {
  EXPECT_EQ(parse_spec(one_by_one("1", "3")).exponents[0](0, 0), ExtRat(3));
  EXPECT_EQ(parse_spec(one_by_one("1", "\"-4/6\"")).exponents[0](0, 0), ExtRat(-2, 3));
  EXPECT_EQ(parse_spec(one_by_one("1", "0.125")).exponents[0](0, 0), ExtRat(1, 8));
  EXPECT_EQ(parse_spec(one_by_one("1", "0.1")).exponents[0](0, 0), ExtRat(1, 10));
  EXPECT_EQ(parse_spec(one_by_one("[2, -1]", "\"inf\"")).coeffs[0](0, 0), Complex(0));
  EXPECT_EQ(parse_spec(one_by_one("[2, -1]", "1")).coeffs[0](0, 0), Complex(2, -1));
}

TEST(SpecIo, MissingDegreeIsAllInfinite) {
  PencilSpec s = parse_spec(
      R"({"n": 1, "d": 2, "terms": [{"degree": 2, "coeff": [[1]], "exponent": [[0]]}]})");
  EXPECT_TRUE(s.exponents[0](0, 0).is_zero());
  EXPECT_TRUE(s.exponents[1](0, 0).is_zero());
  EXPECT_EQ(s.exponents[2](0, 0), ExtRat(0));
}

TEST(SpecIo, Errors) {
  EXPECT_NE(parse_error([] { parse_spec("{"); }), "");
  EXPECT_NE(parse_error([] { load_spec("/nonexistent/spec.json"); }).find("cannot open"), std::string::npos);
  EXPECT_NE(parse_error([] { parse_spec(R"({"d": 0, "terms": []})"); }).find("$: missing field \"n\""),
            std::string::npos);
  EXPECT_NE(parse_error([] { parse_spec(R"({"n": 0, "d": 0, "terms": []})"); }).find("$.n"),
            std::string::npos);
  EXPECT_NE(parse_error([] { parse_spec(one_by_one("1", "\"1/0\"")); }).find("$.terms[0].exponent[0][0]"),
            std::string::npos);
  EXPECT_NE(parse_error([] { parse_spec(one_by_one("[1]", "0")); }).find("$.terms[0].coeff[0][0]"),
            std::string::npos);
  EXPECT_NE(parse_error([] { parse_spec(one_by_one("1", "true")); }), "");
  EXPECT_NE(parse_error([] {
              parse_spec(R"({"n": 1, "d": 0, "terms": [{"degree": 0, "coeff": [[1]], "exponent": [[0]]},
                                                          {"degree": 0, "coeff": [[1]], "exponent": [[0]]}]})");
            }).find("appears twice"),
            std::string::npos);
  EXPECT_NE(parse_error([] {
              parse_spec(R"({"n": 1, "d": 0, "terms": [{"degree": 1, "coeff": [[1]], "exponent": [[0]]}]})");
            }).find("$.terms[0].degree"),
            std::string::npos);
  EXPECT_NE(parse_error([] {
              parse_spec(R"({"n": 2, "d": 0, "terms": [{"degree": 0, "coeff": [[1, 1]], "exponent": [[0, 0]]}]})");
            }).find("$.terms[0].coeff"),
            std::string::npos);
}

TEST(SpecIo, RoundTripIsIdempotent) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    const int d = std::uniform_int_distribution<int>(0, 3)(rng);
    PencilSpec s = fixtures::random_spec(rng, n, d);
    // A few rational exponents.
    s.exponents[0](0, 0) = ExtRat(std::uniform_int_distribution<int>(-9, 9)(rng), 7);
    if (s.coeffs[0](0, 0) == Complex(0)) s.coeffs[0](0, 0) = Complex(-0.0, 1.5);
    const std::string once = serialize_spec(s);
    PencilSpec back = parse_spec(once);
    const std::string twice = serialize_spec(back);
    EXPECT_EQ(once, twice);
    for (int k = 0; k <= d; ++k) {
      EXPECT_EQ(back.exponents[k], s.exponents[k]);
      EXPECT_EQ((back.coeffs[k] - s.coeffs[k]).norm(), 0.0);
    }
  }
}

TEST(SpecIo, SampleRoundTrip) {
  for (const char* name : {"example.json", "diagonal.json"}) {
    PencilSpec s = load_spec(fixtures::sample(name));
    const std::string once = serialize_spec(s);
    EXPECT_EQ(serialize_spec(parse_spec(once)), once);
    EXPECT_EQ(json::parse(once), spec_to_json(s));
  }
}

TEST(WeierstrassIo, RandomSeed) {
  WeierstrassFile f = parse_weierstrass(read_file(fixtures::sample("najman.json")));
  EXPECT_EQ(f.blocks.n(), 8);
  ASSERT_TRUE(f.seed);
  EXPECT_EQ(*f.seed, 11u);
  EXPECT_EQ((f.m - random_complex_matrix(8, 11)).norm(), 0.0);
  EXPECT_EQ(f.blocks.lambdas[1], Complex(-2, 0.5));
}

TEST(WeierstrassIo, ExplicitAndDefaultMatrix) {
  WeierstrassFile f = parse_weierstrass(R"({"lambdas": [2], "m": [[[1, 2]]]})");
  EXPECT_FALSE(f.seed);
  EXPECT_EQ(f.m(0, 0), Complex(1, 2));
  WeierstrassFile g = parse_weierstrass(R"({"inf_blocks": [1]})", 5);
  ASSERT_TRUE(g.seed);
  EXPECT_EQ(*g.seed, 5u);
  EXPECT_EQ((g.m - random_complex_matrix(1, 5)).norm(), 0.0);
}

TEST(WeierstrassIo, Errors) {
  EXPECT_NE(parse_error([] { parse_weierstrass(R"({"lambdas": [1], "m": "random:x"})"); }).find("$.m"),
            std::string::npos);
  EXPECT_NE(parse_error([] { parse_weierstrass(R"({"lambdas": [1], "m": "seed:3"})"); }).find("$.m"),
            std::string::npos);
  EXPECT_NE(parse_error([] { parse_weierstrass(R"({"lambdas": [0]})"); }), "");
  EXPECT_NE(parse_error([] { parse_weierstrass(R"({})"); }).find("no blocks"), std::string::npos);
  EXPECT_NE(parse_error([] { parse_weierstrass(R"({"zero_blocks": [1.5]})"); }).find("$.zero_blocks[0]"),
            std::string::npos);
  EXPECT_NE(parse_error([] { parse_weierstrass(R"({"lambdas": [1], "m": [[1, 2]]})"); }).find("$.m"),
            std::string::npos);
}

TEST(JsonOutput, Shapes) {
  PencilSpec s = fixtures::example_spec();
  AsymptoticReport r = analyze(s);
  json j = to_json(r);
  EXPECT_TRUE(j.is_object());
  json again = json::parse(j.dump());
  EXPECT_EQ(again, j);
  EXPECT_EQ(to_json(r.trop.corners).dump(), R"([{"value":0,"multiplicity":2},{"value":1,"multiplicity":1}])");
  EXPECT_EQ(to_json(fixtures::graph(2, {{1, 2}})).dump(), "[[1,2]]");
  EXPECT_EQ(exponent_json(ExtRat(-1, 3)), json("-1/3"));
  EXPECT_EQ(exponent_json(ExtRat::zero()), json("inf"));
  EXPECT_EQ(exponent_json(ExtRat(4)), json(4));
}
