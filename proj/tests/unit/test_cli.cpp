#include "flatform/cli/commands.hpp"
#include "flatform/cli/io.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace flatform;
using namespace flatform::cli;
namespace fs = std::filesystem;

TEST(InstanceIo, RoundTripIsExact) {
  for (const Generated& g : flatform::testing::small_corpus(12, 1)) {
    const std::string text = serialize_instance(g.kp);
    const KaehlerPoint back = parse_instance(text);
    EXPECT_TRUE(back == g.kp);
    EXPECT_EQ(serialize_instance(back), text);
  }
}

TEST(InstanceIo, FractionsAndBigIntegers) {
  BilinearMap alpha(2, 2, InnerSpace::euclidean(1));
  const Scalar big(mpz_class("123456789012345678901234567890"));
  alpha.set(0, 0, Vector{Scalar(1, 3)});
  alpha.set(1, 1, Vector{big});
  const KaehlerPoint kp = KaehlerPoint::make(1, 1, ComplexStructure::standard(1), std::move(alpha));
  const std::string text = serialize_instance(kp);
  EXPECT_NE(text.find("\"1/3\""), std::string::npos);
  EXPECT_NE(text.find("\"123456789012345678901234567890\""), std::string::npos);
  EXPECT_TRUE(parse_instance(text) == kp);
}

TEST(InstanceIo, DecimalsConvertExactly) {
  const KaehlerPoint kp = parse_instance(
      R"({"version":1,"n":1,"p":1,"J":[[0,-1],[1,0]],"alpha":[[[0.1],[0]],[[0],[-2.5e-1]]]})");
  EXPECT_EQ(kp.alpha().at(0, 0)[0], Scalar(1, 10));
  EXPECT_EQ(kp.alpha().at(1, 1)[0], Scalar(-1, 4));
}

namespace {

InputError parse_error(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const InputError& e) {
    return e;
  }
  ADD_FAILURE() << "expected InputError";
  return InputError("", std::nullopt, "");
}

}  // namespace

TEST(InstanceIo, Diagnostics) {
  EXPECT_EQ(parse_error(R"({"version":1,"n":1,"p":1,"J":[[1,0],[0,1]],"alpha":[[[0],[0]],[[0],[0]]]})").field(), "J");
  EXPECT_EQ(parse_error(R"({"version":1,"n":1,"p":1,"J":[[0,-1],[1,0]],"alpha":[[[0],[1]],[[0],[0]]]})").field(),
            "alpha[0][1]");
  EXPECT_EQ(parse_error(R"({"version":1,"n":1,"p":1,"J":[[0,-1],[1,0]],"alpha":[[[0],[0]],[[0],["2/4"]]]})").field(),
            "alpha[1][1][0]");
  EXPECT_EQ(parse_error(R"({"version":1,"n":1,"p":1,"J":[[0,-1],[1,0]],"alpha":[[[0],[0]],[[0]]]})").field(),
            "alpha[1]");
  EXPECT_EQ(parse_error(R"({"version":2,"n":1,"p":1,"J":[],"alpha":[]})").field(), "version");
  EXPECT_EQ(parse_error(R"({"version":1,"n":1,"p":1,"J":[[0,-1],[1,0]]})").field(), "alpha");
  const InputError syntax = parse_error("{\n\"version\": 1,\n\"n\": }");
  ASSERT_TRUE(syntax.line().has_value());
  EXPECT_EQ(*syntax.line(), 3u);
}

TEST(Evaluate, ReportShape) {
  const Generated g = gen(FamilySpec{Family::composition, 4, 3, 5});
  const Evaluation ev = evaluate(g.kp, 5, true);
  EXPECT_EQ(ev.verdict, Verdict::theorem_verified);
  EXPECT_EQ(ev.report["verdict"], "theorem_verified");
  EXPECT_EQ(ev.report["oracle_agreement"], true);
  EXPECT_EQ(ev.report["seed"], 5);
  EXPECT_GT(ev.report["structure"]["l"].get<int>(), 0);
  EXPECT_TRUE(ev.report["timing"].contains("analysis_ms"));
}

TEST(Fuzz, Summary) {
  FuzzOptions opts;
  opts.trials = 6;
  opts.n = 3;
  opts.p = 2;
  opts.seed = 10;
  const Json s = fuzz(opts);
  std::size_t total = 0;
  for (const auto& [k, v] : s["verdicts"].items()) total += v.get<std::size_t>();
  EXPECT_EQ(total + s["generation_failures"].get<std::size_t>(), 6u);
  EXPECT_EQ(s["verdicts"]["violation_candidate"], 0);
  EXPECT_EQ(s["oracle"]["disagree"], 0);
}

// Black-box exit-code contract of the installed executable.
class Binary : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("flatform_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args, const std::string& stdout_file = "out.txt") {
    const std::string cmd = std::string("\"") + FLATFORM_BINARY + "\" " + args + " > \"" +
                            (dir_ / stdout_file).string() + "\" 2> \"" + (dir_ / "err.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string read(const std::string& name) {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }
  std::string path(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Binary, ZeroAlphaIsHypothesisNotMet) {
  write("zero.json", serialize_instance(flatform::testing::zero_point(3, 2)));
  EXPECT_EQ(run("analyze " + path("zero.json")), 0);
  EXPECT_EQ(Json::parse(read("out.txt"))["verdict"], "hypothesis_not_met");
}

TEST_F(Binary, GeneratedCompositionIsVerified) {
  ASSERT_EQ(run("gen --family composition --n 4 --p 3 --seed 2 --out " + path("c.json")), 0);
  EXPECT_EQ(run("analyze --oracle --seed 3 " + path("c.json")), 0);
  const Json r = Json::parse(read("out.txt"));
  EXPECT_EQ(r["verdict"], "theorem_verified");
  EXPECT_GT(r["structure"]["l"].get<int>(), 0);
  EXPECT_EQ(r["oracle_agreement"], true);
  EXPECT_EQ(run("oracle " + path("c.json")), 0);
}

TEST_F(Binary, CorruptedJIsInputInvalid) {
  std::string text = serialize_instance(flatform::testing::zero_point(1, 1));
  const auto pos = text.find("[0, -1]");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 7, "[1, -1]");
  write("bad.json", text);
  EXPECT_EQ(run("analyze " + path("bad.json")), 1);
  EXPECT_EQ(Json::parse(read("out.txt"))["verdict"], "input_invalid");
  EXPECT_EQ(run("analyze " + path("missing.json")), 1);
}

TEST_F(Binary, GenIsDeterministic) {
  ASSERT_EQ(run("gen --family holomorphic --n 3 --p 2 --seed 1", "a.json"), 0);
  ASSERT_EQ(run("gen --family holomorphic --n 3 --p 2 --seed 1", "b.json"), 0);
  EXPECT_EQ(read("a.json"), read("b.json"));
  EXPECT_NO_THROW(parse_instance(read("a.json")));
}

TEST_F(Binary, SeedFromEnvironment) {
  ASSERT_EQ(run("gen --family holomorphic --n 2 --p 2 --seed 9", "a.json"), 0);
  ASSERT_EQ(run("gen --family holomorphic --n 2 --p 2 --seed 8", "c.json"), 0);
  ::setenv("FLATFORM_SEED", "9", 1);
  ASSERT_EQ(run("gen --family holomorphic --n 2 --p 2", "b.json"), 0);
  ::unsetenv("FLATFORM_SEED");
  EXPECT_EQ(read("a.json"), read("b.json"));
  EXPECT_NE(read("a.json"), read("c.json"));
}

TEST_F(Binary, FuzzExitCodes) {
  EXPECT_EQ(run("fuzz --trials 0"), 0);
  EXPECT_EQ(Json::parse(read("out.txt"))["trials"], 0);
  EXPECT_EQ(run("fuzz --trials 3 --n 3 --p 12 --families holomorphic --no-oracle"), 0);
  const Json s = Json::parse(read("out.txt"));
  EXPECT_EQ(s["verdicts"]["outside_theorem_scope"], 3);
  EXPECT_EQ(s["verdicts"]["violation_candidate"], 0);
}

TEST_F(Binary, UsageErrors) {
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("gen --family nope --n 2 --p 2"), 1);
  EXPECT_EQ(run("--help"), 0);
}
