#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nonsig/cli.hpp"
#include "nonsig/inequality.hpp"
#include "nonsig/json_io.hpp"

using namespace nonsig;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = NONSIG_FIXTURE_DIR;

struct Run {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("nonsig_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return file(name);
  }

 private:
  fs::path path_;
};

std::string fixture(const std::string& rel) { return kFixtures + "/" + rel; }

}  // namespace

TEST(CliValidate, SampleScenarioPasses) {
  const auto r = run({"validate", fixture("fig2/scenario.json")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.json()["ok"].get<bool>());
}

TEST(CliValidate, SignalingScenarioLocatesViolation) {
  const auto r = run({"validate", fixture("bancal/scenario.json")});
  EXPECT_EQ(r.code, kExitDomain);
  const auto j = r.json();
  EXPECT_FALSE(j["ok"].get<bool>());
  const auto& r1 = j["resources"][0];
  EXPECT_FALSE(r1["nonsignaling"].get<bool>());
  EXPECT_EQ(r1["violation"]["party"], "B");
  EXPECT_NE(r1["violation"]["marginal_a"], r1["violation"]["marginal_b"]);
}

TEST(CliValidate, CounterexampleFlagReportsWithoutFailing) {
  const auto r = run({"validate", "--counterexample", fixture("bancal/scenario.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_FALSE(r.json()["resources"][0]["nonsignaling"].get<bool>());
}

TEST(CliValidate, MalformedJsonIsInputError) {
  TempDir dir;
  const auto bad = dir.write("bad.json", "{ \"parties\": [");
  const auto r = run({"validate", bad});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("bad.json"), std::string::npos);
  EXPECT_EQ(run({"validate", dir.file("missing.json")}).code, kExitInput);
}

TEST(CliJoint, SampleScenarioSumsToOne) {
  for (const std::string s : {"0,0,0", "1,1,1", "0,1,0"}) {
    const auto r = run({"joint", fixture("fig2/scenario.json"), "--settings", s});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.json()["sum"], "1/1");
  }
}

TEST(CliJoint, SignalingScenarioNeedsFlagAndSumsToZero) {
  EXPECT_EQ(run({"joint", fixture("bancal/scenario.json"), "--settings", "0,0"}).code, kExitDomain);
  const auto r = run({"joint", fixture("bancal/scenario.json"), "--settings", "0,0", "--allow-unnormalized"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["sum"], "0/1");
  for (const auto& e : j["entries"]) EXPECT_EQ(e["probability"], "0/1");
}

TEST(CliJoint, BadSettingsAreInputErrors) {
  EXPECT_EQ(run({"joint", fixture("fig2/scenario.json"), "--settings", "0,0"}).code, kExitInput);
  EXPECT_EQ(run({"joint", fixture("fig2/scenario.json"), "--settings", "0,x,0"}).code, kExitInput);
  EXPECT_EQ(run({"joint", fixture("fig2/scenario.json"), "--settings", "0,0,7"}).code, kExitInput);
}

TEST(CliBehavior, OutputRoundTripsAsNonsignalingResource) {
  TempDir dir;
  const auto path = dir.file("b.json");
  const auto r = run({"behavior", fixture("fig2/scenario.json"), "--check-nosig", "-o", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto b = behavior_from_json(read_json_file(path));
  ASSERT_TRUE(b.exact);
  EXPECT_TRUE(validate_nonsignaling(*b.exact).ok);
  EXPECT_TRUE(read_json_file(path)["nonsignaling"].get<bool>());
}

TEST(CliBehavior, DeterministicAcrossThreadCounts) {
  const auto one = run({"--threads", "1", "behavior", fixture("fig2/scenario.json")});
  const auto four = run({"--threads", "4", "behavior", fixture("fig2/scenario.json")});
  ASSERT_EQ(one.code, kExitOk);
  EXPECT_EQ(one.out, four.out);
}

TEST(CliBehavior, WiredPrBehaviorFeedsInequalityEvaluation) {
  TempDir dir;
  const auto path = dir.file("wired.json");
  ASSERT_EQ(run({"behavior", fixture("wired-pr/scenario.json"), "-o", path}).code, kExitOk);
  const auto r = run({"ineq", "eval", "--ineq", "mao", "--behavior", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = r.json();
  EXPECT_TRUE(j["satisfied"].get<bool>());
  EXPECT_TRUE(j["exact"].get<bool>());
  EXPECT_LE(parse_rational(j["value"].get<std::string>()), Rational(4));
}

TEST(CliDecompose, PrBoxOverLocalGivesCertificate) {
  const auto r = run({"decompose", fixture("resources/pr.json")});
  EXPECT_EQ(r.code, kExitDomain);
  const auto j = r.json();
  EXPECT_FALSE(j["feasible"].get<bool>());
  EXPECT_GT(parse_rational(j["certificate"]["value_on_target"].get<std::string>()),
            parse_rational(j["certificate"]["max_on_vertices"].get<std::string>()));
}

TEST(CliDecompose, NoisyPrFeasibleOverNs222) {
  const auto r = run({"decompose", fixture("resources/noisy_pr_3_4.json"), "--vertices", "ns222"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = r.json();
  Rational total = 0;
  for (const auto& c : j["components"]) total += parse_rational(c["weight"].get<std::string>());
  EXPECT_EQ(total, Rational(1));
  EXPECT_EQ(run({"decompose", fixture("resources/noisy_pr_3_4.json")}).code, kExitDomain);
}

TEST(CliDecompose, DeterministicResourceHasWeightOne) {
  const auto r = run({"decompose", fixture("resources/deterministic.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = r.json();
  ASSERT_EQ(j["components"].size(), 1u);
  EXPECT_EQ(j["components"][0]["weight"], "1/1");
}

TEST(CliDecompose, ExternalVertexFileAndMismatch) {
  TempDir dir;
  Json vs{{"vertices", Json::array({read_json_file(fixture("resources/deterministic.json"))})}};
  const auto path = dir.write("vs.json", vs.dump());
  EXPECT_EQ(run({"decompose", fixture("resources/deterministic.json"), "--vertices", path}).code, kExitOk);
  EXPECT_EQ(run({"decompose", fixture("resources/pr.json"), "--vertices", path}).code, kExitDomain);
  EXPECT_EQ(run({"decompose", fixture("resources/pr.json"), "--vertices", dir.file("none.json")}).code, kExitInput);
}

TEST(CliIneq, DeriveChainPasses) {
  const auto r = run({"ineq", "derive"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = r.json();
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["steps"].size(), 6u);
}

TEST(CliIneq, AllPlusBehaviorBoundaryValues) {
  TempDir dir;
  const auto all_plus = deterministic_behaviors({2, 2, 2}).front();
  const auto path = dir.write("plus.json", resource_to_json(all_plus).dump());
  auto r = run({"ineq", "eval", "--ineq", "mao", "--behavior", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.json()["value"], "4/1");
  EXPECT_TRUE(r.json()["satisfied"].get<bool>());
  r = run({"ineq", "eval", "--ineq", "cr-prob", "--behavior", path});
  EXPECT_EQ(r.json()["value"], "1/1");
  EXPECT_EQ(r.json()["relation"], ">=");
  EXPECT_EQ(run({"ineq", "eval", "--ineq", "cao-s14", "--behavior", path}).code, kExitInput);
  EXPECT_EQ(run({"ineq", "eval", "--ineq", "nope", "--behavior", path}).code, kExitInput);
}

TEST(CliGhz, EvalFeedsInequalityWithViolation) {
  TempDir dir;
  const auto path = dir.file("ghz.json");
  ASSERT_EQ(run({"ghz", "eval", "--angles", fixture("ghz/mao_strategy.json"), "-o", path}).code, kExitOk);
  const auto r = run({"ineq", "eval", "--ineq", "mao", "--behavior", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = r.json();
  EXPECT_FALSE(j["satisfied"].get<bool>());
  EXPECT_FALSE(j["exact"].get<bool>());
  const double snapshot = read_json_file(fixture("ghz/mao_strategy.json"))["value"].get<double>();
  EXPECT_NEAR(j["value"].get<double>(), snapshot, 1e-9);
}

TEST(CliGhz, InlineAnglesAndBadAngles) {
  const auto r = run({"ghz", "eval", "--angles", "0,0;0,0;0,0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(run({"ghz", "eval", "--angles", "0,a;0,0;0,0"}).code, kExitInput);
  EXPECT_EQ(run({"ghz", "eval", "--angles", "0,nan;0,0;0,0"}).code, kExitInput);
}

TEST(CliGhz, SearchReportsViolation) {
  const auto r = run({"--threads", "2", "ghz", "search", "--ineq", "mao", "--grid", "8", "--refine", "1e-3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = r.json();
  EXPECT_GT(j["value"].get<double>(), 4.1);
  EXPECT_EQ(j["angles"].size(), 3u);
  EXPECT_EQ(run({"ghz", "search", "--ineq", "cr-prob"}).code, kExitInput);
}

TEST(CliArgs, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}).code, kExitOk);
  EXPECT_EQ(run({}).code, kExitInput);
  EXPECT_EQ(run({"frobnicate"}).code, kExitInput);
  EXPECT_EQ(run({"joint", fixture("fig2/scenario.json")}).code, kExitInput);
  EXPECT_EQ(run({"ineq"}).code, kExitInput);
}

TEST(CliPretty, TabularModes) {
  auto r = run({"--pretty", "validate", fixture("fig2/scenario.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  r = run({"--pretty", "ineq", "derive"});
  EXPECT_NE(r.out.find("f  PASS"), std::string::npos);
  r = run({"--pretty", "joint", fixture("fig2/scenario.json"), "--settings", "0,0,0"});
  EXPECT_NE(r.out.find("sum 1/1"), std::string::npos);
}
