#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "frechet/error.hpp"
#include "frechet/runner/config.hpp"
#include "frechet/runner/operator_literal.hpp"
#include "frechet/runner/scenario.hpp"

using namespace frechet;
using namespace frechet::runner;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("frechet_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Config, ParsesSectionsListsAndComments) {
  const Config c = Config::parse(
      "seed_note = top\n"
      "[space]\n"
      "dim = 12   # trailing comment\n"
      "weight_rule = geometric:0.25\n"
      "; full-line comment\n"
      "[h-series-decay]\n"
      "t_values = 0, 0.1, 0.5\n");
  EXPECT_EQ(c.get_string("", "seed_note", ""), "top");
  EXPECT_EQ(c.get_int("space", "dim", 0), 12);
  EXPECT_EQ(c.get_list("h-series-decay", "t_values", {}), (std::vector<double>{0, 0.1, 0.5}));
  EXPECT_DOUBLE_EQ(c.get_double("space", "missing", 3.5), 3.5);
  EXPECT_FALSE(c.has("space", "missing"));
  const GradedSpace s = space_from_config(c, "space", GradedSpace::geometric(4, 0.5));
  EXPECT_EQ(s.dim(), 12u);
  EXPECT_EQ(s.geometric_ratio(), 0.25);
}

TEST(Config, ErrorsCarryLineNumbers) {
  try {
    Config::parse("[a]\nx = 1\nthis line has no equals\n", "cfg.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    EXPECT_NE(std::string(e.what()).find("cfg.ini:3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(Config::parse("[unterminated\n"), Error);
  const Config c = Config::parse("[a]\nx = nope\n");
  EXPECT_THROW(c.get_double("a", "x", 0.0), Error);
}

TEST(Config, SpaceOptions) {
  const Config c = Config::parse(
      "[s]\nweight_rule = explicit:0.5,0.2,0.1\nseminorm_mode = cumulative-max\nmetric_mode = sum-form\n");
  const GradedSpace s = space_from_config(c, "s", GradedSpace::geometric(8, 0.5));
  EXPECT_EQ(s.dim(), 3u);
  EXPECT_EQ(s.seminorm_mode(), SeminormMode::kCumulativeMax);
  EXPECT_EQ(s.metric_mode(), MetricMode::kSumForm);
  EXPECT_THROW(space_from_config(Config::parse("[s]\nmetric_mode = other\n"), "s", s), Error);
  EXPECT_THROW(space_from_config(Config::parse("[s]\nweight_rule = explicit:0.1,0.5\n"), "s", s), Error);
}

TEST(OperatorLiteral, ParsesCombinators) {
  const GradedSpace s = GradedSpace::geometric(4, 0.5);
  const Point x{1, 2, 3, 4};
  EXPECT_EQ(parse_operator("id", s).apply(x), x);
  EXPECT_EQ(parse_operator("zero", s).apply(x), Point(4));
  EXPECT_EQ(parse_operator("shift(1)", s).apply(x), (Point{0, 1, 2, 3}));
  EXPECT_EQ(parse_operator("shift(2, -3)", s).apply(x), (Point{0, 0, -3, -6}));
  EXPECT_EQ(parse_operator("diag(1, 0, 2, 0.5)", s).apply(x), (Point{1, 0, 6, 2}));
  EXPECT_EQ(parse_operator("scale(2, id)", s).apply(x), (Point{2, 4, 6, 8}));
  EXPECT_EQ(parse_operator("sum(id, shift(1))", s).apply(x), (Point{1, 3, 5, 7}));
  EXPECT_EQ(parse_operator("comp(shift(1), diag(1,2,3,4))", s).apply(x), (Point{0, 1, 4, 9}));
}

TEST(OperatorLiteral, DenseFromCsv) {
  const auto dir = scratch_dir("dense");
  std::ofstream(dir / "m.csv") << "1,0\n2,3\n";
  const GradedSpace s = GradedSpace::geometric(2, 0.5);
  EXPECT_EQ(parse_operator("dense(m.csv)", s, dir).apply(Point{1, 1}), (Point{1, 5}));
  std::ofstream(dir / "bad.csv") << "1,0,0\n2,3\n";
  EXPECT_THROW(parse_operator("dense(bad.csv)", s, dir), Error);
}

TEST(OperatorLiteral, RejectsMalformedInput) {
  const GradedSpace s = GradedSpace::geometric(3, 0.5);
  for (const char* bad : {"", "shift(", "diag(1,2)", "frob(1)", "sum(id,)", "id id"}) {
    EXPECT_THROW(parse_operator(bad, s), Error) << bad;
  }
}

TEST(Registry, EveryCriterionHasExactlyOneScenario) {
  const Registry& reg = builtin_registry();
  EXPECT_GE(reg.all().size(), 10u);
  for (int c = 1; c <= 14; ++c) {
    int count = 0;
    for (const Scenario& s : reg.all()) count += s.criterion == c ? 1 : 0;
    EXPECT_EQ(count, 1) << "criterion " << c;
  }
  std::set<std::string> names;
  for (const Scenario& s : reg.all()) {
    EXPECT_TRUE(names.insert(s.name).second) << s.name;
    EXPECT_FALSE(s.summary.empty());
    EXPECT_FALSE(s.modules.empty());
  }
}

TEST(Runner, UnknownScenarioIsAConfigError) {
  try {
    run_scenario(builtin_registry(), "no-such-scenario", Config{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
}

TEST(Runner, ExitCodes) {
  EXPECT_EQ(exit_code(Verdict::kPass), 0);
  EXPECT_EQ(exit_code(Verdict::kFail), 1);
  EXPECT_EQ(exit_code(Verdict::kInconclusive), 2);
  EXPECT_EQ(kConfigErrorExit, 3);
}

TEST(Runner, NonconvexMidpointIsFiveEighths) {
  const RunReport r = run_scenario(builtin_registry(), "nonconvex-counterexample", Config{});
  EXPECT_EQ(r.verdict, Verdict::kPass);
  EXPECT_EQ(r.find_metric("norm midpoint"), 0.625);
}

TEST(Runner, ReportsAreByteIdenticalAcrossRuns) {
  const auto a = scratch_dir("rerun_a");
  const auto b = scratch_dir("rerun_b");
  const Registry& reg = builtin_registry();
  RunOptions o;
  o.seed = 7;
  const auto pa = emit_report(run_scenario(reg, "fixed-point-apriori", Config{}, o), a);
  const auto pb = emit_report(run_scenario(reg, "fixed-point-apriori", Config{}, o), b);
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(pa[i].filename(), pb[i].filename());
    EXPECT_EQ(slurp(pa[i]), slurp(pb[i])) << pa[i];
  }
  const std::string conv = slurp(a / "fixed-point-apriori" / "convergence.csv");
  EXPECT_EQ(conv.substr(0, conv.find('\n')), "n,error,bound");
  const std::string checks = slurp(a / "fixed-point-apriori" / "checks.csv");
  EXPECT_EQ(checks.substr(0, checks.find('\n')), "check,value,relation,limit,passed");
}

TEST(Runner, SeedChangesSampledOutput) {
  const Registry& reg = builtin_registry();
  RunOptions o1;
  o1.seed = 1;
  RunOptions o2;
  o2.seed = 2;
  const RunReport r1 = run_scenario(reg, "shift-norm", Config{}, o1);
  const RunReport r2 = run_scenario(reg, "shift-norm", Config{}, o2);
  EXPECT_EQ(r1.verdict, Verdict::kPass);
  EXPECT_EQ(r2.verdict, Verdict::kPass);
  EXPECT_EQ(r1.seed, 1u);
}

TEST(Runner, ConfigOverridesReachScenario) {
  const Config c = Config::parse("[shift-norm]\nratios = 0.25\n");
  const RunReport r = run_scenario(builtin_registry(), "shift-norm", c);
  EXPECT_EQ(r.verdict, Verdict::kPass);
  const auto exact = r.find_metric("a=0.25 exact");
  ASSERT_TRUE(exact.has_value());
  EXPECT_EQ(*exact, 0.25);
  EXPECT_FALSE(r.find_metric("a=0.5 exact").has_value());
}

TEST(Runner, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Runner, OperatorLiteralFromConfig) {
  const Config ok = Config::parse("[neumann-inversion]\nperturbation = scale(0.5, shift(1))\n");
  const RunReport r = run_scenario(builtin_registry(), "neumann-inversion", ok);
  EXPECT_EQ(r.verdict, Verdict::kPass);
  EXPECT_NE(r.find_check("perturbation theta < 1"), nullptr);
  const Config bad = Config::parse("[neumann-inversion]\nperturbation = shift(1, 5)\n");
  EXPECT_EQ(run_scenario(builtin_registry(), "neumann-inversion", bad).verdict, Verdict::kFail);
  const Config malformed = Config::parse("[neumann-inversion]\nperturbation = shift(\n");
  EXPECT_THROW(run_scenario(builtin_registry(), "neumann-inversion", malformed), Error);
}
