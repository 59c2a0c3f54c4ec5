#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levylab/harness.hpp"

using namespace levylab::harness;

namespace {

const char* kMinimal = R"(# minimal M/M/1
name = mini
model.kind = compound_poisson
model.drift = -1
model.jumps_up.rate = 1
model.jumps_up.params = 2
)";

bool mentions(const DiagnosticError& e, const std::string& needle) {
  return std::any_of(e.diagnostics().begin(), e.diagnostics().end(),
                     [&](const std::string& d) { return d.find(needle) != std::string::npos; });
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Scenario, MinimalFillsDefaults) {
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_EQ(s.name, "mini");
  EXPECT_EQ(s.experiments, std::vector<std::string>{"analyze"});
  EXPECT_DOUBLE_EQ(s.real("theorem2.tolerance"), 0.02);
  EXPECT_DOUBLE_EQ(s.real("theorem3.tolerance"), 0.15);
  EXPECT_EQ(s.count("theorem1.excursions"), 1000000u);
  EXPECT_EQ(s.reals("first_passage.x"), (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_DOUBLE_EQ(s.model.drift, -1.0);
  EXPECT_EQ(s.settings.size(), scenario_schema().size());
}

TEST(Scenario, UnknownFieldIsNamed) {
  try {
    parse_scenario(std::string(kMinimal) + "sgima = 1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_TRUE(mentions(e, "sgima"));
    EXPECT_TRUE(mentions(e, "line 7"));
  }
}

TEST(Scenario, EveryViolationIsListed) {
  try {
    parse_scenario("model.drift = abc\nfoo = 1\nseed = -3\nseed = 4\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_TRUE(mentions(e, "model.drift"));
    EXPECT_TRUE(mentions(e, "foo"));
    EXPECT_TRUE(mentions(e, "seed"));
    EXPECT_TRUE(mentions(e, "duplicate"));
    EXPECT_TRUE(mentions(e, "model.kind"));
    EXPECT_GE(e.diagnostics().size(), 5u);
  }
}

TEST(Scenario, OrderInsensitive) {
  const Scenario a = parse_scenario(kMinimal);
  const Scenario b = parse_scenario(
      "model.jumps_up.params = 2\nmodel.jumps_up.rate = 1\nmodel.drift = -1\n"
      "model.kind = compound_poisson\nname = mini\n");
  EXPECT_EQ(a.settings, b.settings);
}

TEST(Scenario, TheoremOneOnBrownianCitesCaseI) {
  try {
    parse_scenario(
        "model.kind = brownian\nmodel.drift = -1\nmodel.sigma = 1\nexperiments = theorem1\n"
        "alpha = 2\n");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(mentions(e, "Case I"));
  }
}

TEST(Scenario, PreconditionsCheckedBeforeCompute) {
  try {
    parse_scenario(std::string(kMinimal) +
                   "experiments = theorem1, theorem2, first_passage\nalpha = 0.5\n"
                   "first_passage.method = tilted\n");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(mentions(e, "theorem1"));
    EXPECT_TRUE(mentions(e, "Cramer root"));
    EXPECT_TRUE(mentions(e, "theorem2"));
  }
}

TEST(Scenario, ZeroBudgetIsSkipped) {
  const Scenario s =
      parse_scenario(std::string(kMinimal) + "experiments = first_passage\nfirst_passage.n = 0\n");
  const ReportBundle b = run_experiment(s);
  ASSERT_EQ(b.experiments.size(), 1u);
  EXPECT_EQ(b.experiments[0].status, Status::skipped);
  EXPECT_FALSE(b.experiments[0].reason.empty());
}

TEST(Report, ExitCodes) {
  const auto dir = std::filesystem::temp_directory_path() / "levylab_report_test";
  std::filesystem::remove_all(dir);

  ReportBundle empty;
  EXPECT_EQ(emit_report(empty, dir / "empty"), 0);
  EXPECT_NE(slurp(dir / "empty" / "summary.json").find("skipped: all"), std::string::npos);

  ReportBundle good;
  good.experiments.push_back({"analyze", Status::pass, "", {}, "{}", 0.0});
  EXPECT_EQ(emit_report(good, dir / "good"), 0);

  ReportBundle bad = good;
  bad.experiments.push_back({"theorem3", Status::fail, "gap", {}, "{}", 0.0});
  EXPECT_EQ(emit_report(bad, dir / "bad"), 1);
  const std::string summary = slurp(dir / "bad" / "summary.json");
  EXPECT_NE(summary.find("\"failed\": [\n    \"theorem3\""), std::string::npos) << summary;
  std::filesystem::remove_all(dir);
}

TEST(Report, CsvReproducibleAcrossThreads) {
  const Scenario s = parse_scenario(std::string(kMinimal) +
                                    "experiments = analyze, first_passage, identity_b\n"
                                    "first_passage.n = 8192\nidentity_b.n = 8192\n"
                                    "first_passage.max_rel_se = 1\n");
  const ReportBundle a = run_experiment(s, {1, {}});
  const ReportBundle b = run_experiment(s, {3, {}});
  ASSERT_EQ(a.experiments.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(csv_body(a.experiments[i]), csv_body(b.experiments[i]));
    EXPECT_NE(a.experiments[i].status, Status::error) << a.experiments[i].reason;
  }
  EXPECT_EQ(csv_body(a.experiments[0]).substr(0, 46), "x,estimate,std_error,n,method,seed,target,pass");
}
