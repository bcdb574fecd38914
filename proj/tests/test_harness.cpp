#include "kolmo/harness.hpp"

#include <gtest/gtest.h>

namespace kolmo {
namespace {

const char* kSmallSuite = R"({
  "seed": 17,
  "criterion": {"kmax": 8, "samples_per_k": 10000},
  "solver": {"paths": 600},
  "probe": {"levels": 8},
  "operator": {"p": [2], "A0": [[1, 0], [0, 1]]},
  "cases": [
    {"name": "ball", "domain": {"op": "ball", "center": [0, 0], "radius": 1},
     "points": [{"x0": [1, 0], "expected": "regular"}]},
    {"name": "punctured",
     "domain": {"op": "puncture", "point": [0, 0], "children": [{"op": "ball", "center": [0, 0], "radius": 1}]},
     "points": [{"x0": [0, 0], "expected": "irregular"}]}
  ]})";

TEST(Harness, ExpectationStrings) {
  EXPECT_EQ(expectation_from_string("regular"), Expectation::Regular);
  EXPECT_EQ(expectation_from_string("unknown"), Expectation::Unknown);
  EXPECT_THROW(expectation_from_string("maybe"), ConfigError);
  EXPECT_STREQ(to_string(Expectation::Irregular), "irregular");
}

TEST(Harness, ParseSpec) {
  const ExperimentSpec s = experiment_from_json(json::parse(kSmallSuite));
  ASSERT_EQ(s.cases.size(), 2u);
  EXPECT_EQ(s.seed, 17u);
  EXPECT_EQ(s.probe.levels, 8);
  EXPECT_EQ(s.cases[1].points[0].expected, Expectation::Irregular);
  EXPECT_EQ(s.cases[0].T, 1.0);
}

TEST(Harness, ParseErrors) {
  auto bad = [](const std::string& patch) {
    json j = json::parse(kSmallSuite);
    j.merge_patch(json::parse(patch));
    return j;
  };
  EXPECT_THROW(experiment_from_json(json::array()), ConfigError);
  EXPECT_THROW(experiment_from_json(bad(R"({"cases": []})")), ConfigError);
  EXPECT_THROW(experiment_from_json(bad(R"({"operator": null})")), ConfigError);
  EXPECT_THROW(experiment_from_json(bad(R"({"operator": {"p": [1, 1], "A0": [[1]], "B": [[[0]]]}})")), ConfigError);
  EXPECT_THROW(experiment_from_json(bad(R"({"cases": [{"name": "h", "domain": {"op": "halfspace", "normal": [1, 0],
      "offset": 0}, "points": [{"x0": [0, 0]}]}]})")),
               ConfigError);
  EXPECT_THROW(experiment_from_json(bad(R"({"cases": [{"name": "d", "domain": {"op": "ball", "center": [0, 0, 0],
      "radius": 1}, "points": []}]})")),
               ConfigError);
  EXPECT_THROW(experiment_from_json(bad(R"({"cases": [{"name": "t", "T": 0, "domain": {"op": "ball",
      "center": [0, 0], "radius": 1}, "points": []}]})")),
               ConfigError);
}

TEST(Harness, SmallSuiteAgrees) {
  ExperimentSpec s = experiment_from_json(json::parse(kSmallSuite));
  s.workers = 1;
  int seen = 0;
  const EquivalenceTable t = run_equivalence_suite(s, [&](const EquivalenceRow&) { ++seen; });
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(seen, 2);
  EXPECT_TRUE(t.ok());
  EXPECT_EQ(t.expectation_misses, 0);
  EXPECT_EQ(t.rows[0].stationary, RegularityClass::RegularLikely);
  EXPECT_EQ(t.rows[1].stationary, RegularityClass::IrregularLikely);
  EXPECT_EQ(t.rows[1].evolution, RegularityClass::IrregularLikely);
  ASSERT_TRUE(t.rows[1].criterion.has_value());
  EXPECT_EQ(*t.rows[1].criterion, SeriesVerdict::ConvergesLikely);
  EXPECT_TRUE(run_criterion_sufficiency_check(t).passed());
  const json j = to_json(t);
  EXPECT_EQ(j.at("rows").size(), 2u);
  const std::string csv = to_csv(t);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Harness, SufficiencyCountsForbiddenRows) {
  EquivalenceTable t;
  EquivalenceRow r;
  r.stationary = RegularityClass::IrregularLikely;
  r.criterion = SeriesVerdict::DivergesLikely;
  r.forbidden = true;
  t.rows.push_back(r);
  r.forbidden = false;
  r.stationary = RegularityClass::RegularLikely;
  t.rows.push_back(r);
  r.stationary = RegularityClass::Inconclusive;
  r.evolution = RegularityClass::Inconclusive;
  t.rows.push_back(r);
  r.criterion.reset();
  t.rows.push_back(r);
  const SufficiencyReport rep = run_criterion_sufficiency_check(t);
  EXPECT_EQ(rep.forbidden, 1);
  EXPECT_EQ(rep.checked, 2);
  EXPECT_EQ(rep.excluded, 2);
  EXPECT_FALSE(rep.passed());
}

TEST(Harness, WorkerCountInvariance) {
  ExperimentSpec s = experiment_from_json(json::parse(kSmallSuite));
  s.cases.erase(s.cases.begin() + 1, s.cases.end());
  s.solver.paths = 200;
  s.workers = 1;
  const json a = to_json(run_equivalence_suite(s));
  s.workers = 3;
  EXPECT_EQ(a.dump(), to_json(run_equivalence_suite(s)).dump());
}

}  // namespace
}  // namespace kolmo
