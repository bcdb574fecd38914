#pragma once

// End-to-end experiments: for each boundary point of each case, the
// stationary probe on Omega, the evolution probe on Omega x (0, T) at t0, and
// the series criterion. Stationary and evolution verdicts are expected to
// agree whenever both are conclusive, and the criterion must never claim
// divergence at a point a probe finds irregular.

#include "kolmo/dirichlet.hpp"
#include "kolmo/io.hpp"
#include "kolmo/wiener.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kolmo {

enum class Expectation { Regular, Irregular, Unknown };
const char* to_string(Expectation e);
Expectation expectation_from_string(const std::string& s);

struct ExperimentPoint {
  Vector x0;
  Expectation expected = Expectation::Unknown;
};

struct ExperimentCase {
  std::string name;
  OUOperator op;
  Domain domain;
  double T = 1.0;
  std::vector<ExperimentPoint> points;
};

struct ExperimentSpec {
  std::vector<ExperimentCase> cases;
  CriterionParams criterion;
  SolverConfig solver;
  ProbeConfig probe;
  std::uint64_t seed = 0;
  // Evolution probes at T/4, T/2, 3T/4 instead of T/2 only.
  bool sweep_t0 = false;
  bool run_criterion = true;
  int workers = 0;
};

// Parses the experiment schema; "operator" fields may be inline objects or
// paths relative to base_dir. Throws ConfigError.
ExperimentSpec experiment_from_json(const json& j, const std::string& base_dir = ".");

struct EquivalenceRow {
  std::string case_name;
  Vector x0;
  double t0 = 0.0;
  RegularityClass stationary = RegularityClass::Inconclusive;
  RegularityClass evolution = RegularityClass::Inconclusive;
  std::optional<SeriesVerdict> criterion;
  Expectation expected = Expectation::Unknown;
  // Both probes conclusive and equal, or at least one inconclusive.
  bool probes_agree = true;
  // Criterion diverges-likely while a probe reports irregular-likely.
  bool forbidden = false;
  // Conclusive probe verdicts match the expected label (true when unknown).
  bool matches_expected = true;
  RegularityVerdict stationary_detail;
  RegularityVerdict evolution_detail;
};

struct EquivalenceTable {
  std::vector<EquivalenceRow> rows;
  int disagreements = 0;
  int forbidden = 0;
  int expectation_misses = 0;
  bool ok() const { return disagreements == 0 && forbidden == 0; }
};

// progress, when set, sees each row as soon as it is complete.
EquivalenceTable run_equivalence_suite(const ExperimentSpec& spec,
                                       const std::function<void(const EquivalenceRow&)>& progress = {});

struct SufficiencyReport {
  int checked = 0;
  int excluded = 0;
  int forbidden = 0;
  bool passed() const { return forbidden == 0; }
};

// One-sided check: among rows with a conclusive criterion and at least one
// conclusive probe, counts criterion diverges-likely with probe irregular-likely.
SufficiencyReport run_criterion_sufficiency_check(const EquivalenceTable& table);
SufficiencyReport run_criterion_sufficiency_check(const ExperimentSpec& spec);

json to_json(const EquivalenceTable& t);
json to_json(const SufficiencyReport& r);
std::string to_csv(const EquivalenceTable& t);

}  // namespace kolmo
