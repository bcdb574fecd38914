#include "kolmo/harness.hpp"

#include "kolmo/random.hpp"

#include <sstream>

namespace kolmo {

namespace {

bool conclusive(RegularityClass c) { return c != RegularityClass::Inconclusive; }

bool matches(RegularityClass c, Expectation e) {
  if (e == Expectation::Unknown || !conclusive(c)) return true;
  return (c == RegularityClass::RegularLikely) == (e == Expectation::Regular);
}

}  // namespace

const char* to_string(Expectation e) {
  switch (e) {
    case Expectation::Regular: return "regular";
    case Expectation::Irregular: return "irregular";
    case Expectation::Unknown: return "unknown";
  }
  return "unknown";
}

Expectation expectation_from_string(const std::string& s) {
  if (s == "regular") return Expectation::Regular;
  if (s == "irregular") return Expectation::Irregular;
  if (s == "unknown") return Expectation::Unknown;
  throw ConfigError("expected verdict must be regular, irregular or unknown (got '" + s + "')");
}

ExperimentSpec experiment_from_json(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ConfigError("experiment spec must be a JSON object");
  ExperimentSpec spec;
  spec.seed = j.value("seed", std::uint64_t{0});
  spec.sweep_t0 = j.value("sweep_t0", false);
  spec.run_criterion = j.value("run_criterion", true);
  spec.criterion = criterion_params_from_json(j.value("criterion", json::object()));
  spec.solver = solver_config_from_json(j.value("solver", json::object()));
  spec.probe = probe_config_from_json(j.value("probe", json::object()));

  std::optional<json> default_op;
  if (j.contains("operator")) default_op = operator_node_from_json(j.at("operator"), base_dir);

  if (!j.contains("cases") || !j.at("cases").is_array() || j.at("cases").empty()) {
    throw ConfigError("experiment spec needs a nonempty 'cases' array");
  }
  for (const auto& c : j.at("cases")) {
    const std::string name = c.value("name", "case" + std::to_string(spec.cases.size()));
    json op_node;
    if (c.contains("operator")) op_node = operator_node_from_json(c.at("operator"), base_dir);
    else if (default_op) op_node = *default_op;
    else throw ConfigError("case '" + name + "' has no operator");
    OUOperator op = operator_from_json(op_node);
    if (!validate(op).valid()) throw ConfigError("case '" + name + "': operator fails validation");
    if (!c.contains("domain")) throw ConfigError("case '" + name + "' has no domain");
    Domain domain = domain_from_json(c.at("domain"), &op);
    if (domain.dim() != op.dim()) throw ConfigError("case '" + name + "': domain dimension mismatch");
    if (!domain.bounded()) throw ConfigError("case '" + name + "': domain must be bounded");
    const double T = c.value("T", 1.0);
    if (!(T > 0.0)) throw ConfigError("case '" + name + "': T must be positive");
    ExperimentCase ec{name, op, domain, T, {}};
    if (!c.contains("points") || !c.at("points").is_array()) throw ConfigError("case '" + name + "' has no points");
    for (const auto& p : c.at("points")) {
      ExperimentPoint pt;
      pt.x0 = vector_from_json(p.at("x0"), "x0");
      if (pt.x0.size() != op.dim()) throw ConfigError("case '" + name + "': x0 dimension mismatch");
      pt.expected = expectation_from_string(p.value("expected", "unknown"));
      ec.points.push_back(pt);
    }
    spec.cases.push_back(std::move(ec));
  }
  return spec;
}

EquivalenceTable run_equivalence_suite(const ExperimentSpec& spec,
                                       const std::function<void(const EquivalenceRow&)>& progress) {
  EquivalenceTable table;
  for (std::size_t ci = 0; ci < spec.cases.size(); ++ci) {
    const auto& c = spec.cases[ci];
    const GammaContext ctx(c.op);
    const Cylinder cyl(c.domain, 0.0, c.T);
    for (std::size_t pi = 0; pi < c.points.size(); ++pi) {
      const auto& pt = c.points[pi];
      SolverConfig cfg = spec.solver;
      cfg.seed = derive_seed(spec.seed, ci, pi);
      cfg.workers = spec.workers;

      const RegularityVerdict stat = regularity_probe_stationary(ctx, c.domain, pt.x0, cfg, spec.probe);
      std::optional<SeriesVerdict> crit;
      if (spec.run_criterion) {
        CriterionParams cp = spec.criterion;
        cp.seed = derive_seed(spec.seed, ci, pi + 0x10000);
        cp.workers = spec.workers;
        crit = evaluate_criterion(ctx, c.domain, pt.x0, cp).verdict;
      }

      std::vector<double> times{0.5 * c.T};
      if (spec.sweep_t0) times = {0.25 * c.T, 0.5 * c.T, 0.75 * c.T};
      for (double t0 : times) {
        EquivalenceRow row;
        row.case_name = c.name;
        row.x0 = pt.x0;
        row.t0 = t0;
        row.expected = pt.expected;
        row.criterion = crit;
        row.stationary_detail = stat;
        row.stationary = stat.verdict;
        row.evolution_detail = regularity_probe_evolution(ctx, cyl, {pt.x0, t0}, cfg, spec.probe);
        row.evolution = row.evolution_detail.verdict;
        row.probes_agree = !(conclusive(row.stationary) && conclusive(row.evolution)) || row.stationary == row.evolution;
        row.forbidden = crit == SeriesVerdict::DivergesLikely &&
                        (row.stationary == RegularityClass::IrregularLikely ||
                         row.evolution == RegularityClass::IrregularLikely);
        row.matches_expected = matches(row.stationary, row.expected) && matches(row.evolution, row.expected);
        table.disagreements += !row.probes_agree;
        table.forbidden += row.forbidden;
        table.expectation_misses += !row.matches_expected;
        if (progress) progress(row);
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

SufficiencyReport run_criterion_sufficiency_check(const EquivalenceTable& table) {
  SufficiencyReport rep;
  for (const auto& row : table.rows) {
    const bool any_probe = conclusive(row.stationary) || conclusive(row.evolution);
    if (!row.criterion || *row.criterion == SeriesVerdict::Inconclusive || !any_probe) {
      ++rep.excluded;
      continue;
    }
    ++rep.checked;
    rep.forbidden += row.forbidden;
  }
  return rep;
}

SufficiencyReport run_criterion_sufficiency_check(const ExperimentSpec& spec) {
  return run_criterion_sufficiency_check(run_equivalence_suite(spec));
}

json to_json(const EquivalenceTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"case", r.case_name},
                    {"x0", to_json(r.x0)},
                    {"t0", r.t0},
                    {"stationary", to_string(r.stationary)},
                    {"evolution", to_string(r.evolution)},
                    {"criterion", r.criterion ? json(to_string(*r.criterion)) : json(nullptr)},
                    {"expected", to_string(r.expected)},
                    {"probes_agree", r.probes_agree},
                    {"forbidden", r.forbidden},
                    {"matches_expected", r.matches_expected},
                    {"stationary_probe", to_json(r.stationary_detail)},
                    {"evolution_probe", to_json(r.evolution_detail)}});
  }
  return {{"rows", rows},
          {"disagreements", t.disagreements},
          {"forbidden", t.forbidden},
          {"expectation_misses", t.expectation_misses},
          {"ok", t.ok()}};
}

json to_json(const SufficiencyReport& r) {
  return {{"checked", r.checked}, {"excluded", r.excluded}, {"forbidden", r.forbidden}, {"passed", r.passed()}};
}

std::string to_csv(const EquivalenceTable& t) {
  std::ostringstream os;
  os.precision(17);
  os << "case,x0,t0,stationary,evolution,criterion,expected,probes_agree,forbidden,matches_expected\n";
  for (const auto& r : t.rows) {
    os << r.case_name << ',';
    for (Eigen::Index i = 0; i < r.x0.size(); ++i) os << (i ? ";" : "") << r.x0[i];
    os << ',' << r.t0 << ',' << to_string(r.stationary) << ',' << to_string(r.evolution) << ','
       << (r.criterion ? to_string(*r.criterion) : "skipped") << ',' << to_string(r.expected) << ','
       << r.probes_agree << ',' << r.forbidden << ',' << r.matches_expected << '\n';
  }
  return os.str();
}

}  // namespace kolmo
