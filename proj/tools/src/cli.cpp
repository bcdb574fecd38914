#include "kolmo/cli.hpp"

#include "kolmo/harness.hpp"
#include "kolmo/io.hpp"
#include "kolmo/parallel.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <unistd.h>

#ifndef KOLMO_VERSION
#define KOLMO_VERSION "unknown"
#endif

namespace kolmo::cli {

namespace {

struct Payload {
  json result;
  std::string csv;
  int code = kOk;
};

struct Context {
  const Invocation& inv;
  std::ostream& err;
  json config;
  std::string base_dir;
  std::uint64_t seed = 0;
  int workers = 1;
};

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json load_config(const std::string& path) {
  if (path.empty()) throw ConfigError("--config is required");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
}

OUOperator load_operator(const Context& ctx) {
  const json& c = ctx.config;
  const json node = c.contains("operator") ? operator_node_from_json(c.at("operator"), ctx.base_dir) : c;
  return operator_from_json(node);
}

const json& section(const json& c, const char* key) {
  static const json empty = json::object();
  return c.contains(key) ? c.at(key) : empty;
}

Vector require_vector(const json& c, const char* key, int dim) {
  if (!c.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  Vector v = vector_from_json(c.at(key), key);
  if (v.size() != dim) throw ConfigError(std::string("'") + key + "' has the wrong dimension");
  return v;
}

Domain require_domain(const json& c, const char* key, const OUOperator& op) {
  if (!c.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  Domain d = domain_from_json(c.at(key), &op);
  if (d.dim() != op.dim()) throw ConfigError(std::string("'") + key + "' has the wrong dimension");
  return d;
}

CriterionParams criterion_params(const Context& ctx) {
  CriterionParams d;
  d.seed = ctx.seed;
  CriterionParams p = criterion_params_from_json(section(ctx.config, "criterion"), d);
  if (ctx.inv.seed) p.seed = *ctx.inv.seed;
  p.workers = ctx.workers;
  return p;
}

SolverConfig solver_config(const Context& ctx) {
  SolverConfig d;
  d.seed = ctx.seed;
  SolverConfig s = solver_config_from_json(section(ctx.config, "solver"), d);
  if (ctx.inv.seed) s.seed = *ctx.inv.seed;
  s.workers = ctx.workers;
  return s;
}

Payload cmd_validate(const Context& ctx) {
  const OUOperator op = load_operator(ctx);
  const ValidationReport rep = validate(op);
  Payload p;
  p.result = {{"operator", operator_to_json(op)}, {"validation", to_json(rep)}};
  std::ostringstream csv;
  csv << "check,passed,detail\n";
  for (const auto& c : rep.checks) csv << c.name << ',' << c.passed << ",\"" << c.detail << "\"\n";
  if (rep.valid()) {
    const GammaContext g(op);
    p.result["Q"] = g.Q();
    p.result["normalization"] = g.normalization();
    p.result["drift_sign"] = g.drift_sign();
  } else {
    p.code = kConfigError;
  }
  p.csv = csv.str();
  return p;
}

Payload cmd_gamma(const Context& ctx) {
  const OUOperator op = load_operator(ctx);
  const GammaContext g(op);
  Vector x;
  if (!ctx.inv.x.empty()) x = Eigen::Map<const Vector>(ctx.inv.x.data(), static_cast<Eigen::Index>(ctx.inv.x.size()));
  else x = require_vector(ctx.config, "x", op.dim());
  if (x.size() != op.dim()) throw ConfigError("--x has the wrong dimension");
  double t = 0.0;
  if (ctx.inv.t) t = *ctx.inv.t;
  else if (ctx.config.contains("t") && ctx.config.at("t").is_number()) t = ctx.config.at("t").get<double>();
  else throw ConfigError("gamma needs --t");
  if (!(t > 0.0)) throw ConfigError("t must be positive");
  Payload p;
  const double value = g.gamma(x, t);
  p.result = {{"x", to_json(x)}, {"t", t}, {"gamma", value}, {"log_gamma", g.log_gamma(x, t)},
              {"Q", g.Q()}, {"normalization", g.normalization()}, {"drift_sign", g.drift_sign()}};
  std::ostringstream csv;
  csv << "x,t,gamma\n";
  for (Eigen::Index i = 0; i < x.size(); ++i) csv << (i ? ";" : "") << fmt(x[i]);
  csv << ',' << fmt(t) << ',' << fmt(value) << '\n';
  p.csv = csv.str();
  return p;
}

Payload cmd_criterion(const Context& ctx) {
  const OUOperator op = load_operator(ctx);
  const GammaContext g(op);
  const Domain omega = require_domain(ctx.config, "domain", op);
  const Vector x0 = require_vector(ctx.config, "x0", op.dim());
  const CriterionReport rep = evaluate_criterion(g, omega, x0, criterion_params(ctx));
  const UpperBoundCheck bound = dk_upper_bound_check(g, rep);
  Payload p;
  p.result = {{"criterion", to_json(rep)}, {"upper_bound", to_json(bound)}};
  p.csv = to_csv(rep);
  if (!bound.bound_holds) p.code = kViolation;
  return p;
}

Payload cmd_solve(const Context& ctx) {
  const OUOperator op = load_operator(ctx);
  const GammaContext g(op);
  const Domain omega = require_domain(ctx.config, "domain", op);
  const SolverConfig cfg = solver_config(ctx);
  if (!ctx.config.contains("boundary")) throw ConfigError("missing key 'boundary'");
  const json& data = ctx.config.at("boundary");

  std::vector<Vector> points;
  if (ctx.config.contains("points")) {
    const json& pts = ctx.config.at("points");
    if (!pts.is_array() || pts.empty()) throw ConfigError("'points' must be a nonempty array");
    for (const auto& pt : pts) {
      points.push_back(vector_from_json(pt, "points"));
      if (points.back().size() != op.dim()) throw ConfigError("'points' entry has the wrong dimension");
    }
  } else {
    points.push_back(require_vector(ctx.config, "x", op.dim()));
  }

  const bool evolution = ctx.config.contains("evolution");
  std::optional<Cylinder> cyl;
  double t = 0.0;
  if (evolution) {
    const json& e = ctx.config.at("evolution");
    const double t0 = e.value("t0", 0.0), t1 = e.value("t1", 1.0);
    if (!(t0 < t1)) throw ConfigError("evolution: t0 must be below t1");
    cyl.emplace(omega, t0, t1);
    t = e.value("t", t1);
  }

  Payload p;
  json rows = json::array();
  std::ostringstream csv;
  csv << "x,t,value,stderr,paths_used,truncated_paths,mean_exit_time,valid\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    SolverConfig c = cfg;
    c.seed = derive_seed(cfg.seed, i);
    DirichletEstimate est;
    if (evolution) est = solve_evolution(g, *cyl, space_time_function_from_json(data), {points[i], t}, c);
    else est = solve_stationary(g, omega, boundary_function_from_json(data), points[i], c);
    json row = {{"x", to_json(points[i])}, {"estimate", to_json(est)}};
    if (evolution) row["t"] = t;
    rows.push_back(row);
    for (Eigen::Index k = 0; k < points[i].size(); ++k) csv << (k ? ";" : "") << fmt(points[i][k]);
    csv << ',' << (evolution ? fmt(t) : "") << ',' << fmt(est.value) << ',' << fmt(est.stderr_) << ','
        << est.paths_used << ',' << est.truncated_paths << ',' << fmt(est.mean_exit_time) << ',' << est.valid << '\n';
    if (!est.valid) p.code = kNumericalFailure;
  }
  p.result = {{"mode", evolution ? "evolution" : "stationary"}, {"estimates", rows}};
  p.csv = csv.str();
  return p;
}

Payload cmd_probe(const Context& ctx) {
  const OUOperator op = load_operator(ctx);
  const GammaContext g(op);
  const Domain omega = require_domain(ctx.config, "domain", op);
  const Vector x0 = require_vector(ctx.config, "x0", op.dim());
  const SolverConfig cfg = solver_config(ctx);
  const ProbeConfig probe = probe_config_from_json(section(ctx.config, "probe"));
  const std::string mode = ctx.config.value("mode", "both");
  if (mode != "stationary" && mode != "evolution" && mode != "both") {
    throw ConfigError("'mode' must be stationary, evolution or both");
  }
  const double T = ctx.config.value("T", 1.0);
  if (!(T > 0.0)) throw ConfigError("'T' must be positive");
  const double t0 = ctx.config.value("t0", 0.5 * T);

  Payload p;
  p.result = json::object();
  std::string csv;
  auto append_csv = [&](const char* name, const RegularityVerdict& v) {
    std::istringstream lines(to_csv(v));
    std::string line;
    bool header = true;
    while (std::getline(lines, line)) {
      if (header) {
        if (csv.empty()) csv += "mode," + line + '\n';
        header = false;
        continue;
      }
      csv += std::string(name) + ',' + line + '\n';
    }
  };
  if (mode != "evolution") {
    const RegularityVerdict v = regularity_probe_stationary(g, omega, x0, cfg, probe);
    p.result["stationary"] = to_json(v);
    append_csv("stationary", v);
  }
  if (mode != "stationary") {
    const RegularityVerdict v = regularity_probe_evolution(g, Cylinder(omega, 0.0, T), {x0, t0}, cfg, probe);
    p.result["evolution"] = to_json(v);
    append_csv("evolution", v);
  }
  p.csv = csv;
  return p;
}

Payload cmd_barrier(const Context& ctx) {
  const OUOperator op = load_operator(ctx);
  const Domain y = require_domain(ctx.config, "working_set", op);
  if (!y.bounded()) throw ConfigError("'working_set' must be bounded");
  const Vector x0 = ctx.config.contains("x0") ? require_vector(ctx.config, "x0", op.dim())
                                              : Vector(0.5 * (y.lower() + y.upper()));
  std::optional<double> lambda;
  if (ctx.config.contains("lambda")) {
    if (!ctx.config.at("lambda").is_number()) throw ConfigError("'lambda' must be a number");
    lambda = ctx.config.at("lambda").get<double>();
  }
  GridConfig gd;
  gd.seed = ctx.seed;
  GridConfig grid = grid_config_from_json(section(ctx.config, "grid"), gd);
  if (ctx.inv.seed) grid.seed = *ctx.inv.seed;
  const BarrierH b = make_barrier(op, y, x0, lambda);
  const SuperharmonicityReport rep = verify_strict_superharmonicity(b, op, grid);
  Payload p;
  p.result = {{"x0", to_json(x0)}, {"verification", to_json(rep)}};
  std::ostringstream csv;
  csv << "lambda,alpha,beta,min_value,samples,nonpositive,passed\n"
      << fmt(rep.lambda) << ',' << fmt(rep.alpha_coef) << ',' << fmt(rep.beta_coef) << ',' << fmt(rep.min_value)
      << ',' << rep.samples << ',' << rep.nonpositive << ',' << rep.passed() << '\n';
  p.csv = csv.str();
  if (!rep.passed()) p.code = kViolation;
  return p;
}

Payload cmd_equivalence(const Context& ctx) {
  json c = ctx.config;
  c["seed"] = ctx.seed;
  ExperimentSpec spec = experiment_from_json(c, ctx.base_dir);
  spec.workers = ctx.workers;
  const EquivalenceTable table = run_equivalence_suite(spec, [&](const EquivalenceRow& r) {
    ctx.err << "row " << r.case_name << " x0=" << to_json(r.x0).dump() << " t0=" << r.t0
            << " stationary=" << to_string(r.stationary) << " evolution=" << to_string(r.evolution)
            << " criterion=" << (r.criterion ? to_string(*r.criterion) : "skipped") << std::endl;
  });
  const SufficiencyReport suff = run_criterion_sufficiency_check(table);
  Payload p;
  p.result = {{"equivalence", to_json(table)}, {"sufficiency", to_json(suff)}};
  p.csv = to_csv(table);
  if (!table.ok() || !suff.passed()) p.code = kViolation;
  return p;
}

Payload run_subcommand(const Context& ctx) {
  const std::string& s = ctx.inv.subcommand;
  if (s == "validate") return cmd_validate(ctx);
  if (s == "gamma") return cmd_gamma(ctx);
  if (s == "criterion") return cmd_criterion(ctx);
  if (s == "solve") return cmd_solve(ctx);
  if (s == "probe") return cmd_probe(ctx);
  if (s == "barrier") return cmd_barrier(ctx);
  if (s == "equivalence") return cmd_equivalence(ctx);
  throw ConfigError("unknown subcommand '" + s + "'");
}

json manifest(const Context& ctx) {
  std::string compiler = "unknown";
#if defined(__clang__)
  compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
  compiler = "gcc " __VERSION__;
#endif
  return {{"tool", "kolmo"},
          {"subcommand", ctx.inv.subcommand},
          {"config", ctx.inv.config},
          {"config_hash", "fnv1a64:" + hex64(fnv1a64(ctx.config.dump()))},
          {"seed", ctx.seed},
          {"workers", ctx.workers},
          {"format", ctx.inv.format},
          {"timestamp", utc_now()},
          {"versions",
           {{"kolmo", KOLMO_VERSION},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
            {"compiler", compiler}}}};
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"validate", "gamma", "criterion", "solve",
                                              "probe", "barrier", "equivalence"};
  return names;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw ConfigError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

int dispatch(const Invocation& inv, std::ostream& out, std::ostream& err) {
  try {
    if (inv.format != "json" && inv.format != "csv") throw ConfigError("--format must be json or csv");
    if (inv.workers && *inv.workers < 1) throw ConfigError("--workers must be positive");
    Context ctx{inv, err, load_config(inv.config), {}, 0, 1};
    ctx.base_dir = std::filesystem::path(inv.config).parent_path().string();
    if (ctx.base_dir.empty()) ctx.base_dir = ".";
    if (!ctx.config.is_object()) throw ConfigError("config must be a JSON object");
    ctx.seed = inv.seed ? *inv.seed : ctx.config.value("seed", std::uint64_t{0});
    ctx.workers = resolve_workers(inv.workers.value_or(0));

    const Payload p = run_subcommand(ctx);
    const json man = manifest(ctx);
    std::string body;
    if (inv.format == "json") {
      body = json{{"manifest", man}, {"result", p.result}, {"exit_code", p.code}}.dump(2) + '\n';
    } else {
      body = p.csv;
    }
    if (inv.out.empty()) {
      out << body;
    } else {
      write_atomic(inv.out, body);
      if (inv.format == "csv") write_atomic(inv.out + ".manifest.json", man.dump(2) + '\n');
    }
    err << "manifest " << man.dump() << '\n';
    return p.code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const StructuralError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boundary regularity experiments for Kolmogorov-type operators", "kolmo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", KOLMO_VERSION);
  Invocation inv;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string t_text;

  for (const auto& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", inv.config, "JSON config file")->required();
    sub->add_option("--out", inv.out, "output file (default stdout)");
    sub->add_option("--seed", seed, "base seed, overrides the config");
    sub->add_option("--workers", workers, "worker threads (default KOLMO_WORKERS, then hardware)");
    sub->add_option("--format", inv.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    if (name == "gamma") {
      sub->add_option("--x", inv.x, "spatial point, comma separated")->delimiter(',');
      sub->add_option("--t", t_text, "time");
    }
    sub->callback([&inv, name] { inv.subcommand = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kConfigError;
  }
  inv.seed = seed;
  inv.workers = workers;
  if (!t_text.empty()) {
    try {
      std::size_t used = 0;
      inv.t = std::stod(t_text, &used);
      if (used != t_text.size()) throw std::invalid_argument(t_text);
    } catch (const std::exception&) {
      err << "config error: --t must be a number\n";
      return kConfigError;
    }
  }
  return dispatch(inv, out, err);
}

}  // namespace kolmo::cli
