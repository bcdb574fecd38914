#include "kolmo/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace kolmo {

namespace {

const json& require(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing key '" + key + "'");
  return j.at(key);
}

template <typename T>
T value_or(const json& j, const std::string& key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

double number(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  return v.get<double>();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Vector vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError("'" + what + "' must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError("'" + what + "' must be an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ConfigError("'" + what + "' must be a nested array");
  const auto rows = j.size(), cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ConfigError("'" + what + "' rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ConfigError("'" + what + "' entries must be numbers");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

json to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

OUOperator operator_from_json(const json& j) {
  const json& p = require(j, "p");
  if (!p.is_array() || p.empty()) throw ConfigError("'p' must be a nonempty array of block sizes");
  BlockSignature sig;
  for (const auto& v : p) {
    if (!v.is_number_integer()) throw ConfigError("'p' entries must be integers");
    sig.sizes.push_back(v.get<int>());
  }
  const Matrix a0 = matrix_from_json(require(j, "A0"), "A0");
  std::vector<Matrix> blocks;
  if (j.contains("B")) {
    const json& b = j.at("B");
    if (!b.is_array()) throw ConfigError("'B' must be a list of blocks");
    for (std::size_t i = 0; i < b.size(); ++i) blocks.push_back(matrix_from_json(b[i], "B[" + std::to_string(i) + "]"));
  }
  try {
    return OUOperator(sig, a0, blocks);
  } catch (const StructuralError& e) {
    throw ConfigError(std::string("operator: ") + e.what());
  }
}

json operator_node_from_json(const json& node, const std::string& base_dir) {
  if (node.is_string()) {
    const std::filesystem::path path = std::filesystem::path(base_dir) / node.get<std::string>();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open operator file " + path.string());
    try {
      return json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("operator file " + path.string() + ": " + e.what());
    }
  }
  if (!node.is_object()) throw ConfigError("'operator' must be an object or a file path");
  return node;
}

json operator_to_json(const OUOperator& op) {
  json blocks = json::array();
  for (const auto& b : op.b_blocks()) blocks.push_back(to_json(b));
  return {{"p", op.signature().sizes}, {"A0", to_json(op.a0())}, {"B", blocks}};
}

Domain domain_from_json(const json& j, const OUOperator* op) {
  const std::string kind = value_or<std::string>(j, "op", "");
  auto children = [&]() {
    const json& c = require(j, "children");
    if (!c.is_array() || c.empty()) throw ConfigError("'" + kind + "' needs a nonempty 'children' array");
    std::vector<Domain> out;
    for (const auto& child : c) out.push_back(domain_from_json(child, op));
    return out;
  };
  try {
    if (kind == "ball") return ball(vector_from_json(require(j, "center"), "center"), number(j, "radius"));
    if (kind == "box") {
      return box(vector_from_json(require(j, "lower"), "lower"), vector_from_json(require(j, "upper"), "upper"));
    }
    if (kind == "halfspace") return halfspace(vector_from_json(require(j, "normal"), "normal"), number(j, "offset"));
    if (kind == "cone") {
      const Vector vertex = vector_from_json(require(j, "vertex"), "vertex");
      Eigen::VectorXi exps = Eigen::VectorXi::Ones(vertex.size());
      if (j.contains("exponents")) {
        const Vector e = vector_from_json(j.at("exponents"), "exponents");
        exps = e.cast<int>();
      } else if (op) {
        exps = op->dilation_exponents();
      }
      return anisotropic_cone(vertex, vector_from_json(require(j, "axis"), "axis"), number(j, "radius"),
                              value_or<double>(j, "scale_max", 1.0), exps);
    }
    if (kind == "whole_space") return whole_space(value_or<int>(j, "dim", op ? op->dim() : 0));
    if (kind == "empty") return empty_set(value_or<int>(j, "dim", op ? op->dim() : 0));
    if (kind == "complement") return complement(children().front());
    if (kind == "union" || kind == "intersect") {
      auto c = children();
      Domain acc = c.front();
      for (std::size_t i = 1; i < c.size(); ++i) acc = kind == "union" ? set_union(acc, c[i]) : intersect(acc, c[i]);
      return acc;
    }
    if (kind == "puncture") {
      return puncture(children().front(), vector_from_json(require(j, "point"), "point"),
                      value_or<double>(j, "radius", 0.0));
    }
  } catch (const StructuralError& e) {
    throw ConfigError("domain '" + kind + "': " + e.what());
  }
  throw ConfigError("unknown domain op '" + kind + "'");
}

BoundaryFunction boundary_function_from_json(const json& j) {
  const std::string type = value_or<std::string>(j, "type", "");
  if (type == "constant") {
    const double c = number(j, "value");
    return [c](const Vector&) { return c; };
  }
  if (type == "linear") {
    const Vector a = vector_from_json(require(j, "coef"), "coef");
    const double b = value_or<double>(j, "offset", 0.0);
    return [a, b](const Vector& x) { return a.dot(x) + b; };
  }
  if (type == "distance") {
    const Vector p = vector_from_json(require(j, "point"), "point");
    const double s = value_or<double>(j, "scale", 1.0);
    if (!(s > 0.0)) throw ConfigError("'scale' must be positive");
    return [p, s](const Vector& x) { return std::min(1.0, (x - p).norm() / s); };
  }
  if (type == "log_radius") {
    const Vector c = vector_from_json(require(j, "center"), "center");
    return [c](const Vector& x) { return std::log((x - c).norm()); };
  }
  if (type == "quadratic") {
    const Matrix q = matrix_from_json(require(j, "matrix"), "matrix");
    const Vector a = j.contains("coef") ? vector_from_json(j.at("coef"), "coef") : Vector::Zero(q.rows());
    const double b = value_or<double>(j, "offset", 0.0);
    return [q, a, b](const Vector& x) { return x.dot(q * x) + a.dot(x) + b; };
  }
  throw ConfigError("unknown function type '" + type + "'");
}

SpaceTimeFunction space_time_function_from_json(const json& j) {
  BoundaryFunction f = boundary_function_from_json(j);
  const double c = value_or<double>(j, "time_coef", 0.0);
  return [f = std::move(f), c](const Vector& x, double t) { return f(x) + c * t; };
}

CriterionParams criterion_params_from_json(const json& j, CriterionParams d) {
  d.mu = value_or(j, "mu", d.mu);
  d.kmax = value_or(j, "kmax", d.kmax);
  d.samples_per_k = value_or(j, "samples_per_k", d.samples_per_k);
  d.seed = value_or(j, "seed", d.seed);
  if (!(d.mu > 0.0 && d.mu < 1.0)) throw ConfigError("'mu' must lie in (0, 1)");
  if (d.kmax < 1 || d.samples_per_k < 1) throw ConfigError("'kmax' and 'samples_per_k' must be positive");
  return d;
}

SolverConfig solver_config_from_json(const json& j, SolverConfig d) {
  d.dt_base = value_or(j, "dt_base", d.dt_base);
  d.dt_min = value_or(j, "dt_min", d.dt_min);
  d.max_steps = value_or(j, "max_steps", d.max_steps);
  d.paths = value_or(j, "paths", d.paths);
  d.seed = value_or(j, "seed", d.seed);
  d.shrink_factor = value_or(j, "shrink_factor", d.shrink_factor);
  try {
    d.check();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }
  return d;
}

ProbeConfig probe_config_from_json(const json& j, ProbeConfig d) {
  d.rho0 = value_or(j, "rho0", d.rho0);
  d.levels = value_or(j, "levels", d.levels);
  d.regular_threshold = value_or(j, "regular_threshold", d.regular_threshold);
  d.irregular_threshold = value_or(j, "irregular_threshold", d.irregular_threshold);
  d.z = value_or(j, "z", d.z);
  d.eps = value_or(j, "eps", d.eps);
  d.random_directions = value_or(j, "random_directions", d.random_directions);
  d.homogeneous = value_or(j, "homogeneous", d.homogeneous);
  if (!(d.rho0 > 0.0) || d.levels < 1) throw ConfigError("probe: 'rho0' and 'levels' must be positive");
  return d;
}

GridConfig grid_config_from_json(const json& j, GridConfig d) {
  d.per_axis = value_or(j, "per_axis", d.per_axis);
  d.random_samples = value_or(j, "random_samples", d.random_samples);
  d.seed = value_or(j, "seed", d.seed);
  return d;
}

json to_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"valid", r.valid()}, {"checks", checks}};
}

json to_json(const CriterionReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"k", row.k},
                    {"alpha", row.alpha},
                    {"R_k", row.radius},
                    {"d_k", row.dk.value},
                    {"d_k_stderr", row.dk.stderr_},
                    {"d_k_ci", {row.dk.ci_low, row.dk.ci_high}},
                    {"hits", row.dk.hits},
                    {"samples", row.dk.samples},
                    {"enclosing", row.dk.enclosing},
                    {"term", row.term},
                    {"term_stderr", row.term_stderr},
                    {"partial_sum", row.partial_sum}});
  }
  return {{"x0", to_json(r.x0)},
          {"Q", r.Q},
          {"nu", r.nu},
          {"params",
           {{"mu", r.params.mu},
            {"kmax", r.params.kmax},
            {"samples_per_k", r.params.samples_per_k},
            {"seed", r.params.seed}}},
          {"rows", rows},
          {"verdict", to_string(r.verdict)},
          {"rationale", r.rationale}};
}

json to_json(const UpperBoundCheck& r) {
  return {{"constant", r.constant},       {"bound", r.bound},
          {"tail_ratio", r.tail_ratio},   {"bound_holds", r.bound_holds},
          {"tail_decreasing", r.tail_decreasing}, {"first_tail_k", r.first_tail_k}};
}

json to_json(const DirichletEstimate& e) {
  return {{"value", e.value},
          {"stderr", e.stderr_},
          {"paths_used", e.paths_used},
          {"truncated_paths", e.truncated_paths},
          {"mean_exit_time", e.mean_exit_time},
          {"valid", e.valid}};
}

json to_json(const RegularityVerdict& v) {
  json rows = json::array();
  for (const auto& r : v.rows) {
    rows.push_back({{"distance", r.distance}, {"x", to_json(r.x)}, {"t", r.t}, {"estimate", to_json(r.estimate)}});
  }
  json out = {{"x0", to_json(v.x0)},
              {"evolution", v.evolution},
              {"direction", to_json(v.direction)},
              {"verdict", to_string(v.verdict)},
              {"rows", rows}};
  if (v.evolution) out["t0"] = v.t0;
  return out;
}

json to_json(const SuperharmonicityReport& r) {
  return {{"passed", r.passed()},
          {"min_value", r.min_value},
          {"argmin", to_json(r.argmin)},
          {"samples", r.samples},
          {"nonpositive", r.nonpositive},
          {"lambda", r.lambda},
          {"alpha", r.alpha_coef},
          {"beta", r.beta_coef},
          {"grid", {{"per_axis", r.grid.per_axis}, {"random_samples", r.grid.random_samples}, {"seed", r.grid.seed}}}};
}

json to_json(const MonotoneReport& r) {
  json est = json::array();
  for (const auto& e : r.estimates) est.push_back(to_json(e));
  return {{"x", to_json(r.x)}, {"times", r.times}, {"estimates", est}, {"violations", r.violations},
          {"z", r.z},          {"passed", r.passed()}};
}

std::string to_csv(const CriterionReport& r) {
  std::ostringstream os;
  os << "k,alpha,R_k,d_k,d_k_stderr,d_k_ci_low,d_k_ci_high,term,term_stderr,partial_sum\n";
  for (const auto& row : r.rows) {
    os << row.k << ',' << fmt(row.alpha) << ',' << fmt(row.radius) << ',' << fmt(row.dk.value) << ','
       << fmt(row.dk.stderr_) << ',' << fmt(row.dk.ci_low) << ',' << fmt(row.dk.ci_high) << ',' << fmt(row.term)
       << ',' << fmt(row.term_stderr) << ',' << fmt(row.partial_sum) << '\n';
  }
  return os.str();
}

std::string to_csv(const RegularityVerdict& v) {
  std::ostringstream os;
  os << "level,distance,t,estimate,stderr,paths_used,truncated_paths,mean_exit_time\n";
  for (std::size_t i = 0; i < v.rows.size(); ++i) {
    const auto& r = v.rows[i];
    os << i + 1 << ',' << fmt(r.distance) << ',' << fmt(r.t) << ',' << fmt(r.estimate.value) << ','
       << fmt(r.estimate.stderr_) << ',' << r.estimate.paths_used << ',' << r.estimate.truncated_paths << ','
       << fmt(r.estimate.mean_exit_time) << '\n';
  }
  return os.str();
}

}  // namespace kolmo
