#include "kolmo/dirichlet.hpp"

#include "kolmo/parallel.hpp"
#include "kolmo/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kolmo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PathOutcome {
  Vector exit;
  double elapsed = 0.0;
  bool bottom = false;
  bool truncated = false;
};

// Simulates one path of the L0-diffusion until it leaves omega or, with a
// finite horizon, until the horizon is used up.
class ExitWalker {
 public:
  ExitWalker(const GammaContext& ctx, const Domain& omega, const SolverConfig& cfg)
      : ctx_(ctx), omega_(omega), cfg_(cfg) {
    cfg.check();
    double dt = cfg.dt_base;
    for (;;) {
      levels_.push_back(ctx.transition_kernel(dt));
      if (dt <= cfg.dt_min) break;
      dt = std::max(dt * cfg.shrink_factor, cfg.dt_min);
    }
  }

  PathOutcome run(Vector x, double horizon, Rng& rng) const {
    PathOutcome out;
    const int n = static_cast<int>(x.size());
    std::normal_distribution<double> normal;
    Vector g(n), y(n);
    std::size_t level = 0;
    double left = horizon;
    for (std::int64_t step = 0; step < cfg_.max_steps; ++step) {
      while (level + 1 < levels_.size() && near(x, level)) ++level;
      if (level > 0 && !near(x, level - 1)) --level;

      const TransitionKernel* kernel = &levels_[level];
      TransitionKernel last;
      if (kernel->dt >= left) {
        last = ctx_.transition_kernel(left);
        kernel = &last;
      }
      for (int i = 0; i < n; ++i) g[i] = normal(rng);
      y.noalias() = kernel->mean_map * x;
      y.noalias() += kernel->factor * g;

      if (!omega_.contains(y)) {
        const double s = locate_crossing(omega_, x, y);
        out.exit = x + s * (y - x);
        out.elapsed += s * kernel->dt;
        return out;
      }
      x.swap(y);
      out.elapsed += kernel->dt;
      left -= kernel->dt;
      if (left <= 0.0) {
        out.exit = x;
        out.elapsed = horizon;
        out.bottom = true;
        return out;
      }
    }
    out.exit = x;
    out.truncated = true;
    return out;
  }

 private:
  // Boundary within two typical displacements of x along some axis.
  bool near(const Vector& x, std::size_t level) const {
    const TransitionKernel& k = levels_[level];
    const Vector drift = k.mean_map * x - x;
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double reach = 2.0 * (k.spread[i] + std::abs(drift[i]));
      if (reach == 0.0) continue;
      probe[i] = x[i] + reach;
      if (!omega_.contains(probe)) return true;
      probe[i] = x[i] - reach;
      if (!omega_.contains(probe)) return true;
      probe[i] = x[i];
    }
    return false;
  }

  const GammaContext& ctx_;
  const Domain& omega_;
  const SolverConfig& cfg_;
  std::vector<TransitionKernel> levels_;
};

// Runs cfg.paths independent paths and averages score(outcome) over the
// paths that terminated. Welford updates keep constant data exact.
template <typename Score>
DirichletEstimate estimate_paths(const ExitWalker& walker, const Vector& x, double horizon,
                                 const SolverConfig& cfg, Score score) {
  const auto paths = static_cast<std::size_t>(cfg.paths);
  std::vector<double> values(paths, 0.0), times(paths, 0.0);
  std::vector<char> truncated(paths, 0);
  parallel_for(paths, cfg.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      Rng rng = make_stream(cfg.seed, p);
      const PathOutcome o = walker.run(x, horizon, rng);
      truncated[p] = o.truncated;
      times[p] = o.elapsed;
      if (!o.truncated) values[p] = score(o);
    }
  });

  DirichletEstimate est;
  double mean = 0.0, m2 = 0.0, tmean = 0.0;
  std::int64_t used = 0;
  for (std::size_t p = 0; p < paths; ++p) {
    if (truncated[p]) {
      ++est.truncated_paths;
      continue;
    }
    ++used;
    const double delta = values[p] - mean;
    mean += delta / static_cast<double>(used);
    m2 += delta * (values[p] - mean);
    tmean += (times[p] - tmean) / static_cast<double>(used);
  }
  if (used == 0) {
    throw NumericalError("all " + std::to_string(paths) + " paths reached max_steps = " +
                         std::to_string(cfg.max_steps));
  }
  est.paths_used = used;
  est.value = mean;
  est.stderr_ = used > 1 ? std::sqrt(m2 / static_cast<double>(used - 1) / static_cast<double>(used)) : 0.0;
  est.mean_exit_time = tmean;
  est.valid = static_cast<double>(est.truncated_paths) <= 1e-3 * static_cast<double>(cfg.paths);
  return est;
}

// Sum over blocks of |u_b|^(1/(2b+1)); Euclidean when all exponents are 1.
double quasi_norm(const Vector& u, const Eigen::VectorXi& exps) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < u.size();) {
    Eigen::Index j = i;
    double sq = 0.0;
    while (j < u.size() && exps[j] == exps[i]) sq += u[j] * u[j], ++j;
    acc += std::pow(std::sqrt(sq), 1.0 / exps[i]);
    i = j;
  }
  return acc;
}

Eigen::VectorXi probe_exponents(const OUOperator& op, const ProbeConfig& probe) {
  return probe.homogeneous ? op.dilation_exponents() : Eigen::VectorXi::Ones(op.dim());
}

Vector approach_point(const Vector& x0, const Vector& v, double r, const Eigen::VectorXi& exps) {
  Vector x = x0;
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += std::pow(r, exps[i]) * v[i];
  return x;
}

}  // namespace

void SolverConfig::check() const {
  if (!(dt_base > 0.0) || !(dt_min > 0.0)) throw DomainError("time steps must be positive");
  if (dt_min > dt_base) throw DomainError("dt_min must not exceed dt_base");
  if (paths < 1) throw DomainError("at least one path is required");
  if (max_steps < 1) throw DomainError("max_steps must be positive");
  if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) throw DomainError("shrink_factor must lie in (0, 1)");
}

const char* to_string(RegularityClass v) {
  switch (v) {
    case RegularityClass::RegularLikely: return "regular-likely";
    case RegularityClass::IrregularLikely: return "irregular-likely";
    case RegularityClass::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

DirichletEstimate solve_stationary(const GammaContext& ctx, const Domain& omega, const BoundaryFunction& phi,
                                   const Vector& x, const SolverConfig& cfg) {
  if (x.size() != ctx.dim() || omega.dim() != ctx.dim()) throw DomainError("dimension mismatch");
  if (!omega.contains(x)) throw DomainError("starting point is not inside the domain");
  const ExitWalker walker(ctx, omega, cfg);
  return estimate_paths(walker, x, kInf, cfg, [&](const PathOutcome& o) { return phi(o.exit); });
}

DirichletEstimate solve_evolution(const GammaContext& ctx, const Cylinder& c, const SpaceTimeFunction& psi,
                                  const GroupPoint& z, const SolverConfig& cfg) {
  if (z.x.size() != ctx.dim() || c.base.dim() != ctx.dim()) throw DomainError("dimension mismatch");
  if (!c.base.contains(z.x) || !(z.t > c.t0) || z.t > c.t1) {
    throw DomainError("starting point is not inside the cylinder");
  }
  const ExitWalker walker(ctx, c.base, cfg);
  const double horizon = z.t - c.t0;
  return estimate_paths(walker, z.x, horizon, cfg, [&](const PathOutcome& o) {
    return psi(o.exit, o.bottom ? c.t0 : z.t - o.elapsed);
  });
}

Vector interior_direction(const Domain& omega, const Vector& x0, const ProbeConfig& probe, std::uint64_t seed,
                          const Eigen::VectorXi& exponents) {
  const int n = static_cast<int>(x0.size());
  const Eigen::VectorXi exps = exponents.size() == n ? exponents : Eigen::VectorXi::Ones(n);
  std::vector<Vector> candidates;
  for (int i = 0; i < n; ++i) {
    for (double s : {1.0, -1.0}) {
      Vector v = Vector::Zero(n);
      v[i] = s;
      candidates.push_back(v);
    }
  }
  Rng rng = make_stream(seed, 0x6469726563ULL);
  std::normal_distribution<double> normal;
  for (int c = 0; c < probe.random_directions; ++c) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    candidates.push_back(v.normalized());
  }

  Vector best;
  double best_chord = -1.0;
  for (const auto& v : candidates) {
    bool ok = true;
    for (int j = 1; j <= probe.levels && ok; ++j) {
      ok = omega.contains(approach_point(x0, v, probe.rho0 * std::ldexp(1.0, -j), exps));
    }
    if (!ok) continue;
    constexpr int kSteps = 64;
    double chord = 0.0;
    for (int s = 1; s <= kSteps; ++s) {
      const double len = 4.0 * probe.rho0 * s / kSteps;
      if (!omega.contains(x0 + len * v)) break;
      chord = len;
    }
    if (chord > best_chord) best_chord = chord, best = v;
  }
  if (best_chord < 0.0) throw DomainError("no interior approach direction found");
  return best;
}

RegularityClass classify_probe(const std::vector<ProbeRow>& rows, const ProbeConfig& probe) {
  if (rows.empty()) return RegularityClass::Inconclusive;
  const auto& last = rows.back().estimate;
  if (last.value + probe.z * last.stderr_ < probe.regular_threshold) return RegularityClass::RegularLikely;
  if (last.value - probe.z * last.stderr_ > probe.irregular_threshold) return RegularityClass::IrregularLikely;
  return RegularityClass::Inconclusive;
}

RegularityVerdict regularity_probe_stationary(const GammaContext& ctx, const Domain& omega, const Vector& x0,
                                              const SolverConfig& cfg, const ProbeConfig& probe) {
  const double eps = probe.eps > 0.0 ? probe.eps : omega.default_epsilon();
  if (!near_boundary(omega, x0, eps)) throw DomainError("probe point is not on the boundary");
  RegularityVerdict out;
  out.x0 = x0;
  const Eigen::VectorXi exps = probe_exponents(ctx.op(), probe);
  out.direction = interior_direction(omega, x0, probe, cfg.seed, exps);
  const BoundaryFunction phi = [&](const Vector& x) { return std::min(1.0, quasi_norm(x - x0, exps) / probe.rho0); };
  for (int j = 1; j <= probe.levels; ++j) {
    ProbeRow row;
    row.distance = probe.rho0 * std::ldexp(1.0, -j);
    row.x = approach_point(x0, out.direction, row.distance, exps);
    SolverConfig level_cfg = cfg;
    level_cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(j));
    row.estimate = solve_stationary(ctx, omega, phi, row.x, level_cfg);
    out.rows.push_back(std::move(row));
  }
  out.verdict = classify_probe(out.rows, probe);
  return out;
}

RegularityVerdict regularity_probe_evolution(const GammaContext& ctx, const Cylinder& c, const GroupPoint& z0,
                                             const SolverConfig& cfg, const ProbeConfig& probe) {
  const double eps = probe.eps > 0.0 ? probe.eps : c.base.default_epsilon();
  if (!(z0.t > c.t0 && z0.t < c.t1)) throw DomainError("probe time must lie strictly inside (t0, t1)");
  if (classify_boundary(c, z0, eps).classification != BoundaryClass::Lateral) {
    throw DomainError("probe point is not on the lateral boundary");
  }
  RegularityVerdict out;
  out.x0 = z0.x;
  out.t0 = z0.t;
  out.evolution = true;
  const Eigen::VectorXi exps = probe_exponents(ctx.op(), probe);
  out.direction = interior_direction(c.base, z0.x, probe, cfg.seed, exps);
  const SpaceTimeFunction psi = [&](const Vector& x, double t) {
    return std::min(1.0, (quasi_norm(x - z0.x, exps) + std::sqrt(std::abs(t - z0.t))) / probe.rho0);
  };
  for (int j = 1; j <= probe.levels; ++j) {
    ProbeRow row;
    row.distance = probe.rho0 * std::ldexp(1.0, -j);
    row.x = approach_point(z0.x, out.direction, row.distance, exps);
    row.t = z0.t;
    SolverConfig level_cfg = cfg;
    level_cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(j));
    row.estimate = solve_evolution(ctx, c, psi, {row.x, row.t}, level_cfg);
    out.rows.push_back(std::move(row));
  }
  out.verdict = classify_probe(out.rows, probe);
  return out;
}

MonotoneReport monotone_solution_test(const GammaContext& ctx, const Cylinder& c, const SolverConfig& cfg,
                                      const SpaceTimeFunction& data, const Vector& x, int grid_points, double z) {
  if (grid_points < 2) throw DomainError("monotonicity test needs at least two times");
  MonotoneReport rep;
  rep.z = z;
  if (x.size() > 0) {
    rep.x = x;
  } else {
    if (!c.base.bounded()) throw DomainError("default point needs a bounded base");
    rep.x = 0.5 * (c.base.lower() + c.base.upper());
  }
  const SpaceTimeFunction psi = data ? data : SpaceTimeFunction([t0 = c.t0](const Vector&, double t) {
    return std::exp(-(t - t0));
  });
  for (int i = 1; i <= grid_points; ++i) {
    const double t = c.t0 + c.duration() * (i - 0.5) / grid_points;
    rep.times.push_back(t);
    rep.estimates.push_back(solve_evolution(ctx, c, psi, {rep.x, t}, cfg));
  }
  for (std::size_t i = 0; i + 1 < rep.estimates.size(); ++i) {
    const auto& a = rep.estimates[i];
    const auto& b = rep.estimates[i + 1];
    if (b.value - a.value > z * std::hypot(a.stderr_, b.stderr_)) rep.violations.push_back(static_cast<int>(i));
  }
  return rep;
}

}  // namespace kolmo
