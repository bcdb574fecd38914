#include "kolmo/wiener.hpp"

#include "kolmo/parallel.hpp"
#include "kolmo/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kolmo {

namespace {

constexpr std::int64_t kBatch = 4096;
constexpr double kZ95 = 1.959963984540054;
constexpr double kSlopeTol = 0.05;

}  // namespace

const char* to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::DivergesLikely: return "diverges-likely";
    case SeriesVerdict::ConvergesLikely: return "converges-likely";
    case SeriesVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double alpha(int k) {
  if (k < 1) throw DomainError("alpha(k) requires k >= 1");
  return k * std::log(static_cast<double>(k));
}

double radius_k(const GammaContext& ctx, double mu, int k) {
  return std::pow(ctx.normalization() * std::pow(mu, alpha(k)), 2.0 / ctx.Q());
}

double superlevel_radius_sq(int Q, double radius, double tau) {
  if (!(tau > 0.0)) throw DomainError("tau must be positive");
  return 2.0 * Q * std::log(radius / tau);
}

double full_space_measure(const GammaContext& ctx, double mu, int k) {
  const double n = ctx.dim();
  const double q = ctx.Q();
  const double unit_ball = std::pow(std::numbers::pi, n / 2) / std::tgamma(n / 2 + 1);
  const double kappa = unit_ball * std::sqrt(ctx.covariance_det());
  const double profile = std::pow(2.0 * q, n / 2) * std::tgamma(n / 2 + 1) / std::pow((q + 2) / 2, n / 2 + 1);
  return kappa * profile * std::pow(radius_k(ctx, mu, k), (q + 2) / 2);
}

double upper_bound_constant(const GammaContext& ctx, double mu) { return full_space_measure(ctx, mu, 1); }

DkEstimate dk_estimate(const GammaContext& ctx, const Domain& omega, const Vector& x0,
                       const CriterionParams& params, int k) {
  if (params.samples_per_k < 1) throw DomainError("d_k estimate needs at least one sample");
  if (x0.size() != ctx.dim() || omega.dim() != ctx.dim()) throw DomainError("x0/domain dimension mismatch");
  if (!(params.mu > 0.0 && params.mu < 1.0)) throw DomainError("mu must lie in (0, 1)");

  const int n = ctx.dim();
  const int q = ctx.Q();
  const double radius = radius_k(ctx, params.mu, k);
  const Matrix chol = Eigen::LLT<Matrix>(ctx.op().covariance_C(1.0)).matrixL();
  const OUOperator& op = ctx.op();

  const std::int64_t total = params.samples_per_k;
  const std::int64_t batches = (total + kBatch - 1) / kBatch;
  std::vector<std::int64_t> hits(static_cast<std::size_t>(batches), 0);

  // s = exp(-w) with w ~ Gamma(N/2 + 1, rate (Q+2)/2) has density proportional
  // to the slice volume s^{Q/2} (2Q log 1/s)^{N/2}, so (s, eta) below is
  // uniform over the substituted region.
  parallel_for(
      static_cast<std::size_t>(batches), params.workers,
      [&](std::size_t begin, std::size_t end) {
        Vector g(n), eta(n), y(n);
        for (std::size_t b = begin; b < end; ++b) {
          Rng rng = make_stream(params.seed, static_cast<std::uint64_t>(k), b);
          std::gamma_distribution<double> wdist(0.5 * n + 1.0, 2.0 / (q + 2.0));
          std::normal_distribution<double> normal;
          std::uniform_real_distribution<double> unif;
          const std::int64_t first = static_cast<std::int64_t>(b) * kBatch;
          const std::int64_t count = std::min(kBatch, total - first);
          std::int64_t local = 0;
          for (std::int64_t i = 0; i < count; ++i) {
            const double w = wdist(rng);
            for (int j = 0; j < n; ++j) g[j] = normal(rng);
            const double rho = std::sqrt(2.0 * q * w) * std::pow(unif(rng), 1.0 / n) / g.norm();
            eta.noalias() = chol * (rho * g);
            const double tau = radius * std::exp(-w);
            y = op.dilate_space(std::sqrt(tau), eta);
            const Vector x = op.exp_minus_sB(-tau) * (x0 - y);
            if (!omega.contains(x)) ++local;
          }
          hits[b] = local;
        }
      },
      1);

  DkEstimate est;
  est.samples = total;
  for (auto h : hits) est.hits += h;
  est.enclosing = full_space_measure(ctx, params.mu, k);
  const double p = static_cast<double>(est.hits) / static_cast<double>(total);
  est.value = p * est.enclosing;
  est.stderr_ = est.enclosing * std::sqrt(p * (1.0 - p) / static_cast<double>(total));
  est.ci_low = std::max(0.0, est.value - kZ95 * est.stderr_);
  est.ci_high = est.value + kZ95 * est.stderr_;
  return est;
}

SeriesVerdict series_verdict(const std::vector<CriterionRow>& rows, std::string* rationale) {
  auto say = [&](SeriesVerdict v, const std::string& why) {
    if (rationale) *rationale = why;
    return v;
  };
  if (rows.size() < 2) return say(SeriesVerdict::Inconclusive, "fewer than two terms");
  const std::size_t start = rows.size() / 2;
  const std::size_t count = rows.size() - start;
  if (count < 2) return say(SeriesVerdict::Inconclusive, "tail too short");

  bool all_zero = true, all_positive = true;
  double mean = 0.0, var = 0.0;
  for (std::size_t i = start; i < rows.size(); ++i) {
    const double t = rows[i].term;
    all_zero = all_zero && t == 0.0;
    all_positive = all_positive && t > 0.0;
    mean += t;
    var += rows[i].term_stderr * rows[i].term_stderr;
  }
  mean /= static_cast<double>(count);
  const double se = std::sqrt(var) / static_cast<double>(count);
  if (all_zero) return say(SeriesVerdict::ConvergesLikely, "all tail terms vanish");

  if (all_positive) {
    double sk = 0.0, sl = 0.0, skk = 0.0, skl = 0.0;
    for (std::size_t i = start; i < rows.size(); ++i) {
      const double k = rows[i].k, l = std::log(rows[i].term);
      sk += k, sl += l, skk += k * k, skl += k * l;
    }
    const double c = static_cast<double>(count);
    const double slope = (c * skl - sk * sl) / (c * skk - sk * sk);
    if (slope >= -kSlopeTol && mean > 10.0 * se) {
      return say(SeriesVerdict::DivergesLikely,
                 "tail terms bounded below (log-slope " + std::to_string(slope) + ")");
    }
  }

  bool super_geometric = true;
  for (std::size_t i = start; i + 1 < rows.size(); ++i) {
    const double a = rows[i].term, b = rows[i + 1].term;
    if (b == 0.0) continue;
    if (a == 0.0 || b / a >= 0.5) {
      super_geometric = false;
      break;
    }
  }
  if (super_geometric) return say(SeriesVerdict::ConvergesLikely, "tail ratios persistently below 0.5");
  return say(SeriesVerdict::Inconclusive, "tail neither bounded below nor decaying fast");
}

CriterionReport evaluate_criterion(const GammaContext& ctx, const Domain& omega, const Vector& x0,
                                   const CriterionParams& params) {
  if (params.kmax < 1) throw DomainError("kmax must be positive");
  CriterionReport rep;
  rep.params = params;
  rep.Q = ctx.Q();
  rep.nu = std::pow(params.mu, (rep.Q + 2.0) / rep.Q);
  rep.x0 = x0;
  // d_k / nu^alpha(k) = (hit fraction) * C_Q^*, which avoids under/overflow.
  const double cstar = upper_bound_constant(ctx, params.mu);
  double sum = 0.0;
  for (int k = 1; k <= params.kmax; ++k) {
    CriterionRow row;
    row.k = k;
    row.alpha = alpha(k);
    row.radius = radius_k(ctx, params.mu, k);
    row.dk = dk_estimate(ctx, omega, x0, params, k);
    const double p = static_cast<double>(row.dk.hits) / static_cast<double>(row.dk.samples);
    row.term = p * cstar;
    row.term_stderr = cstar * std::sqrt(p * (1.0 - p) / static_cast<double>(row.dk.samples));
    sum += row.term;
    row.partial_sum = sum;
    rep.rows.push_back(row);
  }
  rep.verdict = series_verdict(rep.rows, &rep.rationale);
  return rep;
}

UpperBoundCheck dk_upper_bound_check(const GammaContext& ctx, const CriterionReport& report) {
  UpperBoundCheck chk;
  chk.constant = upper_bound_constant(ctx, report.params.mu);
  const auto& rows = report.rows;
  for (const auto& row : rows) {
    const double bound = chk.constant * std::pow(report.nu, row.alpha);
    chk.bound.push_back(bound);
    if (row.dk.value > bound * (1.0 + 1e-12) + 3.0 * row.dk.stderr_) chk.bound_holds = false;
  }
  std::vector<double> ratio_se;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    // d_{k+1} / nu^alpha(k) = term_{k+1} * nu^{alpha(k+1) - alpha(k)}
    const double f = std::pow(report.nu, rows[i + 1].alpha - rows[i].alpha);
    chk.tail_ratio.push_back(rows[i + 1].term * f);
    ratio_se.push_back(rows[i + 1].term_stderr * f);
  }
  for (std::size_t i = static_cast<std::size_t>(chk.first_tail_k - 1); i + 1 < chk.tail_ratio.size(); ++i) {
    const double slack = 3.0 * std::hypot(ratio_se[i], ratio_se[i + 1]);
    if (chk.tail_ratio[i + 1] > chk.tail_ratio[i] * (1.0 + 1e-12) + slack) chk.tail_decreasing = false;
  }
  return chk;
}

UpperBoundCheck dk_upper_bound_check(const GammaContext& ctx, const Domain& omega, const Vector& x0,
                                     const CriterionParams& params) {
  return dk_upper_bound_check(ctx, evaluate_criterion(ctx, omega, x0, params));
}

}  // namespace kolmo
