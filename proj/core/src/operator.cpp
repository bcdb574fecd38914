#include "kolmo/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace kolmo {

namespace {

constexpr double kIdentityTol = 1e-12;
constexpr double kEigenTol = 1e-10;

double rel_diff(const Matrix& a, const Matrix& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-300});
  return (a - b).norm() / scale;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

int BlockSignature::dimension() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

int BlockSignature::depth() const { return static_cast<int>(sizes.size()) - 1; }

int BlockSignature::offset(int block) const {
  return std::accumulate(sizes.begin(), sizes.begin() + block, 0);
}

int BlockSignature::block_of(int coordinate) const {
  int acc = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    acc += sizes[i];
    if (coordinate < acc) return static_cast<int>(i);
  }
  throw StructuralError("coordinate outside the block signature");
}

bool ValidationReport::valid() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

OUOperator::OUOperator(BlockSignature signature, Matrix a0, std::vector<Matrix> b_blocks)
    : sig_(std::move(signature)), a0_(std::move(a0)), b_blocks_(std::move(b_blocks)) {
  if (sig_.sizes.empty()) throw StructuralError("block signature is empty");
  for (int p : sig_.sizes) {
    if (p <= 0) throw StructuralError("block sizes must be positive");
  }
  n_ = sig_.dimension();
  const int r = sig_.depth();
  const int p0 = sig_.sizes[0];
  if (a0_.rows() != p0 || a0_.cols() != p0) {
    throw StructuralError("A0 must be p0 x p0 (" + std::to_string(p0) + ")");
  }
  if (static_cast<int>(b_blocks_.size()) != r) {
    throw StructuralError("expected " + std::to_string(r) + " drift blocks, got " +
                          std::to_string(b_blocks_.size()));
  }

  a_ = Matrix::Zero(n_, n_);
  a_.topLeftCorner(p0, p0) = a0_;

  b_ = Matrix::Zero(n_, n_);
  for (int j = 1; j <= r; ++j) {
    const Matrix& bj = b_blocks_[static_cast<std::size_t>(j - 1)];
    const int rows = sig_.sizes[static_cast<std::size_t>(j - 1)];
    const int cols = sig_.sizes[static_cast<std::size_t>(j)];
    if (bj.rows() != rows || bj.cols() != cols) {
      throw StructuralError("B_" + std::to_string(j) + " must be " + std::to_string(rows) + " x " +
                            std::to_string(cols));
    }
    b_.block(sig_.offset(j), sig_.offset(j - 1), cols, rows) = bj.transpose();
  }

  exponents_.resize(n_);
  for (int i = 0; i < n_; ++i) exponents_[i] = 2 * sig_.block_of(i) + 1;

  powers_.reserve(static_cast<std::size_t>(r) + 1);
  Matrix term = Matrix::Identity(n_, n_);
  for (int m = 0; m <= r; ++m) {
    powers_.push_back(term);
    term = (-b_ * term) / static_cast<double>(m + 1);
  }
}

OUOperator OUOperator::kolmogorov() {
  return OUOperator(BlockSignature{{1, 1}}, Matrix::Identity(1, 1), {Matrix::Ones(1, 1)});
}

OUOperator OUOperator::heat(int n) {
  return OUOperator(BlockSignature{{n}}, Matrix::Identity(n, n), {});
}

Matrix OUOperator::exp_minus_sB(double s) const {
  // Horner in s over the stored (-B)^m / m!
  Matrix e = powers_.back();
  for (int m = static_cast<int>(powers_.size()) - 2; m >= 0; --m) {
    e = powers_[static_cast<std::size_t>(m)] + s * e;
  }
  return e;
}

Matrix OUOperator::gramian(double t, int sign) const {
  Matrix g = Matrix::Zero(n_, n_);
  const int r = depth();
  for (int m = 0; m <= r; ++m) {
    const Matrix left = powers_[static_cast<std::size_t>(m)] * a_;
    for (int k = 0; k <= r; ++k) {
      const int deg = m + k;
      double coef = std::pow(t, deg + 1) / (deg + 1);
      if (sign > 0 && (deg % 2 == 1)) coef = -coef;
      g.noalias() += coef * left * powers_[static_cast<std::size_t>(k)].transpose();
    }
  }
  return 0.5 * (g + g.transpose());
}

Matrix OUOperator::covariance_C(double t) const {
  if (!(t > 0.0)) throw DomainError("C(t) requires t > 0");
  return gramian(t, -1);
}

Vector OUOperator::dilation_weights(double lambda) const {
  Vector w(n_);
  for (int i = 0; i < n_; ++i) w[i] = std::pow(lambda, exponents_[i]);
  return w;
}

Vector OUOperator::dilate_space(double lambda, const Vector& x) const {
  return dilation_weights(lambda).cwiseProduct(x);
}

GroupPoint OUOperator::dilate(double lambda, const GroupPoint& z) const {
  return {dilate_space(lambda, z.x), lambda * lambda * z.t};
}

GroupPoint OUOperator::compose(const GroupPoint& z, const GroupPoint& zp) const {
  return {zp.x + exp_minus_sB(zp.t) * z.x, z.t + zp.t};
}

GroupPoint OUOperator::invert(const GroupPoint& z) const {
  return {-(exp_minus_sB(-z.t) * z.x), -z.t};
}

HomogeneousDimensions OUOperator::homogeneous_dimension() const {
  int q = 0;
  for (std::size_t i = 0; i < sig_.sizes.size(); ++i) q += static_cast<int>(2 * i + 1) * sig_.sizes[i];
  return {q, q + 2};
}

std::vector<double> covariance_validation_grid() {
  std::vector<double> grid(25);
  for (int i = 0; i < 25; ++i) grid[static_cast<std::size_t>(i)] = std::pow(10.0, -6.0 + 9.0 * i / 24.0);
  return grid;
}

ValidationReport validate(const OUOperator& op) {
  ValidationReport rep;
  const auto& sizes = op.signature().sizes;

  {
    bool ok = sizes.back() >= 1;
    for (std::size_t i = 1; i < sizes.size(); ++i) ok = ok && sizes[i - 1] >= sizes[i];
    rep.checks.push_back({"block_order", ok, ok ? "p0 >= p1 >= ... >= pr >= 1" : "block sizes not nonincreasing"});
  }
  rep.checks.push_back({"block_sum", op.signature().dimension() == op.dim(), "N = " + std::to_string(op.dim())});

  const Matrix& a0 = op.a0();
  {
    const double asym = rel_diff(a0, a0.transpose());
    rep.checks.push_back({"a0_symmetric", asym <= kIdentityTol, "relative asymmetry " + fmt_double(asym)});
  }
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a0 + a0.transpose()));
    const double lo = es.eigenvalues().minCoeff();
    const double tr = std::abs(a0.trace());
    const bool ok = lo > kEigenTol * std::max(tr, 1e-300) && lo > 0.0;
    rep.checks.push_back({"a0_positive_definite", ok, "min eigenvalue " + fmt_double(lo)});
  }
  for (std::size_t j = 0; j < op.b_blocks().size(); ++j) {
    const Matrix& bj = op.b_blocks()[j];
    Eigen::ColPivHouseholderQR<Matrix> qr(bj);
    qr.setThreshold(1e-12);
    const bool ok = qr.rank() == bj.cols();
    rep.checks.push_back({"b" + std::to_string(j + 1) + "_full_column_rank", ok,
                          "rank " + std::to_string(qr.rank()) + " of " + std::to_string(bj.cols())});
  }
  {
    Matrix p = Matrix::Identity(op.dim(), op.dim());
    for (int m = 0; m <= op.depth(); ++m) p = p * op.drift();
    const bool ok = (p.array() == 0.0).all();
    rep.checks.push_back({"drift_nilpotent", ok, "B^(r+1) max entry " + fmt_double(p.cwiseAbs().maxCoeff())});
  }

  // Positivity of C(t) is tested on the dilation-normalized matrix
  // D_{1/sqrt t} C(t) D_{1/sqrt t}, which is congruent to C(t) and O(1) in size.
  const Matrix c1 = op.gramian(1.0, -1);
  double worst_eig = INFINITY;
  double worst_scaling = 0.0;
  double worst_t = 0.0;
  for (double t : covariance_validation_grid()) {
    const Vector w = op.dilation_weights(1.0 / std::sqrt(t));
    const Matrix normalized = w.asDiagonal() * op.covariance_C(t) * w.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es(normalized);
    const double ratio = es.eigenvalues().minCoeff() / std::max(normalized.trace(), 1e-300);
    if (ratio < worst_eig) {
      worst_eig = ratio;
      worst_t = t;
    }
    worst_scaling = std::max(worst_scaling, rel_diff(normalized, c1));
  }
  rep.checks.push_back({"covariance_positive_definite", worst_eig > kEigenTol,
                        "min eigenvalue/trace " + fmt_double(worst_eig) + " at t=" + fmt_double(worst_t)});
  rep.checks.push_back({"covariance_dilation_identity", worst_scaling <= 1e-10,
                        "max relative deviation " + fmt_double(worst_scaling)});
  return rep;
}

}  // namespace kolmo
