#pragma once

// Constant-coefficient Ornstein-Uhlenbeck operators
//
//     L0 = div(A grad) + <Bx, grad>,      L = L0 - d/dt,
//
// with A = diag(A0, 0) and B block-subdiagonal and nilpotent, together with
// the calculus of the homogeneous group K = (R^{N+1}, o, delta_lambda) on
// which L is left invariant and 2-homogeneous.

#include "kolmo/types.hpp"

#include <string>
#include <vector>

namespace kolmo {

// Block sizes (p0, ..., pr) of R^N.
struct BlockSignature {
  std::vector<int> sizes;

  int dimension() const;                 // N = sum p_i
  int depth() const;                     // r
  int offset(int block) const;           // first coordinate of a block
  int block_of(int coordinate) const;
};

struct GroupPoint {
  Vector x;
  double t = 0.0;
};

struct HomogeneousDimensions {
  int Q = 0;  // homogeneous dimension of R^N under D_lambda
  int q = 0;  // Q + 2, homogeneous dimension of the space-time group
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool valid() const;
};

class OUOperator {
 public:
  // b_blocks[j-1] is B_j with shape p_{j-1} x p_j. The assembled N x N drift
  // matrix carries B_j^T on block (j, j-1), below the diagonal.
  //
  // Throws StructuralError when shapes disagree with the signature. Rank,
  // ordering and positivity are checked by validate(), not here.
  OUOperator(BlockSignature signature, Matrix a0, std::vector<Matrix> b_blocks);

  static OUOperator kolmogorov();
  static OUOperator heat(int n);

  const BlockSignature& signature() const { return sig_; }
  int dim() const { return n_; }
  int depth() const { return sig_.depth(); }
  const Matrix& a0() const { return a0_; }
  const std::vector<Matrix>& b_blocks() const { return b_blocks_; }
  const Matrix& diffusion() const { return a_; }
  const Matrix& drift() const { return b_; }

  // E(s) = exp(-sB), summed exactly as the terminating series of degree r.
  Matrix exp_minus_sB(double s) const;

  // Int_0^t exp(sign*sB) A exp(sign*sB)^T ds by termwise polynomial
  // integration. sign = -1 gives C(t); sign = +1 gives the covariance
  // generator of the forward diffusion.
  Matrix gramian(double t, int sign) const;

  // C(t); throws DomainError for t <= 0.
  Matrix covariance_C(double t) const;

  // Exponent 2i+1 of every coordinate under D_lambda.
  const Eigen::VectorXi& dilation_exponents() const { return exponents_; }
  Vector dilation_weights(double lambda) const;

  Vector dilate_space(double lambda, const Vector& x) const;
  GroupPoint dilate(double lambda, const GroupPoint& z) const;
  GroupPoint compose(const GroupPoint& z, const GroupPoint& zp) const;
  GroupPoint invert(const GroupPoint& z) const;
  HomogeneousDimensions homogeneous_dimension() const;

 private:
  BlockSignature sig_;
  int n_ = 0;
  Matrix a0_;
  std::vector<Matrix> b_blocks_;
  Matrix a_;
  Matrix b_;
  Eigen::VectorXi exponents_;
  // (-B)^m / m!, m = 0..r
  std::vector<Matrix> powers_;
};

// Log-spaced grid t in [1e-6, 1e3] used to check positivity of C(t).
std::vector<double> covariance_validation_grid();

ValidationReport validate(const OUOperator& op);

}  // namespace kolmo
