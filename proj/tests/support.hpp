#pragma once

#include "kolmo/operator.hpp"
#include "kolmo/random.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace kolmo::testing {

inline Vector random_vector(Rng& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline Matrix random_spd(Rng& rng, int n) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return m * m.transpose() / n + 0.5 * Matrix::Identity(n, n);
}

// Random operator with the given block sizes; blocks are full rank with
// probability one.
inline OUOperator random_operator(Rng& rng, std::vector<int> sizes) {
  std::normal_distribution<double> g;
  std::vector<Matrix> blocks;
  for (std::size_t j = 1; j < sizes.size(); ++j) {
    Matrix b(sizes[j - 1], sizes[j]);
    for (int r = 0; r < b.rows(); ++r)
      for (int c = 0; c < b.cols(); ++c) b(r, c) = g(rng);
    blocks.push_back(b);
  }
  return OUOperator(BlockSignature{sizes}, random_spd(rng, sizes.front()), blocks);
}

inline OUOperator p21() {
  Matrix a0(2, 2);
  a0 << 1.0, 0.2, 0.2, 0.5;
  Matrix b1(2, 1);
  b1 << 1.0, 0.5;
  return OUOperator(BlockSignature{{2, 1}}, a0, {b1});
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline double rel_err(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace kolmo::testing
