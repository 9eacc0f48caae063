#pragma once

#include <cstdint>
#include <random>

#include "hpath/types.hpp"

namespace hpath {

/// Seeded source of standard complex Gaussians, density exp(-|z|^2)/pi.
class ComplexGaussianRng {
 public:
  explicit ComplexGaussianRng(std::uint64_t seed, std::uint64_t stream = 0);

  Complex next();
  CVector vector(Index n);
  CMatrix matrix(Index rows, Index cols);
  double uniform();

 private:
  std::mt19937_64 engine_;
  // Each real part has variance 1/2.
  std::normal_distribution<double> normal_{0.0, 0.7071067811865476};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace hpath
