#include "hpath/rng.hpp"

#include <array>

namespace hpath {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  std::array<std::uint32_t, 4> words{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

ComplexGaussianRng::ComplexGaussianRng(std::uint64_t seed, std::uint64_t stream)
    : engine_(seeded_engine(seed, stream)) {}

Complex ComplexGaussianRng::next() {
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {re, im};
}

CVector ComplexGaussianRng::vector(Index n) {
  CVector v(n);
  for (Index k = 0; k < n; ++k) v(k) = next();
  return v;
}

CMatrix ComplexGaussianRng::matrix(Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = next();
  return m;
}

double ComplexGaussianRng::uniform() { return uniform_(engine_); }

}  // namespace hpath
