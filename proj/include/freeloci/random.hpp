#pragma once

// Seeded sampling used by every randomized search. Sampling is done with plain
// modular reduction of mt19937_64 output so results are identical across standard
// library implementations.

#include <algorithm>
#include <cstdint>
#include <random>

#include "freeloci/matrix.hpp"

namespace freeloci {

/// Knobs shared by randomized operations.
struct SearchOptions {
  std::uint64_t seed = 0;
  int budget = 64;            // retry rounds
  std::size_t max_size = 8;   // cap on matrix sizes tried by point searches
  Field field = Field::rational;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed ^ 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [-bound, bound].
  long integer(long bound) {
    const std::uint64_t width = 2 * static_cast<std::uint64_t>(bound) + 1;
    return static_cast<long>(engine_() % width) - bound;
  }
  /// Uniform integer in [lo, hi].
  long range(long lo, long hi) {
    return lo + static_cast<long>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  /// Entry in [-bound, bound] over Q, or a Gaussian integer with both parts in range.
  Scalar scalar(long bound, Field field = Field::rational) {
    if (field == Field::rational) return Scalar(integer(bound));
    long re = integer(bound);
    long im = integer(bound);
    return Scalar(mpq_class(re), mpq_class(im));
  }
  Matrix matrix(std::size_t rows, std::size_t cols, long bound, Field field = Field::rational) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = scalar(bound, field);
    return m;
  }
  MatrixTuple tuple(std::size_t count, std::size_t n, long bound, Field field = Field::rational) {
    MatrixTuple t;
    for (std::size_t k = 0; k < count; ++k) t.push_back(matrix(n, n, bound, field));
    return t;
  }

 private:
  std::mt19937_64 engine_;
};

/// Entry bound for retry round r: 2, 4, 8, ... capped to stay in a machine word.
inline long round_bound(int round) { return 2L << std::min(round, 40); }

}  // namespace freeloci
