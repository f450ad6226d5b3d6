#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace sdc::numeric {

// Row-major dense matrix of doubles. Small and value-semantic; everything in
// this library that needs 2-D numeric data goes through it.
struct Matrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : n_rows(rows), n_cols(cols), data(rows * cols, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * n_cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * n_cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * n_cols, n_cols}; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * n_cols, n_cols};
  }
  bool empty() const { return data.empty(); }
};

// Deterministic random source. The engine (mt19937_64) is pinned by the
// standard; the variate transforms are implemented here instead of relying on
// std::*_distribution, whose streams differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  // Standard normal via Box-Muller (no cached spare, fixed draw count).
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Fisher-Yates, deterministic for a given seed.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 step; used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// FNV-1a, for hashing identifiers into seed salts.
std::uint64_t fnv1a(std::string_view s);

// Quantile by linear interpolation of order statistics at position p*(n-1),
// zero-based. `sorted` must be ascending and non-empty; p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // row i is the eigenvector of values[i]
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenvalues are
// sorted descending; each eigenvector is normalized with its first
// coordinate of magnitude > 1e-12 made positive, and exact eigenvalue ties
// are ordered lexicographically by eigenvector.
SymmetricEigen eigen_symmetric(const Matrix& a);

// Runs fn(0..n-1), possibly on `workers` threads. Results written by fn must
// go to caller-owned per-index slots; the call returns after all indices
// complete. Exceptions from fn are rethrown (first one wins).
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// Shortest decimal round-trip style formatting: %.17g guarantees the exact
// double back after parsing.
std::string format_g17(double x);
std::string format_fixed(double x, int digits);

}  // namespace sdc::numeric
