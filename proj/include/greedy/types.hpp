// Core scalar/vector aliases, error types, evaluation budget and seeded RNG
// shared by all modules.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace greedy {

using Index = Eigen::Index;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Index sets are kept sorted ascending and duplicate-free (0-based).
using IndexSet = std::vector<Index>;

enum class FieldKind { Real, Complex };

template <class Scalar>
struct scalar_traits {
  static constexpr bool is_complex = false;
  static constexpr FieldKind field = FieldKind::Real;
};
template <class R>
struct scalar_traits<std::complex<R>> {
  static constexpr bool is_complex = true;
  static constexpr FieldKind field = FieldKind::Complex;
};

template <class Scalar>
constexpr FieldKind field_of() {
  return scalar_traits<Scalar>::field;
}

// sgn(z) = z/|z| with the convention sgn(0) = 1.
template <class Scalar>
inline Scalar sign_of(const Scalar& z) {
  const double a = std::abs(z);
  if (a <= 0.0) return Scalar(1);
  return z / Scalar(a);
}

// k-th among the N-th roots of unity; multiples of a quarter turn are exact.
inline std::complex<double> root_of_unity(int k, int n) {
  k = ((k % n) + n) % n;
  if (4 * k % n == 0) {
    switch (4 * k / n) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      case 3: return {0.0, -1.0};
    }
  }
  const double ang = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(ang), std::sin(ang)};
}

struct InputError : std::invalid_argument {
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

struct ConstructionError : std::runtime_error {
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

inline std::uint64_t default_budget_cap() {
  if (const char* env = std::getenv("GREEDY_APPROX_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::uint64_t>(v);
  }
  return 10'000'000ULL;
}

// Counts norm evaluations against a cap.  Search loops reset it per corpus
// element so that abort points stay deterministic under parallel scans.
struct EvalBudget {
  std::uint64_t cap = default_budget_cap();
  std::uint64_t used = 0;

  EvalBudget() = default;
  explicit EvalBudget(std::uint64_t c) : cap(c) {}

  void charge(std::uint64_t n = 1) {
    used += n;
    if (used > cap) throw BudgetError("norm-evaluation budget exceeded (cap=" + std::to_string(cap) + ")");
  }
  // Up-front guard for searches whose candidate count is known.
  void require(std::uint64_t n) const {
    if (used + n > cap) throw BudgetError("search space of " + std::to_string(n) + " candidates exceeds budget (cap=" + std::to_string(cap) + ")");
  }
  void reset() { used = 0; }
};

// splitmix64: tiny, portable, bit-reproducible seeded generator.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // uniform in [a, b)
  double uniform(double a, double b) { return a + (b - a) * next_double(); }
  // uniform integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }
};

// ---- subset-mask helpers (dim <= 16 everywhere in this artifact) ----

inline IndexSet mask_to_set(std::uint32_t mask) {
  IndexSet s;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1u) s.push_back(i);
  return s;
}

inline std::uint32_t set_to_mask(const IndexSet& s) {
  std::uint32_t m = 0;
  for (Index i : s) m |= (1u << i);
  return m;
}

// next mask with the same popcount (Gosper); returns 0 when exhausted.
inline std::uint32_t next_same_popcount(std::uint32_t v, std::uint32_t limit) {
  if (v == 0) return 0;
  const std::uint32_t c = v & (~v + 1u);
  const std::uint32_t r = v + c;
  std::uint32_t next = (((r ^ v) >> 2) / c) | r;
  return next < limit ? next : 0;
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace greedy
