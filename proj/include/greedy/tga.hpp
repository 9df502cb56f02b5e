// Thresholding Greedy Algorithm: greedy ordering with the index tie rule,
// greedy sums, coordinate projections and exhaustive greedy-set families.
#pragma once

#include "greedy/basis.hpp"

#include <algorithm>
#include <numeric>

namespace greedy {

// relative tolerance under which coefficient magnitudes count as tied
inline constexpr double kTieRelTol = 1e-9;

inline bool magnitudes_tied(double a, double b) {
  return std::abs(a - b) <= kTieRelTol * std::max(a, b);
}

// Permutation sorting coefficients by decreasing modulus, ties broken by
// increasing index; indices beyond the support follow by increasing index.
inline std::vector<Index> greedy_ordering_from_magnitudes(const Eigen::VectorXd& mags) {
  std::vector<Index> pi(static_cast<std::size_t>(mags.size()));
  std::iota(pi.begin(), pi.end(), Index(0));
  std::stable_sort(pi.begin(), pi.end(), [&](Index a, Index b) {
    if (mags[a] != mags[b]) return mags[a] > mags[b];
    return a < b;
  });
  return pi;
}

template <class Scalar>
Eigen::VectorXd coefficient_magnitudes(const Basis<Scalar>& basis, const Vec<Scalar>& f) {
  return coefficients(basis, f).cwiseAbs();
}

template <class Scalar>
std::vector<Index> greedy_ordering(const Basis<Scalar>& basis, const Vec<Scalar>& f) {
  return greedy_ordering_from_magnitudes(coefficient_magnitudes(basis, f));
}

// P_A(f) = sum_{n in A} x_n^*(f) x_n
template <class Scalar>
Vec<Scalar> project(const Basis<Scalar>& basis, const Vec<Scalar>& f, const IndexSet& A) {
  check_index_set(basis, A);
  const Vec<Scalar> c = coefficients(basis, f);
  Vec<Scalar> out(basis.dim());
  out.setZero();
  for (Index n : A) out += c[n] * basis.X.col(n);
  return out;
}

// G_m(f): the first m terms of the greedy ordering.
template <class Scalar>
Vec<Scalar> greedy_sum(const Basis<Scalar>& basis, const Vec<Scalar>& f, Index m) {
  if (m < 0 || m > basis.dim()) throw InputError("greedy sum order out of range");
  const Vec<Scalar> c = coefficients(basis, f);
  const auto pi = greedy_ordering_from_magnitudes(Eigen::VectorXd(c.cwiseAbs()));
  Vec<Scalar> out(basis.dim());
  out.setZero();
  for (Index i = 0; i < m; ++i) out += c[pi[i]] * basis.X.col(pi[i]);
  return out;
}

// the m-th largest coefficient magnitude
template <class Scalar>
double mth_threshold(const Basis<Scalar>& basis, const Vec<Scalar>& f, Index m) {
  if (m < 1 || m > basis.dim()) throw InputError("threshold order out of range");
  Eigen::VectorXd mags = coefficient_magnitudes(basis, f);
  const auto pi = greedy_ordering_from_magnitudes(mags);
  return mags[pi[m - 1]];
}

struct GreedySetFamily {
  Index m = 0;
  std::vector<IndexSet> sets;  // exhaustive, deterministic order
};

// Every A with |A| = m and min_{n in A}|c_n| >= max_{n not in A}|c_n|.
// Magnitudes within kTieRelTol of the threshold count as tied, which can only
// enlarge the family.
inline GreedySetFamily greedy_sets_from_magnitudes(const Eigen::VectorXd& mags, Index m) {
  const Index dim = mags.size();
  if (m < 0 || m > dim) throw InputError("greedy set cardinality out of range");
  GreedySetFamily fam;
  fam.m = m;
  if (m == 0) {
    fam.sets.push_back({});
    return fam;
  }
  const auto pi = greedy_ordering_from_magnitudes(mags);
  const double tau = mags[pi[m - 1]];

  IndexSet above, tied;
  for (Index n = 0; n < dim; ++n) {
    if (magnitudes_tied(mags[n], tau))
      tied.push_back(n);
    else if (mags[n] > tau)
      above.push_back(n);
  }
  const Index slots = m - static_cast<Index>(above.size());
  // enumerate the tied combinations in lexicographic order
  const int t = static_cast<int>(tied.size());
  std::uint32_t mask = slots == 0 ? 0u : ((1u << slots) - 1u);
  const std::uint32_t limit = 1u << t;
  do {
    IndexSet A = above;
    for (int i = 0; i < t; ++i)
      if (mask & (1u << i)) A.push_back(tied[i]);
    std::sort(A.begin(), A.end());
    fam.sets.push_back(std::move(A));
    if (slots == 0) break;
    mask = next_same_popcount(mask, limit);
  } while (mask != 0);
  return fam;
}

template <class Scalar>
GreedySetFamily greedy_sets(const Basis<Scalar>& basis, const Vec<Scalar>& f, Index m) {
  return greedy_sets_from_magnitudes(coefficient_magnitudes(basis, f), m);
}

}  // namespace greedy
