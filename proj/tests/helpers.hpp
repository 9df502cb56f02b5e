#pragma once

#include "greedy/catalog.hpp"

#include <doctest.h>

namespace greedy::testing {

inline Basis<double> canonical(double q, Index n) {
  return make_basis<double>(CatalogId{CatalogId::Family::Canonical, q, n, {}, 0.0});
}

inline Basis<double> summing(Index n) {
  return make_basis<double>(CatalogId{CatalogId::Family::Summing, 1.0, n, {}, 0.0});
}

inline Basis<double> weighted_l1_4() {
  Eigen::VectorXd w(4);
  w << 1.0, 0.5, 0.25, 0.125;
  return make_basis<double>(CatalogId{CatalogId::Family::Weighted, 1.0, 4, w, 0.0});
}

inline Basis<double> perturbed(Index n, double off) {
  return make_basis<double>(CatalogId{CatalogId::Family::PerturbedIdentity, 2.0, n, {}, off});
}

inline Vec<double> vec(std::initializer_list<double> xs) {
  Vec<double> v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vec<std::complex<double>> cvec(std::initializer_list<std::complex<double>> xs) {
  Vec<std::complex<double>> v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (const auto& x : xs) v[i++] = x;
  return v;
}

// seeded random vector with coefficients in [-mag, mag]
inline Vec<double> random_vec(Rng& rng, Index dim, double mag = 2.0) {
  Vec<double> v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = rng.uniform(-mag, mag);
  return v;
}

inline CorpusSpec small_spec(std::uint64_t seed = 7) {
  CorpusSpec s;
  s.seed = seed;
  s.grid.count = 400;
  s.random.count = 30;
  s.structured.perturbed_cap = 80;
  return s;
}

}  // namespace greedy::testing
