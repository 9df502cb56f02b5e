// Bases from invertible matrices: dual functionals, coefficients, signed
// indicator sums and supports.
#pragma once

#include "greedy/spaces.hpp"

#include <algorithm>
#include <string>

namespace greedy {

inline constexpr double kZeroTol = 1e-12;      // coefficient zero detection
inline constexpr double kBiorthTol = 1e-10;    // entrywise Xdual*X - I

template <class Scalar>
struct SignPattern {
  IndexSet indices;            // sorted ascending
  std::vector<Scalar> values;  // aligned with indices; unimodular

  static SignPattern ones(IndexSet idx) {
    SignPattern p;
    p.values.assign(idx.size(), Scalar(1));
    p.indices = std::move(idx);
    return p;
  }
};

template <class Scalar>
struct Basis {
  Space<Scalar> space;
  Mat<Scalar> X;      // column n is the basis vector x_n
  Mat<Scalar> Xdual;  // row n is the functional x_n^*
  double c1 = 0.0;    // max_n ||x_n||, exact
  double c2 = 0.0;    // empirical dual-norm estimate over a seeded probe set
  std::string label;
  // true for the canonical family, whose greedy constants are all 1 and
  // whose ledger entries are therefore asserted wholesale.
  bool exact_constant_family = false;
  // diagonal X in a WeightedLq norm: projections solve the m-term problem.
  bool diagonal_in_weighted_lq = false;

  Index dim() const { return space.dim; }
};

template <class Scalar>
Vec<Scalar> coefficients(const Basis<Scalar>& basis, const Vec<Scalar>& f) {
  if (f.size() != basis.dim()) throw InputError("dimension mismatch in coefficients");
  return basis.Xdual * f;
}

template <class Scalar>
Basis<Scalar> build_basis(const Space<Scalar>& space, Mat<Scalar> X, std::string label = {}) {
  if (X.rows() != space.dim || X.cols() != space.dim)
    throw InputError("basis matrix must be square of the space dimension");

  Eigen::JacobiSVD<Mat<Scalar>> svd(X);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > 1e12)
    throw ConstructionError("basis matrix is singular or ill-conditioned");

  Basis<Scalar> b;
  b.space = space;
  b.X = std::move(X);
  b.Xdual = b.X.inverse();
  b.label = std::move(label);

  const double biorth = (b.Xdual * b.X - Mat<Scalar>::Identity(space.dim, space.dim))
                            .cwiseAbs()
                            .maxCoeff();
  if (biorth > kBiorthTol)
    throw ConstructionError("biorthogonality failure: |Xdual*X - I| = " + std::to_string(biorth));

  for (Index j = 0; j < space.dim; ++j)
    b.c1 = std::max(b.c1, eval_norm(space, Vec<Scalar>(b.X.col(j))));

  // c2 has no closed form for a general quasi-norm; probe with unit vectors,
  // the basis columns and a fixed seeded sample, and label it an estimate.
  Rng rng(0x632d75616c6eULL);
  std::vector<Vec<Scalar>> probes;
  for (Index j = 0; j < space.dim; ++j) {
    probes.push_back(Vec<Scalar>::Unit(space.dim, j));
    probes.push_back(b.X.col(j));
  }
  for (int k = 0; k < 64; ++k) {
    Vec<Scalar> v(space.dim);
    for (Index i = 0; i < space.dim; ++i) {
      if constexpr (scalar_traits<Scalar>::is_complex)
        v[i] = Scalar(rng.uniform(-1, 1), rng.uniform(-1, 1));
      else
        v[i] = rng.uniform(-1, 1);
    }
    probes.push_back(std::move(v));
  }
  for (const auto& f : probes) {
    const double nf = eval_norm(space, f);
    if (nf <= kZeroTol) continue;
    const Vec<Scalar> c = b.Xdual * f;
    for (Index n = 0; n < space.dim; ++n) b.c2 = std::max(b.c2, std::abs(c[n]) / nf);
  }

  b.diagonal_in_weighted_lq =
      space.norm.kind == NormKind::WeightedLq && b.X.isDiagonal(0.0);
  return b;
}

// Rescales every column to unit norm (dual recomputed accordingly).
template <class Scalar>
Basis<Scalar> normalize_columns(const Basis<Scalar>& basis) {
  Mat<Scalar> X = basis.X;
  for (Index j = 0; j < basis.dim(); ++j) {
    const double nj = eval_norm(basis.space, Vec<Scalar>(X.col(j)));
    if (nj <= kZeroTol) throw ConstructionError("cannot normalize a zero column");
    X.col(j) /= Scalar(nj);
  }
  Basis<Scalar> out = build_basis(basis.space, std::move(X), basis.label + ":normalized");
  out.exact_constant_family = basis.exact_constant_family;
  return out;
}

template <class Scalar>
void check_index_set(const Basis<Scalar>& basis, const IndexSet& A) {
  for (Index n : A)
    if (n < 0 || n >= basis.dim()) throw InputError("index out of range");
}

// 1_{eps,A} = sum_{j in A} eps_j x_j
template <class Scalar>
Vec<Scalar> indicator(const Basis<Scalar>& basis, const IndexSet& A, const SignPattern<Scalar>& eps) {
  if (eps.indices != A) throw InputError("sign pattern must be indexed by A");
  check_index_set(basis, A);
  Vec<Scalar> out(basis.dim());
  out.setZero();
  for (std::size_t k = 0; k < A.size(); ++k) out += eps.values[k] * basis.X.col(A[k]);
  return out;
}

template <class Scalar>
Vec<Scalar> indicator(const Basis<Scalar>& basis, const IndexSet& A) {
  return indicator(basis, A, SignPattern<Scalar>::ones(A));
}

template <class Scalar>
IndexSet support(const Basis<Scalar>& basis, const Vec<Scalar>& f) {
  const Vec<Scalar> c = coefficients(basis, f);
  IndexSet s;
  for (Index n = 0; n < c.size(); ++n)
    if (std::abs(c[n]) > kZeroTol) s.push_back(n);
  return s;
}

}  // namespace greedy
