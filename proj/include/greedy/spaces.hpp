// Finite-dimensional p-Banach spaces: evaluable quasi-norms, the geometry
// constants A_p/B_p and the p-convexity inequalities.
#pragma once

#include "greedy/types.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace greedy {

enum class NormKind { WeightedLq, MatrixInduced };

// Two concrete quasi-norm families:
//   WeightedLq(f)     = (sum_j w_j |f_j|^q)^(1/q)
//   MatrixInduced(f)  = unit-weight Lq of M*f
// Both are p-norms for p = min(q, 1).
template <class Scalar>
struct NormSpec {
  NormKind kind = NormKind::WeightedLq;
  double q = 2.0;
  Eigen::VectorXd weights;  // WeightedLq only; strictly positive
  Mat<Scalar> matrix;       // MatrixInduced only; invertible

  static NormSpec weighted_lq(double q, Eigen::VectorXd w) {
    NormSpec s;
    s.kind = NormKind::WeightedLq;
    s.q = q;
    s.weights = std::move(w);
    return s;
  }
  static NormSpec lq(double q, Index dim) { return weighted_lq(q, Eigen::VectorXd::Ones(dim)); }
  static NormSpec matrix_induced(Mat<Scalar> m, double q) {
    NormSpec s;
    s.kind = NormKind::MatrixInduced;
    s.q = q;
    s.matrix = std::move(m);
    return s;
  }

  Index dim() const {
    return kind == NormKind::WeightedLq ? weights.size() : matrix.rows();
  }
};

template <class Scalar>
struct Space {
  Index dim = 0;
  double p = 1.0;      // p-norm exponent, defaults to min(q, 1)
  int net_order = 8;   // complex sign net resolution; unused over the reals
  NormSpec<Scalar> norm;

  static constexpr FieldKind field = field_of<Scalar>();
};

namespace detail {

// |x|^q with the hot exponents special-cased.
inline double abs_pow(double a, double q) {
  if (q == 1.0) return a;
  if (q == 2.0) return a * a;
  if (q == 0.5) return std::sqrt(a);
  return std::pow(a, q);
}

inline double root_pow(double s, double q) {
  if (q == 1.0) return s;
  if (q == 2.0) return std::sqrt(s);
  if (q == 0.5) return s * s;
  return std::pow(s, 1.0 / q);
}

// Lq sum of an already-transformed vector.
template <class Scalar>
double weighted_lq_value(const Eigen::VectorXd& w, const Vec<Scalar>& v, double q) {
  double s = 0.0;
  for (Index i = 0; i < v.size(); ++i) s += w[i] * abs_pow(std::abs(v[i]), q);
  return root_pow(s, q);
}

}  // namespace detail

template <class Scalar>
Space<Scalar> make_space(NormSpec<Scalar> norm, std::optional<double> p_override = std::nullopt,
                         int net_order = 8) {
  Space<Scalar> sp;
  sp.dim = norm.dim();
  sp.norm = std::move(norm);
  if (sp.dim < 1) throw InputError("space dimension must be >= 1");
  if (sp.norm.q <= 0.0) throw InputError("norm exponent q must be positive");
  if (sp.norm.kind == NormKind::WeightedLq) {
    if ((sp.norm.weights.array() <= 0.0).any()) throw InputError("weights must be strictly positive");
  } else {
    if (sp.norm.matrix.rows() != sp.norm.matrix.cols()) throw InputError("inducing matrix must be square");
    Eigen::JacobiSVD<Mat<Scalar>> svd(sp.norm.matrix);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > 1e12) throw InputError("inducing matrix is singular or ill-conditioned");
  }
  sp.p = p_override.value_or(std::min(sp.norm.q, 1.0));
  if (!(sp.p > 0.0 && sp.p <= 1.0)) throw InputError("p must lie in (0, 1]");
  sp.net_order = net_order;
  if constexpr (scalar_traits<Scalar>::is_complex) {
    if (sp.net_order < 4) throw InputError("complex sign net order must be >= 4");
  }
  return sp;
}

template <class Scalar>
double eval_norm(const Space<Scalar>& space, const Vec<Scalar>& f) {
  if (f.size() != space.dim) throw InputError("dimension mismatch in eval_norm");
  if (space.norm.kind == NormKind::WeightedLq)
    return detail::weighted_lq_value(space.norm.weights, f, space.norm.q);
  const Vec<Scalar> t = space.norm.matrix * f;
  double s = 0.0;
  for (Index i = 0; i < t.size(); ++i) s += detail::abs_pow(std::abs(t[i]), space.norm.q);
  return detail::root_pow(s, space.norm.q);
}

template <class Scalar>
double eval_norm(const Space<Scalar>& space, const Vec<Scalar>& f, EvalBudget& budget) {
  budget.charge();
  return eval_norm(space, f);
}

struct GeometryConstants {
  double a_p = 1.0;  // A_p = (2^p - 1)^(-1/p)
  double b_p = 2.0;  // B_p = 2^(1/p) A_p (real) or 4^(1/p) A_p (complex)
};

GeometryConstants geometry_constants(double p, FieldKind field);

// slack of the p-power triangle inequality: ||f||^p + ||g||^p - ||f+g||^p
template <class Scalar>
double check_p_triangle(const Space<Scalar>& space, const Vec<Scalar>& f, const Vec<Scalar>& g) {
  if (f.size() != space.dim || g.size() != space.dim)
    throw InputError("dimension mismatch in check_p_triangle");
  const double nf = eval_norm(space, f);
  const double ng = eval_norm(space, g);
  const Vec<Scalar> s = f + g;
  const double ns = eval_norm(space, s);
  const double p = space.p;
  return std::pow(nf, p) + std::pow(ng, p) - std::pow(ns, p);
}

// Enumerates the unimodular sign family of the scalar field: {+1,-1} over the
// reals, the net_order-th roots of unity over the complexes.
template <class Scalar>
std::vector<Scalar> sign_family(int net_order) {
  if constexpr (scalar_traits<Scalar>::is_complex) {
    std::vector<Scalar> fam(net_order);
    for (int k = 0; k < net_order; ++k) fam[k] = root_of_unity(k, net_order);
    return fam;
  } else {
    (void)net_order;
    return {Scalar(1), Scalar(-1)};
  }
}

template <class Scalar>
struct ConvexityCheck {
  double lhs = 0.0;    // || sum a_j f_j ||
  double rhs_b = 0.0;  // B_p max|a_j| max_{B subset} || sum_{j in B} f_j ||
  double rhs_a = 0.0;  // A_p max|a_j| max_{signs}    || sum eps_j f_j ||
};

// Exhaustive check of the two p-convexity bounds for a finite collection.
template <class Scalar>
ConvexityCheck<Scalar> verify_convexity_lemma(const Space<Scalar>& space,
                                              const std::vector<Vec<Scalar>>& vectors,
                                              const std::vector<Scalar>& coeffs,
                                              EvalBudget* budget_in = nullptr) {
  if (vectors.size() != coeffs.size()) throw InputError("vectors/coeffs length mismatch");
  const int n = static_cast<int>(vectors.size());
  if (n > 16) throw BudgetError("convexity lemma limited to collections of size <= 16");
  for (const auto& v : vectors)
    if (v.size() != space.dim) throw InputError("dimension mismatch in verify_convexity_lemma");

  EvalBudget local;
  EvalBudget& budget = budget_in ? *budget_in : local;

  const auto geo = geometry_constants(space.p, space.field);
  double amax = 0.0;
  for (const auto& a : coeffs) amax = std::max(amax, std::abs(a));

  Vec<Scalar> acc(space.dim);
  acc.setZero();
  for (int j = 0; j < n; ++j) acc += coeffs[j] * vectors[j];
  ConvexityCheck<Scalar> out;
  out.lhs = eval_norm(space, acc, budget);

  // all subsets
  double best_subset = 0.0;
  const std::uint32_t total = 1u << n;
  budget.require(total);
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    acc.setZero();
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) acc += vectors[j];
    best_subset = std::max(best_subset, eval_norm(space, acc, budget));
  }
  out.rhs_b = geo.b_p * amax * best_subset;

  // all sign assignments from the field's family
  const auto fam = sign_family<Scalar>(space.net_order);
  const std::uint64_t nsigns = [&] {
    std::uint64_t c = 1;
    for (int j = 0; j < n; ++j) {
      c *= fam.size();
      if (c > (1ULL << 40)) throw BudgetError("sign family too large in verify_convexity_lemma");
    }
    return c;
  }();
  budget.require(nsigns);
  std::vector<int> digit(n, 0);
  double best_sign = 0.0;
  for (std::uint64_t it = 0;; ++it) {
    acc.setZero();
    for (int j = 0; j < n; ++j) acc += fam[digit[j]] * vectors[j];
    best_sign = std::max(best_sign, eval_norm(space, acc, budget));
    int pos = 0;
    while (pos < n && ++digit[pos] == static_cast<int>(fam.size())) digit[pos++] = 0;
    if (pos == n) break;
  }
  out.rhs_a = geo.a_p * amax * best_sign;
  return out;
}

}  // namespace greedy
