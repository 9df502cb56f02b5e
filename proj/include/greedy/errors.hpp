// The approximation errors sigma_m, rho_m, varrho_m and the best projection
// error, each exhaustive over index sets with a per-set inner solver and a
// reproducible witness.
#pragma once

#include "greedy/tga.hpp"

#include <limits>
#include <optional>

namespace greedy {

enum class SolveMethod { Exhaustive, GridRefine };

template <class Scalar>
struct ErrorWitness {
  IndexSet A;
  std::optional<SignPattern<Scalar>> eps;
  std::optional<std::vector<Scalar>> coeffs;
};

template <class Scalar>
struct ErrorValue {
  double value = 0.0;
  ErrorWitness<Scalar> witness;
  SolveMethod method = SolveMethod::Exhaustive;
};

namespace detail {

// Working frame with the norm's linear transform folded in: residuals are kept
// as T(f - sum a_j x_j) so every norm evaluation is a plain weighted Lq sum.
template <class Scalar>
struct NormFrame {
  const Basis<Scalar>* basis = nullptr;
  double q = 2.0;
  Eigen::VectorXd w;  // weights in the transformed coordinates
  Mat<Scalar> TX;     // transformed basis columns

  explicit NormFrame(const Basis<Scalar>& b) : basis(&b), q(b.space.norm.q) {
    if (b.space.norm.kind == NormKind::WeightedLq) {
      w = b.space.norm.weights;
      TX = b.X;
    } else {
      w = Eigen::VectorXd::Ones(b.dim());
      TX = b.space.norm.matrix * b.X;
    }
  }

  Vec<Scalar> transform(const Vec<Scalar>& f) const {
    if (basis->space.norm.kind == NormKind::WeightedLq) return f;
    return basis->space.norm.matrix * f;
  }

  double norm_of(const Vec<Scalar>& t, EvalBudget& budget) const {
    budget.charge();
    return weighted_lq_value(w, t, q);
  }
};

// || f - sum_k a_k x_{A_k} || with tf = transformed f.  Single code path for
// every candidate evaluation so that equal candidates compare bit-equal.
template <class Scalar>
double residual_norm(const NormFrame<Scalar>& frame, const Vec<Scalar>& tf, const IndexSet& A,
                     const Scalar* coeffs, Vec<Scalar>& work, EvalBudget& budget) {
  work = tf;
  for (std::size_t k = 0; k < A.size(); ++k) work -= coeffs[k] * frame.TX.col(A[k]);
  return frame.norm_of(work, budget);
}

// exact minimizer of sum_i w_i |r_i - t d_i|^q over real t for q <= 1:
// the objective is concave between kinks, so some kink is optimal.
template <class Scalar>
double line_search(const NormFrame<Scalar>& frame, const Vec<Scalar>& r, const Vec<Scalar>& d,
                   double t0, EvalBudget& budget) {
  const double q = frame.q;
  const Index n = r.size();

  const auto value_at = [&](double t) {
    budget.charge();
    double s = 0.0;
    for (Index i = 0; i < n; ++i) s += frame.w[i] * abs_pow(std::abs(r[i] - Scalar(t) * d[i]), q);
    return s;
  };

  if (q == 2.0) {
    double num = 0.0, den = 0.0;
    for (Index i = 0; i < n; ++i) {
      num += frame.w[i] * std::real(std::conj(d[i]) * r[i]);
      den += frame.w[i] * std::norm(d[i]);
    }
    return den > 0.0 ? num / den : t0;
  }

  // candidate breakpoints: kinks (real) or per-term vertices (complex)
  std::vector<double> cand;
  cand.reserve(static_cast<std::size_t>(n) + 1);
  cand.push_back(t0);
  for (Index i = 0; i < n; ++i) {
    const double dn = std::norm(d[i]);
    if (dn < 1e-30) continue;
    if constexpr (scalar_traits<Scalar>::is_complex)
      cand.push_back(std::real(std::conj(d[i]) * r[i]) / dn);
    else
      cand.push_back(std::real(r[i]) / std::real(d[i]));
  }
  double best_t = t0, best_v = value_at(t0);
  for (double t : cand) {
    const double v = value_at(t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  if (q <= 1.0 && !scalar_traits<Scalar>::is_complex) return best_t;  // kink is globally optimal

  // smooth or complex case: golden-section polish around the best candidate
  double lo = best_t, hi = best_t;
  double span = 1.0;
  for (double t : cand) span = std::max(span, std::abs(t - best_t));
  lo = best_t - span;
  hi = best_t + span;
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = value_at(x1), f2 = value_at(x2);
  for (int it = 0; it < 80 && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = value_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = value_at(x2);
    }
  }
  const double mid = 0.5 * (a + b);
  return value_at(mid) < best_v ? mid : best_t;
}

// Coordinate descent over the free coefficients on A, exact line searches.
template <class Scalar>
double coordinate_descent(const NormFrame<Scalar>& frame, const Vec<Scalar>& tf, const IndexSet& A,
                          std::vector<Scalar>& a, Vec<Scalar>& work, EvalBudget& budget,
                          int max_sweeps = 64) {
  const std::size_t k = A.size();
  Vec<Scalar> r = tf;
  for (std::size_t j = 0; j < k; ++j) r -= a[j] * frame.TX.col(A[j]);
  double current = frame.norm_of(r, budget);
  const double tol = 1e-10 * std::max(1.0, current);

  Vec<Scalar> rbase(r.size());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double before = current;
    for (std::size_t j = 0; j < k; ++j) {
      const auto& col = frame.TX.col(A[j]);
      rbase = r + a[j] * col;
      if constexpr (scalar_traits<Scalar>::is_complex) {
        const double tre = line_search(frame, rbase, Vec<Scalar>(col), std::real(a[j]), budget);
        Vec<Scalar> icol = Scalar(0, 1) * col;
        Vec<Scalar> rb2 = rbase - Scalar(tre) * col;
        const double tim = line_search(frame, rb2, icol, std::imag(a[j]), budget);
        a[j] = Scalar(tre, tim);
      } else {
        a[j] = Scalar(line_search(frame, rbase, Vec<Scalar>(col), std::real(a[j]), budget));
      }
      r = rbase - a[j] * col;
    }
    current = frame.norm_of(r, budget);
    if (before - current <= tol) break;
  }
  return residual_norm(frame, tf, A, a.data(), work, budget);
}

// Inner minimization over free coefficients for one index set.
template <class Scalar>
std::pair<double, std::vector<Scalar>> inner_min(const NormFrame<Scalar>& frame, const Vec<Scalar>& tf,
                                                 const Vec<Scalar>& coef, const IndexSet& A,
                                                 double alpha, Vec<Scalar>& work, EvalBudget& budget) {
  const Basis<Scalar>& basis = *frame.basis;
  const std::size_t k = A.size();
  std::vector<Scalar> proj(k);
  for (std::size_t j = 0; j < k; ++j) proj[j] = coef[A[j]];

  double best = residual_norm(frame, tf, A, proj.data(), work, budget);
  std::vector<Scalar> best_a = proj;
  const auto consider = [&](double v, const std::vector<Scalar>& a) {
    if (v < best) {
      best = v;
      best_a = a;
    }
  };

  if (basis.diagonal_in_weighted_lq || k == 0) return {best, best_a};

  // fixed-threshold candidates keep this infimum below rho_m's by construction
  if (alpha > 0.0) {
    std::vector<Scalar> cand(k);
    for (std::size_t j = 0; j < k; ++j) cand[j] = Scalar(alpha) * sign_of(coef[A[j]]);
    consider(residual_norm(frame, tf, A, cand.data(), work, budget), cand);
    const bool sweep_signs = frame.q != 1.0 && frame.q != 2.0 && k <= 9 &&
                             !scalar_traits<Scalar>::is_complex;
    if (sweep_signs) {
      for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        for (std::size_t j = 0; j < k; ++j)
          cand[j] = Scalar((mask >> j) & 1u ? -alpha : alpha);
        consider(residual_norm(frame, tf, A, cand.data(), work, budget), cand);
      }
    }
  }

  const double q = frame.q;
  const Index dim = basis.dim();

  if (q == 2.0) {
    // weighted least squares, exact
    Mat<Scalar> B(dim, static_cast<Index>(k));
    Vec<Scalar> rhs(dim);
    for (Index i = 0; i < dim; ++i) {
      const double sw = std::sqrt(frame.w[i]);
      rhs[i] = Scalar(sw) * tf[i];
      for (std::size_t j = 0; j < k; ++j) B(i, static_cast<Index>(j)) = Scalar(sw) * frame.TX(i, A[j]);
    }
    Vec<Scalar> sol = B.colPivHouseholderQr().solve(rhs);
    std::vector<Scalar> a(sol.data(), sol.data() + k);
    consider(residual_norm(frame, tf, A, a.data(), work, budget), a);
    return {best, best_a};
  }

  if (q == 1.0 && binomial(static_cast<int>(dim), static_cast<int>(k)) <= 2000 && k >= 1) {
    // l1 regression: optimum at a vertex where k residual rows vanish
    Mat<Scalar> sub(static_cast<Index>(k), static_cast<Index>(k));
    Vec<Scalar> rhs(static_cast<Index>(k));
    std::uint32_t rows = (1u << k) - 1u;
    const std::uint32_t limit = 1u << dim;
    do {
      const IndexSet R = mask_to_set(rows);
      for (std::size_t ri = 0; ri < k; ++ri) {
        rhs[static_cast<Index>(ri)] = tf[R[ri]];
        for (std::size_t j = 0; j < k; ++j)
          sub(static_cast<Index>(ri), static_cast<Index>(j)) = frame.TX(R[ri], A[j]);
      }
      Eigen::FullPivLU<Mat<Scalar>> lu(sub);
      if (lu.isInvertible()) {
        Vec<Scalar> sol = lu.solve(rhs);
        std::vector<Scalar> a(sol.data(), sol.data() + k);
        consider(residual_norm(frame, tf, A, a.data(), work, budget), a);
      }
      rows = next_same_popcount(rows, limit);
    } while (rows != 0);
    // polish the winning corner
    std::vector<Scalar> a = best_a;
    const double v = coordinate_descent(frame, tf, A, a, work, budget);
    consider(v, a);
    return {best, best_a};
  }

  // multistart coordinate descent: projection start plus seeded perturbations
  double scale = 0.0;
  for (std::size_t j = 0; j < k; ++j) scale = std::max(scale, std::abs(proj[j]));
  scale = std::max(scale, coef.cwiseAbs().maxCoeff());
  if (scale <= 0.0) scale = 1.0;

  std::vector<Scalar> a = proj;
  consider(coordinate_descent(frame, tf, A, a, work, budget), a);
  if (alpha > 0.0) {
    a.assign(k, Scalar(0));
    for (std::size_t j = 0; j < k; ++j) a[j] = Scalar(alpha) * sign_of(coef[A[j]]);
    consider(coordinate_descent(frame, tf, A, a, work, budget), a);
  }
  Rng rng(0x51A87EEDULL ^ set_to_mask(A));
  for (int start = 0; start < 6; ++start) {
    for (std::size_t j = 0; j < k; ++j) {
      const double wobble = 1.0 + 0.5 * (rng.next_double() - 0.5);
      const double shift = 0.4 * scale * (rng.next_double() - 0.5);
      if constexpr (scalar_traits<Scalar>::is_complex)
        a[j] = proj[j] * Scalar(wobble) + Scalar(shift, 0.4 * scale * (rng.next_double() - 0.5));
      else
        a[j] = proj[j] * Scalar(wobble) + Scalar(shift);
    }
    consider(coordinate_descent(frame, tf, A, a, work, budget), a);
  }
  return {best, best_a};
}

// Best m-term value per support size k = 0..kmax (not yet prefix-minimized).
template <class Scalar>
std::vector<ErrorValue<Scalar>> sigma_by_size(const Basis<Scalar>& basis, const Vec<Scalar>& f,
                                              Index kmax, EvalBudget& budget) {
  if (basis.dim() > 16) throw BudgetError("sigma_m limited to dim <= 16");
  const NormFrame<Scalar> frame(basis);
  const Vec<Scalar> tf = frame.transform(f);
  const Vec<Scalar> coef = coefficients(basis, f);
  const Eigen::VectorXd mags = coef.cwiseAbs();
  const auto pi = greedy_ordering_from_magnitudes(mags);
  Vec<Scalar> work(basis.dim());

  std::vector<ErrorValue<Scalar>> by_size(static_cast<std::size_t>(kmax) + 1);
  for (Index k = 0; k <= kmax; ++k) {
    ErrorValue<Scalar>& out = by_size[static_cast<std::size_t>(k)];
    out.method = basis.diagonal_in_weighted_lq ? SolveMethod::Exhaustive : SolveMethod::GridRefine;
    const double alpha = k >= 1 ? mags[pi[k - 1]] : 0.0;
    double best = std::numeric_limits<double>::infinity();
    if (k == 0) {
      IndexSet empty;
      best = residual_norm(frame, tf, empty, static_cast<const Scalar*>(nullptr), work, budget);
      out.witness.A = {};
      out.witness.coeffs = std::vector<Scalar>{};
    } else {
      std::uint32_t mask = (1u << k) - 1u;
      const std::uint32_t limit = 1u << basis.dim();
      do {
        const IndexSet A = mask_to_set(mask);
        auto [v, a] = inner_min(frame, tf, coef, A, alpha, work, budget);
        if (v < best) {
          best = v;
          out.witness.A = A;
          out.witness.coeffs = std::move(a);
        }
        mask = next_same_popcount(mask, limit);
      } while (mask != 0);
    }
    out.value = best;
  }
  return by_size;
}

}  // namespace detail

// sigma_m(f): inf over |A| <= m and free coefficients of ||f - sum a_j x_j||.
template <class Scalar>
ErrorValue<Scalar> sigma_m(const Basis<Scalar>& basis, const Vec<Scalar>& f, Index m,
                           EvalBudget& budget) {
  if (m < 0 || m > basis.dim()) throw InputError("sigma order out of range");
  auto by_size = detail::sigma_by_size(basis, f, m, budget);
  ErrorValue<Scalar> best = by_size[0];
  for (Index k = 1; k <= m; ++k)
    if (by_size[static_cast<std::size_t>(k)].value < best.value) best = by_size[static_cast<std::size_t>(k)];
  return best;
}

template <class Scalar>
ErrorValue<Scalar> sigma_m(const Basis<Scalar>& basis, const Vec<Scalar>& f, Index m) {
  EvalBudget budget;
  return sigma_m(basis, f, m, budget);
}

namespace detail {

// shared enumerator behind rho_m (signed) and varrho_m (unsigned)
template <class Scalar>
ErrorValue<Scalar> rho_like(const Basis<Scalar>& basis, const Vec<Scalar>& f, Index m, bool with_signs,
                            EvalBudget& budget) {
  if (m < 1 || m > basis.dim()) throw InputError("rho order out of range");
  const NormFrame<Scalar> frame(basis);
  const Vec<Scalar> tf = frame.transform(f);
  const Vec<Scalar> coef = coefficients(basis, f);
  const double alpha = mth_threshold(basis, f, m);
  const auto fam = sign_family<Scalar>(basis.space.net_order);
  const std::uint64_t per_set = [&] {
    if (!with_signs) return std::uint64_t{1};
    std::uint64_t c = 1;
    for (Index j = 0; j < m; ++j) c *= fam.size();
    return c;
  }();
  budget.require(binomial(static_cast<int>(basis.dim()), static_cast<int>(m)) * per_set);

  Vec<Scalar> work(basis.dim());
  ErrorValue<Scalar> out;
  out.method = SolveMethod::Exhaustive;
  double best = std::numeric_limits<double>::infinity();

  std::vector<Scalar> a(static_cast<std::size_t>(m));
  std::vector<int> digit(static_cast<std::size_t>(m), 0);
  std::uint32_t mask = (1u << m) - 1u;
  const std::uint32_t limit = 1u << basis.dim();
  do {
    const IndexSet A = mask_to_set(mask);
    std::fill(digit.begin(), digit.end(), 0);
    for (std::uint64_t it = 0; it < per_set; ++it) {
      for (Index j = 0; j < m; ++j)
        a[static_cast<std::size_t>(j)] = Scalar(alpha) * fam[static_cast<std::size_t>(digit[static_cast<std::size_t>(j)])];
      const double v = residual_norm(frame, tf, A, a.data(), work, budget);
      if (v < best) {
        best = v;
        out.witness.A = A;
        SignPattern<Scalar> eps;
        eps.indices = A;
        eps.values.resize(static_cast<std::size_t>(m));
        for (Index j = 0; j < m; ++j)
          eps.values[static_cast<std::size_t>(j)] = fam[static_cast<std::size_t>(digit[static_cast<std::size_t>(j)])];
        out.witness.eps = std::move(eps);
        out.witness.coeffs = a;
      }
      // odometer over sign digits
      std::size_t pos = 0;
      while (pos < digit.size() && ++digit[pos] == static_cast<int>(with_signs ? fam.size() : 1)) digit[pos++] = 0;
      if (pos == digit.size()) break;
    }
    mask = next_same_popcount(mask, limit);
  } while (mask != 0);
  out.value = best;
  return out;
}

}  // namespace detail

// rho_m(f): inf over |A| = m and sign patterns of ||f - alpha 1_{eps,A}||
// with alpha pinned to the m-th threshold.
template <class Scalar>
ErrorValue<Scalar> rho_m(const Basis<Scalar>& basis, const Vec<Scalar>& f, Index m, EvalBudget& budget) {
  return detail::rho_like(basis, f, m, /*with_signs=*/true, budget);
}

// varrho_m(f): as rho_m with eps == 1 only.
template <class Scalar>
ErrorValue<Scalar> varrho_m(const Basis<Scalar>& basis, const Vec<Scalar>& f, Index m, EvalBudget& budget) {
  return detail::rho_like(basis, f, m, /*with_signs=*/false, budget);
}

template <class Scalar>
ErrorValue<Scalar> rho_m(const Basis<Scalar>& basis, const Vec<Scalar>& f, Index m) {
  EvalBudget budget;
  return rho_m(basis, f, m, budget);
}

template <class Scalar>
ErrorValue<Scalar> varrho_m(const Basis<Scalar>& basis, const Vec<Scalar>& f, Index m) {
  EvalBudget budget;
  return varrho_m(basis, f, m, budget);
}

// inf over |B| <= m of ||f - P_B(f)||, exhaustive.
template <class Scalar>
ErrorValue<Scalar> best_projection_error(const Basis<Scalar>& basis, const Vec<Scalar>& f, Index m,
                                         EvalBudget& budget) {
  if (m < 0 || m > basis.dim()) throw InputError("projection order out of range");
  const detail::NormFrame<Scalar> frame(basis);
  const Vec<Scalar> tf = frame.transform(f);
  const Vec<Scalar> coef = coefficients(basis, f);
  Vec<Scalar> work(basis.dim());
  std::uint64_t count = 0;
  for (Index k = 0; k <= m; ++k) count += binomial(static_cast<int>(basis.dim()), static_cast<int>(k));
  budget.require(count);

  ErrorValue<Scalar> out;
  out.method = SolveMethod::Exhaustive;
  double best = std::numeric_limits<double>::infinity();
  std::vector<Scalar> a;
  for (Index k = 0; k <= m; ++k) {
    std::uint32_t mask = k == 0 ? 0u : (1u << k) - 1u;
    const std::uint32_t limit = 1u << basis.dim();
    do {
      const IndexSet B = mask_to_set(mask);
      a.resize(B.size());
      for (std::size_t j = 0; j < B.size(); ++j) a[j] = coef[B[j]];
      const double v = detail::residual_norm(frame, tf, B, a.data(), work, budget);
      if (v < best) {
        best = v;
        out.witness.A = B;
        out.witness.coeffs = a;
      }
      if (k == 0) break;
      mask = next_same_popcount(mask, limit);
    } while (mask != 0);
  }
  out.value = best;
  return out;
}

template <class Scalar>
ErrorValue<Scalar> best_projection_error(const Basis<Scalar>& basis, const Vec<Scalar>& f, Index m) {
  EvalBudget budget;
  return best_projection_error(basis, f, m, budget);
}

}  // namespace greedy
