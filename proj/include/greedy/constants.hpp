// Greedy-type constant estimators (lower bounds by search, with witnesses
// reproducing the attaining ratio) and the closed-form bound ledger.
#pragma once

#include "greedy/errors.hpp"

#include <map>
#include <optional>

namespace greedy {

enum class ConstantName { K, D, Ds, Delta, Cq, Cg, Cag, Cpg, Cpgu, GammaT, Cdis, Cend, Cend2, Cplus };

inline const char* to_string(ConstantName n) {
  switch (n) {
    case ConstantName::K: return "K";
    case ConstantName::D: return "D";
    case ConstantName::Ds: return "Ds";
    case ConstantName::Delta: return "Delta";
    case ConstantName::Cq: return "Cq";
    case ConstantName::Cg: return "Cg";
    case ConstantName::Cag: return "Cag";
    case ConstantName::Cpg: return "Cpg";
    case ConstantName::Cpgu: return "Cpgu";
    case ConstantName::GammaT: return "GammaT";
    case ConstantName::Cdis: return "Cdis";
    case ConstantName::Cend: return "Cend";
    case ConstantName::Cend2: return "Cend2";
    case ConstantName::Cplus: return "Cplus";
  }
  return "?";
}

// Enough structure to recompute the attaining ratio from scratch.
template <class Scalar>
struct RatioWitness {
  std::string kind;
  Vec<Scalar> f, g;  // ambient; size 0 when unused
  IndexSet A, B;
  std::vector<Scalar> epsA, epsB;
  Index m = -1;
  double a_coeff = 0.0;  // the free scalar of the Theorem-2 style ratios
  double numerator = 0.0, denominator = 0.0;
};

template <class Scalar>
struct ConstantEstimate {
  ConstantName name = ConstantName::K;
  double value = 0.0;
  RatioWitness<Scalar> witness;
  std::string corpus_id;
  bool is_lower_bound = true;
  bool infeasible = false;  // a ratio had zero denominator but nonzero numerator
  bool aborted = false;     // budget hit; value covers the elements scanned so far
};

namespace detail {

inline constexpr double kRatioZero = 1e-12;

// max-tracking with first-wins ties, so the enumeration order fixes the witness
struct MaxTracker {
  double value = -1.0;
  bool any() const { return value >= 0.0; }
  bool accept(double v) {
    if (v > value) {
      value = v;
      return true;
    }
    return false;
  }
};

template <class Scalar>
Vec<Scalar> masked_coeffs(const Vec<Scalar>& coef, std::uint32_t mask) {
  Vec<Scalar> out = Vec<Scalar>::Zero(coef.size());
  for (Index n = 0; n < coef.size(); ++n)
    if (mask & (1u << n)) out[n] = coef[n];
  return out;
}

// norm of sum_{n in mask} c_n x_n, evaluated in the transformed frame
template <class Scalar>
double masked_norm(const NormFrame<Scalar>& frame, const Vec<Scalar>& coef, std::uint32_t mask,
                   Vec<Scalar>& work, EvalBudget& budget) {
  work.setZero();
  for (Index n = 0; n < coef.size(); ++n)
    if (mask & (1u << n)) work += coef[n] * frame.TX.col(n);
  return frame.norm_of(work, budget);
}

}  // namespace detail

// K: sup ||P_A f|| / ||f|| over the corpus and all index sets.
template <class Scalar>
ConstantEstimate<Scalar> estimate_unconditionality(const Basis<Scalar>& basis,
                                                   const std::vector<Vec<Scalar>>& corpus,
                                                   std::string corpus_id, EvalBudget& budget) {
  if (corpus.empty()) throw InputError("empty corpus");
  if (basis.dim() > 16) throw BudgetError("unconditionality search limited to dim <= 16");
  const detail::NormFrame<Scalar> frame(basis);
  ConstantEstimate<Scalar> est;
  est.name = ConstantName::K;
  est.corpus_id = std::move(corpus_id);
  detail::MaxTracker best;
  Vec<Scalar> work(basis.dim());
  const std::uint32_t total = 1u << basis.dim();
  for (const auto& f : corpus) {
    budget.reset();
    const Vec<Scalar> coef = coefficients(basis, f);
    const double nf = detail::masked_norm(frame, coef, total - 1u, work, budget);
    if (nf <= detail::kRatioZero) continue;
    for (std::uint32_t mask = 1; mask < total; ++mask) {
      const double num = detail::masked_norm(frame, coef, mask, work, budget);
      if (best.accept(num / nf)) {
        est.witness.kind = "projection";
        est.witness.f = f;
        est.witness.A = mask_to_set(mask);
        est.witness.numerator = num;
        est.witness.denominator = nf;
      }
    }
  }
  est.value = std::max(best.value, 0.0);
  return est;
}

// D / Ds: worst indicator-norm ratio over |A| <= |B| (signed when Ds).
template <class Scalar>
ConstantEstimate<Scalar> estimate_democracy(const Basis<Scalar>& basis, bool superdemocratic,
                                            EvalBudget& budget) {
  const Index dim = basis.dim();
  if (dim > 16) throw BudgetError("democracy search limited to dim <= 16");
  const detail::NormFrame<Scalar> frame(basis);
  const auto fam = sign_family<Scalar>(basis.space.net_order);
  const std::size_t nsigns = superdemocratic ? fam.size() : 1;

  struct Entry {
    double value;
    std::uint32_t mask;
    std::vector<Scalar> eps;
  };
  std::vector<Entry> hi(static_cast<std::size_t>(dim) + 1), lo(static_cast<std::size_t>(dim) + 1);
  for (auto& e : hi) e.value = -1.0;
  for (auto& e : lo) e.value = std::numeric_limits<double>::infinity();

  std::uint64_t count = 0;
  for (Index k = 1; k <= dim; ++k) {
    std::uint64_t pat = 1;
    for (Index j = 0; j < k; ++j) pat *= nsigns;
    count += binomial(static_cast<int>(dim), static_cast<int>(k)) * pat;
  }
  budget.require(count);

  Vec<Scalar> work(dim);
  std::vector<Scalar> eps;
  for (Index k = 1; k <= dim; ++k) {
    std::uint32_t mask = (1u << k) - 1u;
    const std::uint32_t limit = 1u << dim;
    do {
      const IndexSet A = mask_to_set(mask);
      std::vector<int> digit(static_cast<std::size_t>(k), 0);
      while (true) {
        eps.resize(static_cast<std::size_t>(k));
        work.setZero();
        for (Index j = 0; j < k; ++j) {
          eps[static_cast<std::size_t>(j)] = fam[static_cast<std::size_t>(digit[static_cast<std::size_t>(j)])];
          work += eps[static_cast<std::size_t>(j)] * frame.TX.col(A[static_cast<std::size_t>(j)]);
        }
        const double v = frame.norm_of(work, budget);
        auto& h = hi[static_cast<std::size_t>(k)];
        auto& l = lo[static_cast<std::size_t>(k)];
        if (v > h.value) h = {v, mask, eps};
        if (v < l.value) l = {v, mask, eps};
        std::size_t pos = 0;
        while (pos < digit.size() && ++digit[pos] == static_cast<int>(nsigns)) digit[pos++] = 0;
        if (pos == digit.size()) break;
      }
      mask = next_same_popcount(mask, limit);
    } while (mask != 0);
  }

  ConstantEstimate<Scalar> est;
  est.name = superdemocratic ? ConstantName::Ds : ConstantName::D;
  detail::MaxTracker best;
  for (Index k = 1; k <= dim; ++k)
    for (Index l = k; l <= dim; ++l) {
      const auto& h = hi[static_cast<std::size_t>(k)];
      const auto& lw = lo[static_cast<std::size_t>(l)];
      if (lw.value <= detail::kRatioZero) {
        if (h.value > detail::kRatioZero) est.infeasible = true;
        continue;
      }
      if (best.accept(h.value / lw.value)) {
        est.witness.kind = "indicator-pair";
        est.witness.A = mask_to_set(h.mask);
        est.witness.B = mask_to_set(lw.mask);
        est.witness.epsA = h.eps;
        est.witness.epsB = lw.eps;
        est.witness.numerator = h.value;
        est.witness.denominator = lw.value;
      }
    }
  est.value = std::max(best.value, 0.0);
  return est;
}

// Delta (SLC): sup ||f + 1_{eps,A}|| / ||f + 1_{eta,B}|| over disjoint nonempty
// A, B away from supp(f), |A| <= |B|.  f is sup-normalized so its largest
// coefficient has modulus 1, keeping the estimate scale-invariant.
template <class Scalar>
ConstantEstimate<Scalar> estimate_slc(const Basis<Scalar>& basis, const std::vector<Vec<Scalar>>& corpus,
                                      std::string corpus_id, EvalBudget& budget) {
  const Index dim = basis.dim();
  if (dim > 16) throw BudgetError("slc search limited to dim <= 16");
  const detail::NormFrame<Scalar> frame(basis);
  const auto fam = sign_family<Scalar>(basis.space.net_order);

  ConstantEstimate<Scalar> est;
  est.name = ConstantName::Delta;
  est.corpus_id = std::move(corpus_id);
  detail::MaxTracker best;
  Vec<Scalar> work(dim);

  struct Cached {
    double max_v, min_v;
    std::vector<Scalar> max_eps, min_eps;
  };
  std::map<std::uint32_t, Cached> cache;

  // f = 0 is in the constraint set and attains the pure indicator ratios
  std::vector<Vec<Scalar>> scan;
  scan.reserve(corpus.size() + 1);
  scan.push_back(Vec<Scalar>::Zero(dim));
  scan.insert(scan.end(), corpus.begin(), corpus.end());

  for (const auto& f_raw : scan) {
    budget.reset();
    Vec<Scalar> coef = coefficients(basis, f_raw);
    const double maxc = coef.cwiseAbs().maxCoeff();
    if (maxc > detail::kRatioZero) coef /= Scalar(maxc);
    std::uint32_t suppmask = 0;
    for (Index n = 0; n < dim; ++n)
      if (std::abs(coef[n]) > kZeroTol) suppmask |= (1u << n);
    const std::uint32_t freemask = ((1u << dim) - 1u) & ~suppmask;
    if (freemask == 0) continue;

    const Vec<Scalar> tf = frame.TX * coef;  // transformed, normalized f

    // per-subset extremes over the sign patterns of ||f + 1_{eps,A}||
    cache.clear();
    for (std::uint32_t amask = freemask;; amask = (amask - 1) & freemask) {
      if (amask != 0) {
        const IndexSet A = mask_to_set(amask);
        const std::size_t k = A.size();
        Cached c{-1.0, std::numeric_limits<double>::infinity(), {}, {}};
        std::vector<int> digit(k, 0);
        std::vector<Scalar> eps(k);
        while (true) {
          work = tf;
          for (std::size_t j = 0; j < k; ++j) {
            eps[j] = fam[static_cast<std::size_t>(digit[j])];
            work += eps[j] * frame.TX.col(A[j]);
          }
          const double v = frame.norm_of(work, budget);
          if (v > c.max_v) {
            c.max_v = v;
            c.max_eps = eps;
          }
          if (v < c.min_v) {
            c.min_v = v;
            c.min_eps = eps;
          }
          std::size_t pos = 0;
          while (pos < k && ++digit[pos] == static_cast<int>(fam.size())) digit[pos++] = 0;
          if (pos == k) break;
        }
        cache.emplace(amask, std::move(c));
      }
      if (amask == 0) break;
    }

    // disjoint pairs A, B inside the free indices with |A| <= |B|
    for (std::uint32_t amask = freemask;; amask = (amask - 1) & freemask) {
      if (amask != 0) {
        const std::uint32_t rest = freemask & ~amask;
        const int ka = std::popcount(amask);
        for (std::uint32_t bmask = rest;; bmask = (bmask - 1) & rest) {
          if (bmask != 0 && ka <= std::popcount(bmask)) {
            const auto& num = cache.at(amask);
            const auto& den = cache.at(bmask);
            if (den.min_v <= detail::kRatioZero) {
              if (num.max_v > detail::kRatioZero) est.infeasible = true;
            } else if (best.accept(num.max_v / den.min_v)) {
              est.witness.kind = "slc";
              est.witness.f = basis.X * coef;
              est.witness.A = mask_to_set(amask);
              est.witness.B = mask_to_set(bmask);
              est.witness.epsA = num.max_eps;
              est.witness.epsB = den.min_eps;
              est.witness.numerator = num.max_v;
              est.witness.denominator = den.min_v;
            }
          }
          if (bmask == 0) break;
        }
      }
      if (amask == 0) break;
    }
  }
  est.value = std::max(best.value, 0.0);
  return est;
}

// Cplus: sup ||f|| / ||f + g|| over disjointly supported pairs with g having
// nonnegative real coefficients.  extra_pairs lets the caller feed the
// Lemma-3.2 chain decomposition of another witness into the same scan.
template <class Scalar>
ConstantEstimate<Scalar> estimate_positive_cone(
    const Basis<Scalar>& basis, const std::vector<Vec<Scalar>>& corpus, std::string corpus_id,
    EvalBudget& budget,
    const std::vector<std::pair<Vec<Scalar>, Vec<Scalar>>>& extra_pairs = {}) {
  const Index dim = basis.dim();
  const detail::NormFrame<Scalar> frame(basis);
  ConstantEstimate<Scalar> est;
  est.name = ConstantName::Cplus;
  est.corpus_id = std::move(corpus_id);
  detail::MaxTracker best;

  struct Item {
    Vec<Scalar> tf;
    double norm;
    std::uint32_t supp;
    bool positive;
  };
  std::vector<Item> items;
  items.reserve(corpus.size());
  EvalBudget prep(std::max<std::uint64_t>(budget.cap, corpus.size() + 16));
  for (const auto& f : corpus) {
    Item it;
    const Vec<Scalar> coef = coefficients(basis, f);
    it.supp = 0;
    it.positive = true;
    for (Index n = 0; n < dim; ++n) {
      const double a = std::abs(coef[n]);
      if (a > kZeroTol) it.supp |= (1u << n);
      if (std::real(coef[n]) < -kZeroTol || std::abs(std::imag(coef[n])) > kZeroTol) it.positive = false;
    }
    it.tf = frame.transform(f);
    it.norm = frame.norm_of(it.tf, prep);
    items.push_back(std::move(it));
  }

  Vec<Scalar> work(dim);
  const auto consider = [&](const Vec<Scalar>& tx, double nx, const Vec<Scalar>& ty,
                            const Vec<Scalar>& fx, const Vec<Scalar>& fy) {
    work = tx + ty;
    const double den = frame.norm_of(work, budget);
    if (den <= detail::kRatioZero) {
      if (nx > detail::kRatioZero) est.infeasible = true;
      return;
    }
    if (nx <= detail::kRatioZero) return;
    if (best.accept(nx / den)) {
      est.witness.kind = "positive-cone";
      est.witness.f = fx;
      est.witness.g = fy;
      est.witness.numerator = nx;
      est.witness.denominator = den;
    }
  };

  // g = 0 baseline
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].norm > detail::kRatioZero) {
      best.accept(1.0);
      est.witness.kind = "positive-cone";
      est.witness.f = corpus[i];
      est.witness.g = Vec<Scalar>::Zero(dim);
      est.witness.numerator = items[i].norm;
      est.witness.denominator = items[i].norm;
      break;
    }

  for (std::size_t i = 0; i < items.size(); ++i) {
    budget.reset();
    for (std::size_t j = 0; j < items.size(); ++j) {
      if (i == j || !items[j].positive || (items[i].supp & items[j].supp)) continue;
      consider(items[i].tf, items[i].norm, items[j].tf, corpus[i], corpus[j]);
    }
  }
  for (const auto& [x, y] : extra_pairs) {
    budget.reset();
    const Vec<Scalar> tx = frame.transform(x);
    const Vec<Scalar> ty = frame.transform(y);
    consider(tx, frame.norm_of(tx, budget), ty, x, y);
  }
  est.value = std::max(best.value, 0.0);
  return est;
}

// GammaT: sup over f, m, greedy sets of threshold * ||1_{eps(f),A}|| / ||f||.
template <class Scalar>
ConstantEstimate<Scalar> estimate_truncation(const Basis<Scalar>& basis,
                                             const std::vector<Vec<Scalar>>& corpus,
                                             std::string corpus_id, EvalBudget& budget) {
  if (corpus.empty()) throw InputError("empty corpus");
  const detail::NormFrame<Scalar> frame(basis);
  ConstantEstimate<Scalar> est;
  est.name = ConstantName::GammaT;
  est.corpus_id = std::move(corpus_id);
  detail::MaxTracker best;
  Vec<Scalar> work(basis.dim());

  for (const auto& f : corpus) {
    budget.reset();
    const Vec<Scalar> coef = coefficients(basis, f);
    const Eigen::VectorXd mags = coef.cwiseAbs();
    const Vec<Scalar> tf = frame.transform(f);
    const double nf = frame.norm_of(tf, budget);
    if (nf <= detail::kRatioZero) continue;
    const auto pi = greedy_ordering_from_magnitudes(mags);
    for (Index m = 1; m <= basis.dim(); ++m) {
      const double alpha = mags[pi[m - 1]];
      if (alpha <= detail::kRatioZero) break;
      const auto fam = greedy_sets_from_magnitudes(mags, m);
      for (const auto& A : fam.sets) {
        work.setZero();
        for (Index n : A) work += sign_of(coef[n]) * frame.TX.col(n);
        const double num = alpha * frame.norm_of(work, budget);
        if (best.accept(num / nf)) {
          est.witness.kind = "truncation";
          est.witness.f = f;
          est.witness.A = A;
          est.witness.m = m;
          est.witness.epsA.clear();
          for (Index n : A) est.witness.epsA.push_back(sign_of(coef[n]));
          est.witness.numerator = num;
          est.witness.denominator = nf;
        }
      }
    }
  }
  est.value = std::max(best.value, 0.0);
  return est;
}

// Cq — quasi-greedy: sup ||f - P_A f|| / ||f|| over greedy sets of all orders.
template <class Scalar>
ConstantEstimate<Scalar> estimate_quasi_greedy(const Basis<Scalar>& basis,
                                               const std::vector<Vec<Scalar>>& corpus,
                                               std::string corpus_id, EvalBudget& budget) {
  if (corpus.empty()) throw InputError("empty corpus");
  const detail::NormFrame<Scalar> frame(basis);
  ConstantEstimate<Scalar> est;
  est.name = ConstantName::Cq;
  est.corpus_id = std::move(corpus_id);
  detail::MaxTracker best;
  Vec<Scalar> work(basis.dim());
  std::vector<Scalar> a;

  for (const auto& f : corpus) {
    budget.reset();
    const Vec<Scalar> coef = coefficients(basis, f);
    const Eigen::VectorXd mags = coef.cwiseAbs();
    const Vec<Scalar> tf = frame.transform(f);
    const double nf = frame.norm_of(tf, budget);
    if (nf <= detail::kRatioZero) continue;
    for (Index m = 0; m <= basis.dim(); ++m) {
      const auto fam = greedy_sets_from_magnitudes(mags, m);
      for (const auto& A : fam.sets) {
        a.resize(A.size());
        for (std::size_t j = 0; j < A.size(); ++j) a[j] = coef[A[j]];
        const double num = detail::residual_norm(frame, tf, A, a.data(), work, budget);
        if (best.accept(num / nf)) {
          est.witness.kind = "residual-over-norm";
          est.witness.f = f;
          est.witness.A = A;
          est.witness.m = m;
          est.witness.numerator = num;
          est.witness.denominator = nf;
        }
      }
    }
  }
  est.value = std::max(best.value, 0.0);
  return est;
}

template <class Scalar>
struct RatioEstimates {
  ConstantEstimate<Scalar> cq, cg, cag, cpg, cpgu;
};

// Shared pass for Cq/Cg/Cag/Cpg/Cpgu: one denominator table per element, the
// same residual numerators for all five.  `extras` are additional elements
// (witness-repair vectors) that join this scan only.
template <class Scalar>
RatioEstimates<Scalar> ratio_estimates(const Basis<Scalar>& basis,
                                       const std::vector<Vec<Scalar>>& corpus,
                                       const std::vector<Vec<Scalar>>& extras,
                                       std::string corpus_id, EvalBudget& budget) {
  const Index dim = basis.dim();
  if (dim > 16) throw BudgetError("ratio estimates limited to dim <= 16");
  const detail::NormFrame<Scalar> frame(basis);
  RatioEstimates<Scalar> out;
  out.cq.name = ConstantName::Cq;
  out.cg.name = ConstantName::Cg;
  out.cag.name = ConstantName::Cag;
  out.cpg.name = ConstantName::Cpg;
  out.cpgu.name = ConstantName::Cpgu;
  for (auto* e : {&out.cq, &out.cg, &out.cag, &out.cpg, &out.cpgu}) e->corpus_id = corpus_id;

  detail::MaxTracker bq, bg, bag, bpg, bpgu;
  Vec<Scalar> work(dim);
  const std::uint32_t total = 1u << dim;
  std::vector<double> resid(total);

  const auto scan = [&](const Vec<Scalar>& f) {
    budget.reset();
    const Vec<Scalar> coef = coefficients(basis, f);
    const Eigen::VectorXd mags = coef.cwiseAbs();
    const Vec<Scalar> tf = frame.transform(f);

    // residual norm for every projection complement, reused everywhere below
    std::vector<Scalar> a;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
      const IndexSet B = mask_to_set(mask);
      a.resize(B.size());
      for (std::size_t j = 0; j < B.size(); ++j) a[j] = coef[B[j]];
      resid[mask] = detail::residual_norm(frame, tf, B, a.data(), work, budget);
    }
    const double nf = resid[0];
    if (nf <= detail::kRatioZero) return;

    // sigma by size -> prefix min; best projection by popcount -> prefix min
    auto by_size = detail::sigma_by_size(basis, f, dim, budget);
    std::vector<double> sigma(static_cast<std::size_t>(dim) + 1), bpe(static_cast<std::size_t>(dim) + 1,
                                                                     std::numeric_limits<double>::infinity());
    for (std::uint32_t mask = 0; mask < total; ++mask) {
      auto& slot = bpe[static_cast<std::size_t>(std::popcount(mask))];
      slot = std::min(slot, resid[mask]);
    }
    double acc = std::numeric_limits<double>::infinity();
    for (Index m = 0; m <= dim; ++m) {
      acc = std::min(acc, by_size[static_cast<std::size_t>(m)].value);
      sigma[static_cast<std::size_t>(m)] = acc;
      if (m > 0)
        bpe[static_cast<std::size_t>(m)] = std::min(bpe[static_cast<std::size_t>(m)], bpe[static_cast<std::size_t>(m - 1)]);
    }

    const auto note = [&](detail::MaxTracker& tr, ConstantEstimate<Scalar>& est, const char* kind,
                          double num, double den, const IndexSet& A, Index m) {
      if (den <= detail::kRatioZero) {
        if (num > detail::kRatioZero) est.infeasible = true;
        return;
      }
      if (tr.accept(num / den)) {
        est.witness.kind = kind;
        est.witness.f = f;
        est.witness.A = A;
        est.witness.m = m;
        est.witness.numerator = num;
        est.witness.denominator = den;
      }
    };

    for (Index m = 0; m <= dim; ++m) {
      double rho = -1.0, varrho = -1.0;
      if (m >= 1) {
        rho = detail::rho_like(basis, f, m, true, budget).value;
        varrho = detail::rho_like(basis, f, m, false, budget).value;
      }
      const auto fam = greedy_sets_from_magnitudes(mags, m);
      for (const auto& A : fam.sets) {
        const double num = resid[set_to_mask(A)];
        note(bq, out.cq, "residual-over-norm", num, nf, A, m);
        note(bg, out.cg, "residual-over-sigma", num, sigma[static_cast<std::size_t>(m)], A, m);
        note(bag, out.cag, "residual-over-projection", num, bpe[static_cast<std::size_t>(m)], A, m);
        if (m >= 1) {
          note(bpg, out.cpg, "residual-over-rho", num, rho, A, m);
          note(bpgu, out.cpgu, "residual-over-varrho", num, varrho, A, m);
        }
      }
    }
  };

  for (const auto& f : corpus) scan(f);
  for (const auto& f : extras) scan(f);
  out.cq.value = std::max(bq.value, 0.0);
  out.cg.value = std::max(bg.value, 0.0);
  out.cag.value = std::max(bag.value, 0.0);
  out.cpg.value = std::max(bpg.value, 0.0);
  out.cpgu.value = std::max(bpgu.value, 0.0);
  return out;
}

template <class Scalar>
struct ThagEstimates {
  ConstantEstimate<Scalar> cdis, cend, cend2;
};

// Theorem-2 style ratios ||f - P_A f|| / ||f - a 1_{eps,B}||:
//   Cdis : A,B disjoint, |B| <= |A|, signed, a from a grid around the
//          threshold plus a golden-section refinement of the best bracket;
//   Cend : A < B or B < A, |B| <= |A|, signed, a = threshold;
//   Cend2: A < B or B < A, |B| == |A|, unsigned,  a = threshold.
// One evaluation loop feeds all three so the chain Cend2 <= Cend <= Cdis is
// exact on the shared candidates.
template <class Scalar>
ThagEstimates<Scalar> estimate_thag_variants(const Basis<Scalar>& basis,
                                             const std::vector<Vec<Scalar>>& corpus,
                                             std::string corpus_id, EvalBudget& budget) {
  const Index dim = basis.dim();
  if (dim > 16) throw BudgetError("thag search limited to dim <= 16");
  const detail::NormFrame<Scalar> frame(basis);
  ThagEstimates<Scalar> out;
  out.cdis.name = ConstantName::Cdis;
  out.cend.name = ConstantName::Cend;
  out.cend2.name = ConstantName::Cend2;
  for (auto* e : {&out.cdis, &out.cend, &out.cend2}) e->corpus_id = corpus_id;
  detail::MaxTracker bdis, bend, bend2;
  Vec<Scalar> work(dim);
  const std::uint32_t total = 1u << dim;
  std::vector<double> resid(total);
  const auto fam_signs = sign_family<Scalar>(basis.space.net_order);

  const auto note = [&](detail::MaxTracker& tr, ConstantEstimate<Scalar>& est, const Vec<Scalar>& f,
                        double num, double den, const IndexSet& A, const IndexSet& B,
                        const std::vector<Scalar>& eps, double a, Index m) {
    if (den <= detail::kRatioZero) {
      if (num > detail::kRatioZero) est.infeasible = true;
      return;
    }
    if (tr.accept(num / den)) {
      est.witness.kind = "thag";
      est.witness.f = f;
      est.witness.A = A;
      est.witness.B = B;
      est.witness.epsB = eps;
      est.witness.a_coeff = a;
      est.witness.m = m;
      est.witness.numerator = num;
      est.witness.denominator = den;
    }
  };

  for (const auto& f : corpus) {
    budget.reset();
    const Vec<Scalar> coef = coefficients(basis, f);
    const Eigen::VectorXd mags = coef.cwiseAbs();
    const Vec<Scalar> tf = frame.transform(f);
    std::vector<Scalar> a;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
      const IndexSet B = mask_to_set(mask);
      a.resize(B.size());
      for (std::size_t j = 0; j < B.size(); ++j) a[j] = coef[B[j]];
      resid[mask] = detail::residual_norm(frame, tf, B, a.data(), work, budget);
    }
    const double nf = resid[0];
    if (nf <= detail::kRatioZero) continue;

    for (Index m = 0; m <= dim; ++m) {
      const double alpha = m >= 1 ? mags[greedy_ordering_from_magnitudes(mags)[m - 1]] : 0.0;
      const auto fam = greedy_sets_from_magnitudes(mags, m);
      for (const auto& A : fam.sets) {
        const std::uint32_t amask = set_to_mask(A);
        const double num = resid[amask];
        // B = empty: a 1_B = 0 for every a; counts for all variants when legal
        note(bdis, out.cdis, f, num, nf, A, {}, {}, 0.0, m);
        note(bend, out.cend, f, num, nf, A, {}, {}, alpha, m);
        if (m == 0) note(bend2, out.cend2, f, num, nf, A, {}, {}, alpha, m);
        if (m == 0) continue;

        const std::uint32_t comp = (total - 1u) & ~amask;
        const Index lo_a = A.front(), hi_a = A.back();
        for (std::uint32_t bmask = comp;; bmask = (bmask - 1) & comp) {
          if (bmask != 0 && std::popcount(bmask) <= static_cast<int>(m)) {
            const IndexSet B = mask_to_set(bmask);
            const std::size_t kb = B.size();
            const bool ordered = B.front() > hi_a || B.back() < lo_a;
            std::vector<int> digit(kb, 0);
            std::vector<Scalar> eps(kb), ca(kb);
            while (true) {
              for (std::size_t j = 0; j < kb; ++j) eps[j] = fam_signs[static_cast<std::size_t>(digit[j])];
              const bool unsigned_eps =
                  std::all_of(digit.begin(), digit.end(), [](int d) { return d == 0; });

              const auto den_at = [&](double aval) {
                for (std::size_t j = 0; j < kb; ++j) ca[j] = Scalar(aval) * eps[j];
                return detail::residual_norm(frame, tf, B, ca.data(), work, budget);
              };

              // the 9-point grid in threshold units, then refine around the min
              static constexpr double kGrid[9] = {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0};
              double best_den = std::numeric_limits<double>::infinity();
              double best_aval = 0.0;
              for (double gmul : kGrid) {
                const double aval = gmul * alpha;
                const double den = den_at(aval);
                if (ordered && aval == alpha) {
                  note(bend, out.cend, f, num, den, A, B, eps, aval, m);
                  if (unsigned_eps && std::popcount(bmask) == static_cast<int>(m))
                    note(bend2, out.cend2, f, num, den, A, B, eps, aval, m);
                }
                if (den < best_den) {
                  best_den = den;
                  best_aval = aval;
                }
              }
              double dis_den = best_den;
              double dis_a = best_aval;
              {
                // golden refinement of a around the bracketing grid interval
                double lo = best_aval - alpha, hi = best_aval + alpha;
                const double gr = 0.6180339887498949;
                double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
                double f1 = den_at(x1), f2 = den_at(x2);
                for (int it = 0; it < 24; ++it) {
                  if (f1 < f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = den_at(x1);
                  } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = den_at(x2);
                  }
                }
                const double mid = 0.5 * (lo + hi);
                const double dm = den_at(mid);
                if (dm < dis_den) {
                  dis_den = dm;
                  dis_a = mid;
                }
              }
              note(bdis, out.cdis, f, num, dis_den, A, B, eps, dis_a, m);

              std::size_t pos = 0;
              while (pos < kb && ++digit[pos] == static_cast<int>(fam_signs.size())) digit[pos++] = 0;
              if (pos == kb) break;
            }
          }
          if (bmask == 0) break;
        }
      }
    }
  }
  out.cdis.value = std::max(bdis.value, 0.0);
  out.cend.value = std::max(bend.value, 0.0);
  out.cend2.value = std::max(bend2.value, 0.0);
  return out;
}

// ---- closed-form pieces (src/geometry.cpp) ----

// eta_p(u) = min over t in (0,1) of (1-t^p)^(-1/p) (1-(1+t/(A_p u))^(-p))^(-1/p)
double eta_p(double p, double u);
double eta_p_objective(double p, double u, double t);

// smallest N with coverage 2 sin(pi/(2N)) <= delta
int min_net_order(double delta);

struct SignNet {
  std::vector<std::complex<double>> net;
  int j1 = 1;
};
// roots-of-unity net at spacing delta = (2^{1/p} k1 B_p)^{-1}
SignNet sign_net(double p, double k1);

struct Lemma32Constants {
  double k1 = 1.0;  // (1 + c^p)^{1/p}
  int j1 = 1;
  double k2 = 1.0;  // (3 j1)^{1/p} k1
};
Lemma32Constants lemma32_constants(double p, double c);

// ---- bound ledger ----

enum class LedgerStatus { Holds, Violated, NotApplicable };

inline const char* to_string(LedgerStatus s) {
  switch (s) {
    case LedgerStatus::Holds: return "holds";
    case LedgerStatus::Violated: return "violated";
    case LedgerStatus::NotApplicable: return "not-applicable";
  }
  return "?";
}

struct LedgerEntry {
  std::string id;
  std::string lhs_name;
  double lhs_value = 0.0;
  std::string rhs_formula;
  double rhs_value = 0.0;
  LedgerStatus status = LedgerStatus::NotApplicable;
  bool asserted = false;
};

struct BoundLedger {
  std::vector<LedgerEntry> entries;
};

struct LedgerInputs {
  std::map<std::string, double> values;  // by constant short name
  double p = 1.0;
  FieldKind field = FieldKind::Real;
  bool exact_constant_family = false;  // canonical family: assert everything
  bool closure_lemma41 = false;
  bool closure_lemma42 = false;
  bool closure_lemma32real = false;
};

BoundLedger bound_ledger(const LedgerInputs& in);

// Recomputes the ratio described by a witness; tests check it against value.
template <class Scalar>
double reevaluate(const Basis<Scalar>& basis, const ConstantEstimate<Scalar>& est) {
  EvalBudget budget(std::uint64_t(1) << 62);
  const detail::NormFrame<Scalar> frame(basis);
  Vec<Scalar> work(basis.dim());
  const auto& w = est.witness;
  const auto norm_of_ambient = [&](const Vec<Scalar>& v) {
    const Vec<Scalar> t = frame.transform(v);
    return frame.norm_of(t, budget);
  };

  if (w.kind == "projection") {
    const Vec<Scalar> coef = coefficients(basis, w.f);
    return detail::masked_norm(frame, coef, set_to_mask(w.A), work, budget) / norm_of_ambient(w.f);
  }
  if (w.kind == "indicator-pair") {
    SignPattern<Scalar> ea{w.A, w.epsA}, eb{w.B, w.epsB};
    return norm_of_ambient(indicator(basis, w.A, ea)) / norm_of_ambient(indicator(basis, w.B, eb));
  }
  if (w.kind == "slc") {
    SignPattern<Scalar> ea{w.A, w.epsA}, eb{w.B, w.epsB};
    const Vec<Scalar> num = w.f + indicator(basis, w.A, ea);
    const Vec<Scalar> den = w.f + indicator(basis, w.B, eb);
    return norm_of_ambient(num) / norm_of_ambient(den);
  }
  if (w.kind == "positive-cone") {
    const Vec<Scalar> s = w.f + w.g;
    return norm_of_ambient(w.f) / norm_of_ambient(s);
  }
  if (w.kind == "truncation") {
    const Vec<Scalar> coef = coefficients(basis, w.f);
    const double alpha = mth_threshold(basis, w.f, w.m);
    Vec<Scalar> acc = Vec<Scalar>::Zero(basis.dim());
    for (Index n : w.A) acc += sign_of(coef[n]) * basis.X.col(n);
    return alpha * norm_of_ambient(acc) / norm_of_ambient(w.f);
  }
  if (w.kind == "thag") {
    const Vec<Scalar> num = w.f - project(basis, w.f, w.A);
    Vec<Scalar> den = w.f;
    for (std::size_t j = 0; j < w.B.size(); ++j) den -= Scalar(w.a_coeff) * w.epsB[j] * basis.X.col(w.B[j]);
    return norm_of_ambient(num) / norm_of_ambient(den);
  }
  // the residual-over-* family
  const Vec<Scalar> num = w.f - project(basis, w.f, w.A);
  double den = 0.0;
  if (w.kind == "residual-over-norm")
    den = norm_of_ambient(w.f);
  else if (w.kind == "residual-over-sigma")
    den = sigma_m(basis, w.f, w.m, budget).value;
  else if (w.kind == "residual-over-projection")
    den = best_projection_error(basis, w.f, w.m, budget).value;
  else if (w.kind == "residual-over-rho")
    den = rho_m(basis, w.f, w.m, budget).value;
  else if (w.kind == "residual-over-varrho")
    den = varrho_m(basis, w.f, w.m, budget).value;
  else
    throw InputError("unknown witness kind: " + w.kind);
  return norm_of_ambient(num) / den;
}

// the four individually named wrappers over the shared pass
template <class Scalar>
ConstantEstimate<Scalar> estimate_greedy(const Basis<Scalar>& basis, const std::vector<Vec<Scalar>>& corpus,
                                         std::string corpus_id, EvalBudget& budget) {
  return ratio_estimates(basis, corpus, {}, std::move(corpus_id), budget).cg;
}
template <class Scalar>
ConstantEstimate<Scalar> estimate_almost_greedy(const Basis<Scalar>& basis,
                                                const std::vector<Vec<Scalar>>& corpus,
                                                std::string corpus_id, EvalBudget& budget) {
  return ratio_estimates(basis, corpus, {}, std::move(corpus_id), budget).cag;
}
template <class Scalar>
ConstantEstimate<Scalar> estimate_rgpcc(const Basis<Scalar>& basis, const std::vector<Vec<Scalar>>& corpus,
                                        std::string corpus_id, EvalBudget& budget) {
  return ratio_estimates(basis, corpus, {}, std::move(corpus_id), budget).cpg;
}
template <class Scalar>
ConstantEstimate<Scalar> estimate_urgpcc(const Basis<Scalar>& basis, const std::vector<Vec<Scalar>>& corpus,
                                         std::string corpus_id, EvalBudget& budget) {
  return ratio_estimates(basis, corpus, {}, std::move(corpus_id), budget).cpgu;
}

}  // namespace greedy
