// Full verification runs: corpus generation, closure, pointwise chain checks,
// the estimator pass with witness-repair support vectors, and the bound
// ledger.  Produces a deterministic structured report.
#pragma once

#include "greedy/catalog.hpp"
#include "greedy/constants.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <thread>

namespace greedy {

struct RunOptions {
  std::uint64_t budget_cap = default_budget_cap();
  int threads = 1;
  bool timings = false;  // timings are nondeterministic, so opt-in
};

struct ChainViolation {
  std::size_t item = 0;
  Index m = 0;
  std::string kind;
  double lhs = 0.0, rhs = 0.0;
};

struct StageStatus {
  std::string name;
  std::string status;  // ok | budget-exceeded | error
  std::string detail;
};

// per-(f, m) error table row, also the CSV payload
struct ErrorRow {
  std::size_t item = 0;
  Index m = 0;
  double residual = 0.0;  // max over the greedy-set family
  double sigma = 0.0;
  double rho = -1.0;     // undefined at m = 0
  double varrho = -1.0;  // undefined at m = 0
  double best_projection = 0.0;
};

template <class Scalar>
struct RunReport {
  std::string basis_id;
  Index dim = 0;
  double p = 1.0;
  FieldKind field = FieldKind::Real;
  bool exact_constant_family = false;
  double c1 = 0.0, c2_estimate = 0.0;

  CorpusSpec spec;
  std::size_t corpus_base = 0, corpus_closed = 0;
  std::map<std::string, std::size_t> closure_counts;
  std::string corpus_id;

  std::vector<ConstantEstimate<Scalar>> estimates;
  BoundLedger ledger;
  std::vector<ChainViolation> violations;
  std::vector<StageStatus> stages;
  std::vector<ErrorRow> rows;
  double elapsed_seconds = -1.0;  // only when options.timings

  bool passed() const {
    if (!violations.empty()) return false;
    for (const auto& e : ledger.entries)
      if (e.asserted && e.status == LedgerStatus::Violated) return false;
    for (const auto& s : stages)
      if (s.status == "error") return false;
    return true;
  }
  bool budget_hit() const {
    for (const auto& s : stages)
      if (s.status == "budget-exceeded") return true;
    return false;
  }
};

namespace detail {

// chunked deterministic parallel-for; results must be written to disjoint slots
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  const int nt = std::min<int>(threads, static_cast<int>(n));
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace detail

template <class Scalar>
RunReport<Scalar> run_verification(const Basis<Scalar>& basis, const CorpusSpec& spec,
                                   const RunOptions& options = {}) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  RunReport<Scalar> report;
  report.basis_id = basis.label;
  report.dim = basis.dim();
  report.p = basis.space.p;
  report.field = basis.space.field;
  report.exact_constant_family = basis.exact_constant_family;
  report.c1 = basis.c1;
  report.c2_estimate = basis.c2;
  report.spec = spec;

  const auto stage = [&](const std::string& name, auto&& body) {
    try {
      body();
      report.stages.push_back({name, "ok", ""});
      return true;
    } catch (const BudgetError& e) {
      report.stages.push_back({name, "budget-exceeded", e.what()});
    } catch (const std::exception& e) {
      report.stages.push_back({name, "error", e.what()});
    }
    return false;
  };

  // 1. corpus + closure
  std::vector<Vec<Scalar>> corpus;
  std::vector<ClosureRecord> closure_records;
  stage("corpus", [&] {
    corpus = generate_corpus(basis, spec);
    report.corpus_base = corpus.size();
    corpus = close_corpus(basis, corpus, spec, &closure_records);
    report.corpus_closed = corpus.size();
    for (const auto& r : closure_records) ++report.closure_counts[r.kind];
    report.corpus_id = corpus_id_string(basis, spec, corpus.size());
  });
  if (corpus.empty()) return report;

  const detail::NormFrame<Scalar> frame(basis);
  const Index dim = basis.dim();
  const std::uint32_t total = 1u << dim;

  // 2. error table + pointwise chain checks (sigma <= rho <= varrho, sigma <=
  // best projection, sigma/best-projection monotone in m)
  struct ItemErrors {
    std::vector<double> sigma, rho, varrho, bpe, resid_max;
    bool ok = false;
  };
  std::vector<ItemErrors> table(corpus.size());
  stage("error-table", [&] {
    detail::parallel_for(corpus.size(), options.threads, [&](std::size_t idx) {
      EvalBudget budget(options.budget_cap);
      const Vec<Scalar>& f = corpus[idx];
      ItemErrors it;
      const auto md = static_cast<std::size_t>(dim) + 1;
      it.sigma.resize(md);
      it.rho.assign(md, -1.0);
      it.varrho.assign(md, -1.0);
      it.bpe.assign(md, std::numeric_limits<double>::infinity());
      it.resid_max.assign(md, 0.0);

      const Vec<Scalar> coef = coefficients(basis, f);
      const Eigen::VectorXd mags = coef.cwiseAbs();
      const Vec<Scalar> tf = frame.transform(f);
      Vec<Scalar> work(dim);
      std::vector<double> resid(total);
      std::vector<Scalar> a;
      for (std::uint32_t mask = 0; mask < total; ++mask) {
        const IndexSet B = mask_to_set(mask);
        a.resize(B.size());
        for (std::size_t j = 0; j < B.size(); ++j) a[j] = coef[B[j]];
        resid[mask] = detail::residual_norm(frame, tf, B, a.data(), work, budget);
        auto& slot = it.bpe[static_cast<std::size_t>(std::popcount(mask))];
        slot = std::min(slot, resid[mask]);
      }
      const auto by_size = detail::sigma_by_size(basis, f, dim, budget);
      double acc = std::numeric_limits<double>::infinity();
      for (Index m = 0; m <= dim; ++m) {
        acc = std::min(acc, by_size[static_cast<std::size_t>(m)].value);
        it.sigma[static_cast<std::size_t>(m)] = acc;
        if (m > 0)
          it.bpe[static_cast<std::size_t>(m)] =
              std::min(it.bpe[static_cast<std::size_t>(m)], it.bpe[static_cast<std::size_t>(m - 1)]);
        if (m >= 1) {
          it.rho[static_cast<std::size_t>(m)] = detail::rho_like(basis, f, m, true, budget).value;
          it.varrho[static_cast<std::size_t>(m)] = detail::rho_like(basis, f, m, false, budget).value;
        }
        const auto fam = greedy_sets_from_magnitudes(mags, m);
        for (const auto& A : fam.sets)
          it.resid_max[static_cast<std::size_t>(m)] =
              std::max(it.resid_max[static_cast<std::size_t>(m)], resid[set_to_mask(A)]);
      }
      it.ok = true;
      table[idx] = std::move(it);
    });
  });

  stage("chain-checks", [&] {
    constexpr double tol = 1e-9;
    for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
      const auto& it = table[idx];
      if (!it.ok) continue;
      for (Index m = 0; m <= dim; ++m) {
        const auto mi = static_cast<std::size_t>(m);
        report.rows.push_back({idx, m, it.resid_max[mi], it.sigma[mi], it.rho[mi], it.varrho[mi], it.bpe[mi]});
        if (m >= 1) {
          if (it.sigma[mi] > it.rho[mi] + tol)
            report.violations.push_back({idx, m, "sigma<=rho", it.sigma[mi], it.rho[mi]});
          if (it.rho[mi] > it.varrho[mi] + tol)
            report.violations.push_back({idx, m, "rho<=varrho", it.rho[mi], it.varrho[mi]});
          if (it.sigma[mi] > it.sigma[mi - 1] + tol)
            report.violations.push_back({idx, m, "sigma-monotone", it.sigma[mi], it.sigma[mi - 1]});
          if (it.bpe[mi] > it.bpe[mi - 1] + tol)
            report.violations.push_back({idx, m, "best-projection-monotone", it.bpe[mi], it.bpe[mi - 1]});
        }
        if (it.sigma[mi] > it.bpe[mi] + tol)
          report.violations.push_back({idx, m, "sigma<=best-projection", it.sigma[mi], it.bpe[mi]});
      }
    }
  });

  // 3. estimators
  std::optional<ConstantEstimate<Scalar>> K, D, Ds, Delta, Cplus, GammaT;
  stage("unconditionality", [&] {
    EvalBudget budget(options.budget_cap);
    K = estimate_unconditionality(basis, corpus, report.corpus_id, budget);
  });
  stage("democracy", [&] {
    EvalBudget budget(options.budget_cap);
    D = estimate_democracy(basis, false, budget);
    D->corpus_id = report.corpus_id;
    EvalBudget budget2(options.budget_cap);
    Ds = estimate_democracy(basis, true, budget2);
    Ds->corpus_id = report.corpus_id;
  });
  stage("slc", [&] {
    EvalBudget budget(options.budget_cap);
    Delta = estimate_slc(basis, corpus, report.corpus_id, budget);
  });
  stage("positive-cone", [&] {
    EvalBudget budget(options.budget_cap);
    // feed the Lemma-3.2 chain decomposition of the unconditionality witness
    std::vector<std::pair<Vec<Scalar>, Vec<Scalar>>> extra;
    if (K && K->witness.f.size() > 0 && !scalar_traits<Scalar>::is_complex) {
      const Vec<Scalar> cu = coefficients(basis, K->witness.f);
      const std::uint32_t amask = set_to_mask(K->witness.A);
      Vec<Scalar> cf = Vec<Scalar>::Zero(dim), g1 = Vec<Scalar>::Zero(dim), g2 = Vec<Scalar>::Zero(dim);
      for (Index i = 0; i < dim; ++i) {
        if (amask & (1u << i))
          cf[i] = cu[i];
        else if (std::real(cu[i]) > 0)
          g1[i] = cu[i];
        else
          g2[i] = -cu[i];
      }
      const Vec<Scalar> f_amb = basis.X * cf;
      const Vec<Scalar> g1_amb = basis.X * g1;
      const Vec<Scalar> g2_amb = basis.X * g2;
      extra.emplace_back(f_amb, g1_amb);
      extra.emplace_back(Vec<Scalar>(-(f_amb + g1_amb)), g2_amb);
    }
    Cplus = estimate_positive_cone(basis, corpus, report.corpus_id, budget, extra);
  });
  stage("truncation", [&] {
    EvalBudget budget(options.budget_cap);
    GammaT = estimate_truncation(basis, corpus, report.corpus_id, budget);
  });

  // witness-repair vectors joining the residual-ratio scans, so the
  // closure-backed ledger chains hold by construction
  std::vector<Vec<Scalar>> extras;
  {
    const auto pad_from_witness = [&](const Vec<Scalar>& f, const IndexSet& A, bool signed_pad)
        -> std::optional<Vec<Scalar>> {
      const Vec<Scalar> cu = coefficients(basis, f);
      const std::uint32_t amask = set_to_mask(A);
      Vec<Scalar> cf = Vec<Scalar>::Zero(dim), cg = Vec<Scalar>::Zero(dim);
      for (Index i = 0; i < dim; ++i) ((amask & (1u << i)) ? cf[i] : cg[i]) = cu[i];
      const double t0 = 2.0 * std::max(1e-12, cu.cwiseAbs().maxCoeff());
      auto padded = detail::pad_coeff_pair(cf, cg, signed_pad, t0);
      if (!padded) return std::nullopt;
      return Vec<Scalar>(basis.X * padded->first);
    };
    if (K && K->witness.f.size() > 0)
      if (auto h = pad_from_witness(K->witness.f, K->witness.A, true)) extras.push_back(*h);
    if (Cplus && Cplus->witness.f.size() > 0 && Cplus->witness.g.size() > 0) {
      const Vec<Scalar> sum = Cplus->witness.f + Cplus->witness.g;
      const Vec<Scalar> cs = coefficients(basis, Cplus->witness.f);
      IndexSet keep;
      for (Index i = 0; i < dim; ++i)
        if (std::abs(cs[i]) > kZeroTol) keep.push_back(i);
      if (auto h = pad_from_witness(sum, keep, false)) extras.push_back(*h);
    }
    if (Delta && Delta->witness.f.size() > 0) {
      // tie vector f + 1_{eps,A} + 1_{eta,B}; B is a greedy set of it
      Vec<Scalar> cg = coefficients(basis, Delta->witness.f);
      for (std::size_t j = 0; j < Delta->witness.A.size(); ++j)
        cg[Delta->witness.A[j]] += Delta->witness.epsA[j];
      for (std::size_t j = 0; j < Delta->witness.B.size(); ++j)
        cg[Delta->witness.B[j]] += Delta->witness.epsB[j];
      extras.push_back(Vec<Scalar>(basis.X * cg));
    }
  }

  std::optional<RatioEstimates<Scalar>> ratios;
  stage("greedy-ratios", [&] {
    EvalBudget budget(options.budget_cap);
    ratios = ratio_estimates(basis, corpus, extras, report.corpus_id, budget);
  });
  std::optional<ThagEstimates<Scalar>> thag;
  stage("thag-variants", [&] {
    EvalBudget budget(options.budget_cap);
    thag = estimate_thag_variants(basis, corpus, report.corpus_id, budget);
  });

  const auto emit = [&](const std::optional<ConstantEstimate<Scalar>>& e) {
    if (e) report.estimates.push_back(*e);
  };
  emit(K);
  emit(D);
  emit(Ds);
  emit(Delta);
  if (ratios) {
    report.estimates.push_back(ratios->cq);
    report.estimates.push_back(ratios->cg);
    report.estimates.push_back(ratios->cag);
    report.estimates.push_back(ratios->cpg);
    report.estimates.push_back(ratios->cpgu);
  }
  emit(GammaT);
  if (thag) {
    report.estimates.push_back(thag->cdis);
    report.estimates.push_back(thag->cend);
    report.estimates.push_back(thag->cend2);
  }
  emit(Cplus);

  // 4. ledger
  stage("ledger", [&] {
    LedgerInputs in;
    in.p = report.p;
    in.field = report.field;
    in.exact_constant_family = report.exact_constant_family;
    in.closure_lemma41 = spec.closure.lemma41;
    in.closure_lemma42 = spec.closure.lemma42;
    in.closure_lemma32real = spec.closure.lemma32real;
    for (const auto& e : report.estimates) in.values[to_string(e.name)] = e.value;
    report.ledger = bound_ledger(in);
    for (const auto& e : report.ledger.entries)
      if (e.asserted && e.status == LedgerStatus::Violated)
        report.violations.push_back({0, 0, "ledger:" + e.id, e.lhs_value, e.rhs_value});
  });

  if (options.timings)
    report.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

}  // namespace greedy
