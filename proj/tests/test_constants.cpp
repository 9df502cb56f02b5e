#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "helpers.hpp"

#include "greedy/constants.hpp"

using namespace greedy;
using namespace greedy::testing;

namespace {

std::vector<Vec<double>> small_corpus(const Basis<double>& b, std::uint64_t seed = 7) {
  return generate_corpus(b, greedy::testing::small_spec(seed));
}

}  // namespace

TEST_CASE("eta_p closed-form check") {
  CHECK(eta_p(1.0, 1.0) == doctest::Approx(3.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-9));
  // single-point upper bound at t = 1/2
  CHECK(eta_p_objective(1.0, 1.0, 0.5) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(eta_p(1.0, 1.0) <= 6.0);
  // monotone in u (evaluated)
  CHECK(eta_p(1.0, 10.0) > eta_p(1.0, 1.0));
  // global-min sanity on a grid
  for (double p : {1.0, 0.5}) {
    const double v = eta_p(p, 2.0);
    for (int i = 1; i < 1000; ++i) {
      const double t = static_cast<double>(i) / 1000.0;
      CHECK(v <= eta_p_objective(p, 2.0, t) + 1e-12);
    }
  }
  CHECK_THROWS_AS(eta_p(1.0, 0.0), InputError);
}

TEST_CASE("sign net orders") {
  CHECK(min_net_order(2.0) == 1);
  CHECK(min_net_order(std::sqrt(2.0)) == 2);
  CHECK(min_net_order(1.0 / 16.0) == 51);
  // independent minimal-N scan
  for (double delta : {0.5, 0.1, 0.0625, 0.03}) {
    const int n = min_net_order(delta);
    CHECK(2.0 * std::sin(M_PI / (2.0 * n)) <= delta);
    if (n > 1) CHECK(2.0 * std::sin(M_PI / (2.0 * (n - 1))) > delta);
  }
  // spacing target delta = (2^{1/p} k1 B_p)^{-1}
  const auto net = sign_net(1.0, 2.0);  // delta = 1/(2*2*4) = 1/16
  CHECK(net.j1 == 51);
  CHECK(net.net.size() == 51);
  const auto net1 = sign_net(1.0, 1.0 / 16.0);  // delta = 2
  CHECK(net1.j1 == 1);
}

TEST_CASE("lemma32 constants") {
  const auto c = lemma32_constants(1.0, 1.0);
  CHECK(c.k1 == doctest::Approx(2.0));
  CHECK(c.k2 == doctest::Approx(3.0 * c.j1 * c.k1).epsilon(1e-12));
}

TEST_CASE("unconditionality estimates") {
  auto l1 = canonical(1.0, 4);
  EvalBudget budget;
  auto corpus = small_corpus(l1);
  auto k = estimate_unconditionality(l1, corpus, "test", budget);
  CHECK(k.value == doctest::Approx(1.0).epsilon(1e-9));

  auto s = summing(4);
  auto corpus_s = small_corpus(s);
  auto ks = estimate_unconditionality(s, corpus_s, "test", budget);
  CHECK(ks.value > 1.0 + 1e-6);
  CHECK(reevaluate(s, ks) == doctest::Approx(ks.value).epsilon(1e-9));
  CHECK_THROWS_AS(estimate_unconditionality(s, {}, "empty", budget), InputError);
}

TEST_CASE("democracy estimates") {
  EvalBudget budget;
  auto l2 = canonical(2.0, 4);
  CHECK(estimate_democracy(l2, false, budget).value == doctest::Approx(1.0).epsilon(1e-9));
  EvalBudget b2;
  CHECK(estimate_democracy(l2, true, b2).value == doctest::Approx(1.0).epsilon(1e-9));

  auto w = weighted_l1_4();
  EvalBudget b3;
  auto d = estimate_democracy(w, false, b3);
  CHECK(d.value == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(d.witness.A == IndexSet{0});
  CHECK(d.witness.B == IndexSet{3});
  CHECK(reevaluate(w, d) == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("slc estimates") {
  EvalBudget budget;
  auto l2 = canonical(2.0, 4);
  auto corpus = small_corpus(l2);
  auto delta = estimate_slc(l2, corpus, "test", budget);
  CHECK(delta.value == doctest::Approx(1.0).epsilon(1e-9));

  auto w = weighted_l1_4();
  auto corpus_w = small_corpus(w);
  auto dw = estimate_slc(w, corpus_w, "test", budget);
  CHECK(dw.value >= 8.0 - 1e-9);  // f = 0, A = {1}, B = {4}
  CHECK(reevaluate(w, dw) == doctest::Approx(dw.value).epsilon(1e-9));
}

TEST_CASE("quasi-greedy estimates") {
  EvalBudget budget;
  auto l1 = canonical(1.0, 4);
  auto corpus = small_corpus(l1);
  CHECK(estimate_quasi_greedy(l1, corpus, "t", budget).value == doctest::Approx(1.0).epsilon(1e-9));

  auto s = summing(4);
  auto corpus_s = small_corpus(s);
  auto cq = estimate_quasi_greedy(s, corpus_s, "t", budget);
  CHECK(cq.value > 1.0 + 1e-3);
  CHECK(reevaluate(s, cq) == doctest::Approx(cq.value).epsilon(1e-9));
}

TEST_CASE("greedy ratio family on the canonical basis") {
  auto l2 = canonical(2.0, 4);
  auto corpus = small_corpus(l2);
  EvalBudget budget;
  auto r = ratio_estimates(l2, corpus, {}, "t", budget);
  CHECK(r.cq.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.cg.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.cag.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.cpg.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.cpgu.value == doctest::Approx(1.0).epsilon(1e-6));
  // pointwise dominance of the empirical estimates
  CHECK(r.cpgu.value <= r.cpg.value + 1e-12);
  CHECK(r.cpg.value <= r.cg.value + 1e-12);
  CHECK(r.cq.value <= r.cag.value + 1e-12);
  CHECK(r.cag.value <= r.cg.value + 1e-12);
  // witness reproduction
  for (const auto* e : {&r.cg, &r.cpg, &r.cpgu})
    CHECK(reevaluate(l2, *e) == doctest::Approx(e->value).epsilon(1e-9));
}

TEST_CASE("ratio example from the error module") {
  auto l2 = canonical(2.0, 4);
  const auto f = vec({4, 3, 2, 1});
  EvalBudget budget;
  const double res = eval_norm(l2.space, Vec<double>(f - project(l2, f, IndexSet{0, 1})));
  CHECK(res / sigma_m(l2, f, 2, budget).value == doctest::Approx(1.0));
  budget.reset();
  CHECK(res / rho_m(l2, f, 2, budget).value == doctest::Approx(std::sqrt(5.0 / 6.0)));
}

TEST_CASE("truncation estimates") {
  auto l1 = canonical(1.0, 4);
  EvalBudget budget;
  // f=(4,3,2,1): the m=2 candidate 3*||e1+e2||/||f|| = 0.6 is the maximum
  // (m=1: 0.4, m=2: 0.6, m=3: 0.6, m=4: 0.4)
  std::vector<Vec<double>> corpus{vec({4, 3, 2, 1})};
  auto g = estimate_truncation(l1, corpus, "t", budget);
  CHECK(g.value == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(g.witness.m == 2);

  auto corpus2 = small_corpus(l1);
  auto g2 = estimate_truncation(l1, corpus2, "t", budget);
  CHECK(g2.value == doctest::Approx(1.0).epsilon(1e-9));  // indicators attain 1
  CHECK(reevaluate(l1, g2) == doctest::Approx(g2.value).epsilon(1e-9));
}

TEST_CASE("thag variants on the canonical basis") {
  auto l2 = canonical(2.0, 4);
  auto corpus = small_corpus(l2);
  EvalBudget budget;
  auto t = estimate_thag_variants(l2, corpus, "t", budget);
  CHECK(t.cdis.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(t.cend.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(t.cend2.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(t.cend2.value <= t.cend.value + 1e-12);
  CHECK(t.cend.value <= t.cdis.value + 1e-12);
  CHECK(reevaluate(l2, t.cdis) == doctest::Approx(t.cdis.value).epsilon(1e-9));
}

TEST_CASE("positive cone estimates") {
  EvalBudget budget;
  auto l1 = canonical(1.0, 4);
  auto corpus = small_corpus(l1);
  auto cp = estimate_positive_cone(l1, corpus, "t", budget);
  CHECK(cp.value == doctest::Approx(1.0).epsilon(1e-9));

  auto s = summing(4);
  auto corpus_s = small_corpus(s);
  auto cps = estimate_positive_cone(s, corpus_s, "t", budget);
  CHECK(cps.value > 1.0 + 1e-6);
  CHECK(reevaluate(s, cps) == doctest::Approx(cps.value).epsilon(1e-9));
}

TEST_CASE("estimates are scale invariant") {
  auto s = summing(4);
  auto corpus = small_corpus(s);
  std::vector<Vec<double>> scaled;
  for (const auto& f : corpus) scaled.push_back(3.7 * f);
  EvalBudget b1, b2;
  CHECK(estimate_unconditionality(s, corpus, "a", b1).value ==
        doctest::Approx(estimate_unconditionality(s, scaled, "b", b2).value).epsilon(1e-9));
  EvalBudget b3, b4;
  CHECK(estimate_slc(s, corpus, "a", b3).value ==
        doctest::Approx(estimate_slc(s, scaled, "b", b4).value).epsilon(1e-9));
  EvalBudget b5, b6;
  CHECK(estimate_quasi_greedy(s, corpus, "a", b5).value ==
        doctest::Approx(estimate_quasi_greedy(s, scaled, "b", b6).value).epsilon(1e-9));
  EvalBudget b7, b8;
  const auto ra = ratio_estimates(s, corpus, {}, "a", b7);
  const auto rb = ratio_estimates(s, scaled, {}, "b", b8);
  CHECK(ra.cg.value == doctest::Approx(rb.cg.value).epsilon(1e-9));
  CHECK(ra.cpg.value == doctest::Approx(rb.cpg.value).epsilon(1e-9));
  CHECK(ra.cpgu.value == doctest::Approx(rb.cpgu.value).epsilon(1e-9));
}

TEST_CASE("value floors at trivial witnesses") {
  for (auto b : {canonical(2.0, 3), summing(3), weighted_l1_4()}) {
    auto corpus = small_corpus(b, 13);
    EvalBudget budget;
    CHECK(estimate_unconditionality(b, corpus, "t", budget).value >= 1.0 - 1e-9);
    EvalBudget b2;
    CHECK(estimate_democracy(b, false, b2).value >= 1.0 - 1e-9);
    EvalBudget b3;
    CHECK(estimate_democracy(b, true, b3).value >= 1.0 - 1e-9);
    EvalBudget b4;
    CHECK(estimate_slc(b, corpus, "t", b4).value >= 1.0 - 1e-9);
    EvalBudget b5;
    auto r = ratio_estimates(b, corpus, {}, "t", b5);
    CHECK(r.cq.value >= 1.0 - 1e-9);
    CHECK(r.cg.value >= 1.0 - 1e-9);
    CHECK(r.cag.value >= 1.0 - 1e-9);
  }
}

TEST_CASE("ledger on the canonical basis") {
  LedgerInputs in;
  in.p = 1.0;
  in.field = FieldKind::Real;
  in.exact_constant_family = true;
  for (const char* n : {"K", "D", "Ds", "Delta", "Cq", "Cg", "Cag", "Cpg", "Cpgu", "GammaT",
                        "Cdis", "Cend", "Cend2", "Cplus"})
    in.values[n] = 1.0;
  const auto ledger = bound_ledger(in);
  CHECK(!ledger.entries.empty());
  for (const auto& e : ledger.entries) {
    CHECK(e.status == LedgerStatus::Holds);
    CHECK(e.asserted);  // exact-constant family asserts every entry
  }
  // spot-check the two named formulas
  for (const auto& e : ledger.entries) {
    if (e.id == "th1/1") CHECK(e.rhs_value == doctest::Approx(1.0));  // min{A_1^2 Cpg^2, ...} = 1
    if (e.id == "th5/gamma")
      CHECK(e.rhs_value == doctest::Approx(3.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-9));
  }
}

TEST_CASE("ledger missing estimates are not applicable") {
  LedgerInputs in;
  in.p = 1.0;
  in.field = FieldKind::Real;
  in.values["Cpg"] = 1.0;  // no K
  const auto ledger = bound_ledger(in);
  bool saw = false;
  for (const auto& e : ledger.entries)
    if (e.id == "lemma41/K") {
      CHECK(e.status == LedgerStatus::NotApplicable);
      saw = true;
    }
  CHECK(saw);
}

TEST_CASE("democracy budget abort") {
  auto w = weighted_l1_4();
  EvalBudget tiny(5);
  CHECK_THROWS_AS(estimate_democracy(w, true, tiny), BudgetError);
}
