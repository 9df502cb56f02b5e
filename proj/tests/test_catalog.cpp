#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "helpers.hpp"

#include "greedy/constants.hpp"

using namespace greedy;
using namespace greedy::testing;

TEST_CASE("catalog id parsing round-trips") {
  for (const auto& id : default_catalog()) {
    const auto parsed = parse_catalog_id(id);
    CHECK(to_string(parsed) == id);
  }
  CHECK_THROWS_AS(parse_catalog_id("nope:3"), InputError);
  CHECK_THROWS_AS(parse_catalog_id("canonical:2"), InputError);
  CHECK_THROWS_AS(parse_catalog_id("weighted:1:2:1,2,3"), InputError);
}

TEST_CASE("make_basis families") {
  auto c = make_basis<double>("canonical:2:4");
  CHECK(c.X.isIdentity(0.0));
  CHECK(c.exact_constant_family);
  CHECK(c.space.p == doctest::Approx(1.0));

  auto w = make_basis<double>("weighted:1:4:1,0.5,0.25,0.125");
  CHECK(w.space.norm.weights[3] == doctest::Approx(0.125));
  CHECK(!w.exact_constant_family);

  auto s = make_basis<double>("summing:3");
  Mat<double> expect(3, 3);
  expect << 1, 1, 1, 0, 1, 1, 0, 0, 1;
  CHECK((s.X - expect).cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.space.norm.q == doctest::Approx(1.0));

  auto p = make_basis<double>("perturbedIdentity:3:0.25");
  CHECK(p.X(0, 1) == doctest::Approx(0.25));
  CHECK(p.X(1, 2) == doctest::Approx(0.25));
  CHECK(p.X(0, 2) == 0.0);

  CHECK_THROWS_AS(make_basis<double>("canonical:2:17"), InputError);
  auto n = make_basis<double>("summing:3", /*normalize=*/true);
  for (Index j = 0; j < 3; ++j)
    CHECK(eval_norm(n.space, Vec<double>(n.X.col(j))) == doctest::Approx(1.0));
}

TEST_CASE("grid corpus counts") {
  auto b = canonical(2.0, 2);
  CorpusSpec spec;
  spec.grid.levels = {0.0, 1.0};
  spec.grid.count = 100;
  spec.random.count = 0;
  spec.structured.indicators = false;
  spec.structured.perturbed = false;
  const auto corpus = generate_corpus(b, spec);
  CHECK(corpus.size() == 8);  // 3^2 - 1 nonzero sign-level tuples
}

TEST_CASE("indicator family present when grid is off") {
  auto b = canonical(2.0, 2);
  CorpusSpec spec;
  spec.grid.count = 0;
  spec.grid.levels = {0.0};
  spec.random.count = 0;
  spec.structured.perturbed = false;
  const auto corpus = generate_corpus(b, spec);
  // +-e1, +-e2, +-e1 +- e2
  CHECK(corpus.size() == 8);
  std::set<std::pair<double, double>> seen;
  for (const auto& f : corpus) seen.insert({f[0], f[1]});
  CHECK(seen.count({1, 0}) == 1);
  CHECK(seen.count({-1, 0}) == 1);
  CHECK(seen.count({1, -1}) == 1);
}

TEST_CASE("corpus generation is deterministic") {
  auto b = summing(5);
  const auto spec = small_spec(99);
  const auto a = generate_corpus(b, spec);
  const auto c = generate_corpus(b, spec);
  REQUIRE(a.size() == c.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - c[i]).cwiseAbs().maxCoeff() == 0.0);
  const auto ca = close_corpus(b, a, spec);
  const auto cb = close_corpus(b, c, spec);
  REQUIRE(ca.size() == cb.size());
  for (std::size_t i = 0; i < ca.size(); ++i) CHECK((ca[i] - cb[i]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("closure of an empty corpus is empty") {
  auto b = canonical(2.0, 3);
  CorpusSpec spec;
  CHECK(close_corpus(b, {}, spec).empty());
}

TEST_CASE("padding example") {
  // f = e1, g = e2 on the canonical basis: t0 = 1 + 1 + 1 = 3,
  // A0 = {2, 3} (1-based), h has coefficients (1, 4, 3)
  const auto padded = greedy::detail::pad_coeff_pair<double>(vec({1, 0, 0}), vec({0, 1, 0}), true, 3.0);
  REQUIRE(padded.has_value());
  CHECK((padded->first - vec({1, 4, 3})).cwiseAbs().maxCoeff() == 0.0);
  CHECK(padded->second.first == IndexSet{1, 2});
  CHECK(padded->second.second == doctest::Approx(3.0));
  // no fresh index -> skipped
  CHECK(!greedy::detail::pad_coeff_pair<double>(vec({1, 0}), vec({0, 1}), true, 3.0).has_value());
}

TEST_CASE("positive/negative split") {
  auto b = canonical(2.0, 3);
  CorpusSpec spec;
  spec.grid.count = 0;
  spec.grid.levels = {0.0};
  spec.random.count = 0;
  spec.structured.indicators = false;
  spec.structured.perturbed = false;
  spec.closure.lemma41 = false;
  spec.closure.lemma42 = false;
  spec.closure.thag_proof = false;
  std::vector<Vec<double>> corpus{vec({1, -2, 0}), vec({0, 0, 1})};
  std::vector<ClosureRecord> records;
  const auto closed = close_corpus(b, corpus, spec, &records);
  // expects g1 = (1,0,0), g2 = (0,2,0) and f + g1 among the additions
  std::set<std::pair<std::string, double>> kinds;
  bool saw_g1 = false, saw_g2 = false;
  for (const auto& rec : records) {
    CHECK(rec.kind == "lemma32real");
    const auto& v = closed[rec.corpus_index];
    if ((v - vec({1, 0, 0})).cwiseAbs().maxCoeff() == 0.0) saw_g1 = true;
    if ((v - vec({0, 2, 0})).cwiseAbs().maxCoeff() == 0.0) saw_g2 = true;
  }
  CHECK(saw_g1);
  CHECK(saw_g2);
}

TEST_CASE("padded vectors have a unique greedy set at the pad threshold") {
  auto b = summing(5);
  auto spec = small_spec(3);
  spec.grid.count = 150;
  const auto base = generate_corpus(b, spec);
  std::vector<ClosureRecord> records;
  const auto closed = close_corpus(b, base, spec, &records);
  std::size_t checked = 0;
  for (const auto& rec : records) {
    if (rec.kind != "lemma41" && rec.kind != "lemma42") continue;
    const auto& h = closed[rec.corpus_index];
    const Index m = static_cast<Index>(rec.pad_set.size());
    const auto fam = greedy_sets(b, h, m);
    REQUIRE(fam.sets.size() == 1);
    CHECK(fam.sets[0] == rec.pad_set);
    CHECK(mth_threshold(b, h, m) == doctest::Approx(rec.t0).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("canonical bases are 1-greedy on a corpus sample") {
  for (double q : {1.0, 2.0}) {
    auto b = canonical(q, 4);
    auto spec = small_spec(21);
    spec.grid.count = 120;
    spec.random.count = 10;
    const auto corpus = generate_corpus(b, spec);
    EvalBudget budget;
    std::size_t n = 0;
    for (const auto& f : corpus) {
      if (++n > 60) break;
      for (Index m = 0; m <= 4; ++m) {
        budget.reset();
        const double res = eval_norm(b.space, Vec<double>(f - greedy_sum(b, f, m)));
        const double sg = sigma_m(b, f, m, budget).value;
        CHECK(res <= sg + 1e-9);
        CHECK(res >= sg - 1e-9);
      }
    }
  }
}

TEST_CASE("weighted basis is unconditional but far from democratic") {
  auto w = weighted_l1_4();
  auto corpus = generate_corpus(w, small_spec(5));
  EvalBudget budget;
  CHECK(estimate_unconditionality(w, corpus, "t", budget).value <= 1.0 + 1e-9);
  EvalBudget b2;
  CHECK(estimate_democracy(w, false, b2).value >= 8.0 - 1e-9);
}

TEST_CASE("summing conditionality grows with dimension") {
  double prev = 0.0;
  for (Index n : {2, 4, 6}) {
    auto s = summing(n);
    auto spec = small_spec(11);
    spec.grid.count = n <= 4 ? 400 : 600;
    auto corpus = generate_corpus(s, spec);
    EvalBudget budget;
    const double k = estimate_unconditionality(s, corpus, "t", budget).value;
    CHECK(k >= prev - 1e-12);
    prev = k;
  }
  CHECK(prev >= 4.0 - 1e-9);  // the alternating full-support witness on summing(6)
}
