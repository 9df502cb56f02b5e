#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "helpers.hpp"

#include "greedy/errors.hpp"

using namespace greedy;
using namespace greedy::testing;

TEST_CASE("sigma examples on the canonical basis") {
  auto b = canonical(2.0, 4);
  const auto f = vec({4, 3, 2, 1});
  CHECK(sigma_m(b, f, 0).value == doctest::Approx(eval_norm(b.space, f)).epsilon(1e-12));
  auto s2 = sigma_m(b, f, 2);
  CHECK(s2.value == doctest::Approx(std::sqrt(5.0)).epsilon(1e-9));
  CHECK(s2.witness.A == IndexSet{0, 1});
  CHECK(s2.method == SolveMethod::Exhaustive);
  CHECK(sigma_m(b, f, 4).value <= 1e-10);
  CHECK_THROWS_AS(sigma_m(b, f, 5), InputError);
}

TEST_CASE("rho examples") {
  auto b = canonical(2.0, 4);
  const auto f = vec({4, 3, 2, 1});
  auto r2 = rho_m(b, f, 2);
  CHECK(r2.value == doctest::Approx(std::sqrt(6.0)).epsilon(1e-9));
  CHECK(r2.witness.A == IndexSet{0, 1});
  REQUIRE(r2.witness.eps.has_value());
  CHECK(r2.witness.eps->values == std::vector<double>{1.0, 1.0});

  // f = 1_{eps,A} with |A| = m gives 0
  auto l1 = canonical(1.0, 2);
  CHECK(rho_m(l1, vec({1, 1}), 2).value <= 1e-12);
  SignPattern<double> eps{{0, 2}, {1.0, -1.0}};
  auto b3 = canonical(2.0, 3);
  CHECK(rho_m(b3, indicator(b3, IndexSet{0, 2}, eps), 2).value <= 1e-12);
  CHECK_THROWS_AS(rho_m(b, f, 0), InputError);
}

TEST_CASE("varrho examples and the signed/unsigned gap") {
  auto b = canonical(2.0, 4);
  CHECK(varrho_m(b, vec({4, 3, 2, 1}), 2).value == doctest::Approx(std::sqrt(6.0)).epsilon(1e-9));

  auto l2 = canonical(2.0, 2);
  const auto f = vec({-1, -1});
  CHECK(varrho_m(l2, f, 1).value == doctest::Approx(std::sqrt(5.0)).epsilon(1e-9));
  auto r = rho_m(l2, f, 1);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(r.witness.eps.has_value());
  CHECK(r.witness.eps->values == std::vector<double>{-1.0});
}

TEST_CASE("best projection error") {
  auto b = canonical(2.0, 4);
  const auto f = vec({4, 3, 2, 1});
  CHECK(best_projection_error(b, f, 0).value == doctest::Approx(eval_norm(b.space, f)));
  for (Index m = 0; m <= 4; ++m)
    CHECK(best_projection_error(b, f, m).value == doctest::Approx(sigma_m(b, f, m).value).epsilon(1e-9));

  auto s = summing(3);
  auto bp = best_projection_error(s, vec({1, 1, 1}), 1);
  CHECK(bp.value <= 1e-10);
  CHECK(bp.witness.A == IndexSet{2});
}

TEST_CASE("rho is not monotone in m (threshold pinning)") {
  // alpha drops from 3 to 0.3, forcing a worse constant-coefficient fit
  auto b = canonical(2.0, 2);
  const auto f = vec({3, 0.3});
  CHECK(rho_m(b, f, 1).value == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(rho_m(b, f, 2).value == doctest::Approx(2.7).epsilon(1e-12));
}

TEST_CASE("chain and monotonicity properties across bases") {
  std::vector<Basis<double>> bases;
  bases.push_back(canonical(2.0, 4));
  bases.push_back(canonical(1.0, 4));
  bases.push_back(canonical(0.5, 3));
  bases.push_back(weighted_l1_4());
  bases.push_back(summing(4));
  bases.push_back(perturbed(4, 0.25));

  Rng rng(101);
  for (const auto& b : bases) {
    for (int it = 0; it < 25; ++it) {
      Vec<double> c(b.dim());
      for (Index i = 0; i < b.dim(); ++i) {
        const double lv[] = {0, 0.5, 1, 2};
        c[i] = (rng.next_below(2) ? 1 : -1) * lv[rng.next_below(4)];
      }
      if (c.cwiseAbs().maxCoeff() == 0.0) c[0] = 1.0;
      const Vec<double> f = b.X * c;
      double prev_sigma = std::numeric_limits<double>::infinity();
      double prev_bpe = std::numeric_limits<double>::infinity();
      for (Index m = 0; m <= b.dim(); ++m) {
        const double sg = sigma_m(b, f, m).value;
        const double bp = best_projection_error(b, f, m).value;
        CHECK(sg <= bp + 1e-9);
        CHECK(sg <= prev_sigma + 1e-9);
        CHECK(bp <= prev_bpe + 1e-9);
        prev_sigma = sg;
        prev_bpe = bp;
        if (m >= 1) {
          const double rh = rho_m(b, f, m).value;
          const double vr = varrho_m(b, f, m).value;
          CHECK(sg <= rh + 1e-9);
          CHECK(rh <= vr + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("witness feasibility for rho/varrho") {
  auto s = summing(4);
  Rng rng(55);
  for (int it = 0; it < 30; ++it) {
    const auto f = random_vec(rng, 4, 2.0);
    for (Index m = 1; m <= 4; ++m) {
      const auto r = rho_m(s, f, m);
      CHECK(static_cast<Index>(r.witness.A.size()) == m);
      REQUIRE(r.witness.coeffs.has_value());
      const double alpha = mth_threshold(s, f, m);
      for (const auto& cv : *r.witness.coeffs) CHECK(std::abs(std::abs(cv) - alpha) <= 1e-9 * std::max(1.0, alpha));
      // re-evaluating the witness reproduces the value
      Vec<double> g = f;
      for (std::size_t j = 0; j < r.witness.A.size(); ++j)
        g -= (*r.witness.coeffs)[j] * s.X.col(r.witness.A[j]);
      CHECK(eval_norm(s.space, g) == doctest::Approx(r.value).epsilon(1e-9));
    }
  }
}

TEST_CASE("sigma agrees with a dense grid oracle on a nonconvex norm") {
  // dim-2 half-exponent space, non-diagonal basis: exercises the multistart path
  auto sp = make_space<double>(NormSpec<double>::lq(0.5, 2));
  Mat<double> X(2, 2);
  X << 1, 1, 0, 1;
  auto b = build_basis(sp, X);
  Rng rng(77);
  for (int it = 0; it < 10; ++it) {
    const auto f = random_vec(rng, 2, 1.0);
    const auto sg = sigma_m(b, f, 1);
    // oracle: coefficient grid of step 0.01 over [-3, 3] for both singletons.
    // With q < 1 the minima sit at kinks of unbounded slope, so the grid can
    // only over-estimate; the search must not come in above it.
    double oracle = eval_norm(sp, f);
    for (Index j = 0; j < 2; ++j)
      for (double a = -3.0; a <= 3.0; a += 0.01) {
        const Vec<double> r = f - a * X.col(j);
        oracle = std::min(oracle, eval_norm(sp, r));
      }
    CHECK(sg.value <= oracle + 1e-6);
    // the reported value is attained by its witness
    REQUIRE(sg.witness.coeffs.has_value());
    Vec<double> r = f;
    for (std::size_t j = 0; j < sg.witness.A.size(); ++j)
      r -= (*sg.witness.coeffs)[j] * X.col(sg.witness.A[j]);
    CHECK(eval_norm(sp, r) == doctest::Approx(sg.value).epsilon(1e-9));
  }
}

TEST_CASE("budget guard") {
  auto b = canonical(2.0, 4);
  EvalBudget tiny(10);
  CHECK_THROWS_AS(rho_m(b, vec({4, 3, 2, 1}), 2, tiny), BudgetError);
  EvalBudget tiny2(3);
  CHECK_THROWS_AS(sigma_m(b, vec({4, 3, 2, 1}), 2, tiny2), BudgetError);
}

TEST_CASE("complex errors on the canonical basis") {
  using C = std::complex<double>;
  auto sp = make_space<C>(NormSpec<C>::lq(2.0, 3), std::nullopt, 4);
  auto b = build_basis(sp, Mat<C>(Mat<C>::Identity(3, 3)));
  const auto f = cvec({{3, 0}, {0, 2}, {1, 0}});
  CHECK(sigma_m(b, f, 1).value == doctest::Approx(std::sqrt(5.0)).epsilon(1e-9));
  // the order-4 net contains the exact phase of every coefficient here, so the
  // top coefficient only shrinks by alpha under the best sign choice
  const auto r1 = rho_m(b, f, 1);
  CHECK(r1.value == doctest::Approx(std::sqrt(5.0)).epsilon(1e-9));
  const auto r2 = rho_m(b, f, 2);
  CHECK(r2.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}
