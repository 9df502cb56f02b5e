#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "helpers.hpp"

using namespace greedy;
using namespace greedy::testing;

TEST_CASE("canonical and diagonal bases") {
  auto b = canonical(2.0, 3);
  CHECK(b.Xdual.isIdentity(1e-14));
  CHECK(b.c1 == doctest::Approx(1.0));
  CHECK(b.diagonal_in_weighted_lq);

  Mat<double> D = Mat<double>::Zero(2, 2);
  D(0, 0) = D(1, 1) = 2.0;
  auto sp = make_space<double>(NormSpec<double>::lq(2.0, 2));
  auto bd = build_basis(sp, D);
  CHECK(bd.Xdual(0, 0) == doctest::Approx(0.5));
  CHECK(bd.Xdual(1, 1) == doctest::Approx(0.5));
  // x_1^*(x_1) = 1
  CHECK((bd.Xdual * bd.X)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("summing basis dual is the difference matrix") {
  auto b = summing(3);
  Mat<double> expect(3, 3);
  expect << 1, -1, 0, 0, 1, -1, 0, 0, 1;
  CHECK((b.Xdual - expect).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(b.c1 == doctest::Approx(3.0));  // ||x_3||_1 = 3
}

TEST_CASE("ill-conditioned matrix rejected") {
  auto sp = make_space<double>(NormSpec<double>::lq(2.0, 2));
  Mat<double> S(2, 2);
  S << 1, 1, 1, 1;
  CHECK_THROWS_AS(build_basis(sp, S), ConstructionError);
  Mat<double> T(2, 2);
  T << 1, 0, 0, 1e-13;
  CHECK_THROWS_AS(build_basis(sp, T), ConstructionError);
}

TEST_CASE("coefficients examples") {
  auto b = canonical(2.0, 3);
  CHECK((coefficients(b, vec({1, 2, 3})) - vec({1, 2, 3})).cwiseAbs().maxCoeff() <= 1e-12);

  auto s = summing(3);
  // f = x_3 exactly
  CHECK((coefficients(s, vec({1, 1, 1})) - vec({0, 0, 1})).cwiseAbs().maxCoeff() <= 1e-12);
  // f = x_2 gives the unit coordinate vector e_2
  CHECK((coefficients(s, Vec<double>(s.X.col(1))) - vec({0, 1, 0})).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("round trip and disjoint additivity") {
  Rng rng(3);
  for (auto* b : {new Basis<double>(summing(4)), new Basis<double>(weighted_l1_4())}) {
    for (int it = 0; it < 100; ++it) {
      const auto f = random_vec(rng, b->dim(), 3.0);
      const Vec<double> back = b->X * coefficients(*b, f);
      CHECK((back - f).cwiseAbs().maxCoeff() <= 1e-10);
    }
    delete b;
  }
  auto s = summing(4);
  const Vec<double> f = s.X * vec({1, 0, 2, 0});
  const Vec<double> g = s.X * vec({0, -1, 0, 0.5});
  const auto cf = coefficients(s, f), cg = coefficients(s, g), cs = coefficients(s, Vec<double>(f + g));
  CHECK((cs - (cf + cg)).cwiseAbs().maxCoeff() <= 1e-10);
  auto su = support(s, f);
  auto sg = support(s, g);
  IndexSet inter;
  std::set_intersection(su.begin(), su.end(), sg.begin(), sg.end(), std::back_inserter(inter));
  CHECK(inter.empty());
}

TEST_CASE("indicator examples") {
  auto b = canonical(2.0, 4);
  CHECK(indicator(b, IndexSet{}).cwiseAbs().maxCoeff() == 0.0);
  CHECK((indicator(b, IndexSet{0, 2}) - vec({1, 0, 1, 0})).cwiseAbs().maxCoeff() <= 1e-14);

  auto l1 = canonical(1.0, 2);
  SignPattern<double> eps{{0, 1}, {1.0, -1.0}};
  CHECK(eval_norm(l1.space, indicator(l1, IndexSet{0, 1}, eps)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(indicator(b, IndexSet{7}), InputError);
}

TEST_CASE("indicator/coefficients duality") {
  auto s = summing(4);
  Rng rng(9);
  for (int it = 0; it < 40; ++it) {
    const std::uint32_t mask = static_cast<std::uint32_t>(rng.next_below(15) + 1);
    const IndexSet A = mask_to_set(mask);
    SignPattern<double> eps;
    eps.indices = A;
    for (std::size_t j = 0; j < A.size(); ++j) eps.values.push_back(rng.next_below(2) ? 1.0 : -1.0);
    const auto c = coefficients(s, indicator(s, A, eps));
    std::size_t k = 0;
    for (Index n = 0; n < 4; ++n) {
      if (k < A.size() && A[k] == n) {
        CHECK(std::abs(c[n] - eps.values[k]) <= 1e-10);
        ++k;
      } else {
        CHECK(std::abs(c[n]) <= 1e-10);
      }
    }
  }
}

TEST_CASE("support") {
  auto b = canonical(2.0, 3);
  CHECK(support(b, vec({0, 0, 0})).empty());
  CHECK(support(b, vec({0, 5, 0})) == IndexSet{1});
  auto s = summing(3);
  CHECK(support(s, vec({1, 1, 1})) == IndexSet{2});
}

TEST_CASE("normalize columns") {
  auto s = summing(3);
  auto n = normalize_columns(s);
  for (Index j = 0; j < 3; ++j)
    CHECK(eval_norm(n.space, Vec<double>(n.X.col(j))) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("complex basis") {
  using C = std::complex<double>;
  auto sp = make_space<C>(NormSpec<C>::lq(2.0, 2), std::nullopt, 4);
  Mat<C> X(2, 2);
  X << C(1, 0), C(0, 1), C(0, 0), C(1, 0);
  auto b = build_basis(sp, X);
  CHECK((b.Xdual * b.X - Mat<C>::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
  const auto c = coefficients(b, cvec({{0, 1}, {1, 0}}));
  CHECK(std::abs(c[1] - C(1, 0)) <= 1e-12);
}
