#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "nilfourier/errors.hpp"

using namespace nilfourier;
using testing::max_diff;
using testing::to_oracle;

TEST_CASE("role invariants") {
  const GroupSpec spec(2, 2);
  CHECK(GradedElement::zero(spec).coeffs()[0] == 0.0);
  CHECK(GradedElement::identity(spec).coeffs()[0] == 1.0);
  std::vector<double> bad(7, 0.0);
  bad[0] = 0.5;
  CHECK_THROWS_AS(GradedElement(spec, Role::Group, bad), Error);
  CHECK_THROWS_AS(tensor_exp(GradedElement::identity(spec)), Error);
  CHECK_THROWS_AS(tensor_log(GradedElement::zero(spec)), Error);
  CHECK_THROWS_AS(multiply(GradedElement::identity(spec), GradedElement::identity(GroupSpec(2, 3))), Error);
}

TEST_CASE("multiply basics and associativity") {
  const GroupSpec spec(2, 2);
  GradedElement e1(spec, Role::Algebra), e2(spec, Role::Algebra);
  e1.level(1)[0] = 1.0;
  e2.level(1)[1] = 1.0;
  const auto p = multiply(e1, e2);
  CHECK(p.level(1)[0] == 0.0);
  CHECK(p.level(2)[1] == 1.0);  // e1 (x) e2
  CHECK(p.level(2)[2] == 0.0);
  CHECK(multiply(GradedElement::identity(spec), e1).distance(e1) == 0.0);

  std::mt19937_64 rng(1);
  const GroupSpec s4(2, 4);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto a = tensor_exp(testing::random_algebra(s4, rng));
    const auto b = tensor_exp(testing::random_algebra(s4, rng));
    const auto c = tensor_exp(testing::random_algebra(s4, rng));
    worst = std::max(worst, multiply(multiply(a, b), c).distance(multiply(a, multiply(b, c))));
  }
  CHECK(worst <= 1e-12 * 100);
  // against the oracle product
  const auto a = testing::random_algebra(s4, rng), b = testing::random_algebra(s4, rng);
  CHECK(max_diff(multiply(a, b), oracle::product(to_oracle(a), to_oracle(b), 4)) < 1e-12);
}

TEST_CASE("exp and log") {
  const GroupSpec spec(2, 2);
  GradedElement g(spec, Role::Group);
  g.level(1)[0] = 1.0;
  const auto l = tensor_log(g);
  CHECK(l.level(1)[0] == doctest::Approx(1.0));
  CHECK(l.level(2)[0] == doctest::Approx(-0.5));
  CHECK(tensor_log(GradedElement::identity(spec)).distance(GradedElement::zero(spec)) == 0.0);
  CHECK(tensor_exp(GradedElement::zero(spec)).distance(GradedElement::identity(spec)) == 0.0);

  std::mt19937_64 rng(2);
  const GroupSpec s(3, 3);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto x = testing::random_algebra(s, rng);
    worst = std::max(worst, tensor_log(tensor_exp(x)).distance(x));
    const auto h = tensor_exp(testing::random_algebra(s, rng));
    worst = std::max(worst, tensor_exp(tensor_log(h)).distance(h));
  }
  CHECK(worst <= 1e-12);
  // level-1 input: v^k / k!
  const auto v = testing::random_level1(s, rng);
  const auto ev = tensor_exp(v);
  oracle::Tensor pw = to_oracle(v), expect;
  double fact = 1.0;
  for (int k = 1; k <= 3; ++k) {
    fact *= k;
    expect = oracle::add(expect, pw, 1.0 / fact);
    pw = oracle::product(pw, to_oracle(v), 3);
  }
  CHECK(max_diff(ev, expect) < 1e-13);
}

TEST_CASE("bch against the degree-3 series") {
  std::mt19937_64 rng(4);
  const GroupSpec s2(2, 2), s3(3, 3);
  const auto x2 = testing::random_level1(s2, rng), y2 = testing::random_level1(s2, rng);
  const auto xy2 = oracle::bracket(to_oracle(x2), to_oracle(y2), 2);
  CHECK(max_diff(bch(x2, y2), oracle::add(oracle::add(to_oracle(x2), to_oracle(y2)), xy2, 0.5)) < 1e-14);
  CHECK(bch(x2, GradedElement::zero(s2)).distance(x2) < 1e-15);
  for (int i = 0; i < 20; ++i) {
    const auto x = testing::random_level1(s3, rng), y = testing::random_level1(s3, rng);
    const auto X = to_oracle(x), Y = to_oracle(y);
    const auto XY = oracle::bracket(X, Y, 3);
    oracle::Tensor series = oracle::add(X, Y);
    series = oracle::add(series, XY, 0.5);
    series = oracle::add(series, oracle::bracket(X, XY, 3), 1.0 / 12);
    series = oracle::add(series, oracle::bracket(Y, XY, 3), -1.0 / 12);
    CHECK(max_diff(bch(x, y), series) < 1e-12);
    const auto z = testing::random_algebra(s3, rng);
    CHECK(bch(z, -z).distance(GradedElement::zero(s3)) < 1e-12);
  }
}

TEST_CASE("commutator, inverse, adjoint") {
  std::mt19937_64 rng(5);
  const GroupSpec spec(2, 2);
  GradedElement e1(spec, Role::Algebra), e2(spec, Role::Algebra);
  e1.level(1)[0] = 1.0;
  e2.level(1)[1] = 1.0;
  const auto c = commutator(e1, e2);
  CHECK(c.level(2)[1] == 1.0);
  CHECK(c.level(2)[2] == -1.0);
  CHECK(commutator(e1, e1).distance(GradedElement::zero(spec)) == 0.0);

  const GroupSpec s(3, 3);
  double inv = 0.0, conj = 0.0, hom = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto g = tensor_exp(testing::random_algebra(s, rng));
    inv = std::max(inv, multiply(g, group_inverse(g)).distance(GradedElement::identity(s)));
    const auto y = testing::random_algebra(s, rng), z = testing::random_algebra(s, rng);
    const auto direct = tensor_log(multiply(multiply(g, tensor_exp(y)), group_inverse(g)));
    conj = std::max(conj, adjoint(g, y).distance(direct));
    hom = std::max(hom, adjoint(g, commutator(y, z)).distance(commutator(adjoint(g, y), adjoint(g, z))));
  }
  CHECK(inv <= 1e-12);
  CHECK(conj <= 1e-10);
  CHECK(hom <= 1e-10);
  CHECK(adjoint(GradedElement::identity(s), e1.spec() == s ? e1 : testing::random_algebra(s, rng)).spec() == s);
}

TEST_CASE("truncation consistency") {
  std::mt19937_64 rng(6);
  const GroupSpec spec(2, 3);
  auto a = testing::random_algebra(spec, rng), b = testing::random_algebra(spec, rng);
  const auto p = multiply(a, b);
  for (auto& v : a.level(3)) v = 0.0;
  const auto q = multiply(a, b);
  for (int k = 0; k <= 2; ++k)
    for (std::size_t i = 0; i < p.level(k).size(); ++i) CHECK(p.level(k)[i] == q.level(k)[i]);
}
