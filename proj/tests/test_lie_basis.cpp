#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "nilfourier/errors.hpp"

using namespace nilfourier;

TEST_CASE("witt dimensions match brute-force Lyndon counts") {
  for (int d = 1; d <= 4; ++d)
    for (int k = 1; k <= 6; ++k) CHECK(witt_dimension(d, k) == oracle::lyndon_count(d, k));
  CHECK(witt_dimension(3, 2) == 3);
  CHECK(witt_dimension(3, 3) == 8);
  CHECK(witt_dimension(2, 3) == 2);
  CHECK(witt_dimension(7, 1) == 7);
  CHECK(layer_dimensions(GroupSpec(2, 5)) == std::vector<int>{2, 1, 2, 3, 6});
  CHECK_THROWS_AS(witt_dimension(1000, 20), Error);
}

TEST_CASE("group spec validation") {
  CHECK_THROWS_AS(GroupSpec(0, 2), Error);
  CHECK_THROWS_AS(GroupSpec(2, 0), Error);
  CHECK(GroupSpec(2, 3).degenerate());
  CHECK_FALSE(GroupSpec(2, 3, Flavor::FullTensor).degenerate());
  CHECK_FALSE(GroupSpec(3, 3).degenerate());
}

TEST_CASE("lyndon words and bracketing") {
  const auto w = lyndon_words(2, 3);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == std::vector<int>{1, 1, 2});
  CHECK(w[1] == std::vector<int>{1, 2, 2});
  const std::vector<int> word{1, 2};
  CHECK(standard_bracketing(word).to_string() == "[1,2]");
  CHECK(BracketTree::parse("[1,[2,3]]").to_string() == "[1,[2,3]]");
  CHECK(BracketTree::parse("[1,[2,3]]").degree() == 3);
}

TEST_CASE("d=2 N=2 basis and structure constants") {
  const auto b = LayeredBasis::lyndon(GroupSpec(2, 2));
  CHECK(b->layer_size(1) == 2);
  CHECK(b->layer_size(2) == 1);
  CHECK(b->label(2) == "[1,2]");
  const auto t12 = b->bracket_terms(0, 1);
  REQUIRE(t12.size() == 1);
  CHECK(t12[0].index == 2);
  CHECK(t12[0].coeff == 1.0);
  CHECK(b->bracket_terms(1, 0)[0].coeff == -1.0);
  CHECK(b->bracket_terms(0, 0).empty());
}

TEST_CASE("expand_in_basis") {
  const auto b = LayeredBasis::lyndon(GroupSpec(2, 2));
  const std::vector<double> comm{0, 1, -1, 0};
  const Eigen::VectorXd c = b->expand(2, comm);
  CHECK(c[0] == doctest::Approx(1.0));
  const std::vector<double> sym{1, 0, 0, 0};
  CHECK_THROWS_AS(b->expand(2, sym), Error);
}

TEST_CASE("paper layer-3 basis for d=3 N=3") {
  const GroupSpec spec(3, 3);
  const auto b = LayeredBasis::from_trees(spec, example_basis_d3n3());
  CHECK(b->layer_size(3) == 8);
  // [X3, [X1, X2]]
  const int x3 = b->flat(1, 2), x12 = b->flat(2, 0);
  Eigen::VectorXd expect = Eigen::VectorXd::Zero(8);
  expect[4] = 1.0;   // [2,[1,3]]
  expect[2] = -1.0;  // [1,[2,3]]
  Eigen::VectorXd got = Eigen::VectorXd::Zero(8);
  for (const auto& t : b->bracket_terms(x3, x12)) got[b->position_in_layer(t.index)] += t.coeff;
  CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(b->label(b->flat(3, 4)) == "[2,[1,3]]");
}

TEST_CASE("user basis rejects dependent and wrong-degree trees") {
  const GroupSpec spec(2, 2);
  using T = BracketTree;
  std::vector<std::vector<T>> dup{{T::leaf(1), T::leaf(1)}, {T::parse("[1,2]")}};
  CHECK_THROWS_AS(LayeredBasis::from_trees(spec, dup), Error);
  std::vector<std::vector<T>> wrong{{T::leaf(1), T::leaf(2)}, {T::leaf(1)}};
  try {
    LayeredBasis::from_trees(spec, wrong);
    FAIL("expected DegreeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegreeMismatch);
  }
}

namespace {

Eigen::VectorXd bracket_basis(const LayeredBasis& b, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return b.bracket(x, y);
}

void check_structure(const LayeredBasis& b) {
  const int n = b.dimension();
  const int N = b.spec().N;
  auto unit = [&](int a) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[a] = 1.0;
    return e;
  };
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      const auto ab = bracket_basis(b, unit(a), unit(c));
      const auto ba = bracket_basis(b, unit(c), unit(a));
      CHECK((ab + ba).cwiseAbs().maxCoeff() < 1e-12);
      const int s = b.degree_of(a) + b.degree_of(c);
      for (int t = 0; t < n; ++t)
        if (std::abs(ab[t]) > 1e-12) CHECK(b.degree_of(t) == s);
      if (s > N) CHECK(ab.cwiseAbs().maxCoeff() == 0.0);
    }
  // Jacobi
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int e = 0; e < n; ++e) {
        const Eigen::VectorXd j = b.bracket(unit(a), b.bracket(unit(c), unit(e))) +
                                  b.bracket(unit(c), b.bracket(unit(e), unit(a))) +
                                  b.bracket(unit(e), b.bracket(unit(a), unit(c)));
        worst = std::max(worst, j.cwiseAbs().maxCoeff());
      }
  CHECK(worst < 1e-12);
  // Malcev prefixes are ideals
  const auto& order = b.malcev_order();
  for (std::size_t p = 1; p <= order.size(); ++p) {
    std::vector<bool> in(n, false);
    for (std::size_t i = 0; i < p; ++i) in[order[i]] = true;
    for (std::size_t i = 0; i < p; ++i)
      for (int y = 0; y < n; ++y)
        for (const auto& t : b.bracket_terms(y, order[i])) CHECK(in[t.index]);
  }
  CHECK(b.is_strong_malcev(order));
}

}  // namespace

TEST_CASE("structure constants: antisymmetry, grading, Jacobi, Malcev prefixes") {
  for (auto [d, N] : {std::pair{2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 4}, {2, 5}}) {
    CAPTURE(d);
    CAPTURE(N);
    check_structure(*LayeredBasis::lyndon(GroupSpec(d, N)));
  }
  check_structure(*LayeredBasis::from_trees(GroupSpec(3, 3), example_basis_d3n3()));
  check_structure(*LayeredBasis::full_tensor(GroupSpec(2, 3, Flavor::FullTensor)));
}

TEST_CASE("malcev order lists the top layer first") {
  const auto b = LayeredBasis::lyndon(GroupSpec(2, 3));
  const auto& o = b->malcev_order();
  REQUIRE(o.size() == 5);
  CHECK(b->degree_of(o[0]) == 3);
  CHECK(b->degree_of(o[1]) == 3);
  CHECK(b->degree_of(o[2]) == 2);
  CHECK(b->degree_of(o[4]) == 1);
  std::vector<int> reversed(o.rbegin(), o.rend());
  CHECK_FALSE(b->is_strong_malcev(reversed));
}

TEST_CASE("full tensor flavor") {
  const GroupSpec spec(2, 3, Flavor::FullTensor);
  const auto b = LayeredBasis::standard(spec);
  CHECK(b->layer_size(3) == 8);
  CHECK(b->dimension() == 14);
  CHECK(b->label(b->flat(2, 1)) == "e(1,2)");
}

TEST_CASE("embed and coordinates round trip") {
  std::mt19937_64 rng(3);
  const auto b = LayeredBasis::lyndon(GroupSpec(3, 4));
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd x = testing::random_coords(*b, rng);
    CHECK((b->coordinates(b->embed(x)) - x).cwiseAbs().maxCoeff() < 1e-12);
  }
}
