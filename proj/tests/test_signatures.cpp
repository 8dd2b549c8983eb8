#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "nilfourier/errors.hpp"
#include "nilfourier/signatures.hpp"

using namespace nilfourier;

namespace {

PiecewiseLinearPath random_path(int d, int segments, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<std::vector<double>> pts(segments + 1, std::vector<double>(d));
  for (int i = 1; i <= segments; ++i)
    for (int j = 0; j < d; ++j) pts[i][j] = pts[i - 1][j] + n(rng);
  return PiecewiseLinearPath(pts);
}

}  // namespace

TEST_CASE("segment signatures") {
  const GroupSpec spec(2, 2);
  const std::vector<double> zero{0, 0}, e1{1, 0}, ones{1, 1};
  CHECK(segment_signature(zero, spec).distance(GradedElement::identity(spec)) == 0.0);
  const auto s1 = segment_signature(e1, spec);
  const auto q1 = oracle::iterated_integrals({{0, 0}, {1, 0}}, 2, 400);
  CHECK(s1.level(2)[0] == doctest::Approx(q1.at({1, 1})).epsilon(1e-9));
  CHECK(s1.level(2)[0] == doctest::Approx(0.5));
  const auto s2 = segment_signature(ones, spec);
  for (double v : s2.level(2)) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("path signatures against nested quadrature") {
  const GroupSpec spec(2, 2);
  const PiecewiseLinearPath corner({{0, 0}, {1, 0}, {1, 1}});
  const auto s = path_signature(corner, spec);
  const auto q = oracle::iterated_integrals(corner.points(), 2, 300);
  CHECK(s.level(2)[1] == doctest::Approx(q.at({1, 2})).epsilon(1e-9));
  CHECK(s.level(2)[1] == doctest::Approx(1.0));
  CHECK(std::abs(s.level(2)[2]) < 1e-15);

  std::mt19937_64 rng(9);
  const GroupSpec s3(3, 3);
  const auto p = random_path(3, 3, rng);
  const auto sig = path_signature(p, s3);
  const auto quad = oracle::iterated_integrals(p.points(), 3, 400);
  double worst = 0.0;
  for (const auto& [w, v] : quad)
    if (!w.empty()) worst = std::max(worst, std::abs(sig.at(w) - v));
  CHECK(worst < 1e-4);
}

TEST_CASE("square loop Levy area") {
  const GroupSpec spec(2, 2);
  const PiecewiseLinearPath square({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}});
  const auto s = path_signature(square, spec);
  CHECK(std::abs(s.level(1)[0]) < 1e-15);
  CHECK(std::abs(s.level(1)[1]) < 1e-15);
  const auto basis = LayeredBasis::lyndon(spec);
  const Eigen::VectorXd ls = log_signature(square, *basis);
  CHECK(ls[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(ls[0]) < 1e-15);
  const auto q = oracle::iterated_integrals(square.points(), 2, 250);
  CHECK(std::abs(0.5 * (q.at({1, 2}) - q.at({2, 1})) - ls[2]) < 1e-6);
}

TEST_CASE("log signature examples") {
  const GroupSpec spec(2, 2);
  const auto basis = LayeredBasis::lyndon(spec);
  const Eigen::VectorXd two = log_signature(PiecewiseLinearPath({{0, 0}, {1, 0}, {1, 1}}), *basis);
  CHECK(two[2] == doctest::Approx(0.5));
  const Eigen::VectorXd seg = log_signature(PiecewiseLinearPath({{0, 0}, {0.3, -2}}), *basis);
  CHECK(seg[0] == doctest::Approx(0.3));
  CHECK(seg[1] == doctest::Approx(-2));
  CHECK(std::abs(seg[2]) < 1e-15);
  CHECK_THROWS_AS(log_signature(PiecewiseLinearPath({{0, 0}, {1, 1}}), *LayeredBasis::standard(GroupSpec(2, 2, Flavor::FullTensor))),
                  Error);
}

TEST_CASE("Chen, reversal, refinement, Lie membership") {
  std::mt19937_64 rng(11);
  for (int d = 2; d <= 3; ++d)
    for (int N = 2; N <= 4; ++N) {
      const GroupSpec spec(d, N);
      for (int i = 0; i < 5; ++i) {
        const auto p = random_path(d, 5, rng);
        auto q = random_path(d, 2, rng);
        std::vector<std::vector<double>> qp = q.points();
        for (auto& v : qp)
          for (int j = 0; j < d; ++j) v[j] += p.points().back()[j];
        q = PiecewiseLinearPath(qp);
        const auto sp = path_signature(p, spec);
        CHECK(path_signature(p.concatenated(q), spec).distance(multiply(sp, path_signature(q, spec))) < 1e-10);
        CHECK(path_signature(p.reversed(), spec).distance(group_inverse(sp)) < 1e-10);
        double size = 0.0;
        for (double v : sp.coeffs()) size = std::max(size, std::abs(v));
        CHECK(path_signature(p.refined(2), spec).distance(sp) <= 1e-12 * size);
        const auto lg = testing::to_oracle(tensor_log(sp));
        for (int k = 1; k <= N; ++k) CHECK(oracle::lie_residual(lg, k) < 1e-10);
      }
    }
}

TEST_CASE("path validation and CSV") {
  CHECK_THROWS_AS(PiecewiseLinearPath({{0, 0}}), Error);
  CHECK_THROWS_AS(PiecewiseLinearPath({{0, 0}, {1}}), Error);
  std::istringstream csv("x,y\n0,0\n1,0\n1,1\n");
  const auto p = read_path_csv(csv);
  CHECK(p.vertex_count() == 3);
  std::istringstream noheader("0,0\n2,0\n");
  CHECK(read_path_csv(noheader).vertex_count() == 2);
  CHECK_THROWS_AS(path_signature(p, GroupSpec(3, 2)), Error);
}
