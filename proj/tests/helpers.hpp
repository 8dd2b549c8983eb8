#pragma once

#include <random>

#include "nilfourier/lie_basis.hpp"
#include "nilfourier/tensor_algebra.hpp"
#include "oracles.hpp"

namespace testing {

using namespace nilfourier;

inline GradedElement random_algebra(const GroupSpec& spec, std::mt19937_64& rng, double s = 1.0) {
  std::normal_distribution<double> n(0.0, s);
  GradedElement x(spec, Role::Algebra);
  for (int k = 1; k <= spec.N; ++k)
    for (auto& v : x.level(k)) v = n(rng);
  return x;
}

inline GradedElement random_level1(const GroupSpec& spec, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  GradedElement x(spec, Role::Algebra);
  for (auto& v : x.level(1)) v = n(rng);
  return x;
}

// Random element of the free Lie algebra given by basis coordinates.
inline Eigen::VectorXd random_coords(const LayeredBasis& b, std::mt19937_64& rng, double s = 1.0) {
  std::normal_distribution<double> n(0.0, s);
  Eigen::VectorXd x(b.dimension());
  for (auto& v : x) v = n(rng);
  return x;
}

inline oracle::Tensor to_oracle(const GradedElement& x) {
  oracle::Tensor t;
  const auto& spec = x.spec();
  for (int k = 1; k <= spec.N; ++k) {
    const auto lv = x.level(k);
    for (std::size_t i = 0; i < lv.size(); ++i) {
      if (lv[i] == 0.0) continue;
      oracle::Word w(k);
      std::size_t r = i;
      for (int j = k - 1; j >= 0; --j) {
        w[j] = static_cast<int>(r % spec.d) + 1;
        r /= spec.d;
      }
      t[w] = lv[i];
    }
  }
  return t;
}

// max over words of |x(w) - t(w)|, levels >= 1
inline double max_diff(const GradedElement& x, const oracle::Tensor& t) {
  oracle::Tensor diff = oracle::add(to_oracle(x), t, -1.0);
  double r = 0.0;
  for (const auto& [w, v] : diff)
    if (!w.empty()) r = std::max(r, std::abs(v));
  return r;
}

}  // namespace testing
