#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nilfourier/coadjoint.hpp"
#include "nilfourier/lie_basis.hpp"

namespace nilfourier {

// Subspace of the Lie algebra given by independent columns (flat coordinates).
class Subalgebra {
 public:
  Subalgebra(BasisPtr basis, Eigen::MatrixXd vectors);

  const BasisPtr& basis() const { return basis_; }
  int dim() const { return static_cast<int>(vectors_.cols()); }
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  // Orthonormal basis of the same span.
  const Eigen::MatrixXd& orthonormal() const { return orthonormal_; }

  double residual(const Eigen::VectorXd& v) const;
  bool contains(const Eigen::VectorXd& v, double tol = 1e-10) const;
  bool is_bracket_closed(double tol = 1e-10) const;
  bool is_ideal(double tol = 1e-10) const;
  // Sorted flat indices if the span is a coordinate subspace.
  std::optional<std::vector<int>> coordinate_indices(double tol = 1e-12) const;

 private:
  BasisPtr basis_;
  Eigen::MatrixXd vectors_;
  Eigen::MatrixXd orthonormal_;
};

// Span of whole layers lo..hi.
Subalgebra layer_span(BasisPtr basis, int lo, int hi);

bool is_subordinate(const Functional& l, const Subalgebra& h, double tol = 1e-10);

Subalgebra generic_polarization(const Functional& l);
// Sum of the radicals of l on the prefixes of `order` (Malcev order by default).
Subalgebra vergne_polarization(const Functional& l, const std::vector<int>& order = {});
// generic_polarization where it applies, otherwise vergne_polarization.
Subalgebra polarization_for(const Functional& l);

struct PolarizationReport {
  bool subordinate = false;
  bool bracket_closed = false;
  int dim = 0;
  int expected_dim = 0;
  bool pass = false;
};

PolarizationReport polarization_check(const Functional& l, const Subalgebra& h);

}  // namespace nilfourier
