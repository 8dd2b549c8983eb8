#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nilfourier/lie_basis.hpp"
#include "nilfourier/tensor_algebra.hpp"

namespace nilfourier {

// Basis index (k, i), both 1-based: the i-th element of layer k.
struct LayerIndex {
  int layer = 1;
  int position = 1;
  friend bool operator==(const LayerIndex&, const LayerIndex&) = default;
};

// Linear functional on the Lie algebra, stored by its values on the basis
// (flat order).
class Functional {
 public:
  explicit Functional(BasisPtr basis);
  Functional(BasisPtr basis, Eigen::VectorXd coords);

  const BasisPtr& basis() const { return basis_; }
  const GroupSpec& spec() const { return basis_->spec(); }
  const Eigen::VectorXd& coords() const { return coords_; }

  double coord(LayerIndex idx) const;
  void set(LayerIndex idx, double value);

  double operator()(const Eigen::VectorXd& x) const { return coords_.dot(x); }
  double evaluate(const GradedElement& x) const;
  // max |coefficient|
  double scale() const;

 private:
  BasisPtr basis_;
  Eigen::VectorXd coords_;
};

// (Ad*_g l)(Y) = l(Ad_{g^{-1}} Y).
Functional coadjoint_apply(const GradedElement& g, const Functional& l);
// Same action for g = exp(x), x given in flat coordinates.
Functional coadjoint_apply_exp(const Eigen::VectorXd& x, const Functional& l);

// Entries l([X_i^k, X_j^{N-k}]), i <= m_k, j <= m.
Eigen::MatrixXd b_matrix(const Functional& l, int k, int m);

// Maximal rank of b_matrix(., k, m).
int dim_km(const GroupSpec& spec, int k, int m);

// l([X_1, [X_1, X_2]]) on the first two layer-1 basis elements.
double degenerate_coefficient(const Functional& l);

bool is_generic(const Functional& l);

// Generic orbit dimension in the quotient by g*(N-k, m).
int orbit_dim_quotient_generic(const GroupSpec& spec, int k, int m);

// Numerical quotient-orbit dimension: Jacobian rank of g -> (Ad*_g l) restricted
// to the Malcev prefix ending at (N-k, m), maximized over sample points.
int orbit_dim_numeric(const Functional& l, int k, int m, int samples, std::uint64_t seed = 7);

// One row per k = 1..N-1, entry m-1 for m = 1..m_{N-k}.
using QuotientTable = std::vector<std::vector<int>>;
QuotientTable orbit_dims_generic_table(const GroupSpec& spec);
QuotientTable orbit_dims_numeric_table(const Functional& l, int samples, std::uint64_t seed = 7);

// Skew form l([X_a, X_b]) over flat indices.
Eigen::MatrixXd skew_form(const Functional& l);
int full_orbit_dim(const Functional& l);

struct JumpData {
  std::vector<LayerIndex> S;  // Malcev order
  std::vector<LayerIndex> T;  // Malcev order
  QuotientTable quotient_dims;
  bool derived_special_case = false;
  std::string note;
};

JumpData jump_sets(const GroupSpec& spec);

// Standard-normal coordinates, redrawn until generic (at most 1000 draws).
Functional sample_generic(BasisPtr basis, std::uint64_t seed);
Functional sample_normal(BasisPtr basis, std::uint64_t seed);

}  // namespace nilfourier
