#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nilfourier/lie_basis.hpp"
#include "nilfourier/polarization.hpp"

namespace nilfourier {

// Malcev coordinates adapted to a subalgebra h: chart vectors X_1..X_n where
// X_1..X_{q_h} span h and the rest span a complement, each block homogeneous
// and listed from the top layer down. gamma(alpha) = exp(a_n X_n)...exp(a_1 X_1)
// factors as section(s) * subgroup(h).
class MalcevChart {
 public:
  // Throws InvalidInput unless h is graded and the induced order is strong Malcev.
  explicit MalcevChart(const Subalgebra& h);

  const BasisPtr& basis() const { return basis_; }
  const GroupSpec& spec() const { return basis_->spec(); }
  int dimension() const { return n_; }
  int subgroup_dim() const { return qh_; }
  int section_dim() const { return n_ - qh_; }
  // Chart vectors as columns, flat coordinates.
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  // |det| of the chart vectors; Lebesgue in flat exponential coordinates equals
  // jacobian() times Lebesgue in gamma coordinates.
  double jacobian() const { return jacobian_; }
  bool subgroup_is_ideal() const { return ideal_; }
  bool is_strong_malcev() const;

  GradedElement exp_vector(int j, double t) const;
  GradedElement gamma(const Eigen::VectorXd& alpha) const;
  GradedElement section(const Eigen::VectorXd& s) const;
  GradedElement subgroup(const Eigen::VectorXd& h) const;
  // alpha with gamma(alpha) = g.
  Eigen::VectorXd gamma_coordinates(const GradedElement& g) const;
  // (s, h) with g = section(s) * subgroup(h).
  std::pair<Eigen::VectorXd, Eigen::VectorXd> decompose(const GradedElement& g) const;

  // Allocation-free versions on flat tensor arrays for the quadrature loops.
  class Scratch {
   public:
    explicit Scratch(const MalcevChart& chart);

   private:
    friend class MalcevChart;
    std::vector<double> a_, b_, c_, work_, coords_;
  };
  void gamma_into(const double* alpha, int first, int last, double* out, Scratch& s) const;
  void decompose_into(const double* g, double* alpha, Scratch& s) const;

 private:
  void exp_vector_into(int j, double t, double* out) const;

  BasisPtr basis_;
  int n_ = 0;
  int qh_ = 0;
  bool ideal_ = false;
  double jacobian_ = 1.0;
  Eigen::MatrixXd vectors_;
  Eigen::MatrixXd inverse_;
  std::size_t tsize_ = 0;
  // powers_[j][k] = X_j^k / k! as flat tensors, k = 0..N.
  std::vector<std::vector<std::vector<double>>> powers_;
};

}  // namespace nilfourier
