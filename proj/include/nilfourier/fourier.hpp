#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nilfourier/chart.hpp"
#include "nilfourier/coadjoint.hpp"
#include "nilfourier/parallel.hpp"

namespace nilfourier {

using Complex = std::complex<double>;

// Function on G given in exponential coordinates (flat basis order).
struct SchwartzFunction {
  std::function<Complex(std::span<const double>)> evaluator;
  // Per-coordinate half-widths outside which |f| < 1e-12 max |f|.
  std::vector<double> decay_box;

  Complex operator()(std::span<const double> coords) const { return evaluator(coords); }
  Complex at(const GradedElement& g, const LayeredBasis& basis) const;

  // amplitude * exp(-sum x_i^2 / (2 w_i^2)).
  static SchwartzFunction gaussian(std::vector<double> widths, double amplitude = 1.0);
  SchwartzFunction scaled(Complex factor) const;
};

// Evaluates f on the faces of its decay box; true if every value is below
// tol times the largest value seen on a coarse interior grid.
bool spot_check_decay(const SchwartzFunction& f, double tol = 1e-12);

struct AxisRule {
  int nodes = 48;
  double half_width = 8.0;
  // Composite midpoint nodes on [-half_width, half_width].
  std::vector<double> points() const;
  double weight() const { return 2.0 * half_width / nodes; }
};

struct QuadratureSpec {
  AxisRule subgroup{48, 8.0};
  // The section box half-width is section.half_width * |l_top|^(-section_exponent),
  // clamped to [1e-3, 1e3] times section.half_width.
  AxisRule section{48, 6.0};
  double section_exponent = 0.75;
  AxisRule t_plane{64, 8.0};
  bool check_convergence = false;
  double convergence_tol = 1e-3;

  void validate() const;
  double section_scale(const Functional& l) const;
  // Same spec with every node count doubled.
  QuadratureSpec refined() const;
};

// The one-dimensional representation e^{i l(log u)} of H = exp(h).
Complex character(const Functional& l, const MalcevChart& chart, const Eigen::VectorXd& h_coords);

// K_f(x, y) = int_H f(x u y^{-1}) e^{i l(log u)} du for group elements x, y.
Complex kernel_at(const SchwartzFunction& f, const Functional& l, const MalcevChart& chart, const QuadratureSpec& q,
                  const GradedElement& x, const GradedElement& y);
// Same for section points x = section(xs), y = section(ys).
Complex kernel(const SchwartzFunction& f, const Functional& l, const MalcevChart& chart, const QuadratureSpec& q,
               const Eigen::VectorXd& xs, const Eigen::VectorXd& ys);

struct KernelOperator {
  Functional functional;
  std::vector<Eigen::VectorXd> nodes;  // section points
  std::vector<double> weights;         // quotient-measure weights
  Eigen::MatrixXcd values;             // K(node_a, node_b)

  Complex trace() const;
  double hilbert_schmidt_sq() const;
};

KernelOperator build_operator(const SchwartzFunction& f, const Functional& l, const MalcevChart& chart,
                              const QuadratureSpec& q, Execution exec = Execution::Serial);

// int_{G/H} K(x sigma(y), sigma(y)) dy, with x sigma(y) split into section and
// subgroup parts and the character twist applied.
Complex trace_shifted(const SchwartzFunction& f, const Functional& l, const MalcevChart& chart,
                      const QuadratureSpec& q, const GradedElement& x, Execution exec = Execution::Serial);

Eigen::MatrixXd d_matrix(const Functional& l, const std::vector<LayerIndex>& S);
// |Pfaffian(D(l))| = sqrt(det D(l)).
double sqrt_det_d(const Functional& l, const std::vector<LayerIndex>& S);

// (2 pi)^{-(n - |S|/2)}.
double c_norm(const GroupSpec& spec);

struct InversionResult {
  Complex value;
  Complex unnormalized;  // the T-plane integral before c_norm
  int t_nodes = 0;
  int skipped_nodes = 0;  // non-generic functionals on the grid
  double convergence_delta = 0.0;
};

InversionResult invert(const SchwartzFunction& f, const GradedElement& x, const BasisPtr& basis,
                       const QuadratureSpec& q, Execution exec = Execution::Serial);

struct PlancherelResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double unnormalized_rhs = 0.0;
};

// lhs = int |f|^2 over the decay box with `direct_nodes` per axis.
PlancherelResult plancherel(const SchwartzFunction& f, const BasisPtr& basis, const QuadratureSpec& q,
                            Execution exec = Execution::Serial, int direct_nodes = 48);

struct HaarCheck {
  double deviation = 0.0;
  double standard_error = 0.0;
};

// int f(a x) dx / int f(x) dx - 1 by importance sampling in exponential
// coordinates; the proposal is a Student-t mixture centred at 0 and log(a^{-1}).
HaarCheck haar_invariance_check(const SchwartzFunction& f, const LayeredBasis& basis, const GradedElement& a,
                                std::int64_t samples, std::uint64_t seed, Execution exec = Execution::Serial);
// jacobian * int f(gamma(alpha)) d alpha / int f(x) dx - 1.
HaarCheck gamma_measure_check(const SchwartzFunction& f, const MalcevChart& chart, std::int64_t samples,
                              std::uint64_t seed);

}  // namespace nilfourier
