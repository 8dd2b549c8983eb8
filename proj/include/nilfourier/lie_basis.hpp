#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nilfourier/group_spec.hpp"
#include "nilfourier/tensor_algebra.hpp"

namespace nilfourier {

// Iterated bracket of generators. Leaves carry 1-based generator indices.
class BracketTree {
 public:
  static BracketTree leaf(int generator);
  static BracketTree node(BracketTree left, BracketTree right);
  // Accepts "3", "[1,2]", "[1,[2,3]]" (whitespace ignored).
  static BracketTree parse(std::string_view text);

  bool is_leaf() const { return !left_; }
  int generator() const { return generator_; }
  const BracketTree& left() const { return *left_; }
  const BracketTree& right() const { return *right_; }
  int degree() const { return degree_; }

  std::string to_string() const;
  // Degree-k tensor coordinates of the bracket, length d^k.
  std::vector<double> tensor(int d) const;

 private:
  int generator_ = 0;
  int degree_ = 1;
  std::shared_ptr<const BracketTree> left_, right_;
};

// Lyndon words over {1..d} of length exactly k, in lexicographic order.
std::vector<std::vector<int>> lyndon_words(int d, int k);
// Standard-factorization bracketing of a Lyndon word.
BracketTree standard_bracketing(std::span<const int> word);

// [X_i,[X_j,X_s]] for the eight triples of the worked d=3, N=3 example, with
// the obvious layers 1 and 2.
std::vector<std::vector<BracketTree>> example_basis_d3n3();

struct BasisTerm {
  int index;  // flat basis index
  double coeff;
};

struct BasisLayer {
  int degree = 0;
  std::vector<BracketTree> trees;  // empty for the full tensor flavor
  std::vector<std::string> labels;
  bool identity = false;         // full tensor layer: both matrices left empty
  Eigen::MatrixXd embedding;     // d^k x m_k
  Eigen::MatrixXd left_inverse;  // m_k x d^k
};

// Graded basis of g_N (or of T_0^N for the full tensor flavor) with its
// structure constants. Flat index order is layer 1 first; the Malcev order
// lists the top layer first.
class LayeredBasis {
 public:
  static std::shared_ptr<const LayeredBasis> lyndon(const GroupSpec& spec);
  // trees[k-1] holds the layer-k elements.
  static std::shared_ptr<const LayeredBasis> from_trees(const GroupSpec& spec,
                                                        const std::vector<std::vector<BracketTree>>& trees);
  static std::shared_ptr<const LayeredBasis> full_tensor(const GroupSpec& spec);
  // Lyndon or full tensor, according to spec.flavor.
  static std::shared_ptr<const LayeredBasis> standard(const GroupSpec& spec);

  const GroupSpec& spec() const { return spec_; }
  int dimension() const { return dim_; }
  int layer_size(int k) const { return static_cast<int>(layers_[k - 1].labels.size()); }
  int offset(int k) const { return offsets_[k - 1]; }
  int flat(int k, int i) const { return offsets_[k - 1] + i; }
  int degree_of(int flat_index) const { return degree_[flat_index]; }
  int position_in_layer(int flat_index) const { return flat_index - offset(degree_[flat_index]); }
  const BasisLayer& layer(int k) const { return layers_[k - 1]; }
  const std::string& label(int flat_index) const;

  // Flat indices in Malcev order: X^N_1..X^N_{m_N}, ..., X^1_1..X^1_{m_1}.
  const std::vector<int>& malcev_order() const { return malcev_; }
  // True iff every prefix of `order` spans an ideal.
  bool is_strong_malcev(std::span<const int> order) const;

  // Structure constants c(a,b) = [X_a, X_b] as sparse flat coordinates.
  std::span<const BasisTerm> bracket_terms(int a, int b) const { return table_[a * dim_ + b]; }
  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  // Matrix of Y -> [x, Y].
  Eigen::MatrixXd ad_matrix(const Eigen::VectorXd& x) const;
  // exp(ad x) = sum_k (ad x)^k / k!, terminating at k = N-1.
  Eigen::MatrixXd exp_ad(const Eigen::VectorXd& x) const;

  // Solves embedding * x = t on layer k; throws NotInLieImage on a residual
  // above 1e-10 (1 + |t|).
  Eigen::VectorXd expand(int k, std::span<const double> tensor) const;
  // Algebra element with the given flat coordinates.
  GradedElement embed(const Eigen::VectorXd& coords) const;
  // Flat coordinates of an algebra element (all levels checked).
  Eigen::VectorXd coordinates(const GradedElement& x) const;
  // Unchecked projection of flat tensor levels 0..N onto flat coordinates.
  void project_unchecked(const double* tensor, double* coords) const;
  // Inverse of project_unchecked on the Lie algebra; writes all levels.
  void embed_unchecked(const double* coords, double* tensor) const;

 private:
  LayeredBasis(const GroupSpec& spec, std::vector<BasisLayer> layers);
  void build_structure();

  GroupSpec spec_;
  std::vector<BasisLayer> layers_;
  std::vector<int> offsets_;
  std::vector<std::int64_t> tensor_offsets_;
  std::vector<int> degree_;
  std::vector<int> malcev_;
  int dim_ = 0;
  std::vector<std::vector<BasisTerm>> table_;
};

using BasisPtr = std::shared_ptr<const LayeredBasis>;

}  // namespace nilfourier
