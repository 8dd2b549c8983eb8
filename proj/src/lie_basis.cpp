#include "nilfourier/lie_basis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "nilfourier/errors.hpp"

namespace nilfourier {

namespace {

constexpr double kBasisTol = 1e-10;
constexpr double kDropTol = 1e-13;

bool is_lyndon(std::span<const int> w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (!std::lexicographical_compare(w.begin(), w.end(), w.begin() + i, w.end())) return false;
  return !w.empty();
}

// a (x) b - b (x) a for homogeneous tensors a, b.
std::vector<double> tensor_commutator(std::span<const double> a, std::span<const double> b) {
  const std::int64_t sa = a.size(), sb = b.size();
  std::vector<double> out(sa * sb, 0.0);
  for (std::int64_t p = 0; p < sa; ++p)
    for (std::int64_t q = 0; q < sb; ++q) out[p * sb + q] += a[p] * b[q];
  for (std::int64_t p = 0; p < sb; ++p)
    for (std::int64_t q = 0; q < sa; ++q) out[p * sa + q] -= b[p] * a[q];
  return out;
}

std::string word_label(std::int64_t index, int d, int k) {
  std::vector<int> letters(k);
  for (int j = k - 1; j >= 0; --j) {
    letters[j] = static_cast<int>(index % d) + 1;
    index /= d;
  }
  std::string s = "e(";
  for (int j = 0; j < k; ++j) s += (j ? "," : "") + std::to_string(letters[j]);
  return s + ")";
}

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
  }
  BracketTree run() {
    BracketTree t = parse();
    if (pos_ != s_.size()) fail();
    return t;
  }

 private:
  BracketTree parse() {
    if (pos_ >= s_.size()) fail();
    if (s_[pos_] == '[') {
      ++pos_;
      BracketTree l = parse();
      expect(',');
      BracketTree r = parse();
      expect(']');
      return BracketTree::node(std::move(l), std::move(r));
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail();
    return BracketTree::leaf(std::stoi(s_.substr(start, pos_ - start)));
  }
  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail();
    ++pos_;
  }
  [[noreturn]] void fail() const { throw Error(ErrorCode::InvalidInput, "malformed bracket expression '" + s_ + "'"); }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

BracketTree BracketTree::leaf(int generator) {
  if (generator < 1) throw Error(ErrorCode::InvalidInput, "generator indices are 1-based");
  BracketTree t;
  t.generator_ = generator;
  return t;
}

BracketTree BracketTree::node(BracketTree left, BracketTree right) {
  BracketTree t;
  t.degree_ = left.degree_ + right.degree_;
  t.left_ = std::make_shared<const BracketTree>(std::move(left));
  t.right_ = std::make_shared<const BracketTree>(std::move(right));
  return t;
}

BracketTree BracketTree::parse(std::string_view text) { return TreeParser(text).run(); }

std::string BracketTree::to_string() const {
  if (is_leaf()) return std::to_string(generator_);
  return "[" + left_->to_string() + "," + right_->to_string() + "]";
}

std::vector<double> BracketTree::tensor(int d) const {
  if (is_leaf()) {
    if (generator_ > d) throw Error(ErrorCode::IndexOutOfRange, "generator " + std::to_string(generator_) + " > d");
    std::vector<double> v(d, 0.0);
    v[generator_ - 1] = 1.0;
    return v;
  }
  return tensor_commutator(left_->tensor(d), right_->tensor(d));
}

std::vector<std::vector<int>> lyndon_words(int d, int k) {
  std::vector<std::vector<int>> out;
  if (d < 1 || k < 1) return out;
  // Duval's generation in lexicographic order, letters 0-based internally.
  std::vector<int> w{0};
  while (!w.empty()) {
    if (static_cast<int>(w.size()) == k) {
      std::vector<int> word(w);
      for (int& c : word) ++c;
      out.push_back(std::move(word));
    }
    const std::size_t m = w.size();
    while (static_cast<int>(w.size()) < k) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == d - 1) w.pop_back();
    if (!w.empty()) ++w.back();
  }
  return out;
}

BracketTree standard_bracketing(std::span<const int> word) {
  if (word.empty()) throw Error(ErrorCode::InvalidInput, "empty word");
  if (word.size() == 1) return BracketTree::leaf(word[0]);
  for (std::size_t i = 1; i < word.size(); ++i) {
    if (is_lyndon(word.subspan(i)))
      return BracketTree::node(standard_bracketing(word.subspan(0, i)), standard_bracketing(word.subspan(i)));
  }
  throw Error(ErrorCode::InvalidInput, "word is not Lyndon");
}

std::vector<std::vector<BracketTree>> example_basis_d3n3() {
  using T = BracketTree;
  std::vector<std::vector<BracketTree>> layers(3);
  for (int i = 1; i <= 3; ++i) layers[0].push_back(T::leaf(i));
  for (auto [i, j] : {std::pair{1, 2}, {1, 3}, {2, 3}}) layers[1].push_back(T::node(T::leaf(i), T::leaf(j)));
  const int triples[8][3] = {{1, 1, 2}, {1, 1, 3}, {1, 2, 3}, {2, 1, 2}, {2, 1, 3}, {2, 2, 3}, {3, 1, 3}, {3, 2, 3}};
  for (const auto& t : triples)
    layers[2].push_back(T::node(T::leaf(t[0]), T::node(T::leaf(t[1]), T::leaf(t[2]))));
  return layers;
}

LayeredBasis::LayeredBasis(const GroupSpec& spec, std::vector<BasisLayer> layers)
    : spec_(spec), layers_(std::move(layers)) {
  for (int k = 0; k <= spec_.N + 1; ++k) tensor_offsets_.push_back(spec_.level_offset(k));
  for (int k = 1; k <= spec_.N; ++k) {
    offsets_.push_back(dim_);
    for (int i = 0; i < layer_size(k); ++i) degree_.push_back(k);
    dim_ += layer_size(k);
  }
  for (int k = spec_.N; k >= 1; --k)
    for (int i = 0; i < layer_size(k); ++i) malcev_.push_back(flat(k, i));
  build_structure();
}

std::shared_ptr<const LayeredBasis> LayeredBasis::lyndon(const GroupSpec& spec) {
  if (spec.flavor != Flavor::FreeNilpotent) throw Error(ErrorCode::InvalidSpec, "Lyndon basis needs the free flavor");
  std::vector<std::vector<BracketTree>> trees(spec.N);
  for (int k = 1; k <= spec.N; ++k)
    for (const auto& w : lyndon_words(spec.d, k)) trees[k - 1].push_back(standard_bracketing(w));
  return from_trees(spec, trees);
}

std::shared_ptr<const LayeredBasis> LayeredBasis::from_trees(const GroupSpec& spec,
                                                             const std::vector<std::vector<BracketTree>>& trees) {
  if (spec.flavor != Flavor::FreeNilpotent)
    throw Error(ErrorCode::InvalidSpec, "bracket bases need the free flavor");
  if (static_cast<int>(trees.size()) != spec.N)
    throw Error(ErrorCode::DegreeMismatch, "expected " + std::to_string(spec.N) + " layers");
  const auto dims = layer_dimensions(spec);
  std::vector<BasisLayer> layers;
  for (int k = 1; k <= spec.N; ++k) {
    const auto& list = trees[k - 1];
    if (static_cast<int>(list.size()) != dims[k - 1])
      throw Error(ErrorCode::DependentBasis, "layer " + std::to_string(k) + " needs " + std::to_string(dims[k - 1]) +
                                                 " elements, got " + std::to_string(list.size()));
    BasisLayer layer;
    layer.degree = k;
    const auto rows = spec.level_size(k);
    layer.embedding.resize(rows, static_cast<Eigen::Index>(list.size()));
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].degree() != k)
        throw Error(ErrorCode::DegreeMismatch, list[i].to_string() + " does not have degree " + std::to_string(k));
      const auto t = list[i].tensor(spec.d);
      layer.embedding.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(t.data(), rows);
      layer.trees.push_back(list[i]);
      layer.labels.push_back(list[i].to_string());
    }
    if (list.empty()) {  // d = 1 above layer 1
      layer.left_inverse = Eigen::MatrixXd::Zero(0, rows);
      layers.push_back(std::move(layer));
      continue;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(layer.embedding);
    qr.setThreshold(kBasisTol);
    if (qr.rank() < layer.embedding.cols())
      throw Error(ErrorCode::DependentBasis, "layer " + std::to_string(k) + " elements are linearly dependent");
    layer.left_inverse = layer.embedding.completeOrthogonalDecomposition().pseudoInverse();
    layers.push_back(std::move(layer));
  }
  return std::shared_ptr<const LayeredBasis>(new LayeredBasis(spec, std::move(layers)));
}

std::shared_ptr<const LayeredBasis> LayeredBasis::full_tensor(const GroupSpec& spec) {
  if (spec.flavor != Flavor::FullTensor) throw Error(ErrorCode::InvalidSpec, "full tensor basis needs the tensor flavor");
  std::vector<BasisLayer> layers;
  for (int k = 1; k <= spec.N; ++k) {
    BasisLayer layer;
    layer.degree = k;
    layer.identity = true;
    for (std::int64_t i = 0; i < spec.level_size(k); ++i) layer.labels.push_back(word_label(i, spec.d, k));
    layers.push_back(std::move(layer));
  }
  return std::shared_ptr<const LayeredBasis>(new LayeredBasis(spec, std::move(layers)));
}

std::shared_ptr<const LayeredBasis> LayeredBasis::standard(const GroupSpec& spec) {
  return spec.flavor == Flavor::FullTensor ? full_tensor(spec) : lyndon(spec);
}

const std::string& LayeredBasis::label(int flat_index) const {
  return layers_[degree_[flat_index] - 1].labels[position_in_layer(flat_index)];
}

void LayeredBasis::build_structure() {
  table_.assign(static_cast<std::size_t>(dim_) * dim_, {});
  auto column = [&](int a) {
    const int k = degree_[a];
    const auto& layer = layers_[k - 1];
    std::vector<double> v(spec_.level_size(k), 0.0);
    if (layer.identity) {
      v[position_in_layer(a)] = 1.0;
    } else {
      const auto col = layer.embedding.col(position_in_layer(a));
      std::copy(col.data(), col.data() + col.size(), v.begin());
    }
    return v;
  };
  std::vector<std::vector<double>> columns;
  for (int a = 0; a < dim_; ++a) columns.push_back(column(a));
  for (int a = 0; a < dim_; ++a) {
    for (int b = a + 1; b < dim_; ++b) {
      const int s = degree_[a] + degree_[b];
      if (s > spec_.N) continue;
      const auto t = tensor_commutator(columns[a], columns[b]);
      const Eigen::VectorXd c = expand(s, t);
      for (Eigen::Index i = 0; i < c.size(); ++i) {
        if (std::abs(c[i]) <= kDropTol) continue;
        // least-squares noise on integer constants
        const double v = std::abs(c[i] - std::round(c[i])) < 1e-11 ? std::round(c[i]) : c[i];
        const int target = offset(s) + static_cast<int>(i);
        table_[a * dim_ + b].push_back({target, v});
        table_[b * dim_ + a].push_back({target, -v});
      }
    }
  }
}

bool LayeredBasis::is_strong_malcev(std::span<const int> order) const {
  if (static_cast<int>(order.size()) != dim_) return false;
  std::vector<int> pos(dim_, -1);
  for (int r = 0; r < dim_; ++r) {
    if (order[r] < 0 || order[r] >= dim_ || pos[order[r]] != -1) return false;
    pos[order[r]] = r;
  }
  for (int r = 0; r < dim_; ++r)
    for (int y = 0; y < dim_; ++y)
      for (const auto& term : bracket_terms(y, order[r]))
        if (pos[term.index] > r) return false;
  return true;
}

Eigen::VectorXd LayeredBasis::bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  for (int a = 0; a < dim_; ++a) {
    if (x[a] == 0.0) continue;
    for (int b = 0; b < dim_; ++b) {
      if (y[b] == 0.0) continue;
      for (const auto& t : bracket_terms(a, b)) out[t.index] += x[a] * y[b] * t.coeff;
    }
  }
  return out;
}

Eigen::MatrixXd LayeredBasis::ad_matrix(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int a = 0; a < dim_; ++a) {
    if (x[a] == 0.0) continue;
    for (int b = 0; b < dim_; ++b)
      for (const auto& t : bracket_terms(a, b)) m(t.index, b) += x[a] * t.coeff;
  }
  return m;
}

Eigen::MatrixXd LayeredBasis::exp_ad(const Eigen::VectorXd& x) const {
  const Eigen::MatrixXd ad = ad_matrix(x);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(dim_, dim_);
  Eigen::MatrixXd sum = term;
  for (int k = 1; k < spec_.N; ++k) {
    term = ad * term / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

Eigen::VectorXd LayeredBasis::expand(int k, std::span<const double> tensor) const {
  if (k < 1 || k > spec_.N) throw Error(ErrorCode::IndexOutOfRange, "layer out of range");
  if (static_cast<std::int64_t>(tensor.size()) != spec_.level_size(k))
    throw Error(ErrorCode::DimensionMismatch, "tensor must have d^k entries");
  const auto& layer = layers_[k - 1];
  const Eigen::Map<const Eigen::VectorXd> t(tensor.data(), static_cast<Eigen::Index>(tensor.size()));
  if (layer.identity) return t;
  Eigen::VectorXd x = layer.left_inverse * t;
  const double residual = (layer.embedding * x - t).norm();
  if (residual > kBasisTol * (1.0 + t.norm()))
    throw Error(ErrorCode::NotInLieImage,
                "layer-" + std::to_string(k) + " tensor has residual " + std::to_string(residual));
  return x;
}

GradedElement LayeredBasis::embed(const Eigen::VectorXd& coords) const {
  if (coords.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "coordinate vector has the wrong length");
  GradedElement x(spec_, Role::Algebra);
  for (int k = 1; k <= spec_.N; ++k) {
    auto lvl = x.level(k);
    const auto& layer = layers_[k - 1];
    const auto part = coords.segment(offset(k), layer_size(k));
    if (layer.identity) {
      std::copy(part.data(), part.data() + part.size(), lvl.begin());
    } else {
      Eigen::Map<Eigen::VectorXd>(lvl.data(), static_cast<Eigen::Index>(lvl.size())) = layer.embedding * part;
    }
  }
  return x;
}

Eigen::VectorXd LayeredBasis::coordinates(const GradedElement& x) const {
  if (!(x.spec() == spec_)) throw Error(ErrorCode::SpecMismatch, "element and basis disagree on the spec");
  if (x.coeffs()[0] != 0.0) throw Error(ErrorCode::RoleError, "coordinates need an algebra element");
  Eigen::VectorXd out(dim_);
  for (int k = 1; k <= spec_.N; ++k) out.segment(offset(k), layer_size(k)) = expand(k, x.level(k));
  return out;
}

void LayeredBasis::project_unchecked(const double* tensor, double* coords) const {
  for (int k = 1; k <= spec_.N; ++k) {
    const auto& layer = layers_[k - 1];
    const double* lvl = tensor + tensor_offsets_[k];
    const auto m = layer_size(k);
    if (layer.identity) {
      std::copy(lvl, lvl + m, coords + offset(k));
      continue;
    }
    Eigen::Map<Eigen::VectorXd>(coords + offset(k), m).noalias() =
        layer.left_inverse * Eigen::Map<const Eigen::VectorXd>(lvl, tensor_offsets_[k + 1] - tensor_offsets_[k]);
  }
}

void LayeredBasis::embed_unchecked(const double* coords, double* tensor) const {
  tensor[0] = 0.0;
  for (int k = 1; k <= spec_.N; ++k) {
    const auto& layer = layers_[k - 1];
    double* lvl = tensor + tensor_offsets_[k];
    const auto m = layer_size(k);
    if (layer.identity) {
      std::copy(coords + offset(k), coords + offset(k) + m, lvl);
      continue;
    }
    Eigen::Map<Eigen::VectorXd>(lvl, tensor_offsets_[k + 1] - tensor_offsets_[k]).noalias() =
        layer.embedding * Eigen::Map<const Eigen::VectorXd>(coords + offset(k), m);
  }
}

}  // namespace nilfourier
