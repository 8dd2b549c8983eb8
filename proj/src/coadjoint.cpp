#include "nilfourier/coadjoint.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nilfourier/errors.hpp"
#include "nilfourier/linalg.hpp"

namespace nilfourier {

namespace {

constexpr double kJacobianStep = 1e-5;
constexpr double kJacobianRankTol = 1e-6;
// Absolute floor (times |l|) below which finite-difference noise is ignored.
constexpr double kJacobianNoise = 1e-7;
constexpr int kMaxGenericDraws = 1000;

void check_layer_index(const LayeredBasis& b, LayerIndex idx) {
  if (idx.layer < 1 || idx.layer > b.spec().N || idx.position < 1 || idx.position > b.layer_size(idx.layer))
    throw Error(ErrorCode::IndexOutOfRange,
                "basis index (" + std::to_string(idx.layer) + "," + std::to_string(idx.position) + ")");
}

// Length of the Malcev prefix ending at (layer, m).
int prefix_length(const LayeredBasis& b, int layer, int m) {
  int len = m;
  for (int s = layer + 1; s <= b.spec().N; ++s) len += b.layer_size(s);
  return len;
}

int jacobian_rank(const Eigen::MatrixXd& rows, double noise_floor) {
  if (rows.rows() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  const auto& sv = svd.singularValues();
  const double top = sv.size() ? sv.maxCoeff() : 0.0;
  const double t = std::max(kJacobianRankTol * top, noise_floor);
  return static_cast<int>((sv.array() > t).count());
}

// Jacobian of x -> Ad*_{exp x} l at x0, rows permuted into Malcev order.
Eigen::MatrixXd malcev_jacobian(const Functional& l, const Eigen::VectorXd& x0) {
  const auto& basis = *l.basis();
  const int n = basis.dimension();
  Eigen::MatrixXd jac(n, n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd xp = x0, xm = x0;
    xp[j] += kJacobianStep;
    xm[j] -= kJacobianStep;
    jac.col(j) = (coadjoint_apply_exp(xp, l).coords() - coadjoint_apply_exp(xm, l).coords()) / (2 * kJacobianStep);
  }
  Eigen::MatrixXd ordered(n, n);
  const auto& order = basis.malcev_order();
  for (int r = 0; r < n; ++r) ordered.row(r) = jac.row(order[r]);
  return ordered;
}

}  // namespace

Functional::Functional(BasisPtr basis) : basis_(std::move(basis)), coords_(Eigen::VectorXd::Zero(basis_->dimension())) {}

Functional::Functional(BasisPtr basis, Eigen::VectorXd coords) : basis_(std::move(basis)), coords_(std::move(coords)) {
  if (coords_.size() != basis_->dimension())
    throw Error(ErrorCode::DimensionMismatch, "functional has the wrong number of coordinates");
}

double Functional::coord(LayerIndex idx) const {
  check_layer_index(*basis_, idx);
  return coords_[basis_->flat(idx.layer, idx.position - 1)];
}

void Functional::set(LayerIndex idx, double value) {
  check_layer_index(*basis_, idx);
  coords_[basis_->flat(idx.layer, idx.position - 1)] = value;
}

double Functional::evaluate(const GradedElement& x) const { return coords_.dot(basis_->coordinates(x)); }

double Functional::scale() const { return coords_.size() ? coords_.cwiseAbs().maxCoeff() : 0.0; }

Functional coadjoint_apply(const GradedElement& g, const Functional& l) {
  if (!(g.spec() == l.spec())) throw Error(ErrorCode::SpecMismatch, "group element and functional disagree on the spec");
  if (g.role() != Role::Group) throw Error(ErrorCode::RoleError, "coadjoint_apply needs a group element");
  return coadjoint_apply_exp(l.basis()->coordinates(tensor_log(g)), l);
}

Functional coadjoint_apply_exp(const Eigen::VectorXd& x, const Functional& l) {
  const Eigen::MatrixXd ad_inv = l.basis()->exp_ad(-x);
  return Functional(l.basis(), ad_inv.transpose() * l.coords());
}

Eigen::MatrixXd b_matrix(const Functional& l, int k, int m) {
  const auto& b = *l.basis();
  const int N = b.spec().N;
  if (k < 1 || k > N - 1) throw Error(ErrorCode::IndexOutOfRange, "b_matrix needs 1 <= k <= N-1");
  if (m < 1 || m > b.layer_size(N - k)) throw Error(ErrorCode::IndexOutOfRange, "b_matrix needs 1 <= m <= m_{N-k}");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(b.layer_size(k), m);
  for (int i = 0; i < b.layer_size(k); ++i)
    for (int j = 0; j < m; ++j)
      for (const auto& t : b.bracket_terms(b.flat(k, i), b.flat(N - k, j))) out(i, j) += t.coeff * l.coords()[t.index];
  return out;
}

int dim_km(const GroupSpec& spec, int k, int m) {
  const auto dims = layer_dimensions(spec);
  const int N = spec.N;
  if (k < 1 || k > N - 1) throw Error(ErrorCode::IndexOutOfRange, "dim_km needs 1 <= k <= N-1");
  const int mk = dims[k - 1];
  if (2 * k == N) return std::min(mk % 2 == 0 ? mk : mk - 1, m);
  return std::min({mk, dims[N - k - 1], m});
}

double degenerate_coefficient(const Functional& l) {
  const auto& b = *l.basis();
  if (b.spec().N < 3 || b.layer_size(1) < 2) return 0.0;
  Eigen::VectorXd x1 = Eigen::VectorXd::Zero(b.dimension()), x2 = x1;
  x1[b.flat(1, 0)] = 1.0;
  x2[b.flat(1, 1)] = 1.0;
  return l(b.bracket(x1, b.bracket(x1, x2)));
}

bool is_generic(const Functional& l) {
  const auto& spec = l.spec();
  const double scale = std::max(l.scale(), linalg::kRankFloor);
  if (spec.degenerate()) return std::abs(degenerate_coefficient(l)) > linalg::kRankTol * scale;
  const auto& b = *l.basis();
  for (int k = 1; 2 * k <= spec.N; ++k) {
    if (k == spec.N) break;
    const int mk = b.layer_size(k);
    const Eigen::MatrixXd block = b_matrix(l, k, mk);
    if (linalg::numerical_rank(block) != dim_km(spec, k, mk)) return false;
    if (2 * k == spec.N && mk % 2 == 1 && mk > 1) {
      // the leading m-1 rows must carry the rank
      if (linalg::numerical_rank(block.topRows(mk - 1)) != mk - 1) return false;
    }
  }
  return true;
}

int orbit_dim_quotient_generic(const GroupSpec& spec, int k, int m) {
  if (k == 0 || k == spec.N) return 0;  // quotient by a top-layer prefix
  int total = 0;
  const auto dims = layer_dimensions(spec);
  for (int s = 1; s < k; ++s) total += dim_km(spec, s, dims[s - 1]);
  return total + dim_km(spec, k, m);
}

QuotientTable orbit_dims_generic_table(const GroupSpec& spec) {
  const auto dims = layer_dimensions(spec);
  QuotientTable table;
  for (int k = 1; k < spec.N; ++k) {
    std::vector<int> row;
    for (int m = 1; m <= dims[spec.N - k - 1]; ++m) row.push_back(orbit_dim_quotient_generic(spec, k, m));
    table.push_back(std::move(row));
  }
  return table;
}

QuotientTable orbit_dims_numeric_table(const Functional& l, int samples, std::uint64_t seed) {
  const auto& b = *l.basis();
  const int N = b.spec().N;
  const int n = b.dimension();
  const double noise = kJacobianNoise * std::max(l.scale(), linalg::kRankFloor);
  QuotientTable table;
  for (int k = 1; k < N; ++k) table.emplace_back(b.layer_size(N - k), 0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int s = 0; s < std::max(samples, 1); ++s) {
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    if (s > 0)
      for (int i = 0; i < n; ++i) x0[i] = normal(rng);
    const Eigen::MatrixXd jac = malcev_jacobian(l, x0);
    for (int k = 1; k < N; ++k)
      for (int m = 1; m <= b.layer_size(N - k); ++m) {
        const int rank = jacobian_rank(jac.topRows(prefix_length(b, N - k, m)), noise);
        table[k - 1][m - 1] = std::max(table[k - 1][m - 1], rank);
      }
  }
  return table;
}

int orbit_dim_numeric(const Functional& l, int k, int m, int samples, std::uint64_t seed) {
  const auto& b = *l.basis();
  const int N = b.spec().N;
  if (k < 1 || k > N - 1 || m < 1 || m > b.layer_size(N - k))
    throw Error(ErrorCode::IndexOutOfRange, "orbit_dim_numeric index out of range");
  const double noise = kJacobianNoise * std::max(l.scale(), linalg::kRankFloor);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  int best = 0;
  for (int s = 0; s < std::max(samples, 1); ++s) {
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(b.dimension());
    if (s > 0)
      for (int i = 0; i < x0.size(); ++i) x0[i] = normal(rng);
    const Eigen::MatrixXd jac = malcev_jacobian(l, x0);
    best = std::max(best, jacobian_rank(jac.topRows(prefix_length(b, N - k, m)), noise));
  }
  return best;
}

Eigen::MatrixXd skew_form(const Functional& l) {
  const auto& b = *l.basis();
  const int n = b.dimension();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (const auto& t : b.bracket_terms(a, c)) m(a, c) += t.coeff * l.coords()[t.index];
  return m;
}

int full_orbit_dim(const Functional& l) { return linalg::numerical_rank(skew_form(l)); }

JumpData jump_sets(const GroupSpec& spec) {
  JumpData out;
  const auto dims = layer_dimensions(spec);
  const int N = spec.N;
  out.quotient_dims = orbit_dims_generic_table(spec);
  std::vector<std::vector<bool>> in_s(N);
  for (int k = 1; k <= N; ++k) in_s[k - 1].assign(dims[k - 1], false);
  if (spec.degenerate()) {
    // Jump pattern of the quotient-orbit dimensions 0,0,1,2,2 along
    // X112, X212, X12, X1, X2 for alpha_112 != 0.
    in_s[1][0] = true;
    in_s[0][0] = true;
    out.derived_special_case = true;
    out.note = "d=2,N=3: S and T derived from the quotient-orbit dimensions of generic functionals";
  } else {
    for (int k = 1; k < N; ++k)
      for (int i = 0; i < dim_km(spec, k, dims[k - 1]); ++i) in_s[k - 1][i] = true;
  }
  for (int k = N; k >= 1; --k)
    for (int i = 0; i < dims[k - 1]; ++i) (in_s[k - 1][i] ? out.S : out.T).push_back({k, i + 1});
  return out;
}

Functional sample_normal(BasisPtr basis, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd c(basis->dimension());
  for (int i = 0; i < c.size(); ++i) c[i] = normal(rng);
  return Functional(std::move(basis), std::move(c));
}

Functional sample_generic(BasisPtr basis, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < kMaxGenericDraws; ++attempt) {
    Eigen::VectorXd c(basis->dimension());
    for (int i = 0; i < c.size(); ++i) c[i] = normal(rng);
    Functional l(basis, std::move(c));
    if (is_generic(l)) return l;
  }
  throw Error(ErrorCode::SamplingExhausted, "no generic functional in 1000 draws");
}

}  // namespace nilfourier
