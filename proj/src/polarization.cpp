#include "nilfourier/polarization.hpp"

#include <cmath>

#include "nilfourier/errors.hpp"
#include "nilfourier/linalg.hpp"

namespace nilfourier {

namespace {

constexpr double kIndependenceTol = 1e-10;

}  // namespace

Subalgebra::Subalgebra(BasisPtr basis, Eigen::MatrixXd vectors) : basis_(std::move(basis)), vectors_(std::move(vectors)) {
  if (vectors_.cols() > 0 && vectors_.rows() != basis_->dimension())
    throw Error(ErrorCode::DimensionMismatch, "subalgebra vectors have the wrong length");
  if (vectors_.cols() == 0) vectors_.resize(basis_->dimension(), 0);
  orthonormal_ = linalg::column_span(vectors_, kIndependenceTol);
  if (orthonormal_.cols() != vectors_.cols())
    throw Error(ErrorCode::DependentBasis, "subalgebra vectors are linearly dependent");
}

double Subalgebra::residual(const Eigen::VectorXd& v) const {
  return (v - orthonormal_ * (orthonormal_.transpose() * v)).norm();
}

bool Subalgebra::contains(const Eigen::VectorXd& v, double tol) const { return residual(v) <= tol * (1.0 + v.norm()); }

bool Subalgebra::is_bracket_closed(double tol) const {
  for (int a = 0; a < dim(); ++a)
    for (int b = a + 1; b < dim(); ++b)
      if (!contains(basis_->bracket(vectors_.col(a), vectors_.col(b)), tol)) return false;
  return true;
}

bool Subalgebra::is_ideal(double tol) const {
  const int n = basis_->dimension();
  for (int y = 0; y < n; ++y) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[y] = 1.0;
    for (int a = 0; a < dim(); ++a)
      if (!contains(basis_->bracket(e, vectors_.col(a)), tol)) return false;
  }
  return true;
}

std::optional<std::vector<int>> Subalgebra::coordinate_indices(double tol) const {
  std::vector<int> idx;
  const int n = basis_->dimension();
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = 1.0;
    if (residual(e) <= tol) idx.push_back(i);
  }
  if (static_cast<int>(idx.size()) != dim()) return std::nullopt;
  return idx;
}

Subalgebra layer_span(BasisPtr basis, int lo, int hi) {
  const int n = basis->dimension();
  std::vector<int> idx;
  for (int k = lo; k <= hi; ++k)
    for (int i = 0; i < basis->layer_size(k); ++i) idx.push_back(basis->flat(k, i));
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) v(idx[j], static_cast<Eigen::Index>(j)) = 1.0;
  return Subalgebra(std::move(basis), std::move(v));
}

bool is_subordinate(const Functional& l, const Subalgebra& h, double tol) {
  if (h.dim() == 0) return true;
  const Eigen::MatrixXd form = h.vectors().transpose() * skew_form(l) * h.vectors();
  return form.cwiseAbs().maxCoeff() <= tol;
}

Subalgebra generic_polarization(const Functional& l) {
  const auto& spec = l.spec();
  if (spec.degenerate()) throw Error(ErrorCode::DegenerateSpec, "d=2,N=3 uses the Vergne construction");
  if (!is_generic(l)) throw Error(ErrorCode::NotGeneric, "functional is not in general position");
  const auto& basis = l.basis();
  const int N = spec.N;
  std::optional<Subalgebra> result;
  if (N % 2 == 1) {
    result.emplace(layer_span(basis, (N + 1) / 2, N));
  } else {
    const int k = N / 2;
    const int mk = basis->layer_size(k);
    const int n = basis->dimension();
    const Eigen::MatrixXd b = b_matrix(l, k, mk);
    std::vector<Eigen::VectorXd> cols;
    for (int m = 1; m <= mk; ++m) {
      const Eigen::MatrixXd ker = linalg::null_space(b.topLeftCorner(m, m));
      for (Eigen::Index c = 0; c < ker.cols(); ++c) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        v.segment(basis->offset(k), m) = ker.col(c);
        cols.push_back(std::move(v));
      }
    }
    Eigen::MatrixXd kernel_part(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) kernel_part.col(static_cast<Eigen::Index>(j)) = cols[j];
    kernel_part = linalg::column_span(kernel_part);
    const Subalgebra upper = layer_span(basis, k + 1, N);
    Eigen::MatrixXd all(n, kernel_part.cols() + upper.dim());
    all << upper.vectors(), kernel_part;
    result.emplace(basis, std::move(all));
  }
  const auto report = polarization_check(l, *result);
  if (!report.pass)
    throw Error(ErrorCode::NotPolarization, "kernel construction gave dim " + std::to_string(report.dim) +
                                                ", expected " + std::to_string(report.expected_dim));
  return *result;
}

Subalgebra vergne_polarization(const Functional& l, const std::vector<int>& order_in) {
  const auto& basis = l.basis();
  const std::vector<int>& order = order_in.empty() ? basis->malcev_order() : order_in;
  if (!basis->is_strong_malcev(order)) throw Error(ErrorCode::InvalidInput, "chain is not a strong Malcev order");
  const int n = basis->dimension();
  const Eigen::MatrixXd form = skew_form(l);
  Eigen::MatrixXd ordered(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) ordered(a, b) = form(order[a], order[b]);
  std::vector<Eigen::VectorXd> cols;
  for (int j = 1; j <= n; ++j) {
    const Eigen::MatrixXd radical = linalg::null_space(ordered.topLeftCorner(j, j));
    for (Eigen::Index c = 0; c < radical.cols(); ++c) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      for (int r = 0; r < j; ++r) v[order[r]] = radical(r, c);
      cols.push_back(std::move(v));
    }
  }
  Eigen::MatrixXd all(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) all.col(static_cast<Eigen::Index>(j)) = cols[j];
  return Subalgebra(basis, linalg::column_span(all));
}

Subalgebra polarization_for(const Functional& l) {
  if (!l.spec().degenerate() && is_generic(l)) return generic_polarization(l);
  return vergne_polarization(l);
}

PolarizationReport polarization_check(const Functional& l, const Subalgebra& h) {
  PolarizationReport r;
  r.subordinate = is_subordinate(l, h);
  r.bracket_closed = h.is_bracket_closed();
  r.dim = h.dim();
  r.expected_dim = l.basis()->dimension() - full_orbit_dim(l) / 2;
  r.pass = r.subordinate && r.bracket_closed && r.dim == r.expected_dim;
  return r;
}

}  // namespace nilfourier
