#include "nilfourier/chart.hpp"

#include <algorithm>
#include <cmath>

#include "nilfourier/errors.hpp"
#include "nilfourier/linalg.hpp"

namespace nilfourier {

namespace {

constexpr double kGradedTol = 1e-10;

}  // namespace

MalcevChart::MalcevChart(const Subalgebra& h) : basis_(h.basis()), n_(h.basis()->dimension()), qh_(h.dim()) {
  const auto& b = *basis_;
  const int N = b.spec().N;
  const Eigen::MatrixXd& q = h.orthonormal();
  std::vector<Eigen::MatrixXd> inside(N + 1), outside(N + 1);
  int graded_total = 0;
  for (int k = N; k >= 1; --k) {
    const int mk = b.layer_size(k);
    const Eigen::MatrixXd rows = q.middleRows(b.offset(k), mk);
    const int r = qh_ ? linalg::numerical_rank(rows, kGradedTol) : 0;
    if (r == mk) {
      inside[k] = Eigen::MatrixXd::Identity(mk, mk);
      outside[k].resize(mk, 0);
    } else if (r == 0) {
      inside[k].resize(mk, 0);
      outside[k] = Eigen::MatrixXd::Identity(mk, mk);
    } else {
      inside[k] = linalg::column_span(rows, kGradedTol);
      outside[k] = linalg::null_space(inside[k].transpose());
    }
    for (Eigen::Index c = 0; c < inside[k].cols(); ++c) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n_);
      v.segment(b.offset(k), mk) = inside[k].col(c);
      if (!h.contains(v, 1e-9)) throw Error(ErrorCode::InvalidInput, "subalgebra is not graded");
    }
    graded_total += r;
  }
  if (graded_total != qh_) throw Error(ErrorCode::InvalidInput, "subalgebra is not graded");

  vectors_ = Eigen::MatrixXd::Zero(n_, n_);
  int col = 0;
  for (const auto* blocks : {&inside, &outside})
    for (int k = N; k >= 1; --k)
      for (Eigen::Index c = 0; c < (*blocks)[k].cols(); ++c)
        vectors_.col(col++).segment(b.offset(k), b.layer_size(k)) = (*blocks)[k].col(c);
  if (!is_strong_malcev()) throw Error(ErrorCode::InvalidInput, "chart order is not strong Malcev");

  ideal_ = h.is_ideal();
  jacobian_ = std::abs(vectors_.determinant());
  inverse_ = vectors_.inverse();
  tsize_ = static_cast<std::size_t>(b.spec().tensor_size());
  powers_.resize(n_);
  for (int j = 0; j < n_; ++j) {
    const GradedElement x = b.embed(vectors_.col(j));
    auto& pw = powers_[j];
    pw.assign(N + 1, std::vector<double>(tsize_, 0.0));
    pw[0][0] = 1.0;
    for (int k = 1; k <= N; ++k) {
      kernels::multiply(b.spec(), pw[k - 1].data(), x.coeffs().data(), pw[k].data());
      for (double& v : pw[k]) v /= k;
    }
  }
}

bool MalcevChart::is_strong_malcev() const {
  const auto& b = *basis_;
  for (int r = 0; r < n_; ++r) {
    const Eigen::MatrixXd prefix = vectors_.leftCols(r + 1);
    for (int y = 0; y < n_; ++y) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
      e[y] = 1.0;
      const Eigen::VectorXd br = b.bracket(e, vectors_.col(r));
      const Eigen::VectorXd coef = prefix.colPivHouseholderQr().solve(br);
      if ((prefix * coef - br).norm() > 1e-10 * (1.0 + br.norm())) return false;
    }
  }
  return true;
}

MalcevChart::Scratch::Scratch(const MalcevChart& chart)
    : a_(chart.tsize_), b_(chart.tsize_), c_(chart.tsize_), work_(4 * chart.tsize_), coords_(chart.n_) {}

void MalcevChart::exp_vector_into(int j, double t, double* out) const {
  const auto& pw = powers_[j];
  std::copy(pw[0].begin(), pw[0].end(), out);
  double tk = 1.0;
  for (std::size_t k = 1; k < pw.size(); ++k) {
    tk *= t;
    const double* p = pw[k].data();
    for (std::size_t i = 0; i < tsize_; ++i) out[i] += tk * p[i];
  }
}

void MalcevChart::gamma_into(const double* alpha, int first, int last, double* out, Scratch& s) const {
  std::fill(out, out + tsize_, 0.0);
  out[0] = 1.0;
  for (int j = last - 1; j >= first; --j) {
    if (alpha[j - first] == 0.0) continue;
    exp_vector_into(j, alpha[j - first], s.a_.data());
    kernels::multiply(spec(), out, s.a_.data(), s.b_.data());
    std::copy(s.b_.begin(), s.b_.end(), out);
  }
}

void MalcevChart::decompose_into(const double* g, double* alpha, Scratch& s) const {
  double* cur = s.c_.data();
  double* lg = s.work_.data() + 3 * tsize_;
  std::copy(g, g + tsize_, cur);
  for (int j = n_ - 1; j >= 0; --j) {
    kernels::log_group(spec(), cur, lg, s.work_.data());
    basis_->project_unchecked(lg, s.coords_.data());
    const double aj = inverse_.row(j).dot(Eigen::Map<const Eigen::VectorXd>(s.coords_.data(), n_));
    alpha[j] = aj;
    if (j == 0) break;
    exp_vector_into(j, -aj, s.a_.data());
    kernels::multiply(spec(), s.a_.data(), cur, s.b_.data());
    std::copy(s.b_.begin(), s.b_.end(), cur);
  }
}

GradedElement MalcevChart::exp_vector(int j, double t) const {
  std::vector<double> out(tsize_);
  exp_vector_into(j, t, out.data());
  out[0] = 1.0;
  return {spec(), Role::Group, std::move(out)};
}

GradedElement MalcevChart::gamma(const Eigen::VectorXd& alpha) const {
  if (alpha.size() != n_) throw Error(ErrorCode::DimensionMismatch, "gamma needs n coordinates");
  Scratch s(*this);
  std::vector<double> out(tsize_);
  gamma_into(alpha.data(), 0, n_, out.data(), s);
  return {spec(), Role::Group, std::move(out)};
}

GradedElement MalcevChart::section(const Eigen::VectorXd& sec) const {
  if (sec.size() != section_dim()) throw Error(ErrorCode::DimensionMismatch, "section point has the wrong length");
  Scratch s(*this);
  std::vector<double> out(tsize_);
  gamma_into(sec.data(), qh_, n_, out.data(), s);
  return {spec(), Role::Group, std::move(out)};
}

GradedElement MalcevChart::subgroup(const Eigen::VectorXd& h) const {
  if (h.size() != qh_) throw Error(ErrorCode::DimensionMismatch, "subgroup point has the wrong length");
  Scratch s(*this);
  std::vector<double> out(tsize_);
  gamma_into(h.data(), 0, qh_, out.data(), s);
  return {spec(), Role::Group, std::move(out)};
}

Eigen::VectorXd MalcevChart::gamma_coordinates(const GradedElement& g) const {
  if (!(g.spec() == spec()) || g.role() != Role::Group)
    throw Error(ErrorCode::SpecMismatch, "gamma_coordinates needs a group element of the chart's spec");
  Scratch s(*this);
  Eigen::VectorXd alpha(n_);
  decompose_into(g.coeffs().data(), alpha.data(), s);
  return alpha;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> MalcevChart::decompose(const GradedElement& g) const {
  const Eigen::VectorXd alpha = gamma_coordinates(g);
  return {alpha.tail(n_ - qh_), alpha.head(qh_)};
}

}  // namespace nilfourier
