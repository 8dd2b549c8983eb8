#include "nilfourier/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace nilfourier::linalg {

namespace {

double threshold(const Eigen::VectorXd& sv, double rel_tol, double floor) {
  const double top = sv.size() ? sv.maxCoeff() : 0.0;
  return rel_tol * std::max(top, floor);
}

}  // namespace

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol, double floor) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double t = threshold(sv, rel_tol, floor);
  return static_cast<int>((sv.array() > t).count());
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel_tol, double floor) {
  const auto cols = m.cols();
  if (cols == 0) return Eigen::MatrixXd(0, 0);
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(cols, cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double t = threshold(sv, rel_tol, floor);
  const int rank = static_cast<int>((sv.array() > t).count());
  Eigen::MatrixXd ns = svd.matrixV().rightCols(cols - rank);
  normalize_signs(ns);
  return ns;
}

Eigen::MatrixXd column_span(const Eigen::MatrixXd& m, double rel_tol, double floor) {
  if (m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double t = threshold(sv, rel_tol, floor);
  const int rank = static_cast<int>((sv.array() > t).count());
  Eigen::MatrixXd span = svd.matrixU().leftCols(rank);
  normalize_signs(span);
  return span;
}

void normalize_signs(Eigen::MatrixXd& columns) {
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < columns.rows(); ++i) {
      // first index wins ties so the choice is deterministic
      if (std::abs(columns(i, j)) > best + 1e-12) {
        best = std::abs(columns(i, j));
        arg = i;
      }
    }
    if (columns.rows() && columns(arg, j) < 0) columns.col(j) *= -1.0;
  }
}

double pfaffian(Eigen::MatrixXd a) {
  const auto n = a.rows();
  if (n == 0) return 1.0;
  if (n % 2 == 1) return 0.0;
  double pf = 1.0;
  for (Eigen::Index i = 0; i + 2 < n; ++i) {
    const auto len = n - i - 1;
    Eigen::VectorXd x = a.col(i).tail(len);
    const double sigma = x.tail(len - 1).squaredNorm();
    double alpha = x[0];
    if (sigma != 0.0) {
      const double norm_x = std::sqrt(x[0] * x[0] + sigma);
      Eigen::VectorXd v = x;
      if (x[0] <= 0) {
        v[0] -= norm_x;
        alpha = norm_x;
      } else {
        v[0] += norm_x;
        alpha = -norm_x;
      }
      v.normalize();
      auto block = a.bottomRightCorner(len, len);
      const Eigen::VectorXd w = 2.0 * (block * v);
      block += v * w.transpose() - w * v.transpose();
      pf = -pf;  // det of the reflector
    }
    a(i + 1, i) = alpha;
    a(i, i + 1) = -alpha;
    a.col(i).tail(len - 1).setZero();
    a.row(i).tail(len - 1).setZero();
    if (i % 2 == 0) pf *= -alpha;
  }
  return pf * a(n - 2, n - 1);
}

double skew_defect(const Eigen::MatrixXd& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (a.size() == 0 || scale == 0.0) return 0.0;
  return (a + a.transpose()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace nilfourier::linalg
