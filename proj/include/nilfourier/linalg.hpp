#pragma once

#include <Eigen/Dense>

namespace nilfourier::linalg {

inline constexpr double kRankTol = 1e-8;
inline constexpr double kRankFloor = 1e-30;

// Singular values above rel_tol * max(sigma_max, floor).
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = kRankTol, double floor = kRankFloor);

// Orthonormal basis (columns) of the null space of m, same threshold rule.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel_tol = kRankTol, double floor = kRankFloor);

// Orthonormal basis of the column span of m, same threshold rule.
Eigen::MatrixXd column_span(const Eigen::MatrixXd& m, double rel_tol = kRankTol, double floor = kRankFloor);

// Flips each column so that its largest-magnitude entry is positive.
void normalize_signs(Eigen::MatrixXd& columns);

// Pfaffian of a real skew-symmetric matrix by Householder tridiagonalization.
double pfaffian(Eigen::MatrixXd a);

// max |a + a^T| relative to max |a| (0 for the zero matrix).
double skew_defect(const Eigen::MatrixXd& a);

}  // namespace nilfourier::linalg
