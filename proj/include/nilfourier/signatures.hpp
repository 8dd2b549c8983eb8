#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nilfourier/lie_basis.hpp"
#include "nilfourier/tensor_algebra.hpp"

namespace nilfourier {

// Vertices of a piecewise-linear path on [0,1].
class PiecewiseLinearPath {
 public:
  explicit PiecewiseLinearPath(std::vector<std::vector<double>> points);

  int dimension() const { return static_cast<int>(points_.front().size()); }
  std::size_t vertex_count() const { return points_.size(); }
  const std::vector<std::vector<double>>& points() const { return points_; }
  std::vector<double> increment(std::size_t segment) const;

  PiecewiseLinearPath reversed() const;
  // Follows this path, then `next` translated to start at our endpoint.
  PiecewiseLinearPath concatenated(const PiecewiseLinearPath& next) const;
  // Inserts the midpoint of the given segment.
  PiecewiseLinearPath refined(std::size_t segment) const;

 private:
  std::vector<std::vector<double>> points_;
};

// One vertex per row, d columns, optional non-numeric header row.
PiecewiseLinearPath read_path_csv(std::istream& in);
PiecewiseLinearPath read_path_csv_file(const std::string& filename);

GradedElement segment_signature(std::span<const double> increment, const GroupSpec& spec);
// Chen product of the segment signatures in path order.
GradedElement path_signature(const PiecewiseLinearPath& path, const GroupSpec& spec);
// Flat coordinates of log S(path) in the basis; throws NotInLieImage if the
// logarithm leaves the free Lie algebra.
Eigen::VectorXd log_signature(const PiecewiseLinearPath& path, const LayeredBasis& basis);

}  // namespace nilfourier
