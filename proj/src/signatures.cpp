#include "nilfourier/signatures.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "nilfourier/errors.hpp"

namespace nilfourier {

namespace {

bool parse_row(const std::string& line, std::vector<double>& row) {
  row.clear();
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      return false;
    }
    for (std::size_t i = used; i < cell.size(); ++i)
      if (!std::isspace(static_cast<unsigned char>(cell[i]))) return false;
    row.push_back(v);
  }
  return !row.empty();
}

}  // namespace

PiecewiseLinearPath::PiecewiseLinearPath(std::vector<std::vector<double>> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw Error(ErrorCode::InvalidInput, "a path needs at least two vertices");
  const auto d = points_.front().size();
  if (d == 0) throw Error(ErrorCode::InvalidInput, "vertices must have at least one coordinate");
  for (const auto& p : points_)
    if (p.size() != d) throw Error(ErrorCode::DimensionMismatch, "vertices have inconsistent dimension");
}

std::vector<double> PiecewiseLinearPath::increment(std::size_t segment) const {
  std::vector<double> v(points_[segment + 1]);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= points_[segment][i];
  return v;
}

PiecewiseLinearPath PiecewiseLinearPath::reversed() const {
  return PiecewiseLinearPath(std::vector<std::vector<double>>(points_.rbegin(), points_.rend()));
}

PiecewiseLinearPath PiecewiseLinearPath::concatenated(const PiecewiseLinearPath& next) const {
  if (next.dimension() != dimension()) throw Error(ErrorCode::DimensionMismatch, "paths differ in dimension");
  auto pts = points_;
  const auto& end = points_.back();
  const auto& start = next.points_.front();
  for (std::size_t j = 1; j < next.points_.size(); ++j) {
    std::vector<double> p(next.points_[j]);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += end[i] - start[i];
    pts.push_back(std::move(p));
  }
  return PiecewiseLinearPath(std::move(pts));
}

PiecewiseLinearPath PiecewiseLinearPath::refined(std::size_t segment) const {
  auto pts = points_;
  std::vector<double> mid(points_[segment]);
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (points_[segment][i] + points_[segment + 1][i]);
  pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(segment) + 1, std::move(mid));
  return PiecewiseLinearPath(std::move(pts));
}

PiecewiseLinearPath read_path_csv(std::istream& in) {
  std::vector<std::vector<double>> points;
  std::string line;
  std::vector<double> row;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!parse_row(line, row)) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw Error(ErrorCode::InvalidInput, "non-numeric path row at line " + std::to_string(line_no));
    }
    first = false;
    points.push_back(row);
  }
  return PiecewiseLinearPath(std::move(points));
}

PiecewiseLinearPath read_path_csv_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + filename);
  return read_path_csv(in);
}

GradedElement segment_signature(std::span<const double> increment, const GroupSpec& spec) {
  if (static_cast<int>(increment.size()) != spec.d)
    throw Error(ErrorCode::DimensionMismatch, "increment length differs from d");
  GradedElement s = GradedElement::identity(spec);
  for (int k = 1; k <= spec.N; ++k) {
    const auto prev = s.level(k - 1);
    auto cur = s.level(k);
    for (std::size_t p = 0; p < prev.size(); ++p)
      for (int q = 0; q < spec.d; ++q) cur[p * spec.d + q] = prev[p] * increment[q] / k;
  }
  return s;
}

GradedElement path_signature(const PiecewiseLinearPath& path, const GroupSpec& spec) {
  if (path.dimension() != spec.d) throw Error(ErrorCode::DimensionMismatch, "path dimension differs from d");
  GradedElement s = GradedElement::identity(spec);
  for (std::size_t i = 0; i + 1 < path.vertex_count(); ++i) {
    const auto v = path.increment(i);
    s = multiply(s, segment_signature(v, spec));
  }
  return s;
}

Eigen::VectorXd log_signature(const PiecewiseLinearPath& path, const LayeredBasis& basis) {
  if (basis.spec().flavor != Flavor::FreeNilpotent)
    throw Error(ErrorCode::InvalidSpec, "log-signatures are expanded in a free Lie basis");
  return basis.coordinates(tensor_log(path_signature(path, basis.spec())));
}

}  // namespace nilfourier
