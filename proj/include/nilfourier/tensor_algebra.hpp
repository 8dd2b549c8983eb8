#pragma once

#include <span>
#include <string>
#include <vector>

#include "nilfourier/group_spec.hpp"

namespace nilfourier {

// Algebra elements have level 0 equal to 0, group elements have it equal to 1.
enum class Role { Algebra, Group, Raw };

std::string role_name(Role r);
Role parse_role(const std::string& name);

// Element of the truncated tensor algebra, levels 0..N stored back to back.
// Level k is a dense row-major array over (i1,...,ik), i1 slowest.
class GradedElement {
 public:
  GradedElement(const GroupSpec& spec, Role role);
  GradedElement(const GroupSpec& spec, Role role, std::vector<double> coeffs);

  static GradedElement zero(const GroupSpec& spec) { return {spec, Role::Algebra}; }
  static GradedElement identity(const GroupSpec& spec) { return {spec, Role::Group}; }
  // Algebra element with only a level-1 part.
  static GradedElement from_vector(const GroupSpec& spec, std::span<const double> v);

  const GroupSpec& spec() const { return spec_; }
  Role role() const { return role_; }

  std::span<double> level(int k);
  std::span<const double> level(int k) const;
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  // Coefficient of e_{i1...ik}; indices are 1-based.
  double at(std::span<const int> word) const;

  // Max-abs difference over all levels.
  double distance(const GradedElement& other) const;

  GradedElement operator+(const GradedElement& o) const;
  GradedElement operator-(const GradedElement& o) const;
  GradedElement operator*(double s) const;
  GradedElement operator-() const { return *this * -1.0; }

 private:
  GroupSpec spec_;
  Role role_;
  std::vector<double> coeffs_;
};

GradedElement multiply(const GradedElement& g, const GradedElement& h);
GradedElement tensor_exp(const GradedElement& x);
GradedElement tensor_log(const GradedElement& g);
GradedElement bch(const GradedElement& x, const GradedElement& y);
GradedElement commutator(const GradedElement& x, const GradedElement& y);
GradedElement group_inverse(const GradedElement& g);
// Ad_g Y = sum_k (ad X)^k Y / k! with X = log g.
GradedElement adjoint(const GradedElement& g, const GradedElement& y);

// Raw kernels on flat coefficient arrays of length spec.tensor_size(); these
// allocate nothing and are what the quadrature loops call.
namespace kernels {

void multiply(const GroupSpec& spec, const double* a, const double* b, double* out);
// out = log(g); scratch must hold 3 * tensor_size doubles.
void log_group(const GroupSpec& spec, const double* g, double* out, double* scratch);
// out = exp(x); scratch must hold 3 * tensor_size doubles.
void exp_algebra(const GroupSpec& spec, const double* x, double* out, double* scratch);

}  // namespace kernels

}  // namespace nilfourier
