#include "nilfourier/tensor_algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "nilfourier/errors.hpp"

namespace nilfourier {

namespace {

struct LevelLayout {
  std::array<std::int64_t, 22> size{};
  std::array<std::int64_t, 23> offset{};
  int N = 0;

  explicit LevelLayout(const GroupSpec& spec) : N(spec.N) {
    std::int64_t s = 1;
    offset[0] = 0;
    for (int k = 0; k <= N; ++k) {
      size[k] = s;
      offset[k + 1] = offset[k] + s;
      s *= spec.d;
    }
  }
  std::int64_t total() const { return offset[N + 1]; }
};

void require_same_spec(const GradedElement& a, const GradedElement& b) {
  if (!(a.spec() == b.spec()))
    throw Error(ErrorCode::SpecMismatch, a.spec().to_string() + " vs " + b.spec().to_string());
}

void require_role(const GradedElement& x, Role role, const char* op) {
  if (x.role() != role)
    throw Error(ErrorCode::RoleError, std::string(op) + " expects a " + role_name(role) + " element, got " +
                                          role_name(x.role()));
}

// Power series sum_k coeff[k] * x^k with x having zero constant term.
void power_series(const GroupSpec& spec, const double* x, const double* coeff, double* out, double* scratch) {
  const LevelLayout lay(spec);
  const auto n = lay.total();
  double* power = scratch;
  double* next = scratch + n;
  std::copy(x, x + n, power);
  std::fill(out, out + n, 0.0);
  out[0] = coeff[0];
  for (int k = 1; k <= spec.N; ++k) {
    if (k > 1) {
      kernels::multiply(spec, power, x, next);
      std::swap(power, next);
    }
    // x^k lives in levels >= k.
    for (auto i = lay.offset[k]; i < n; ++i) out[i] += coeff[k] * power[i];
  }
}

}  // namespace

std::string role_name(Role r) {
  switch (r) {
    case Role::Algebra: return "algebra";
    case Role::Group: return "group";
    case Role::Raw: return "raw";
  }
  return "raw";
}

Role parse_role(const std::string& name) {
  if (name == "algebra") return Role::Algebra;
  if (name == "group") return Role::Group;
  if (name == "raw") return Role::Raw;
  throw Error(ErrorCode::InvalidInput, "unknown role '" + name + "'");
}

GradedElement::GradedElement(const GroupSpec& spec, Role role)
    : spec_(spec), role_(role), coeffs_(static_cast<std::size_t>(spec.tensor_size()), 0.0) {
  if (role == Role::Group) coeffs_[0] = 1.0;
}

GradedElement::GradedElement(const GroupSpec& spec, Role role, std::vector<double> coeffs)
    : spec_(spec), role_(role), coeffs_(std::move(coeffs)) {
  if (static_cast<std::int64_t>(coeffs_.size()) != spec.tensor_size())
    throw Error(ErrorCode::DimensionMismatch, "coefficient array has the wrong length");
  if (role == Role::Algebra && coeffs_[0] != 0.0) throw Error(ErrorCode::RoleError, "algebra element with p0 != 0");
  if (role == Role::Group && coeffs_[0] != 1.0) throw Error(ErrorCode::RoleError, "group element with p0 != 1");
}

GradedElement GradedElement::from_vector(const GroupSpec& spec, std::span<const double> v) {
  if (static_cast<int>(v.size()) != spec.d) throw Error(ErrorCode::DimensionMismatch, "vector length must be d");
  GradedElement x(spec, Role::Algebra);
  std::copy(v.begin(), v.end(), x.level(1).begin());
  return x;
}

std::span<double> GradedElement::level(int k) {
  if (k < 0 || k > spec_.N) throw Error(ErrorCode::IndexOutOfRange, "level out of range");
  return std::span<double>(coeffs_).subspan(spec_.level_offset(k), spec_.level_size(k));
}

std::span<const double> GradedElement::level(int k) const {
  if (k < 0 || k > spec_.N) throw Error(ErrorCode::IndexOutOfRange, "level out of range");
  return std::span<const double>(coeffs_).subspan(spec_.level_offset(k), spec_.level_size(k));
}

double GradedElement::at(std::span<const int> word) const {
  std::int64_t idx = 0;
  for (int letter : word) {
    if (letter < 1 || letter > spec_.d) throw Error(ErrorCode::IndexOutOfRange, "letter out of range");
    idx = idx * spec_.d + (letter - 1);
  }
  return level(static_cast<int>(word.size()))[idx];
}

double GradedElement::distance(const GradedElement& other) const {
  require_same_spec(*this, other);
  double m = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) m = std::max(m, std::abs(coeffs_[i] - other.coeffs_[i]));
  return m;
}

GradedElement GradedElement::operator+(const GradedElement& o) const {
  require_same_spec(*this, o);
  std::vector<double> c(coeffs_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.coeffs_[i];
  const Role r = (role_ == Role::Algebra && o.role_ == Role::Algebra) ? Role::Algebra : Role::Raw;
  return {spec_, r, std::move(c)};
}

GradedElement GradedElement::operator-(const GradedElement& o) const { return *this + o * -1.0; }

GradedElement GradedElement::operator*(double s) const {
  std::vector<double> c(coeffs_);
  for (double& v : c) v *= s;
  Role r = role_;
  if (role_ == Role::Group && s != 1.0) r = Role::Raw;
  if (r == Role::Algebra) c[0] = 0.0;  // avoid -0.0 noise
  return {spec_, r, std::move(c)};
}

namespace kernels {

void multiply(const GroupSpec& spec, const double* a, const double* b, double* out) {
  const LevelLayout lay(spec);
  std::fill(out, out + lay.total(), 0.0);
  for (int k = 0; k <= spec.N; ++k) {
    double* o = out + lay.offset[k];
    for (int i = 0; i <= k; ++i) {
      const int j = k - i;
      const double* ai = a + lay.offset[i];
      const double* bj = b + lay.offset[j];
      const auto sj = lay.size[j];
      for (std::int64_t p = 0; p < lay.size[i]; ++p) {
        const double ap = ai[p];
        if (ap == 0.0) continue;
        double* row = o + p * sj;
        for (std::int64_t q = 0; q < sj; ++q) row[q] += ap * bj[q];
      }
    }
  }
}

void log_group(const GroupSpec& spec, const double* g, double* out, double* scratch) {
  const auto n = spec.tensor_size();
  double* x = scratch + 2 * n;
  std::copy(g, g + n, x);
  x[0] = 0.0;
  std::array<double, 22> coeff{};
  for (int k = 1; k <= spec.N; ++k) coeff[k] = (k % 2 == 1 ? 1.0 : -1.0) / k;
  power_series(spec, x, coeff.data(), out, scratch);
}

void exp_algebra(const GroupSpec& spec, const double* x, double* out, double* scratch) {
  std::array<double, 22> coeff{};
  coeff[0] = 1.0;
  for (int k = 1; k <= spec.N; ++k) coeff[k] = coeff[k - 1] / k;
  const auto n = spec.tensor_size();
  double* xs = scratch + 2 * n;
  std::copy(x, x + n, xs);
  xs[0] = 0.0;
  power_series(spec, xs, coeff.data(), out, scratch);
}

}  // namespace kernels

GradedElement multiply(const GradedElement& g, const GradedElement& h) {
  require_same_spec(g, h);
  std::vector<double> out(g.coeffs().size());
  kernels::multiply(g.spec(), g.coeffs().data(), h.coeffs().data(), out.data());
  Role r = Role::Raw;
  if (g.role() == Role::Group && h.role() == Role::Group) r = Role::Group;
  if (g.role() == Role::Algebra || h.role() == Role::Algebra) {
    // a product with an algebra factor has p0 = 0
    r = (g.role() == Role::Raw || h.role() == Role::Raw) ? Role::Raw : Role::Algebra;
    if (r == Role::Algebra) out[0] = 0.0;
  }
  return {g.spec(), r, std::move(out)};
}

GradedElement tensor_exp(const GradedElement& x) {
  require_role(x, Role::Algebra, "tensor_exp");
  const auto n = static_cast<std::size_t>(x.spec().tensor_size());
  std::vector<double> out(n), scratch(3 * n);
  kernels::exp_algebra(x.spec(), x.coeffs().data(), out.data(), scratch.data());
  out[0] = 1.0;
  return {x.spec(), Role::Group, std::move(out)};
}

GradedElement tensor_log(const GradedElement& g) {
  require_role(g, Role::Group, "tensor_log");
  const auto n = static_cast<std::size_t>(g.spec().tensor_size());
  std::vector<double> out(n), scratch(3 * n);
  kernels::log_group(g.spec(), g.coeffs().data(), out.data(), scratch.data());
  out[0] = 0.0;
  return {g.spec(), Role::Algebra, std::move(out)};
}

GradedElement bch(const GradedElement& x, const GradedElement& y) {
  require_same_spec(x, y);
  require_role(x, Role::Algebra, "bch");
  require_role(y, Role::Algebra, "bch");
  return tensor_log(multiply(tensor_exp(x), tensor_exp(y)));
}

GradedElement commutator(const GradedElement& x, const GradedElement& y) {
  require_same_spec(x, y);
  require_role(x, Role::Algebra, "commutator");
  require_role(y, Role::Algebra, "commutator");
  return multiply(x, y) - multiply(y, x);
}

GradedElement group_inverse(const GradedElement& g) {
  require_role(g, Role::Group, "group_inverse");
  return tensor_exp(-tensor_log(g));
}

GradedElement adjoint(const GradedElement& g, const GradedElement& y) {
  require_same_spec(g, y);
  require_role(g, Role::Group, "adjoint");
  require_role(y, Role::Algebra, "adjoint");
  const GradedElement x = tensor_log(g);
  GradedElement term = y;
  GradedElement result = y;
  for (int k = 1; k < g.spec().N; ++k) {
    term = commutator(x, term) * (1.0 / k);
    result = result + term;
  }
  return result;
}

}  // namespace nilfourier
