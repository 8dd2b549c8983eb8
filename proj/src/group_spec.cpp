#include "nilfourier/group_spec.hpp"

#include <limits>

#include "nilfourier/errors.hpp"

namespace nilfourier {

namespace {

constexpr int kMaxDepth = 20;
constexpr std::int64_t kMaxTensorSize = std::int64_t{1} << 24;

std::int64_t checked_pow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::int64_t>::max() / base)
      throw Error(ErrorCode::Overflow, "d^k exceeds the 64-bit range");
    r *= base;
  }
  return r;
}

int moebius(int n) {
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

}  // namespace

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::DependentBasis: return "DependentBasis";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::NotInLieImage: return "NotInLieImage";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::RoleError: return "RoleError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateSpec: return "DegenerateSpec";
    case ErrorCode::SamplingExhausted: return "SamplingExhausted";
    case ErrorCode::NotGeneric: return "NotGeneric";
    case ErrorCode::NotPolarization: return "NotPolarization";
    case ErrorCode::QuadratureUnderflow: return "QuadratureUnderflow";
    case ErrorCode::NegativeDeterminant: return "NegativeDeterminant";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

GroupSpec::GroupSpec(int dim, int depth, Flavor f) : d(dim), N(depth), flavor(f) {
  if (d < 1 || N < 1) throw Error(ErrorCode::InvalidSpec, "need d >= 1 and N >= 1");
  if (N > kMaxDepth) throw Error(ErrorCode::InvalidSpec, "N > 20 is not supported");
  std::int64_t total = 0;
  for (int k = 0; k <= N; ++k) total += checked_pow(d, k);
  if (total > kMaxTensorSize) throw Error(ErrorCode::InvalidSpec, "tensor algebra too large: " + to_string());
}

std::int64_t GroupSpec::level_size(int k) const { return checked_pow(d, k); }

std::int64_t GroupSpec::level_offset(int k) const {
  std::int64_t off = 0;
  for (int j = 0; j < k; ++j) off += level_size(j);
  return off;
}

std::string GroupSpec::to_string() const {
  return "(d=" + std::to_string(d) + ",N=" + std::to_string(N) + "," + flavor_name(flavor) + ")";
}

std::string flavor_name(Flavor f) { return f == Flavor::FreeNilpotent ? "free" : "tensor"; }

Flavor parse_flavor(const std::string& name) {
  if (name == "free" || name == "FreeNilpotent") return Flavor::FreeNilpotent;
  if (name == "tensor" || name == "FullTensor") return Flavor::FullTensor;
  throw Error(ErrorCode::InvalidInput, "unknown flavor '" + name + "'");
}

std::int64_t witt_dimension(std::int64_t d, int k) {
  if (d < 1 || k < 1) throw Error(ErrorCode::InvalidSpec, "witt_dimension needs d >= 1 and k >= 1");
  std::int64_t sum = 0;
  for (int n = 1; n <= k; ++n) {
    if (k % n != 0) continue;
    const int mu = moebius(n);
    if (mu != 0) sum += mu * checked_pow(d, k / n);
  }
  return sum / k;
}

std::vector<int> layer_dimensions(const GroupSpec& spec) {
  std::vector<int> dims;
  for (int k = 1; k <= spec.N; ++k)
    dims.push_back(static_cast<int>(spec.flavor == Flavor::FullTensor ? spec.level_size(k)
                                                                     : witt_dimension(spec.d, k)));
  return dims;
}

}  // namespace nilfourier
