#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nilfourier {

enum class Flavor { FreeNilpotent, FullTensor };

// Truncation data for G_N(R^d) and the graded algebra it lives in.
struct GroupSpec {
  int d = 2;
  int N = 2;
  Flavor flavor = Flavor::FreeNilpotent;

  GroupSpec() = default;
  GroupSpec(int dim, int depth, Flavor f = Flavor::FreeNilpotent);

  // The step-3 free algebra on two letters, excluded from the B-matrix theory.
  bool degenerate() const { return flavor == Flavor::FreeNilpotent && d == 2 && N == 3; }

  // d^k for k = 0..N.
  std::int64_t level_size(int k) const;
  // Offset of level k inside a flat array holding levels 0..N.
  std::int64_t level_offset(int k) const;
  std::int64_t tensor_size() const { return level_offset(N + 1); }

  std::string to_string() const;
  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

std::string flavor_name(Flavor f);
Flavor parse_flavor(const std::string& name);

// Number of Lyndon words of length k over d letters, by the Moebius sum.
std::int64_t witt_dimension(std::int64_t d, int k);

// m_k for k = 1..N (index k-1).
std::vector<int> layer_dimensions(const GroupSpec& spec);

}  // namespace nilfourier
