#pragma once

#include <json.hpp>

#include "nilfourier/coadjoint.hpp"
#include "nilfourier/fourier.hpp"
#include "nilfourier/group_spec.hpp"
#include "nilfourier/lie_basis.hpp"
#include "nilfourier/polarization.hpp"
#include "nilfourier/tensor_algebra.hpp"

namespace nilfourier {

using Json = nlohmann::json;

// All readers throw Error(InvalidInput) on schema violations.

Json to_json(const GroupSpec& spec);
GroupSpec spec_from_json(const Json& j);

// {spec, role, levels: [[level 0], [level 1], ...]}, each level row-major.
Json to_json(const GradedElement& x);
GradedElement element_from_json(const Json& j);

// {spec, coords: [[k, i, value], ...]} with 1-based layer positions; zero
// coordinates are omitted on output.
Json to_json(const Functional& l);
// Throws SpecMismatch if the file's spec differs from the basis spec.
Functional functional_from_json(const Json& j, BasisPtr basis);

// {spec, dimension, layers: [{degree, labels}], brackets: [[[ka,ia],[kb,ib],[kt,it],c], ...]}
Json basis_to_json(const LayeredBasis& basis);

Json to_json(const QuadratureSpec& q);
// Missing keys keep their defaults.
QuadratureSpec quadrature_from_json(const Json& j);

Json to_json(const JumpData& jumps);
Json to_json(const PolarizationReport& r);
// Columns of m as arrays.
Json columns_to_json(const Eigen::MatrixXd& m);

}  // namespace nilfourier
