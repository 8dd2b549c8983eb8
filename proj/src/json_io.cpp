#include "nilfourier/json_io.hpp"

#include "nilfourier/errors.hpp"

namespace nilfourier {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("missing key '") + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::InvalidInput, std::string("bad value for '") + what + "'");
  }
}

Json layer_index(const LayeredBasis& b, int flat) {
  return Json::array({b.degree_of(flat), b.position_in_layer(flat) + 1});
}

Json axis_json(const AxisRule& r) { return {{"nodes", r.nodes}, {"half_width", r.half_width}}; }

void read_axis(const Json& j, const char* key, AxisRule& r) {
  if (!j.contains(key)) return;
  const Json& a = j.at(key);
  if (!a.is_object()) throw Error(ErrorCode::InvalidInput, std::string("'") + key + "' must be an object");
  if (a.contains("nodes")) r.nodes = get_as<int>(a.at("nodes"), "nodes");
  if (a.contains("half_width")) r.half_width = get_as<double>(a.at("half_width"), "half_width");
}

Json index_list(const std::vector<LayerIndex>& v) {
  Json out = Json::array();
  for (const auto& i : v) out.push_back({i.layer, i.position});
  return out;
}

}  // namespace

Json to_json(const GroupSpec& spec) { return {{"d", spec.d}, {"N", spec.N}, {"flavor", flavor_name(spec.flavor)}}; }

GroupSpec spec_from_json(const Json& j) {
  const int d = get_as<int>(require(j, "d"), "d");
  const int n = get_as<int>(require(j, "N"), "N");
  Flavor f = Flavor::FreeNilpotent;
  if (j.contains("flavor")) f = parse_flavor(get_as<std::string>(j.at("flavor"), "flavor"));
  return GroupSpec(d, n, f);
}

Json to_json(const GradedElement& x) {
  Json levels = Json::array();
  for (int k = 0; k <= x.spec().N; ++k) {
    const auto lv = x.level(k);
    levels.push_back(std::vector<double>(lv.begin(), lv.end()));
  }
  return {{"spec", to_json(x.spec())}, {"role", role_name(x.role())}, {"levels", levels}};
}

GradedElement element_from_json(const Json& j) {
  const GroupSpec spec = spec_from_json(require(j, "spec"));
  const Role role = parse_role(get_as<std::string>(require(j, "role"), "role"));
  const Json& levels = require(j, "levels");
  if (!levels.is_array() || static_cast<int>(levels.size()) != spec.N + 1)
    throw Error(ErrorCode::InvalidInput, "'levels' must hold N+1 arrays");
  std::vector<double> coeffs;
  coeffs.reserve(spec.tensor_size());
  for (int k = 0; k <= spec.N; ++k) {
    const auto lv = get_as<std::vector<double>>(levels[k], "levels");
    if (static_cast<std::int64_t>(lv.size()) != spec.level_size(k))
      throw Error(ErrorCode::InvalidInput, "level " + std::to_string(k) + " has the wrong length");
    coeffs.insert(coeffs.end(), lv.begin(), lv.end());
  }
  return GradedElement(spec, role, std::move(coeffs));
}

Json to_json(const Functional& l) {
  const auto& b = *l.basis();
  Json coords = Json::array();
  for (int a = 0; a < b.dimension(); ++a) {
    const double v = l.coords()[a];
    if (v != 0.0) coords.push_back({b.degree_of(a), b.position_in_layer(a) + 1, v});
  }
  return {{"spec", to_json(l.spec())}, {"coords", coords}};
}

Functional functional_from_json(const Json& j, BasisPtr basis) {
  const GroupSpec spec = spec_from_json(require(j, "spec"));
  if (!(spec == basis->spec()))
    throw Error(ErrorCode::SpecMismatch, "functional spec " + spec.to_string() + " does not match " +
                                             basis->spec().to_string());
  Functional l(std::move(basis));
  const Json& coords = require(j, "coords");
  if (!coords.is_array()) throw Error(ErrorCode::InvalidInput, "'coords' must be an array");
  for (const Json& c : coords) {
    if (!c.is_array() || c.size() != 3) throw Error(ErrorCode::InvalidInput, "coords entries are [k, i, value]");
    l.set({get_as<int>(c[0], "k"), get_as<int>(c[1], "i")}, get_as<double>(c[2], "value"));
  }
  return l;
}

Json basis_to_json(const LayeredBasis& basis) {
  Json layers = Json::array();
  for (int k = 1; k <= basis.spec().N; ++k) {
    std::vector<std::string> labels;
    for (int i = 0; i < basis.layer_size(k); ++i) labels.push_back(basis.label(basis.flat(k, i)));
    layers.push_back({{"degree", k}, {"labels", labels}});
  }
  Json brackets = Json::array();
  for (int a = 0; a < basis.dimension(); ++a)
    for (int b = 0; b < basis.dimension(); ++b)
      for (const auto& t : basis.bracket_terms(a, b))
        brackets.push_back({layer_index(basis, a), layer_index(basis, b), layer_index(basis, t.index), t.coeff});
  return {{"spec", to_json(basis.spec())},
          {"dimension", basis.dimension()},
          {"layers", layers},
          {"brackets", brackets}};
}

Json to_json(const QuadratureSpec& q) {
  return {{"subgroup", axis_json(q.subgroup)},
          {"section", axis_json(q.section)},
          {"section_exponent", q.section_exponent},
          {"t_plane", axis_json(q.t_plane)},
          {"check_convergence", q.check_convergence},
          {"convergence_tol", q.convergence_tol}};
}

QuadratureSpec quadrature_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "quadrature config must be an object");
  QuadratureSpec q;
  read_axis(j, "subgroup", q.subgroup);
  read_axis(j, "section", q.section);
  read_axis(j, "t_plane", q.t_plane);
  if (j.contains("section_exponent")) q.section_exponent = get_as<double>(j.at("section_exponent"), "section_exponent");
  if (j.contains("check_convergence"))
    q.check_convergence = get_as<bool>(j.at("check_convergence"), "check_convergence");
  if (j.contains("convergence_tol")) q.convergence_tol = get_as<double>(j.at("convergence_tol"), "convergence_tol");
  q.validate();
  return q;
}

Json to_json(const JumpData& jumps) {
  Json out = {{"S", index_list(jumps.S)},
              {"T", index_list(jumps.T)},
              {"S_size", jumps.S.size()},
              {"T_size", jumps.T.size()},
              {"quotient_dims", jumps.quotient_dims},
              {"derived_special_case", jumps.derived_special_case}};
  if (!jumps.note.empty()) out["note"] = jumps.note;
  return out;
}

Json to_json(const PolarizationReport& r) {
  return {{"subordinate", r.subordinate},
          {"bracket_closed", r.bracket_closed},
          {"dim", r.dim},
          {"expected_dim", r.expected_dim},
          {"pass", r.pass}};
}

Json columns_to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    std::vector<double> col(m.rows());
    for (Eigen::Index r = 0; r < m.rows(); ++r) col[r] = m(r, c);
    out.push_back(col);
  }
  return out;
}

}  // namespace nilfourier
