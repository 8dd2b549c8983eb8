#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nilfourier/coadjoint.hpp"
#include "nilfourier/errors.hpp"
#include "nilfourier/fourier.hpp"
#include "nilfourier/json_io.hpp"
#include "nilfourier/linalg.hpp"
#include "nilfourier/polarization.hpp"
#include "nilfourier/signatures.hpp"

namespace fs = std::filesystem;
using namespace nilfourier;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240607;

struct Options {
  std::string spec_text;
  std::string flavor = "free";
  std::uint64_t seed = kDefaultSeed;
  std::string config;
  std::string out;
  bool paper_basis = false;
  std::string functional;
  std::string path;
  std::string method = "auto";
  int samples = 8;
};

GroupSpec parse_spec(const std::string& text, const std::string& flavor) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::InvalidInput, "--spec expects d,N");
  try {
    std::size_t used_d = 0, used_n = 0;
    const std::string ds = text.substr(0, comma), ns = text.substr(comma + 1);
    const int d = std::stoi(ds, &used_d);
    const int n = std::stoi(ns, &used_n);
    if (used_d != ds.size() || used_n != ns.size()) throw std::invalid_argument("trailing");
    return GroupSpec(d, n, parse_flavor(flavor));
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidInput, "--spec expects two integers d,N, got '" + text + "'");
  }
}

Json read_json_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + filename);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, filename + ": " + e.what());
  }
}

BasisPtr make_basis(const GroupSpec& spec, bool paper) {
  if (!paper) return LayeredBasis::standard(spec);
  if (spec.d != 3 || spec.N != 3 || spec.flavor != Flavor::FreeNilpotent)
    throw Error(ErrorCode::InvalidInput, "--paper-basis applies to the free d=3, N=3 algebra only");
  return LayeredBasis::from_trees(spec, example_basis_d3n3());
}

class Output {
 public:
  explicit Output(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) {
      std::error_code ec;
      fs::create_directories(dir_, ec);
      if (ec) throw Error(ErrorCode::InvalidInput, "cannot create output directory " + dir_);
    }
  }

  // Main JSON result: stdout, plus <dir>/<name>.json when --out is set.
  void result(const std::string& name, const Json& j) const {
    const std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!dir_.empty()) write(name + ".json", text);
  }

  // CSV tables go to --out (the working directory if unset).
  void table(const std::string& name, const std::string& csv) const { write(name, csv); }

  void timings(const Json& j) const {
    if (dir_.empty())
      std::cerr << "timings: " << j.dump() << "\n";
    else
      write("timings.json", j.dump(2) + "\n");
  }

 private:
  void write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_.empty() ? fs::path(name) : fs::path(dir_) / name;
    std::ofstream out(p);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + p.string());
    out << text;
  }

  std::string dir_;
};

std::string csv_number(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Functional load_functional(const Options& o) {
  if (o.functional.empty()) throw Error(ErrorCode::InvalidInput, "--functional is required");
  const Json j = read_json_file(o.functional);
  const GroupSpec spec = spec_from_json(j.contains("spec") ? j.at("spec") : Json());
  return functional_from_json(j, make_basis(spec, o.paper_basis));
}

int cmd_dims(const Options& o, const Output& out) {
  const GroupSpec spec = parse_spec(o.spec_text, o.flavor);
  const auto dims = layer_dimensions(spec);
  Json layers = Json::array();
  std::string csv = "k,m_k\n";
  int total = 0;
  for (int k = 1; k <= spec.N; ++k) {
    layers.push_back({{"k", k}, {"m_k", dims[k - 1]}});
    csv += std::to_string(k) + "," + std::to_string(dims[k - 1]) + "\n";
    total += dims[k - 1];
  }
  out.result("dims", {{"spec", to_json(spec)}, {"layers", layers}, {"m", dims}, {"dimension", total}});
  if (!o.out.empty()) out.table("dims.csv", csv);
  return 0;
}

int cmd_basis(const Options& o, const Output& out) {
  const GroupSpec spec = parse_spec(o.spec_text, o.flavor);
  const BasisPtr basis = make_basis(spec, o.paper_basis);
  Json j = basis_to_json(*basis);
  j["convention"] = o.paper_basis ? "paper" : (spec.flavor == Flavor::FreeNilpotent ? "lyndon" : "tensor");
  out.result("basis", j);
  return 0;
}

int cmd_signature(const Options& o, const Output& out) {
  const GroupSpec spec = parse_spec(o.spec_text, o.flavor);
  if (o.path.empty()) throw Error(ErrorCode::InvalidInput, "--path is required");
  const PiecewiseLinearPath path = read_path_csv_file(o.path);
  const GradedElement sig = path_signature(path, spec);
  Json j = {{"spec", to_json(spec)}, {"vertices", path.vertex_count()}, {"signature", to_json(sig)}};
  if (spec.flavor == Flavor::FreeNilpotent) {
    const BasisPtr basis = make_basis(spec, o.paper_basis);
    const Eigen::VectorXd ls = log_signature(path, *basis);
    std::string csv = "label,coefficient\n";
    Json entries = Json::array();
    for (int a = 0; a < basis->dimension(); ++a) {
      csv += "\"" + basis->label(a) + "\"," + csv_number(ls[a]) + "\n";
      entries.push_back({basis->label(a), ls[a]});
    }
    j["log_signature"] = entries;
    out.table("log_signature.csv", csv);
  }
  out.result("signature", j);
  return 0;
}

int cmd_generic_test(const Options& o, const Output& out) {
  const Functional l = load_functional(o);
  const GroupSpec& spec = l.spec();
  const auto& b = *l.basis();
  Json ranks = Json::array();
  for (int k = 1; 2 * k <= spec.N && k < spec.N; ++k) {
    const int mk = b.layer_size(k);
    const Eigen::MatrixXd block = b_matrix(l, k, mk);
    ranks.push_back({{"k", k},
                     {"m", mk},
                     {"rank", linalg::numerical_rank(block)},
                     {"required", dim_km(spec, k, mk)}});
  }
  Json j = {{"spec", to_json(spec)}, {"generic", is_generic(l)}, {"b_ranks", ranks}};
  if (spec.degenerate()) j["degenerate_coefficient"] = degenerate_coefficient(l);
  out.result("generic_test", j);
  return 0;
}

int cmd_orbit_dims(const Options& o, const Output& out) {
  std::optional<Functional> l;
  GroupSpec spec;
  if (!o.functional.empty()) {
    l = load_functional(o);
    spec = l->spec();
  } else {
    spec = parse_spec(o.spec_text, o.flavor);
  }
  const QuotientTable generic = orbit_dims_generic_table(spec);
  QuotientTable numeric;
  if (l) numeric = orbit_dims_numeric_table(*l, o.samples, o.seed);
  std::string csv = l ? "k,m,generic_dim,numeric_dim\n" : "k,m,generic_dim\n";
  for (std::size_t k = 0; k < generic.size(); ++k)
    for (std::size_t m = 0; m < generic[k].size(); ++m) {
      csv += std::to_string(k + 1) + "," + std::to_string(m + 1) + "," + std::to_string(generic[k][m]);
      if (l) csv += "," + std::to_string(numeric[k][m]);
      csv += "\n";
    }
  Json j = {{"spec", to_json(spec)}, {"generic", generic}};
  if (l) {
    j["numeric"] = numeric;
    j["samples"] = o.samples;
    j["seed"] = o.seed;
  }
  out.result("orbit_dims", j);
  out.table("orbit_dims.csv", csv);
  return 0;
}

int cmd_jump_sets(const Options& o, const Output& out) {
  const GroupSpec spec = parse_spec(o.spec_text, o.flavor);
  Json j = to_json(jump_sets(spec));
  j["spec"] = to_json(spec);
  out.result("jump_sets", j);
  return 0;
}

int cmd_polarization(const Options& o, const Output& out) {
  const Functional l = load_functional(o);
  std::string method = o.method;
  if (method == "auto") method = (l.spec().degenerate() ? "vergne" : "generic");
  std::optional<Subalgebra> h;
  if (method == "generic")
    h = generic_polarization(l);
  else if (method == "vergne")
    h = vergne_polarization(l);
  else
    throw Error(ErrorCode::InvalidInput, "--method must be auto, generic or vergne");
  Json j = {{"spec", to_json(l.spec())},
            {"method", method},
            {"vectors", columns_to_json(h->vectors())},
            {"report", to_json(polarization_check(l, *h))}};
  if (const auto idx = h->coordinate_indices()) {
    Json names = Json::array();
    for (int a : *idx) names.push_back(l.basis()->label(a));
    j["basis_elements"] = names;
  }
  out.result("polarization", j);
  return 0;
}

struct FourierConfig {
  GroupSpec spec{2, 2};
  std::vector<double> widths{1.0, 0.8, 0.7};
  double amplitude = 1.0;
  std::vector<std::vector<double>> points{{0.0, 0.0, 0.0}};
  QuadratureSpec quadrature;
  Execution exec = Execution::Parallel;
  std::vector<int> convergence_nodes;
};

FourierConfig load_config(const Options& o) {
  FourierConfig c;
  Json j = Json::object();
  if (!o.config.empty()) j = read_json_file(o.config);
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "config must be a JSON object");
  try {
    if (j.contains("spec")) c.spec = spec_from_json(j.at("spec"));
    if (!o.spec_text.empty()) c.spec = parse_spec(o.spec_text, o.flavor);
    if (j.contains("function")) {
      const Json& f = j.at("function");
      if (f.value("type", "gaussian") != "gaussian") throw Error(ErrorCode::InvalidInput, "function.type must be gaussian");
      c.widths = f.at("widths").get<std::vector<double>>();
      c.amplitude = f.value("amplitude", 1.0);
    }
    if (j.contains("points")) c.points = j.at("points").get<std::vector<std::vector<double>>>();
    if (j.contains("quadrature")) c.quadrature = quadrature_from_json(j.at("quadrature"));
    if (j.contains("execution")) {
      const std::string e = j.at("execution").get<std::string>();
      if (e != "serial" && e != "parallel") throw Error(ErrorCode::InvalidInput, "execution must be serial or parallel");
      c.exec = e == "serial" ? Execution::Serial : Execution::Parallel;
    }
    if (j.contains("convergence_nodes")) c.convergence_nodes = j.at("convergence_nodes").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("config: ") + e.what());
  }
  const BasisPtr basis = LayeredBasis::standard(c.spec);
  if (static_cast<int>(c.widths.size()) != basis->dimension())
    throw Error(ErrorCode::DimensionMismatch, "function.widths needs one entry per basis element (" +
                                                  std::to_string(basis->dimension()) + ")");
  for (const auto& p : c.points)
    if (static_cast<int>(p.size()) != basis->dimension())
      throw Error(ErrorCode::DimensionMismatch, "each point needs one exponential coordinate per basis element");
  for (int n : c.convergence_nodes)
    if (n < 8) throw Error(ErrorCode::InvalidInput, "convergence_nodes entries must be >= 8");
  return c;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

int cmd_fourier_demo(const Options& o, const Output& out) {
  const FourierConfig c = load_config(o);
  const BasisPtr basis = make_basis(c.spec, o.paper_basis);
  const SchwartzFunction f = SchwartzFunction::gaussian(c.widths, c.amplitude);
  const double fmax = std::abs(c.amplitude);
  Json points = Json::array();
  Json timings = Json::object();
  double worst = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& p : c.points) {
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
    const GradedElement g = tensor_exp(basis->embed(x));
    const auto t0 = std::chrono::steady_clock::now();
    const InversionResult r = invert(f, g, basis, c.quadrature, c.exec);
    timings["invert"].push_back(seconds_since(t0));
    const Complex exact = f(p);
    const double err = std::abs(r.value - exact) / fmax;
    worst = std::max(worst, err);
    Json e = {{"x", p},
              {"exact", exact.real()},
              {"value", complex_json(r.value)},
              {"relative_error", err},
              {"t_nodes", r.t_nodes},
              {"skipped_nodes", r.skipped_nodes}};
    if (c.quadrature.check_convergence) e["convergence_delta"] = r.convergence_delta;
    points.push_back(e);
  }
  std::string csv = "t_nodes,value_re,value_im,relative_error\n";
  std::vector<int> sweep = c.convergence_nodes;
  if (sweep.empty()) sweep = {c.quadrature.t_plane.nodes / 4, c.quadrature.t_plane.nodes / 2, c.quadrature.t_plane.nodes};
  {
    const auto& p = c.points.front();
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
    const GradedElement g = tensor_exp(basis->embed(x));
    for (int n : sweep) {
      if (n < 8) continue;
      QuadratureSpec q = c.quadrature;
      q.t_plane.nodes = n;
      q.check_convergence = false;
      const Complex v = invert(f, g, basis, q, c.exec).value;
      csv += std::to_string(n) + "," + csv_number(v.real()) + "," + csv_number(v.imag()) + "," +
             csv_number(std::abs(v - f(p)) / fmax) + "\n";
    }
  }
  timings["total"] = seconds_since(start);
  out.result("fourier_demo", {{"spec", to_json(c.spec)},
                              {"quadrature", to_json(c.quadrature)},
                              {"c_norm", c_norm(c.spec)},
                              {"points", points},
                              {"max_relative_error", worst}});
  out.table("inversion_convergence.csv", csv);
  out.timings(timings);
  return 0;
}

int cmd_plancherel(const Options& o, const Output& out) {
  const FourierConfig c = load_config(o);
  const BasisPtr basis = make_basis(c.spec, o.paper_basis);
  const SchwartzFunction f = SchwartzFunction::gaussian(c.widths, c.amplitude);
  Json timings = Json::object();
  auto t0 = std::chrono::steady_clock::now();
  const PlancherelResult r = plancherel(f, basis, c.quadrature, c.exec);
  timings["plancherel"] = seconds_since(t0);
  const double rel = std::abs(r.rhs - r.lhs) / r.lhs;
  Json j = {{"spec", to_json(c.spec)},
            {"quadrature", to_json(c.quadrature)},
            {"c_norm", c_norm(c.spec)},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"unnormalized_rhs", r.unnormalized_rhs},
            {"ratio", r.rhs / r.lhs},
            {"relative_error", rel}};
  if (c.quadrature.check_convergence) {
    t0 = std::chrono::steady_clock::now();
    QuadratureSpec finer = c.quadrature;
    finer.t_plane.nodes *= 2;
    const PlancherelResult fine = plancherel(f, basis, finer, c.exec);
    timings["plancherel_refined"] = seconds_since(t0);
    const double delta = std::abs(fine.rhs - r.rhs);
    j["convergence_delta"] = delta;
    if (delta > c.quadrature.convergence_tol * std::abs(fine.rhs)) {
      out.timings(timings);
      throw Error(ErrorCode::NonConvergence,
                  "doubling the T-plane nodes changed the Plancherel side by " + csv_number(delta));
    }
  }
  std::string csv = "t_nodes,rhs,relative_error\n";
  for (int n : c.convergence_nodes) {
    QuadratureSpec q = c.quadrature;
    q.t_plane.nodes = n;
    const PlancherelResult p = plancherel(f, basis, q, c.exec);
    csv += std::to_string(n) + "," + csv_number(p.rhs) + "," + csv_number(std::abs(p.rhs - p.lhs) / p.lhs) + "\n";
  }
  if (c.convergence_nodes.empty())
    csv += std::to_string(c.quadrature.t_plane.nodes) + "," + csv_number(r.rhs) + "," + csv_number(rel) + "\n";
  out.result("plancherel_check", j);
  out.table("plancherel_convergence.csv", csv);
  out.timings(timings);
  return 0;
}

int report_error(ErrorCode code, std::string message) {
  const std::string prefix = std::string(error_name(code)) + ": ";
  if (message.starts_with(prefix)) message.erase(0, prefix.size());
  std::cout << Json{{"error", std::string(error_name(code))}, {"message", message}}.dump() << "\n";
  return code == ErrorCode::NonConvergence ? 3 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic analysis on truncated signature groups"};
  app.require_subcommand(1);
  Options o;

  auto add_spec = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--spec", o.spec_text, "d,N");
    if (required) opt->required();
    cmd->add_option("--flavor", o.flavor, "free or tensor")->check(CLI::IsMember({"free", "tensor"}));
  };
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_flag("--paper-basis", o.paper_basis, "use the left-normed layer-3 basis for d=3, N=3");
  };

  std::vector<std::pair<CLI::App*, int (*)(const Options&, const Output&)>> commands;
  auto sub = [&](const char* name, const char* help, int (*fn)(const Options&, const Output&)) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd);
    commands.emplace_back(cmd, fn);
    return cmd;
  };

  add_spec(sub("dims", "layer dimensions m_k", cmd_dims), true);
  add_spec(sub("basis", "Hall basis and structure constants as JSON", cmd_basis), true);
  {
    auto* c = sub("signature", "signature and log-signature of a piecewise linear path", cmd_signature);
    add_spec(c, true);
    c->add_option("--path", o.path, "CSV file, one vertex per row")->required();
  }
  sub("generic-test", "genericity verdict and B-matrix ranks", cmd_generic_test)
      ->add_option("--functional", o.functional, "functional JSON")
      ->required();
  {
    auto* c = sub("orbit-dims", "quotient orbit dimensions (generic and numeric)", cmd_orbit_dims);
    add_spec(c, false);
    c->add_option("--functional", o.functional, "functional JSON");
    c->add_option("--samples", o.samples, "sample points for the numeric rank")->check(CLI::PositiveNumber);
  }
  add_spec(sub("jump-sets", "jump sets S and T", cmd_jump_sets), true);
  {
    auto* c = sub("polarization", "polarization of a functional with its check report", cmd_polarization);
    c->add_option("--functional", o.functional, "functional JSON")->required();
    c->add_option("--method", o.method, "auto, generic or vergne");
  }
  for (auto [name, fn] : {std::pair{"fourier-demo", cmd_fourier_demo}, std::pair{"plancherel-check", cmd_plancherel}}) {
    auto* c = sub(name, name == std::string("fourier-demo") ? "Fourier inversion report" : "Plancherel identity report",
                  fn);
    add_spec(c, false);
    c->add_option("--config", o.config, "JSON config");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(ErrorCode::InvalidInput, e.what());
  }

  try {
    const Output out(o.out);
    for (const auto& [cmd, fn] : commands)
      if (cmd->parsed()) return fn(o, out);
  } catch (const Error& e) {
    return report_error(e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return report_error(ErrorCode::InvalidInput, e.what());
  }
  return 1;
}
