#include "nilfourier/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <span>

#include "nilfourier/errors.hpp"
#include "nilfourier/linalg.hpp"
#include "nilfourier/polarization.hpp"

namespace nilfourier {

namespace {

constexpr double kMinNodes = 8;

// All points of the tensor grid rule^dims, last axis fastest.
std::vector<Eigen::VectorXd> tensor_grid(const std::vector<double>& pts, int dims, double scale = 1.0) {
  std::vector<Eigen::VectorXd> out;
  const std::size_t per = pts.size();
  std::size_t total = 1;
  for (int i = 0; i < dims; ++i) total *= per;
  out.reserve(total);
  std::vector<std::size_t> idx(dims, 0);
  for (std::size_t c = 0; c < total; ++c) {
    Eigen::VectorXd p(dims);
    for (int i = 0; i < dims; ++i) p[i] = scale * pts[idx[i]];
    out.push_back(std::move(p));
    for (int i = dims - 1; i >= 0; --i) {
      if (++idx[i] < per) break;
      idx[i] = 0;
    }
  }
  return out;
}

double top_layer_norm(const Functional& l) {
  const auto& b = *l.basis();
  const int N = b.spec().N;
  return l.coords().segment(b.offset(N), b.layer_size(N)).norm();
}

// Per-thread buffers for kernel evaluations.
struct Workspace {
  explicit Workspace(const MalcevChart& chart)
      : chart_scratch(chart),
        g(chart.spec().tensor_size()),
        sig(chart.spec().tensor_size()),
        w(chart.spec().tensor_size()),
        lg(chart.spec().tensor_size()),
        log_scratch(3 * chart.spec().tensor_size()),
        coords(chart.dimension()),
        alpha(chart.dimension()) {}
  MalcevChart::Scratch chart_scratch;
  std::vector<double> g, sig, w, lg, log_scratch, coords, alpha;
};

// Precomputed subgroup quadrature for one (f, l, chart, q).
class KernelPlan {
 public:
  KernelPlan(const SchwartzFunction& f, const Functional& l, const MalcevChart& chart, const QuadratureSpec& q)
      : f_(f), l_(l), chart_(chart), spec_(chart.spec()), tsize_(spec_.tensor_size()) {
    q.validate();
    const auto& basis = *chart.basis();
    const int n = chart.dimension();
    if (static_cast<int>(f.decay_box.size()) != n)
      throw Error(ErrorCode::DimensionMismatch, "decay box must have one entry per basis element");
    for (int j = 0; j < chart.subgroup_dim(); ++j) {
      double need = 0.0;
      for (int i = 0; i < n; ++i) need += std::abs(chart.vectors()(i, j)) * f.decay_box[i];
      if (q.subgroup.half_width < need * (1.0 - 1e-12))
        throw Error(ErrorCode::QuadratureUnderflow, "subgroup box half-width " + std::to_string(q.subgroup.half_width) +
                                                        " is below the decay extent " + std::to_string(need));
    }
    const int qh = chart.subgroup_dim();
    const auto nodes = tensor_grid(q.subgroup.points(), qh);
    weight_ = std::pow(q.subgroup.weight(), qh);
    eta_.resize(nodes.size() * tsize_);
    zeta_.resize(nodes.size() * n);
    Workspace ws(chart);
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      double* eta = eta_.data() + a * tsize_;
      chart.gamma_into(nodes[a].data(), 0, qh, eta, ws.chart_scratch);
      kernels::log_group(spec_, eta, ws.lg.data(), ws.log_scratch.data());
      basis.project_unchecked(ws.lg.data(), zeta_.data() + a * n);
    }
    count_ = nodes.size();
  }

  std::size_t node_count() const { return count_; }

  // Ad*_y l for a group element given as a flat tensor.
  Eigen::VectorXd twisted_functional(const double* y, Workspace& ws) const {
    kernels::log_group(spec_, y, ws.lg.data(), ws.log_scratch.data());
    chart_.basis()->project_unchecked(ws.lg.data(), ws.coords.data());
    const Eigen::Map<const Eigen::VectorXd> x(ws.coords.data(), chart_.dimension());
    return coadjoint_apply_exp(x, l_).coords();
  }

  // l(log subgroup(h)) for h given in subgroup coordinates.
  double subgroup_phase(const double* h, const Eigen::VectorXd& functional, Workspace& ws) const {
    chart_.gamma_into(h, 0, chart_.subgroup_dim(), ws.w.data(), ws.chart_scratch);
    kernels::log_group(spec_, ws.w.data(), ws.lg.data(), ws.log_scratch.data());
    chart_.basis()->project_unchecked(ws.lg.data(), ws.coords.data());
    return functional.dot(Eigen::Map<const Eigen::VectorXd>(ws.coords.data(), chart_.dimension()));
  }

  // K(x, y) given x, y^{-1} and Ad*_y l.
  Complex evaluate(const double* x, const double* y_inv, const Eigen::VectorXd& l_y, Workspace& ws) const {
    const int n = chart_.dimension();
    const int qh = chart_.subgroup_dim();
    const auto& basis = *chart_.basis();
    Complex sum = 0.0;
    if (chart_.subgroup_is_ideal()) {
      // x u y^{-1} = section(s') subgroup(h'') with u -> h'' a measure-preserving
      // substitution; the character becomes l_y(log eta(h'')) - l_y(log eta(h')).
      kernels::multiply(spec_, x, y_inv, ws.g.data());
      chart_.decompose_into(ws.g.data(), ws.alpha.data(), ws.chart_scratch);
      chart_.gamma_into(ws.alpha.data() + qh, qh, n, ws.sig.data(), ws.chart_scratch);
      const double phase0 = subgroup_phase(ws.alpha.data(), l_y, ws);
      for (std::size_t a = 0; a < count_; ++a) {
        kernels::multiply(spec_, ws.sig.data(), eta_.data() + a * tsize_, ws.w.data());
        kernels::log_group(spec_, ws.w.data(), ws.lg.data(), ws.log_scratch.data());
        basis.project_unchecked(ws.lg.data(), ws.coords.data());
        const Complex fv = f_(std::span<const double>(ws.coords.data(), n));
        if (fv == 0.0) continue;
        const double phase = l_y.dot(Eigen::Map<const Eigen::VectorXd>(zeta_.data() + a * n, n)) - phase0;
        sum += fv * std::polar(1.0, phase);
      }
    } else {
      for (std::size_t a = 0; a < count_; ++a) {
        kernels::multiply(spec_, x, eta_.data() + a * tsize_, ws.g.data());
        kernels::multiply(spec_, ws.g.data(), y_inv, ws.w.data());
        kernels::log_group(spec_, ws.w.data(), ws.lg.data(), ws.log_scratch.data());
        basis.project_unchecked(ws.lg.data(), ws.coords.data());
        const Complex fv = f_(std::span<const double>(ws.coords.data(), n));
        if (fv == 0.0) continue;
        const double phase = l_.coords().dot(Eigen::Map<const Eigen::VectorXd>(zeta_.data() + a * n, n));
        sum += fv * std::polar(1.0, phase);
      }
    }
    return weight_ * sum;
  }

 private:
  const SchwartzFunction& f_;
  const Functional& l_;
  const MalcevChart& chart_;
  GroupSpec spec_;
  std::size_t tsize_;
  double weight_ = 1.0;
  std::size_t count_ = 0;
  std::vector<double> eta_;   // subgroup elements, flat tensors
  std::vector<double> zeta_;  // their logarithms, flat coordinates
};

// Section points y_b with y_b, y_b^{-1} and Ad*_{y_b} l.
struct SectionGrid {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> weights;
  std::vector<std::vector<double>> elements, inverses;
  std::vector<Eigen::VectorXd> twisted;
};

SectionGrid make_section_grid(const KernelPlan& plan, const Functional& l, const MalcevChart& chart,
                              const QuadratureSpec& q) {
  SectionGrid grid;
  const int qs = chart.section_dim();
  const double scale = q.section_scale(l);
  grid.points = tensor_grid(q.section.points(), qs, scale);
  const double w = std::pow(q.section.weight() * scale, qs) * chart.jacobian();
  Workspace ws(chart);
  const auto tsize = chart.spec().tensor_size();
  for (const auto& p : grid.points) {
    std::vector<double> y(tsize), yinv(tsize);
    chart.gamma_into(p.data(), chart.subgroup_dim(), chart.dimension(), y.data(), ws.chart_scratch);
    Eigen::VectorXd neg = -p;
    // section(s)^{-1} = exp(-s_1 X)...exp(-s_q X) in reverse order
    std::fill(yinv.begin(), yinv.end(), 0.0);
    yinv[0] = 1.0;
    for (int j = chart.subgroup_dim(); j < chart.dimension(); ++j) {
      const GradedElement e = chart.exp_vector(j, neg[j - chart.subgroup_dim()]);
      std::vector<double> tmp(tsize);
      kernels::multiply(chart.spec(), yinv.data(), e.coeffs().data(), tmp.data());
      yinv.swap(tmp);
    }
    grid.twisted.push_back(plan.twisted_functional(y.data(), ws));
    grid.elements.push_back(std::move(y));
    grid.inverses.push_back(std::move(yinv));
    grid.weights.push_back(w);
  }
  return grid;
}

template <class Fn>
void run_indexed(std::int64_t count, Execution exec, Fn&& fn) {
  std::exception_ptr error;
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_limit())
    for (std::int64_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
#pragma omp critical(nilfourier_error)
        if (!error) error = std::current_exception();
      }
    }
  } else {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
  }
  if (error) std::rethrow_exception(error);
}

Functional t_plane_functional(const BasisPtr& basis, const std::vector<LayerIndex>& T, const Eigen::VectorXd& alpha) {
  Functional l(basis);
  for (std::size_t i = 0; i < T.size(); ++i) l.set(T[i], alpha[static_cast<Eigen::Index>(i)]);
  return l;
}

}  // namespace

Complex SchwartzFunction::at(const GradedElement& g, const LayeredBasis& basis) const {
  const Eigen::VectorXd c = basis.coordinates(tensor_log(g));
  return evaluator(std::span<const double>(c.data(), static_cast<std::size_t>(c.size())));
}

SchwartzFunction SchwartzFunction::gaussian(std::vector<double> widths, double amplitude) {
  SchwartzFunction f;
  for (double w : widths) {
    if (!(w > 0)) throw Error(ErrorCode::InvalidInput, "Gaussian widths must be positive");
    f.decay_box.push_back(7.5 * w);
  }
  std::vector<double> inv(widths.size());
  for (std::size_t i = 0; i < widths.size(); ++i) inv[i] = 1.0 / (widths[i] * widths[i]);
  f.evaluator = [inv, amplitude](std::span<const double> x) {
    double e = 0.0;
    for (std::size_t i = 0; i < inv.size(); ++i) e += x[i] * x[i] * inv[i];
    return Complex(amplitude * std::exp(-0.5 * e), 0.0);
  };
  return f;
}

SchwartzFunction SchwartzFunction::scaled(Complex factor) const {
  SchwartzFunction g;
  g.decay_box = decay_box;
  g.evaluator = [inner = evaluator, factor](std::span<const double> x) { return factor * inner(x); };
  return g;
}

bool spot_check_decay(const SchwartzFunction& f, double tol) {
  const int n = static_cast<int>(f.decay_box.size());
  const std::vector<double> unit{-2.0 / 3, -1.0 / 3, 0.0, 1.0 / 3, 2.0 / 3};
  double peak = 0.0;
  const int dims = std::min(n, 6);
  for (const auto& p : tensor_grid(unit, dims)) {
    std::vector<double> x(n, 0.0);
    for (int i = 0; i < dims; ++i) x[i] = p[i] * f.decay_box[i];
    peak = std::max(peak, std::abs(f(x)));
  }
  for (int i = 0; i < n; ++i)
    for (double side : {-1.0, 1.0}) {
      std::vector<double> x(n, 0.0);
      x[i] = side * f.decay_box[i];
      if (std::abs(f(x)) > tol * peak) return false;
    }
  return true;
}

std::vector<double> AxisRule::points() const {
  std::vector<double> p(nodes);
  const double h = weight();
  for (int i = 0; i < nodes; ++i) p[i] = -half_width + (i + 0.5) * h;
  return p;
}

void QuadratureSpec::validate() const {
  for (const AxisRule* r : {&subgroup, &section, &t_plane}) {
    if (r->nodes < kMinNodes) throw Error(ErrorCode::InvalidInput, "quadrature axes need at least 8 nodes");
    if (!(r->half_width > 0)) throw Error(ErrorCode::InvalidInput, "quadrature bounds must be positive");
  }
  if (!(convergence_tol > 0)) throw Error(ErrorCode::InvalidInput, "convergence tolerance must be positive");
}

double QuadratureSpec::section_scale(const Functional& l) const {
  const double top = top_layer_norm(l);
  if (top == 0.0 || section_exponent == 0.0) return 1.0;
  return std::clamp(std::pow(top, -section_exponent), 1e-3, 1e3);
}

QuadratureSpec QuadratureSpec::refined() const {
  QuadratureSpec r = *this;
  r.subgroup.nodes *= 2;
  r.section.nodes *= 2;
  r.t_plane.nodes *= 2;
  return r;
}

Complex character(const Functional& l, const MalcevChart& chart, const Eigen::VectorXd& h_coords) {
  const GradedElement u = chart.subgroup(h_coords);
  return std::polar(1.0, l.evaluate(tensor_log(u)));
}

Complex kernel_at(const SchwartzFunction& f, const Functional& l, const MalcevChart& chart, const QuadratureSpec& q,
                  const GradedElement& x, const GradedElement& y) {
  const KernelPlan plan(f, l, chart, q);
  Workspace ws(chart);
  const GradedElement yinv = group_inverse(y);
  const Eigen::VectorXd ly = plan.twisted_functional(y.coeffs().data(), ws);
  return plan.evaluate(x.coeffs().data(), yinv.coeffs().data(), ly, ws);
}

Complex kernel(const SchwartzFunction& f, const Functional& l, const MalcevChart& chart, const QuadratureSpec& q,
               const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
  return kernel_at(f, l, chart, q, chart.section(xs), chart.section(ys));
}

Complex KernelOperator::trace() const {
  Complex t = 0.0;
  for (std::size_t a = 0; a < weights.size(); ++a) t += weights[a] * values(a, a);
  return t;
}

double KernelOperator::hilbert_schmidt_sq() const {
  double s = 0.0;
  for (std::size_t a = 0; a < weights.size(); ++a)
    for (std::size_t b = 0; b < weights.size(); ++b) s += weights[a] * weights[b] * std::norm(values(a, b));
  return s;
}

KernelOperator build_operator(const SchwartzFunction& f, const Functional& l, const MalcevChart& chart,
                              const QuadratureSpec& q, Execution exec) {
  const KernelPlan plan(f, l, chart, q);
  const SectionGrid grid = make_section_grid(plan, l, chart, q);
  const auto m = static_cast<std::int64_t>(grid.points.size());
  KernelOperator op{l, grid.points, grid.weights, Eigen::MatrixXcd(m, m)};
  run_indexed(m, exec, [&](std::int64_t a) {
    Workspace local(chart);
    for (std::int64_t b = 0; b < m; ++b)
      op.values(a, b) = plan.evaluate(grid.elements[a].data(), grid.inverses[b].data(), grid.twisted[b], local);
  });
  return op;
}

Complex trace_shifted(const SchwartzFunction& f, const Functional& l, const MalcevChart& chart,
                      const QuadratureSpec& q, const GradedElement& x, Execution exec) {
  if (!(x.spec() == chart.spec()) || x.role() != Role::Group)
    throw Error(ErrorCode::SpecMismatch, "trace_shifted needs a group element of the chart's spec");
  const KernelPlan plan(f, l, chart, q);
  const SectionGrid grid = make_section_grid(plan, l, chart, q);
  const auto m = static_cast<std::int64_t>(grid.points.size());
  const int n = chart.dimension();
  const int qh = chart.subgroup_dim();
  const auto tsize = chart.spec().tensor_size();
  std::vector<Complex> terms(m);
  run_indexed(m, exec, [&](std::int64_t b) {
    Workspace ws(chart);
    std::vector<double> shifted(tsize), alpha(n), xs(tsize);
    kernels::multiply(chart.spec(), x.coeffs().data(), grid.elements[b].data(), shifted.data());
    chart.decompose_into(shifted.data(), alpha.data(), ws.chart_scratch);
    chart.gamma_into(alpha.data() + qh, qh, n, xs.data(), ws.chart_scratch);
    const double twist = plan.subgroup_phase(alpha.data(), l.coords(), ws);
    const Complex k = plan.evaluate(xs.data(), grid.inverses[b].data(), grid.twisted[b], ws);
    terms[b] = grid.weights[b] * std::polar(1.0, -twist) * k;
  });
  Complex sum = 0.0;
  for (const Complex& t : terms) sum += t;
  return sum;
}

Eigen::MatrixXd d_matrix(const Functional& l, const std::vector<LayerIndex>& S) {
  const auto& b = *l.basis();
  const auto s = static_cast<Eigen::Index>(S.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(s, s);
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = 0; j < s; ++j) {
      const int a = b.flat(S[i].layer, S[i].position - 1);
      const int c = b.flat(S[j].layer, S[j].position - 1);
      for (const auto& t : b.bracket_terms(a, c)) d(i, j) += t.coeff * l.coords()[t.index];
    }
  return d;
}

double sqrt_det_d(const Functional& l, const std::vector<LayerIndex>& S) {
  const Eigen::MatrixXd d = d_matrix(l, S);
  if (linalg::skew_defect(d) > 1e-12) {
    const double det = d.determinant();
    const double scale = std::pow(std::max(d.cwiseAbs().maxCoeff(), 1e-300), static_cast<double>(d.rows()));
    if (det < -1e-10 * scale) throw Error(ErrorCode::NegativeDeterminant, "D(l) is not skew and has det < 0");
    return std::sqrt(std::max(det, 0.0));
  }
  return std::abs(linalg::pfaffian(d));
}

double c_norm(const GroupSpec& spec) {
  const auto jumps = jump_sets(spec);
  const auto dims = layer_dimensions(spec);
  int n = 0;
  for (int m : dims) n += m;
  const double exponent = n - static_cast<double>(jumps.S.size()) / 2.0;
  return std::pow(2.0 * std::numbers::pi, -exponent);
}

InversionResult invert(const SchwartzFunction& f, const GradedElement& x, const BasisPtr& basis,
                       const QuadratureSpec& q, Execution exec) {
  q.validate();
  const GroupSpec& spec = basis->spec();
  const auto jumps = jump_sets(spec);
  const auto nodes = tensor_grid(q.t_plane.points(), static_cast<int>(jumps.T.size()));
  const double w = std::pow(q.t_plane.weight(), static_cast<double>(jumps.T.size()));
  std::vector<Complex> terms(nodes.size(), 0.0);
  std::vector<char> skipped(nodes.size(), 0);
  run_indexed(static_cast<std::int64_t>(nodes.size()), exec, [&](std::int64_t i) {
    const Functional l = t_plane_functional(basis, jumps.T, nodes[i]);
    if (!is_generic(l)) {
      skipped[i] = 1;
      return;
    }
    const MalcevChart chart(polarization_for(l));
    terms[i] = w * sqrt_det_d(l, jumps.S) * trace_shifted(f, l, chart, q, x, Execution::Serial);
  });
  InversionResult r;
  for (const Complex& t : terms) r.unnormalized += t;
  r.value = c_norm(spec) * r.unnormalized;
  r.t_nodes = static_cast<int>(nodes.size());
  r.skipped_nodes = static_cast<int>(std::count(skipped.begin(), skipped.end(), 1));
  if (q.check_convergence) {
    QuadratureSpec finer = q;
    finer.t_plane.nodes *= 2;
    finer.check_convergence = false;
    const InversionResult fine = invert(f, x, basis, finer, exec);
    r.convergence_delta = std::abs(fine.value - r.value);
    const double ref = std::max({std::abs(fine.value), std::abs(r.value), 1e-300});
    if (r.convergence_delta > q.convergence_tol * ref)
      throw Error(ErrorCode::NonConvergence, "doubling the T-plane nodes changed the result by " +
                                                 std::to_string(r.convergence_delta));
  }
  return r;
}

PlancherelResult plancherel(const SchwartzFunction& f, const BasisPtr& basis, const QuadratureSpec& q,
                            Execution exec, int direct_nodes) {
  q.validate();
  const GroupSpec& spec = basis->spec();
  const int n = basis->dimension();
  if (static_cast<int>(f.decay_box.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "decay box must have one entry per basis element");
  PlancherelResult r;
  {
    std::vector<double> unit = AxisRule{direct_nodes, 1.0}.points();
    double vol = 1.0;
    for (double b : f.decay_box) vol *= 2.0 * b / direct_nodes;
    double sum = 0.0;
    std::vector<double> x(n);
    for (const auto& p : tensor_grid(unit, n)) {
      for (int i = 0; i < n; ++i) x[i] = p[i] * f.decay_box[i];
      sum += std::norm(f(x));
    }
    r.lhs = vol * sum;
  }
  const auto jumps = jump_sets(spec);
  const auto nodes = tensor_grid(q.t_plane.points(), static_cast<int>(jumps.T.size()));
  const double w = std::pow(q.t_plane.weight(), static_cast<double>(jumps.T.size()));
  std::vector<double> terms(nodes.size(), 0.0);
  run_indexed(static_cast<std::int64_t>(nodes.size()), exec, [&](std::int64_t i) {
    const Functional l = t_plane_functional(basis, jumps.T, nodes[i]);
    if (!is_generic(l)) return;
    const MalcevChart chart(polarization_for(l));
    terms[i] = w * sqrt_det_d(l, jumps.S) * build_operator(f, l, chart, q, Execution::Serial).hilbert_schmidt_sq();
  });
  for (double t : terms) r.unnormalized_rhs += t;
  r.rhs = c_norm(spec) * r.unnormalized_rhs;
  return r;
}

namespace {

struct HaarSums {
  double w = 0, u = 0, ww = 0, uu = 0, uw = 0;
  void add(const HaarSums& o) {
    w += o.w;
    u += o.u;
    ww += o.ww;
    uu += o.uu;
    uw += o.uw;
  }
};

constexpr std::int64_t kChunk = 1 << 14;

// Equal-weight mixture of multivariate Student-t components sharing one
// diagonal scale. Heavier tails than any Gaussian integrand keep the
// importance weights bounded.
class TMixture {
 public:
  TMixture(std::vector<double> scale, std::vector<std::vector<double>> centres)
      : scale_(std::move(scale)), centres_(std::move(centres)) {
    const double n = static_cast<double>(scale_.size());
    log_const_ = std::lgamma(0.5 * (kDof + n)) - std::lgamma(0.5 * kDof) - 0.5 * n * std::log(kDof * std::numbers::pi);
    for (double s : scale_) log_const_ -= std::log(s);
  }

  // Draws into x and returns 1/q(x).
  template <class Rng>
  double draw(Rng& rng, std::span<double> x) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::chi_squared_distribution<double> chi(kDof);
    std::uniform_int_distribution<std::size_t> pick(0, centres_.size() - 1);
    const auto& mu = centres_[pick(rng)];
    const double stretch = std::sqrt(kDof / chi(rng));
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = mu[j] + scale_[j] * normal(rng) * stretch;
    double q = 0.0;
    const double power = -0.5 * (kDof + static_cast<double>(x.size()));
    for (const auto& c : centres_) {
      double r2 = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double z = (x[j] - c[j]) / scale_[j];
        r2 += z * z;
      }
      q += std::exp(log_const_ + power * std::log1p(r2 / kDof));
    }
    return static_cast<double>(centres_.size()) / q;
  }

 private:
  static constexpr double kDof = 4.0;
  std::vector<double> scale_;
  std::vector<std::vector<double>> centres_;
  double log_const_ = 0.0;
};

std::vector<double> proposal_scale(const SchwartzFunction& f) {
  std::vector<double> scale(f.decay_box.size());
  for (std::size_t i = 0; i < scale.size(); ++i) scale[i] = f.decay_box[i] / 4.0;
  return scale;
}

HaarCheck ratio_check(const HaarSums& s, std::int64_t samples) {
  const double m = static_cast<double>(samples);
  const double ratio = s.u / s.w;
  const double var = (s.uu - 2 * ratio * s.uw + ratio * ratio * s.ww) / m;
  HaarCheck out;
  out.deviation = ratio - 1.0;
  out.standard_error = std::sqrt(std::max(var, 0.0) / m) / std::abs(s.w / m);
  return out;
}

}  // namespace

HaarCheck haar_invariance_check(const SchwartzFunction& f, const LayeredBasis& basis, const GradedElement& a,
                                std::int64_t samples, std::uint64_t seed, Execution exec) {
  const int n = basis.dimension();
  if (static_cast<int>(f.decay_box.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "decay box must have one entry per basis element");
  if (!(a.spec() == basis.spec()) || a.role() != Role::Group)
    throw Error(ErrorCode::SpecMismatch, "translate must be a group element of the basis spec");
  const auto& spec = basis.spec();
  const auto tsize = spec.tensor_size();
  // mass of x -> f(a x) sits near the exponential coordinates of a^{-1}
  std::vector<double> inverse_centre(n);
  {
    std::vector<double> lg(tsize), scratch(3 * tsize);
    kernels::log_group(spec, a.coeffs().data(), lg.data(), scratch.data());
    basis.project_unchecked(lg.data(), inverse_centre.data());
    for (double& v : inverse_centre) v = -v;
  }
  const TMixture proposal(proposal_scale(f), {std::vector<double>(n, 0.0), inverse_centre});
  const std::int64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<HaarSums> partial(chunks);
  run_indexed(chunks, exec, [&](std::int64_t c) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(c)};
    std::mt19937_64 rng(seq);
    std::vector<double> x(n), t(tsize), ex(tsize), prod(tsize), lg(tsize), scratch(3 * tsize), y(n);
    HaarSums s;
    const std::int64_t end = std::min(samples, (c + 1) * kChunk);
    for (std::int64_t i = c * kChunk; i < end; ++i) {
      const double inv_p = proposal.draw(rng, x);
      basis.embed_unchecked(x.data(), t.data());
      kernels::exp_algebra(spec, t.data(), ex.data(), scratch.data());
      kernels::multiply(spec, a.coeffs().data(), ex.data(), prod.data());
      kernels::log_group(spec, prod.data(), lg.data(), scratch.data());
      basis.project_unchecked(lg.data(), y.data());
      const double wv = f(x).real() * inv_p;
      const double uv = f(y).real() * inv_p;
      s.w += wv;
      s.u += uv;
      s.ww += wv * wv;
      s.uu += uv * uv;
      s.uw += uv * wv;
    }
    partial[c] = s;
  });
  HaarSums total;
  for (const auto& s : partial) total.add(s);
  return ratio_check(total, samples);
}

HaarCheck gamma_measure_check(const SchwartzFunction& f, const MalcevChart& chart, std::int64_t samples,
                              std::uint64_t seed) {
  const auto& basis = *chart.basis();
  const int n = basis.dimension();
  const TMixture proposal(proposal_scale(f), {std::vector<double>(n, 0.0)});
  std::mt19937_64 rng(seed);
  const auto tsize = basis.spec().tensor_size();
  MalcevChart::Scratch scratch(chart);
  std::vector<double> x(n), alpha(n), g(tsize), lg(tsize), ls(3 * tsize), y(n);
  HaarSums s;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double inv_p = proposal.draw(rng, x);
    // the same draw read as gamma coordinates
    for (int j = 0; j < n; ++j) alpha[j] = x[j];
    chart.gamma_into(alpha.data(), 0, n, g.data(), scratch);
    kernels::log_group(basis.spec(), g.data(), lg.data(), ls.data());
    basis.project_unchecked(lg.data(), y.data());
    const double wv = f(x).real() * inv_p;
    const double uv = chart.jacobian() * f(y).real() * inv_p;
    s.w += wv;
    s.u += uv;
    s.ww += wv * wv;
    s.uu += uv * uv;
    s.uw += uv * wv;
  }
  return ratio_check(s, samples);
}

}  // namespace nilfourier
