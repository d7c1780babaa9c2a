#include "mmsem/driver.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>

namespace mmsem {

namespace {

constexpr double pi = std::numbers::pi;

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

ExactSolution manufactured_solution(double viscosity) {
  const double nu = viscosity;
  ExactSolution s;
  s.vorticity = [](double x, double y) { return -4 * pi * std::sin(2 * pi * x) * std::sin(2 * pi * y); };
  s.vorticity_gradient = [](double x, double y) {
    return Eigen::Vector2d(-8 * pi * pi * std::cos(2 * pi * x) * std::sin(2 * pi * y),
                           -8 * pi * pi * std::sin(2 * pi * x) * std::cos(2 * pi * y));
  };
  s.velocity = [](double x, double y) {
    return Eigen::Vector2d(-std::sin(2 * pi * x) * std::cos(2 * pi * y), std::cos(2 * pi * x) * std::sin(2 * pi * y));
  };
  s.divergence = [](double, double) { return 0.0; };
  s.pressure = [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
  s.forcing = [nu](double x, double y) {
    return Eigen::Vector2d(
        pi * std::cos(pi * x) * std::sin(pi * y) - nu * 8 * pi * pi * std::sin(2 * pi * x) * std::cos(2 * pi * y),
        pi * std::sin(pi * x) * std::cos(pi * y) + nu * 8 * pi * pi * std::cos(2 * pi * x) * std::sin(2 * pi * y));
  };
  return s;
}

StokesProblem manufactured_problem(const ExactSolution& exact, BcType bc, double viscosity) {
  StokesProblem p;
  p.viscosity = viscosity;
  p.forcing = exact.forcing;
  p.bc.fill(bc);
  for (auto& d : p.data) d = {exact.velocity, exact.vorticity, exact.pressure};
  return p;
}

ErrorNorms error_norms(const MappedMesh& mesh, const DofMap& dofs, const Solution& s, const ExactSolution& exact,
                       bool match_pressure_mean) {
  const QuadratureRule g = gauss_legendre(mesh.order() + 3);
  const Cochain div = coboundary_apply(incidence(mesh.global(), 2), s.velocity);

  double shift = 0.0;
  if (match_pressure_mean) {
    double ph = 0.0, pe = 0.0, area = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e)
      for (int qy = 0; qy < g.size(); ++qy)
        for (int qx = 0; qx < g.size(); ++qx) {
          const double xi = g.nodes[qx], eta = g.nodes[qy];
          const double w = g.weights[qx] * g.weights[qy] * mesh.element(e).jacobian(xi, eta).det();
          const Point2 p = mesh.element(e).evaluate(xi, eta);
          ph += w * reconstruct_density(mesh, dofs, s.pressure, e, xi, eta);
          pe += w * exact.pressure(p.x, p.y);
          area += w;
        }
    shift = (pe - ph) / area;
  }

  double ew = 0, edw = 0, eu = 0, edu = 0, ep = 0;
  for (int e = 0; e < mesh.element_count(); ++e)
    for (int qy = 0; qy < g.size(); ++qy)
      for (int qx = 0; qx < g.size(); ++qx) {
        const double xi = g.nodes[qx], eta = g.nodes[qy];
        const double w = g.weights[qx] * g.weights[qy] * mesh.element(e).jacobian(xi, eta).det();
        const Point2 p = mesh.element(e).evaluate(xi, eta);
        const double dw = exact.vorticity(p.x, p.y) - reconstruct_zero_form(mesh, dofs, s.vorticity, e, xi, eta);
        const Eigen::Vector2d ddw =
            exact.vorticity_gradient(p.x, p.y) - reconstruct_gradient(mesh, dofs, s.vorticity, e, xi, eta);
        const Eigen::Vector2d du = exact.velocity(p.x, p.y) - reconstruct_flux(mesh, dofs, s.velocity, e, xi, eta);
        const double ddu = exact.divergence(p.x, p.y) - reconstruct_density(mesh, dofs, div, e, xi, eta);
        const double dp =
            exact.pressure(p.x, p.y) - reconstruct_density(mesh, dofs, s.pressure, e, xi, eta) - shift;
        ew += w * dw * dw;
        edw += w * ddw.squaredNorm();
        eu += w * du.squaredNorm();
        edu += w * ddu * ddu;
        ep += w * dp * dp;
      }
  ErrorNorms n;
  n.w_l2 = std::sqrt(ew);
  n.dw_l2 = std::sqrt(edw);
  n.w_h = std::sqrt(ew + edw);
  n.u_l2 = std::sqrt(eu);
  n.du_l2 = std::sqrt(edu);
  n.u_h = std::sqrt(eu + edu);
  n.p_l2 = std::sqrt(ep);
  return n;
}

DivergenceReport divergence_report(const MappedMesh& mesh, const DofMap& dofs, const Cochain& velocity, int samples) {
  const Cochain div = coboundary_apply(incidence(mesh.global(), 2), velocity);
  DivergenceReport r;
  r.cochain_max = max_abs(div.values);
  for (const FieldSample& s : reconstruct(mesh, dofs, div, samples))
    r.pointwise_max = std::max(r.pointwise_max, std::abs(s.value));
  const QuadratureRule g = gauss_legendre(mesh.order() + 3);
  double l1 = 0.0, l2 = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e)
    for (int qy = 0; qy < g.size(); ++qy)
      for (int qx = 0; qx < g.size(); ++qx) {
        const double xi = g.nodes[qx], eta = g.nodes[qy];
        const double w = g.weights[qx] * g.weights[qy] * mesh.element(e).jacobian(xi, eta).det();
        const double d = reconstruct_density(mesh, dofs, div, e, xi, eta);
        l1 += w * std::abs(d);
        l2 += w * d * d;
        r.pointwise_max = std::max(r.pointwise_max, std::abs(d));
      }
  r.pointwise_l1 = l1;
  r.pointwise_l2 = std::sqrt(l2);
  return r;
}

RunResult run_manufactured(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  MeshOptions opts;
  opts.elements_per_axis = config.elements;
  opts.order = config.order;
  opts.map = config.map;
  opts.quadrature = config.quadrature;
  const MappedMesh mesh = build_mesh(opts);
  const DofMap dofs = build_dof_map(mesh);
  const ExactSolution exact = manufactured_solution();
  StokesProblem problem = manufactured_problem(exact, config.bc);
  problem.forcing_mode = config.forcing;
  const Solution s = solve(mesh, dofs, problem);

  RunResult r;
  r.config = config;
  r.h = mesh.mesh_size();
  r.errors = error_norms(mesh, dofs, s, exact, s.pressure_gauge);
  r.divergence = divergence_report(mesh, dofs, s.velocity);
  r.dofs = {dofs.count(0), dofs.count(1), dofs.count(2)};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<RunResult> run_h_study(RunConfig base, const std::vector<int>& elements) {
  std::vector<RunResult> out;
  for (int m : elements) {
    base.elements = m;
    out.push_back(run_manufactured(base));
  }
  return out;
}

std::vector<RunResult> run_p_study(RunConfig base, const std::vector<int>& orders) {
  std::vector<RunResult> out;
  for (int n : orders) {
    base.order = n;
    out.push_back(run_manufactured(base));
  }
  return out;
}

double observed_rate(double e_prev, double e, double h_prev, double h) {
  return std::log(e_prev / e) / std::log(h_prev / h);
}

void write_study_csv(std::ostream& out, const std::vector<RunResult>& rows, bool with_rates) {
  out << "h,M,N,bc,map,err_w_L2,err_w_H,err_u_L2,err_p_L2,div_max,rate_w_L2,rate_w_H,rate_u_L2,rate_p_L2\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RunResult& r = rows[i];
    const ErrorNorms& e = r.errors;
    const double div = std::max(r.divergence.cochain_max, r.divergence.pointwise_max);
    fmt::print(out, "{:.5e},{},{},{},{},{:.5e},{:.5e},{:.5e},{:.5e},{:.5e}", r.h, r.config.elements, r.config.order,
               to_string(r.config.bc), to_string(r.config.map), e.w_l2, e.w_h, e.u_l2, e.p_l2, div);
    if (with_rates && i > 0) {
      const RunResult& p = rows[i - 1];
      fmt::print(out, ",{:.5e},{:.5e},{:.5e},{:.5e}", observed_rate(p.errors.w_l2, e.w_l2, p.h, r.h),
                 observed_rate(p.errors.w_h, e.w_h, p.h, r.h), observed_rate(p.errors.u_l2, e.u_l2, p.h, r.h),
                 observed_rate(p.errors.p_l2, e.p_l2, p.h, r.h));
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
}

Cochain stream_function(const MappedMesh& mesh, const Cochain& velocity) {
  const CellComplex& g = mesh.global();
  const int n = g.edges(0);
  Cochain psi{0, Eigen::VectorXd::Zero(g.count(0))};
  for (int i = 1; i <= n; ++i) psi.values[g.node(i, 0)] = psi.values[g.node(i - 1, 0)] - velocity.values[g.xi_edge(i - 1, 0)];
  for (int i = 0; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      psi.values[g.node(i, j)] = psi.values[g.node(i, j - 1)] + velocity.values[g.eta_edge(i, j - 1)];
  return psi;
}

Cochain stream_function_transposed(const MappedMesh& mesh, const Cochain& velocity) {
  const CellComplex& g = mesh.global();
  const int n = g.edges(0);
  Cochain psi{0, Eigen::VectorXd::Zero(g.count(0))};
  for (int j = 1; j <= n; ++j)
    psi.values[g.node(0, j)] = psi.values[g.node(0, j - 1)] + velocity.values[g.eta_edge(0, j - 1)];
  for (int j = 0; j <= n; ++j)
    for (int i = 1; i <= n; ++i)
      psi.values[g.node(i, j)] = psi.values[g.node(i - 1, j)] - velocity.values[g.xi_edge(i - 1, j)];
  return psi;
}

StokesProblem cavity_problem() {
  StokesProblem p;
  p.forcing = [](double, double) { return Eigen::Vector2d::Zero(); };
  p.bc.fill(BcType::velocity);
  const VectorField still = [](double, double) { return Eigen::Vector2d::Zero(); };
  const VectorField lid = [](double, double) { return Eigen::Vector2d(1.0, 0.0); };
  for (Segment s : all_segments) p.data[static_cast<int>(s)].velocity = s == Segment::top ? lid : still;
  return p;
}

namespace {

Eigen::Vector2d velocity_at(const MappedMesh& mesh, const DofMap& dofs, const Cochain& u, Point2 p) {
  const auto loc = locate(mesh, p);
  if (!loc) throw std::out_of_range("sample point outside the domain");
  return reconstruct_flux(mesh, dofs, u, loc->element, loc->xi, loc->eta);
}

}  // namespace

CavityResult run_cavity(const CavityConfig& config) {
  MeshOptions opts;
  opts.elements_per_axis = config.elements;
  opts.order = config.order;
  opts.grading = config.grading;
  const MappedMesh mesh = build_mesh(opts);
  const DofMap dofs = build_dof_map(mesh);

  CavityResult r;
  r.solution = solve(mesh, dofs, cavity_problem());
  const Cochain& u = r.solution.velocity;
  r.stream = stream_function(mesh, u);
  r.stream_path_defect = max_abs(r.stream.values - stream_function_transposed(mesh, u).values);
  r.stream_coboundary_defect =
      max_abs(coboundary_apply(incidence(mesh.global(), 1), r.stream).values - u.values);
  r.divergence = divergence_report(mesh, dofs, u);

  const int n = config.samples;
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    r.u_vertical.push_back({t, velocity_at(mesh, dofs, u, {0.5, t})[0]});
    r.v_horizontal.push_back({t, velocity_at(mesh, dofs, u, {t, 0.5})[1]});
  }
  // Mirror pairs are taken element-wise so both sides use the same trace of
  // the tangential component, which jumps across element boundaries.
  const int m = mesh.elements_per_axis();
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto [ex, ey] = mesh.element_position(e);
    const int mirror = mesh.element_id(m - 1 - ex, ey);
    const int k = config.symmetry_samples;
    for (int sy = 0; sy < k; ++sy)
      for (int sx = 0; sx < k; ++sx) {
        const double xi = -1.0 + 2.0 * sx / (k - 1);
        const double eta = -1.0 + 2.0 * sy / (k - 1);
        const Eigen::Vector2d a = reconstruct_flux(mesh, dofs, u, e, xi, eta);
        const Eigen::Vector2d b = reconstruct_flux(mesh, dofs, u, mirror, -xi, eta);
        r.symmetry_defect = std::max({r.symmetry_defect, std::abs(a[0] - b[0]), std::abs(a[1] + b[1])});
      }
  }
  return r;
}

void write_centerlines(std::ostream& out, const CavityResult& r) {
  out << "t,u_at_x_half,v_at_y_half\n";
  for (std::size_t k = 0; k < r.u_vertical.size(); ++k)
    fmt::print(out, "{:.5e},{:.5e},{:.5e}\n", r.u_vertical[k].coordinate, r.u_vertical[k].value,
               r.v_horizontal[k].value);
}

void write_cavity_fields(std::ostream& out, const MappedMesh& mesh, const DofMap& dofs, const CavityResult& r,
                         int samples) {
  out << "# x y w |u| p psi\n";
  for (int e = 0; e < mesh.element_count(); ++e) {
    for (int sy = 0; sy < samples; ++sy) {
      for (int sx = 0; sx < samples; ++sx) {
        const double xi = -1.0 + 2.0 * sx / (samples - 1);
        const double eta = -1.0 + 2.0 * sy / (samples - 1);
        const Point2 p = mesh.element(e).evaluate(xi, eta);
        fmt::print(out, "{:.6e} {:.6e} {:.6e} {:.6e} {:.6e} {:.6e}\n", p.x, p.y,
                   reconstruct_zero_form(mesh, dofs, r.solution.vorticity, e, xi, eta),
                   reconstruct_flux(mesh, dofs, r.solution.velocity, e, xi, eta).norm(),
                   reconstruct_density(mesh, dofs, r.solution.pressure, e, xi, eta),
                   reconstruct_zero_form(mesh, dofs, r.stream, e, xi, eta));
      }
      out << '\n';
    }
    out << '\n';
  }
}

}  // namespace mmsem
