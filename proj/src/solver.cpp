#include "mmsem/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mmsem {

namespace {

constexpr double residual_tolerance = 1e-10;
constexpr int refinement_steps = 4;

template <class T>
const T& require(const std::optional<T>& value, Segment s, const char* what) {
  if (!value) throw std::invalid_argument("segment " + to_string(s) + " requires " + what + " data");
  return *value;
}

void append_block(std::vector<Eigen::Triplet<double>>& out, const SparseMatrix& block, int row0, int col0,
                  double scale) {
  for (int c = 0; c < block.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(block, c); it; ++it)
      out.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
}

}  // namespace

std::string to_string(BcType bc) {
  switch (bc) {
    case BcType::velocity: return "vel";
    case BcType::tangential_velocity_pressure: return "tanvel-pres";
    case BcType::vorticity_normal_velocity: return "vort-normvel";
    case BcType::vorticity_pressure: return "vort-pres";
  }
  return "?";
}

BcType parse_bc(const std::string& name) {
  if (name == "vel") return BcType::velocity;
  if (name == "tanvel-pres") return BcType::tangential_velocity_pressure;
  if (name == "vort-normvel") return BcType::vorticity_normal_velocity;
  if (name == "vort-pres") return BcType::vorticity_pressure;
  throw std::invalid_argument("unknown boundary condition type: " + name);
}

bool prescribes_vorticity(BcType bc) {
  return bc == BcType::vorticity_normal_velocity || bc == BcType::vorticity_pressure;
}
bool prescribes_normal_velocity(BcType bc) {
  return bc == BcType::velocity || bc == BcType::vorticity_normal_velocity;
}
bool prescribes_tangential_velocity(BcType bc) {
  return bc == BcType::velocity || bc == BcType::tangential_velocity_pressure;
}
bool prescribes_pressure(BcType bc) {
  return bc == BcType::tangential_velocity_pressure || bc == BcType::vorticity_pressure;
}

SaddleSystem assemble_system(const MappedMesh& mesh, const DofMap& dofs, const StokesProblem& problem,
                             PressureUnknown pressure_unknown) {
  if (!problem.forcing) throw std::invalid_argument("problem has no forcing");
  const double nu = problem.viscosity;
  const SparseMatrix m0 = assemble_mass(mesh, dofs, 0);
  const SparseMatrix m1 = assemble_mass(mesh, dofs, 1);
  const SparseMatrix m2 = assemble_mass(mesh, dofs, 2);
  const SparseMatrix d10 = incidence(mesh.global(), 1).as_real();
  const SparseMatrix d21 = incidence(mesh.global(), 2).as_real();
  const SparseMatrix m1d10 = m1 * d10;
  const SparseMatrix m2d21 = pressure_unknown == PressureUnknown::primal ? SparseMatrix(m2 * d21) : d21;

  SaddleSystem s;
  s.pressure_unknown = pressure_unknown;
  s.sizes = {dofs.count(0), dofs.count(1), dofs.count(2)};
  const int o1 = s.offset(1);
  const int o2 = s.offset(2);
  std::vector<Eigen::Triplet<double>> entries;
  append_block(entries, m0, 0, 0, -nu);
  append_block(entries, SparseMatrix(m1d10.transpose()), 0, o1, nu);
  append_block(entries, m1d10, o1, 0, nu);
  append_block(entries, SparseMatrix(m2d21.transpose()), o1, o2, -1.0);
  append_block(entries, m2d21, o2, o1, -1.0);
  s.matrix.resize(s.size(), s.size());
  s.matrix.setFromTriplets(entries.begin(), entries.end());

  std::array<std::optional<VectorField>, 4> tangential;
  std::array<std::optional<ScalarField>, 4> pressure;
  for (Segment seg : all_segments) {
    const int k = static_cast<int>(seg);
    if (prescribes_tangential_velocity(problem.bc[k]))
      tangential[k] = require(problem.data[k].velocity, seg, "velocity");
    if (prescribes_pressure(problem.bc[k])) pressure[k] = require(problem.data[k].pressure, seg, "pressure");
  }
  s.rhs = Eigen::VectorXd::Zero(s.size());
  s.rhs.segment(0, s.sizes[0]) = -nu * assemble_b1(mesh, dofs, tangential);
  s.rhs.segment(o1, s.sizes[1]) =
      assemble_load(mesh, dofs, problem.forcing, problem.forcing_mode) - assemble_b2(mesh, dofs, pressure);
  return s;
}

ReducedSystem apply_bcs(const MappedMesh& mesh, const DofMap& dofs, const StokesProblem& problem,
                        const SaddleSystem& system) {
  const int n = system.size();
  std::vector<char> is_fixed(n, 0);
  Eigen::VectorXd value = Eigen::VectorXd::Zero(n);
  const int o1 = system.offset(1);
  const int o2 = system.offset(2);

  for (Segment seg : all_segments) {
    const int k = static_cast<int>(seg);
    const BcType bc = problem.bc[k];
    if (prescribes_vorticity(bc)) {
      const Cochain w = reduce_zero_form(mesh, dofs, require(problem.data[k].vorticity, seg, "vorticity"));
      for (int node : dofs.nodes_on(seg)) {
        is_fixed[node] = 1;
        value[node] = w.values[node];
      }
    }
    if (prescribes_normal_velocity(bc)) {
      const Cochain u = reduce_flux(mesh, dofs, require(problem.data[k].velocity, seg, "velocity"));
      for (int edge : dofs.edges_on(seg)) {
        is_fixed[o1 + edge] = 1;
        value[o1 + edge] = u.values[edge];
      }
    }
  }

  ReducedSystem r;
  const bool all_vort_pres = std::all_of(problem.bc.begin(), problem.bc.end(),
                                         [](BcType b) { return b == BcType::vorticity_pressure; });
  if (all_vort_pres) {
    // Discrete harmonic velocities are invisible to w and p; select the one
    // without boundary flux, leaving a single boundary edge free.
    r.harmonic_gauge = true;
    std::vector<int> edges;
    for (Segment seg : all_segments)
      for (int edge : dofs.edges_on(seg)) edges.push_back(edge);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    const int keep = dofs.edges_on(Segment::left).back();
    for (int edge : edges)
      if (edge != keep) {
        is_fixed[o1 + edge] = 1;
        value[o1 + edge] = 0.0;
      }
  }
  const bool any_pressure =
      std::any_of(problem.bc.begin(), problem.bc.end(), [](BcType b) { return prescribes_pressure(b); });
  if (!any_pressure) {
    r.pressure_gauge = true;
    const int cell = problem.gauge_cell < 0 ? system.sizes[2] - 1 : problem.gauge_cell;
    if (cell >= system.sizes[2]) throw std::out_of_range("gauge cell out of range");
    is_fixed[o2 + cell] = 1;
    value[o2 + cell] = 0.0;
  }

  std::vector<int> index(n, -1);
  for (int i = 0; i < n; ++i) {
    if (is_fixed[i]) {
      r.fixed.push_back(i);
    } else {
      index[i] = static_cast<int>(r.free.size());
      r.free.push_back(i);
    }
  }
  r.fixed_values.resize(static_cast<Eigen::Index>(r.fixed.size()));
  for (std::size_t i = 0; i < r.fixed.size(); ++i) r.fixed_values[i] = value[r.fixed[i]];

  const int nf = static_cast<int>(r.free.size());
  r.rhs.resize(nf);
  for (int i = 0; i < nf; ++i) r.rhs[i] = system.rhs[r.free[i]];
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(system.matrix.nonZeros());
  for (int c = 0; c < system.matrix.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(system.matrix, c); it; ++it) {
      const int row = index[it.row()];
      if (row < 0) continue;
      const int col = index[it.col()];
      if (col >= 0)
        entries.emplace_back(row, col, it.value());
      else
        r.rhs[row] -= it.value() * value[it.col()];
    }
  r.matrix.resize(nf, nf);
  r.matrix.setFromTriplets(entries.begin(), entries.end());
  return r;
}

Cochain lattice_stream_function(const CellComplex& g, const Cochain& velocity) {
  const int n = g.edges(0);
  Cochain psi{0, Eigen::VectorXd::Zero(g.count(0))};
  for (int i = 1; i <= n; ++i)
    psi.values[g.node(i, 0)] = psi.values[g.node(i - 1, 0)] - velocity.values[g.xi_edge(i - 1, 0)];
  for (int i = 0; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      psi.values[g.node(i, j)] = psi.values[g.node(i, j - 1)] + velocity.values[g.eta_edge(i, j - 1)];
  const double largest = psi.values.cwiseAbs().maxCoeff();
  if (largest == 0.0) return psi;
  // Quantum 2^(e-50) with 2^e > |psi|: sums of four lattice differences stay
  // below 2^53 quanta and are therefore exact.
  const double quantum = std::ldexp(1.0, std::ilogb(largest) + 1 - 50);
  for (double& v : psi.values) v = std::round(v / quantum) * quantum;
  return psi;
}

void fix_pressure_gauge(Cochain& p, const Eigen::VectorXd& direction) {
  p.values -= (p.values.sum() / direction.sum()) * direction;
}

Solution solve(const MappedMesh& mesh, const DofMap& dofs, const StokesProblem& problem) {
  const SaddleSystem system = assemble_system(mesh, dofs, problem, PressureUnknown::dual);
  const ReducedSystem reduced = apply_bcs(mesh, dofs, problem, system);

  Eigen::VectorXd y = Eigen::VectorXd::Zero(reduced.rhs.size());
  Eigen::VectorXd res = reduced.rhs;
  // Every unknown may be essential on the smallest meshes.
  if (!reduced.free.empty()) {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(reduced.matrix);
    if (lu.info() != Eigen::Success)
      throw SingularSystemError("saddle-point factorisation failed: " + lu.lastErrorMessage());
    y = lu.solve(reduced.rhs);
    if (lu.info() != Eigen::Success) throw SingularSystemError("saddle-point solve failed");
    res = reduced.rhs - reduced.matrix * y;
    // Iterative refinement drives the continuity rows down to round-off.
    for (int step = 0; step < refinement_steps; ++step) {
      const Eigen::VectorXd next = y + lu.solve(res);
      const Eigen::VectorXd next_res = reduced.rhs - reduced.matrix * next;
      if (!(next_res.norm() < res.norm())) break;
      y = next;
      res = next_res;
    }
  }
  const double scale = std::max(reduced.rhs.norm(), 1e-300);
  const double residual = reduced.rhs.norm() > 0 ? res.norm() / scale : res.norm();
  if (!(residual <= residual_tolerance)) {
    std::ostringstream msg;
    msg << "relative residual " << residual << " exceeds " << residual_tolerance;
    throw std::runtime_error(msg.str());
  }

  Eigen::VectorXd x(system.size());
  for (std::size_t i = 0; i < reduced.free.size(); ++i) x[reduced.free[i]] = y[i];
  for (std::size_t i = 0; i < reduced.fixed.size(); ++i) x[reduced.fixed[i]] = reduced.fixed_values[i];

  Solution s;
  s.vorticity = {0, x.segment(0, system.sizes[0])};
  s.velocity = {1, x.segment(system.offset(1), system.sizes[1])};
  if (problem.lattice_velocity)
    s.velocity = coboundary_apply(incidence(mesh.global(), 1), lattice_stream_function(mesh.global(), s.velocity));
  // 2-cells are element-interior, so M2 is block diagonal and cheap to factor.
  Eigen::SimplicialLDLT<SparseMatrix> m2(assemble_mass(mesh, dofs, 2));
  s.pressure = {2, m2.solve(x.segment(system.offset(2), system.sizes[2]))};
  s.pressure_gauge = reduced.pressure_gauge;
  s.residual = residual;
  // The kernel of the pressure gradient is M2^-1 * 1, the projected constant.
  // On curved elements it differs from a constant density.
  if (reduced.pressure_gauge)
    fix_pressure_gauge(s.pressure, m2.solve(Eigen::VectorXd::Ones(system.sizes[2])));
  return s;
}

}  // namespace mmsem
