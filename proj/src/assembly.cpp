#include "mmsem/assembly.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace mmsem {

namespace {

struct Cell2 {
  unsigned axes;
  int i;
  int j;
};

Cell2 local_cell(const MappedMesh& mesh, int k, int id) {
  const CellIndex c = mesh.local().cell(k, id);
  return {c.axes, c.index[0], c.index[1]};
}

void check_reference(double xi, double eta) {
  if (xi < -1.0 || xi > 1.0 || eta < -1.0 || eta > 1.0)
    throw std::out_of_range("reference point outside [-1,1]^2");
}

void check_cochain(const DofMap& dofs, const Cochain& c, int k) {
  if (c.degree != k || c.values.size() != dofs.count(k)) throw std::invalid_argument("cochain degree or size mismatch");
}

// Gauss points mapped to [a, b].
struct SubRule {
  std::vector<double> x;
  std::vector<double> w;
};

SubRule sub_rule(const QuadratureRule& r, double a, double b) {
  SubRule s;
  const double h = 0.5 * (b - a);
  for (int q = 0; q < r.size(); ++q) {
    s.x.push_back(a + (r.nodes[q] + 1) * h);
    s.w.push_back(r.weights[q] * h);
  }
  return s;
}

Eigen::Matrix2d as_matrix(const Jacobian& j) {
  Eigen::Matrix2d m;
  m << j.x_xi, j.x_eta, j.y_xi, j.y_eta;
  return m;
}

}  // namespace

DofMap build_dof_map(const MappedMesh& mesh) {
  DofMap d;
  const auto& g = mesh.global();
  const auto& loc = mesh.local();
  const int n = mesh.order();
  for (int k = 0; k <= 2; ++k) {
    d.global_count[k] = g.count(k);
    d.local_to_global[k].resize(mesh.element_count());
    for (int e = 0; e < mesh.element_count(); ++e) {
      const auto [ex, ey] = mesh.element_position(e);
      auto& map = d.local_to_global[k][e];
      map.resize(loc.count(k));
      for (int id = 0; id < loc.count(k); ++id) {
        CellIndex c = loc.cell(k, id);
        c.index[0] += ex * n;
        c.index[1] += ey * n;
        map[id] = g.cell_id(k, c);
      }
    }
  }
  const int last = g.edges(0);
  for (int i = 0; i <= last; ++i) {
    d.boundary_nodes[0].push_back(g.node(i, 0));
    d.boundary_nodes[1].push_back(g.node(last, i));
    d.boundary_nodes[2].push_back(g.node(i, last));
    d.boundary_nodes[3].push_back(g.node(0, i));
  }
  for (int i = 0; i < last; ++i) {
    d.boundary_edges[0].push_back(g.xi_edge(i, 0));
    d.boundary_edges[1].push_back(g.eta_edge(last, i));
    d.boundary_edges[2].push_back(g.xi_edge(i, last));
    d.boundary_edges[3].push_back(g.eta_edge(0, i));
  }
  return d;
}

SparseMatrix assemble_mass(const MappedMesh& mesh, const DofMap& dofs, int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("mass matrix degree must be 0, 1 or 2");
  const int nq = mesh.quadrature().size();
  const auto& w = mesh.quadrature().weights;
  const auto& t = mesh.table();
  const int nloc = mesh.local().count(k);
  const int npts = nq * nq;

  // Reference basis values per quadrature point; two components for k = 1.
  Eigen::MatrixXd first(npts, nloc);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(k == 1 ? npts : 0, nloc);
  for (int id = 0; id < nloc; ++id) {
    const Cell2 c = local_cell(mesh, k, id);
    for (int qy = 0; qy < nq; ++qy)
      for (int qx = 0; qx < nq; ++qx) {
        const int q = qy * nq + qx;
        if (k == 0) {
          first(q, id) = t.l(qx, c.i) * t.l(qy, c.j);
        } else if (k == 2) {
          first(q, id) = t.e(qx, c.i) * t.e(qy, c.j);
        } else if (c.axes == 1u) {
          first(q, id) = -t.e(qx, c.i) * t.l(qy, c.j);
          second(q, id) = 0.0;
        } else {
          first(q, id) = 0.0;
          second(q, id) = t.l(qx, c.i) * t.e(qy, c.j);
        }
      }
  }

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(mesh.element_count()) * nloc * nloc);
  Eigen::VectorXd d0(npts), d1(npts), d2(npts);
  for (int e = 0; e < mesh.element_count(); ++e) {
    for (int qy = 0; qy < nq; ++qy)
      for (int qx = 0; qx < nq; ++qx) {
        const int q = qy * nq + qx;
        const MetricData& m = mesh.metric(e, qx, qy);
        const double wq = w[qx] * w[qy];
        if (k == 0) d0[q] = wq * m.w0;
        if (k == 2) d0[q] = wq * m.w2;
        if (k == 1) {
          d0[q] = wq * m.g[0];
          d1[q] = wq * m.g[1];
          d2[q] = wq * m.g[2];
        }
      }
    Eigen::MatrixXd local;
    if (k == 1) {
      const Eigen::MatrixXd cross = first.transpose() * d1.asDiagonal() * second;
      local = first.transpose() * d0.asDiagonal() * first + second.transpose() * d2.asDiagonal() * second + cross +
              cross.transpose();
    } else {
      local = first.transpose() * d0.asDiagonal() * first;
    }
    const auto& map = dofs.element_cells(k, e);
    for (int a = 0; a < nloc; ++a)
      for (int b = 0; b < nloc; ++b) {
        const double v = a <= b ? local(a, b) : local(b, a);
        if (v != 0.0) entries.emplace_back(map[a], map[b], v);
      }
  }
  SparseMatrix m(dofs.count(k), dofs.count(k));
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

IncidenceMatrix assemble_global_incidence(const MappedMesh& mesh, const DofMap& dofs, int k) {
  if (k < 1 || k > 2) throw std::invalid_argument("incidence degree must be 1 or 2");
  const IncidenceMatrix local = incidence(mesh.local(), k);
  std::vector<Eigen::Triplet<int>> entries;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& rows = dofs.element_cells(k, e);
    const auto& cols = dofs.element_cells(k - 1, e);
    for (int r = 0; r < local.coboundary.outerSize(); ++r)
      for (Eigen::SparseMatrix<int, Eigen::RowMajor>::InnerIterator it(local.coboundary, r); it; ++it)
        entries.emplace_back(rows[it.row()], cols[it.col()], it.value());
  }
  IncidenceMatrix d;
  d.degree = k;
  d.coboundary.resize(dofs.count(k), dofs.count(k - 1));
  // Shared cells receive identical entries from each neighbour; keep one.
  d.coboundary.setFromTriplets(entries.begin(), entries.end(), [](int a, int) { return a; });
  return d;
}

Cochain reduce_zero_form(const MappedMesh& mesh, const DofMap& dofs, const ScalarField& f) {
  Cochain c{0, Eigen::VectorXd::Zero(dofs.count(0))};
  const auto x = mesh.basis().grid().nodes();
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& map = dofs.element_cells(0, e);
    for (int id = 0; id < mesh.local().count(0); ++id) {
      const Cell2 cell = local_cell(mesh, 0, id);
      const Point2 p = mesh.element(e).evaluate(x[cell.i], x[cell.j]);
      c.values[map[id]] = f(p.x, p.y);
    }
  }
  return c;
}

namespace {

// Reductions integrate analytic data over sub-cells; enough points that the
// result is accurate to round-off for smooth fields on small cells.
QuadratureRule reduction_rule(const MappedMesh& mesh) { return gauss_legendre(std::max(mesh.order() + 3, 12)); }

}  // namespace

Cochain reduce_flux(const MappedMesh& mesh, const DofMap& dofs, const VectorField& u) {
  Cochain c{1, Eigen::VectorXd::Zero(dofs.count(1))};
  const auto x = mesh.basis().grid().nodes();
  const QuadratureRule gauss = reduction_rule(mesh);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const ElementMap& map = mesh.element(e);
    const auto& cells = dofs.element_cells(1, e);
    for (int id = 0; id < mesh.local().count(1); ++id) {
      const Cell2 cell = local_cell(mesh, 1, id);
      double flux = 0.0;
      if (cell.axes == 1u) {
        const double eta = x[cell.j];
        const SubRule r = sub_rule(gauss, x[cell.i], x[cell.i + 1]);
        for (std::size_t q = 0; q < r.x.size(); ++q) {
          const Point2 p = map.evaluate(r.x[q], eta);
          const Jacobian j = map.jacobian(r.x[q], eta);
          const Eigen::Vector2d v = u(p.x, p.y);
          flux += r.w[q] * (-j.y_xi * v[0] + j.x_xi * v[1]);
        }
      } else {
        const double xi = x[cell.i];
        const SubRule r = sub_rule(gauss, x[cell.j], x[cell.j + 1]);
        for (std::size_t q = 0; q < r.x.size(); ++q) {
          const Point2 p = map.evaluate(xi, r.x[q]);
          const Jacobian j = map.jacobian(xi, r.x[q]);
          const Eigen::Vector2d v = u(p.x, p.y);
          flux += r.w[q] * (j.y_eta * v[0] - j.x_eta * v[1]);
        }
      }
      c.values[cells[id]] = flux;
    }
  }
  return c;
}

Cochain reduce_density(const MappedMesh& mesh, const DofMap& dofs, const ScalarField& p) {
  Cochain c{2, Eigen::VectorXd::Zero(dofs.count(2))};
  const auto x = mesh.basis().grid().nodes();
  const QuadratureRule gauss = reduction_rule(mesh);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const ElementMap& map = mesh.element(e);
    const auto& cells = dofs.element_cells(2, e);
    for (int id = 0; id < mesh.local().count(2); ++id) {
      const Cell2 cell = local_cell(mesh, 2, id);
      const SubRule rx = sub_rule(gauss, x[cell.i], x[cell.i + 1]);
      const SubRule ry = sub_rule(gauss, x[cell.j], x[cell.j + 1]);
      double sum = 0.0;
      for (std::size_t qy = 0; qy < ry.x.size(); ++qy)
        for (std::size_t qx = 0; qx < rx.x.size(); ++qx) {
          const Point2 pt = map.evaluate(rx.x[qx], ry.x[qy]);
          sum += rx.w[qx] * ry.w[qy] * p(pt.x, pt.y) * map.jacobian(rx.x[qx], ry.x[qy]).det();
        }
      c.values[cells[id]] = sum;
    }
  }
  return c;
}

double reconstruct_zero_form(const MappedMesh& mesh, const DofMap& dofs, const Cochain& c, int e, double xi,
                             double eta) {
  check_cochain(dofs, c, 0);
  check_reference(xi, eta);
  const int n = mesh.order();
  std::vector<double> lx(n + 1), ly(n + 1);
  mesh.basis().nodal().values(xi, lx);
  mesh.basis().nodal().values(eta, ly);
  const auto& map = dofs.element_cells(0, e);
  double sum = 0.0;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) sum += c.values[map[mesh.local().node(i, j)]] * lx[i] * ly[j];
  return sum;
}

Eigen::Vector2d reconstruct_gradient(const MappedMesh& mesh, const DofMap& dofs, const Cochain& c, int e, double xi,
                                     double eta) {
  check_cochain(dofs, c, 0);
  check_reference(xi, eta);
  const int n = mesh.order();
  std::vector<double> lx(n + 1), ly(n + 1), dx(n + 1), dy(n + 1);
  mesh.basis().nodal().values(xi, lx);
  mesh.basis().nodal().values(eta, ly);
  mesh.basis().nodal().derivatives(xi, dx);
  mesh.basis().nodal().derivatives(eta, dy);
  const auto& map = dofs.element_cells(0, e);
  Eigen::Vector2d ref = Eigen::Vector2d::Zero();
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double v = c.values[map[mesh.local().node(i, j)]];
      ref[0] += v * dx[i] * ly[j];
      ref[1] += v * lx[i] * dy[j];
    }
  return as_matrix(mesh.element(e).jacobian(xi, eta)).transpose().lu().solve(ref);
}

Eigen::Vector2d reconstruct_flux(const MappedMesh& mesh, const DofMap& dofs, const Cochain& c, int e, double xi,
                                 double eta) {
  check_cochain(dofs, c, 1);
  check_reference(xi, eta);
  const int n = mesh.order();
  std::vector<double> lx(n + 1), ly(n + 1), ex(n), ey(n);
  mesh.basis().nodal().values(xi, lx);
  mesh.basis().nodal().values(eta, ly);
  mesh.basis().edge().values(xi, ex);
  mesh.basis().edge().values(eta, ey);
  const auto& map = dofs.element_cells(1, e);
  const auto& loc = mesh.local();
  Eigen::Vector2d ref = Eigen::Vector2d::Zero();
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i < n; ++i) ref[1] += c.values[map[loc.xi_edge(i, j)]] * ex[i] * ly[j];
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= n; ++i) ref[0] += c.values[map[loc.eta_edge(i, j)]] * lx[i] * ey[j];
  const Jacobian jac = mesh.element(e).jacobian(xi, eta);
  return as_matrix(jac) * ref / jac.det();
}

double reconstruct_density(const MappedMesh& mesh, const DofMap& dofs, const Cochain& c, int e, double xi, double eta) {
  check_cochain(dofs, c, 2);
  check_reference(xi, eta);
  const int n = mesh.order();
  std::vector<double> ex(n), ey(n);
  mesh.basis().edge().values(xi, ex);
  mesh.basis().edge().values(eta, ey);
  const auto& map = dofs.element_cells(2, e);
  double sum = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) sum += c.values[map[mesh.local().face(i, j)]] * ex[i] * ey[j];
  return sum / mesh.element(e).jacobian(xi, eta).det();
}

std::vector<FieldSample> reconstruct(const MappedMesh& mesh, const DofMap& dofs, const Cochain& c, int samples) {
  if (samples < 2) throw std::invalid_argument("need at least two samples per direction");
  std::vector<FieldSample> out;
  out.reserve(static_cast<std::size_t>(mesh.element_count()) * samples * samples);
  for (int e = 0; e < mesh.element_count(); ++e)
    for (int sy = 0; sy < samples; ++sy)
      for (int sx = 0; sx < samples; ++sx) {
        FieldSample s;
        s.element = e;
        s.xi = -1.0 + 2.0 * sx / (samples - 1);
        s.eta = -1.0 + 2.0 * sy / (samples - 1);
        s.at = mesh.element(e).evaluate(s.xi, s.eta);
        if (c.degree == 0) s.value = reconstruct_zero_form(mesh, dofs, c, e, s.xi, s.eta);
        if (c.degree == 1) s.vector = reconstruct_flux(mesh, dofs, c, e, s.xi, s.eta);
        if (c.degree == 2) s.value = reconstruct_density(mesh, dofs, c, e, s.xi, s.eta);
        out.push_back(s);
      }
  return out;
}

Eigen::VectorXd assemble_b1(const MappedMesh& mesh, const DofMap& dofs,
                            const std::array<std::optional<VectorField>, 4>& velocity) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dofs.count(0));
  const auto& rule = mesh.quadrature();
  const int n = mesh.order();
  const int m = mesh.elements_per_axis();
  std::vector<double> l(n + 1);
  for (Segment s : all_segments) {
    const auto& data = velocity[static_cast<int>(s)];
    if (!data) continue;
    for (int k = 0; k < m; ++k) {
      int ex = k, ey = k;
      if (s == Segment::bottom) ey = 0;
      if (s == Segment::top) ey = m - 1;
      if (s == Segment::left) ex = 0;
      if (s == Segment::right) ex = m - 1;
      const int e = mesh.element_id(ex, ey);
      const ElementMap& map = mesh.element(e);
      const auto& cells = dofs.element_cells(0, e);
      const bool along_xi = s == Segment::bottom || s == Segment::top;
      const double fixed = (s == Segment::bottom || s == Segment::left) ? -1.0 : 1.0;
      const double sign = (s == Segment::bottom || s == Segment::right) ? 1.0 : -1.0;
      for (int q = 0; q < rule.size(); ++q) {
        const double r = rule.nodes[q];
        const double xi = along_xi ? r : fixed;
        const double eta = along_xi ? fixed : r;
        const Point2 p = map.evaluate(xi, eta);
        const Jacobian j = map.jacobian(xi, eta);
        const Eigen::Vector2d tangent = along_xi ? Eigen::Vector2d(j.x_xi, j.y_xi) : Eigen::Vector2d(j.x_eta, j.y_eta);
        const double ut = sign * rule.weights[q] * (*data)(p.x, p.y).dot(tangent);
        mesh.basis().nodal().values(r, l);
        for (int i = 0; i <= n; ++i) {
          const int node = along_xi ? mesh.local().node(i, fixed < 0 ? 0 : n) : mesh.local().node(fixed < 0 ? 0 : n, i);
          b[cells[node]] += l[i] * ut;
        }
      }
    }
  }
  return b;
}

Eigen::VectorXd assemble_b2(const MappedMesh& mesh, const DofMap& dofs,
                            const std::array<std::optional<ScalarField>, 4>& pressure) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dofs.count(1));
  const auto& rule = mesh.quadrature();
  const int n = mesh.order();
  const int m = mesh.elements_per_axis();
  std::vector<double> ev(n);
  for (Segment s : all_segments) {
    const auto& data = pressure[static_cast<int>(s)];
    if (!data) continue;
    for (int k = 0; k < m; ++k) {
      int ex = k, ey = k;
      if (s == Segment::bottom) ey = 0;
      if (s == Segment::top) ey = m - 1;
      if (s == Segment::left) ex = 0;
      if (s == Segment::right) ex = m - 1;
      const int e = mesh.element_id(ex, ey);
      const ElementMap& map = mesh.element(e);
      const auto& cells = dofs.element_cells(1, e);
      const bool along_xi = s == Segment::bottom || s == Segment::top;
      const double fixed = (s == Segment::bottom || s == Segment::left) ? -1.0 : 1.0;
      const int at = fixed < 0 ? 0 : n;
      for (int q = 0; q < rule.size(); ++q) {
        const double r = rule.nodes[q];
        const Point2 p = along_xi ? map.evaluate(r, fixed) : map.evaluate(fixed, r);
        const double wp = fixed * rule.weights[q] * (*data)(p.x, p.y);
        mesh.basis().edge().values(r, ev);
        for (int i = 0; i < n; ++i) {
          const int edge = along_xi ? mesh.local().xi_edge(i, at) : mesh.local().eta_edge(at, i);
          b[cells[edge]] += ev[i] * wp;
        }
      }
    }
  }
  return b;
}

Eigen::VectorXd assemble_load(const MappedMesh& mesh, const DofMap& dofs, const VectorField& f, ForcingMode mode) {
  if (mode == ForcingMode::cochain) return assemble_mass(mesh, dofs, 1) * reduce_flux(mesh, dofs, f).values;

  Eigen::VectorXd b = Eigen::VectorXd::Zero(dofs.count(1));
  const int nq = mesh.quadrature().size();
  const auto& w = mesh.quadrature().weights;
  const auto& t = mesh.table();
  const auto& loc = mesh.local();
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& cells = dofs.element_cells(1, e);
    for (int qy = 0; qy < nq; ++qy)
      for (int qx = 0; qx < nq; ++qx) {
        const MetricData& m = mesh.metric(e, qx, qy);
        const double r = mesh.quadrature().nodes[qx];
        const double s = mesh.quadrature().nodes[qy];
        const Point2 p = mesh.element(e).evaluate(r, s);
        const Eigen::Vector2d fv = f(p.x, p.y);
        // Reference flux pairs with J^T f.
        const Eigen::Vector2d g = as_matrix(m.jac).transpose() * fv * (w[qx] * w[qy]);
        for (int id = 0; id < loc.count(1); ++id) {
          const Cell2 c = local_cell(mesh, 1, id);
          if (c.axes == 1u)
            b[cells[id]] += t.e(qx, c.i) * t.l(qy, c.j) * g[1];
          else
            b[cells[id]] += t.l(qx, c.i) * t.e(qy, c.j) * g[0];
        }
      }
  }
  return b;
}

Eigen::VectorXd cell_areas(const MappedMesh& mesh, const DofMap& dofs) {
  return reduce_density(mesh, dofs, [](double, double) { return 1.0; }).values;
}

void write_coo(std::ostream& out, const SparseMatrix& m) {
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace mmsem
