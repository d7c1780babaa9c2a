#include "mmsem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mmsem {

namespace {

constexpr double pi = std::numbers::pi;

struct GlobalMap {
  MapKind kind;
  double a;

  // Unit-square coordinates (s, t) -> physical point.
  Point2 operator()(double s, double t) const {
    if (kind == MapKind::cartesian) return {s, t};
    const double X = 2 * s - 1;
    const double Y = 2 * t - 1;
    const double bump = a * std::sin(pi * X) * std::sin(pi * Y);
    return {0.5 + 0.5 * (X + bump), 0.5 + 0.5 * (Y + bump)};
  }

  // Derivatives with respect to (s, t).
  Jacobian derivative(double s, double t) const {
    if (kind == MapKind::cartesian) return {};
    const double X = 2 * s - 1;
    const double Y = 2 * t - 1;
    const double dX = a * pi * std::cos(pi * X) * std::sin(pi * Y);
    const double dY = a * pi * std::sin(pi * X) * std::cos(pi * Y);
    return {1 + dX, dY, dX, 1 + dY};
  }
};

std::vector<double> element_breaks(int m, Grading grading) {
  std::vector<double> b(m + 1);
  if (grading == Grading::uniform) {
    for (int i = 0; i <= m; ++i) b[i] = static_cast<double>(i) / m;
  } else {
    const auto r = gauss_lobatto(m + 1);
    for (int i = 0; i <= m; ++i) b[i] = 0.5 * (1 + r.nodes[i]);
  }
  b.front() = 0.0;
  b.back() = 1.0;
  return b;
}

std::optional<std::pair<int, double>> find_interval(std::span<const double> breaks, double s) {
  constexpr double slack = 1e-12;
  if (s < breaks.front() - slack || s > breaks.back() + slack) return std::nullopt;
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), s);
  int k = static_cast<int>(it - breaks.begin()) - 1;
  k = std::clamp(k, 0, static_cast<int>(breaks.size()) - 2);
  const double ref = 2 * (s - breaks[k]) / (breaks[k + 1] - breaks[k]) - 1;
  return std::pair{k, std::clamp(ref, -1.0, 1.0)};
}

}  // namespace

std::string to_string(MapKind kind) { return kind == MapKind::cartesian ? "cartesian" : "sine"; }

std::string to_string(Segment segment) {
  switch (segment) {
    case Segment::bottom: return "bottom";
    case Segment::right: return "right";
    case Segment::top: return "top";
    case Segment::left: return "left";
  }
  return "?";
}

MetricData metric_at(const Jacobian& jac) {
  MetricData m;
  m.jac = jac;
  m.det = jac.det();
  m.w0 = m.det;
  m.w2 = 1.0 / m.det;
  // (J^T J)^{-1} det J = adj(J^T J) / det J
  const double a = jac.x_xi * jac.x_xi + jac.y_xi * jac.y_xi;
  const double b = jac.x_xi * jac.x_eta + jac.y_xi * jac.y_eta;
  const double c = jac.x_eta * jac.x_eta + jac.y_eta * jac.y_eta;
  m.g = {c / m.det, -b / m.det, a / m.det};
  return m;
}

ElementMap::ElementMap(MapKind kind, double x0, double x1, double y0, double y1, double amplitude)
    : kind_(kind), x0_(x0), x1_(x1), y0_(y0), y1_(y1), amplitude_(amplitude) {
  if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("element tile must have positive extent");
}

Point2 ElementMap::evaluate(double xi, double eta) const {
  const double s = x0_ + 0.5 * (xi + 1) * (x1_ - x0_);
  const double t = y0_ + 0.5 * (eta + 1) * (y1_ - y0_);
  return GlobalMap{kind_, amplitude_}(s, t);
}

Jacobian ElementMap::jacobian(double xi, double eta) const {
  const double hs = 0.5 * (x1_ - x0_);
  const double ht = 0.5 * (y1_ - y0_);
  const double s = x0_ + (xi + 1) * hs;
  const double t = y0_ + (eta + 1) * ht;
  const Jacobian g = GlobalMap{kind_, amplitude_}.derivative(s, t);
  return {g.x_xi * hs, g.x_eta * ht, g.y_xi * hs, g.y_eta * ht};
}

std::vector<MetricData> metric_factors(const ElementMap& map, std::span<const double> points_1d, int element_id) {
  const auto n = points_1d.size();
  std::vector<MetricData> out;
  out.reserve(n * n);
  for (std::size_t qy = 0; qy < n; ++qy)
    for (std::size_t qx = 0; qx < n; ++qx) {
      const Jacobian jac = map.jacobian(points_1d[qx], points_1d[qy]);
      if (!(jac.det() > 0.0)) {
        std::ostringstream msg;
        msg << "non-positive Jacobian determinant " << jac.det() << " in element " << element_id << " at (xi, eta) = ("
            << points_1d[qx] << ", " << points_1d[qy] << ")";
        throw std::domain_error(msg.str());
      }
      out.push_back(metric_at(jac));
    }
  return out;
}

MappedMesh::MappedMesh(const MeshOptions& options)
    : options_(options),
      breaks_(element_breaks(std::max(options.elements_per_axis, 1), options.grading)),
      global_(2, std::array{options.elements_per_axis * options.order, options.elements_per_axis * options.order}),
      local_(2, std::array{options.order, options.order}),
      basis_(options.order) {
  if (options.elements_per_axis < 1) throw std::invalid_argument("need at least one element per axis");
  const int m = options.elements_per_axis;
  for (int ey = 0; ey < m; ++ey)
    for (int ex = 0; ex < m; ++ex)
      elements_.emplace_back(options.map, breaks_[ex], breaks_[ex + 1], breaks_[ey], breaks_[ey + 1], options.amplitude);

  const int points = options.quadrature == QuadratureKind::standard ? options.order + 1 : options.order + 3;
  quad_ = gauss_lobatto(points);
  table_ = tabulate(basis_, quad_.nodes);
  metric_.reserve(elements_.size());
  for (int e = 0; e < element_count(); ++e) metric_.push_back(metric_factors(elements_[e], quad_.nodes, e));
}

bool MappedMesh::on_boundary(Segment s, int ex, int ey) const {
  const int last = elements_per_axis() - 1;
  switch (s) {
    case Segment::bottom: return ey == 0;
    case Segment::right: return ex == last;
    case Segment::top: return ey == last;
    case Segment::left: return ex == 0;
  }
  return false;
}

MappedMesh build_mesh(const MeshOptions& options) { return MappedMesh(options); }

std::optional<Location> locate(const MappedMesh& mesh, Point2 p) {
  double s = p.x;
  double t = p.y;
  if (mesh.options().map == MapKind::sine) {
    const GlobalMap g{MapKind::sine, mesh.options().amplitude};
    for (int it = 0; it < 50; ++it) {
      const Point2 f = g(s, t);
      const Jacobian d = g.derivative(s, t);
      const double rx = f.x - p.x;
      const double ry = f.y - p.y;
      const double det = d.det();
      const double ds = (d.y_eta * rx - d.x_eta * ry) / det;
      const double dt = (-d.y_xi * rx + d.x_xi * ry) / det;
      s -= ds;
      t -= dt;
      if (std::abs(ds) + std::abs(dt) < 1e-15) break;
    }
  }
  const auto bx = find_interval(mesh.breakpoints(), s);
  const auto by = find_interval(mesh.breakpoints(), t);
  if (!bx || !by) return std::nullopt;
  return Location{mesh.element_id(bx->first, by->first), bx->second, by->second};
}

void write_summary(std::ostream& out, const MappedMesh& mesh) {
  const auto& g = mesh.global();
  out << "elements " << mesh.elements_per_axis() << " x " << mesh.elements_per_axis() << '\n'
      << "order " << mesh.order() << '\n'
      << "map " << to_string(mesh.options().map) << '\n'
      << "grading " << (mesh.options().grading == Grading::uniform ? "uniform" : "boundary-refined") << '\n'
      << "quadrature points " << mesh.quadrature().size() << '\n'
      << "cells " << g.count(0) << ' ' << g.count(1) << ' ' << g.count(2) << '\n';
  double min_det = 1e300;
  double max_det = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e)
    for (int qy = 0; qy < mesh.quadrature().size(); ++qy)
      for (int qx = 0; qx < mesh.quadrature().size(); ++qx) {
        min_det = std::min(min_det, mesh.metric(e, qx, qy).det);
        max_det = std::max(max_det, mesh.metric(e, qx, qy).det);
      }
  out << "det range " << min_det << ' ' << max_det << '\n';
  out << "breakpoints";
  for (double b : mesh.breakpoints()) out << ' ' << b;
  out << '\n';
}

}  // namespace mmsem
