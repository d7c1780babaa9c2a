#include "mmsem/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmsem {

namespace {

constexpr double newton_tolerance = 1e-15;
constexpr int newton_max_iterations = 100;

void check_index(int i, int n) {
  if (i < 0 || i >= n) throw std::out_of_range("basis index out of range");
}

// P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
  double prev = 1.0;
  double cur = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double next = ((2 * k + 1) * x * cur - k * prev) / (k + 1);
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

}  // namespace

double legendre(int n, double x) { return legendre_pair(n, x).first; }

QuadratureRule gauss_lobatto(int points) {
  if (points < 2) throw std::invalid_argument("Gauss-Lobatto rule needs at least two points");
  const int n = points - 1;
  QuadratureRule r;
  r.nodes.resize(points);
  r.weights.resize(points);
  for (int i = 0; i < points; ++i) {
    double x = -std::cos(std::numbers::pi * i / n);
    if (i > 0 && i < n) {
      int it = 0;
      for (; it < newton_max_iterations; ++it) {
        const auto [p, q] = legendre_pair(n, x);
        const double dx = (x * p - q) / ((n + 1) * p);
        x -= dx;
        if (std::abs(dx) < newton_tolerance) break;
      }
      if (it == newton_max_iterations) throw std::runtime_error("Gauss-Lobatto Newton iteration did not converge");
    }
    r.nodes[i] = x;
    const double p = legendre(n, x);
    r.weights[i] = 2.0 / (n * (n + 1) * p * p);
  }
  return r;
}

GllGrid gll_grid(int order) {
  if (order < 1) throw std::invalid_argument("GLL grid order must be at least 1");
  return {order, gauss_lobatto(order + 1)};
}

QuadratureRule gauss_legendre(int points) {
  if (points < 1) throw std::invalid_argument("Gauss rule needs at least one point");
  QuadratureRule r;
  r.nodes.resize(points);
  r.weights.resize(points);
  for (int i = 0; i < points; ++i) {
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 1.0;
    int it = 0;
    for (; it < newton_max_iterations; ++it) {
      const auto [p, q] = legendre_pair(points, x);
      dp = points * (x * p - q) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < newton_tolerance) break;
    }
    if (it == newton_max_iterations) throw std::runtime_error("Gauss-Legendre Newton iteration did not converge");
    const auto [p, q] = legendre_pair(points, x);
    dp = points * (x * p - q) / (x * x - 1.0);
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

LagrangeBasis::LagrangeBasis(std::span<const double> nodes) : nodes_(nodes.begin(), nodes.end()) {
  const int n = size();
  if (n < 1) throw std::invalid_argument("Lagrange basis needs at least one node");
  bary_.assign(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (k != i) {
        if (nodes_[i] == nodes_[k]) throw std::invalid_argument("Lagrange nodes must be distinct");
        bary_[i] /= nodes_[i] - nodes_[k];
      }
  diff_.assign(n * n, 0.0);
  for (int k = 0; k < n; ++k) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      diff_[k * n + j] = bary_[j] / bary_[k] / (nodes_[k] - nodes_[j]);
      diag -= diff_[k * n + j];
    }
    diff_[k * n + k] = diag;
  }
}

void LagrangeBasis::values(double x, std::span<double> out) const {
  const int n = size();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (x == nodes_[i]) {
      for (int k = 0; k < n; ++k) out[k] = k == i ? 1.0 : 0.0;
      return;
    }
    out[i] = bary_[i] / (x - nodes_[i]);
    sum += out[i];
  }
  for (int i = 0; i < n; ++i) out[i] /= sum;
}

void LagrangeBasis::derivatives(double x, std::span<double> out) const {
  // dl_j/dx has degree n-2, so it equals its interpolant through the nodal
  // values. This avoids the cancellation of the direct barycentric formula
  // next to a node.
  const int n = size();
  std::vector<double> l(n);
  values(x, l);
  for (int j = 0; j < n; ++j) out[j] = 0.0;
  for (int k = 0; k < n; ++k) {
    if (l[k] == 0.0) continue;
    for (int j = 0; j < n; ++j) out[j] += l[k] * diff_[k * n + j];
  }
}

double LagrangeBasis::value(int i, double x) const {
  check_index(i, size());
  std::vector<double> v(size());
  values(x, v);
  return v[i];
}

double LagrangeBasis::derivative(int i, double x) const {
  check_index(i, size());
  std::vector<double> v(size());
  derivatives(x, v);
  return v[i];
}

void EdgeBasis::values(double x, std::span<double> out) const {
  std::vector<double> d(nodal_->size());
  nodal_->derivatives(x, d);
  // The full sum of derivatives vanishes, so e_i also equals the sum of the
  // remaining derivatives; accumulate from whichever end is nearer.
  const int n = size();
  const int half = n / 2;
  double acc = 0.0;
  for (int i = 0; i < half; ++i) {
    acc -= d[i];
    out[i] = acc;
  }
  acc = 0.0;
  for (int i = n - 1; i >= half; --i) {
    acc += d[i + 1];
    out[i] = acc;
  }
}

double EdgeBasis::value(int i, double x) const {
  check_index(i, size());
  std::vector<double> v(size());
  values(x, v);
  return v[i];
}

MimeticBasis::MimeticBasis(int order) : grid_(gll_grid(order)), nodal_(grid_.nodes()), edge_(nodal_) {}

BasisTable tabulate(const MimeticBasis& basis, std::span<const double> points) {
  BasisTable t;
  t.points = static_cast<int>(points.size());
  t.order = basis.order();
  const int n = t.order;
  t.nodal.resize(t.points * (n + 1));
  t.slope.resize(t.points * (n + 1));
  t.edge.resize(t.points * n);
  for (int q = 0; q < t.points; ++q) {
    basis.nodal().values(points[q], std::span(t.nodal).subspan(q * (n + 1), n + 1));
    basis.nodal().derivatives(points[q], std::span(t.slope).subspan(q * (n + 1), n + 1));
    basis.edge().values(points[q], std::span(t.edge).subspan(q * n, n));
  }
  return t;
}

double tensor_eval_zero(const MimeticBasis& b, int i, int j, double xi, double eta) {
  return b.nodal().value(i, xi) * b.nodal().value(j, eta);
}

double tensor_eval_one(const MimeticBasis& b, Direction direction, int i, int j, double xi, double eta) {
  if (direction == Direction::xi) return b.edge().value(i, xi) * b.nodal().value(j, eta);
  return b.nodal().value(i, xi) * b.edge().value(j, eta);
}

double tensor_eval_two(const MimeticBasis& b, int i, int j, double xi, double eta) {
  return b.edge().value(i, xi) * b.edge().value(j, eta);
}

}  // namespace mmsem
