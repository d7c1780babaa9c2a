#pragma once

#include <span>
#include <vector>

namespace mmsem {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

// Gauss-Lobatto-Legendre points of polynomial order N (N+1 points, both
// endpoints included) on [-1, 1].
struct GllGrid {
  int order = 0;
  QuadratureRule rule;

  std::span<const double> nodes() const { return rule.nodes; }
  std::span<const double> weights() const { return rule.weights; }
};

// Throws std::invalid_argument for order < 1 and std::runtime_error if the
// Newton iteration does not converge.
GllGrid gll_grid(int order);
QuadratureRule gauss_lobatto(int points);
QuadratureRule gauss_legendre(int points);

double legendre(int n, double x);

// Nodal polynomials through a fixed set of distinct points, evaluated in
// barycentric form.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(std::span<const double> nodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const { return nodes_; }

  void values(double x, std::span<double> out) const;
  void derivatives(double x, std::span<double> out) const;
  double value(int i, double x) const;
  double derivative(int i, double x) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> bary_;
  std::vector<double> diff_;  // diff_[k * n + j] = dl_j/dx at node k
};

// Edge polynomials: e_i = -sum_{k<=i} dl_k/dx, i = 0..N-1. Each integrates
// to one over the interval [x_i, x_{i+1}] and to zero over the others.
class EdgeBasis {
 public:
  explicit EdgeBasis(const LagrangeBasis& nodal) : nodal_(&nodal) {}

  int size() const { return nodal_->size() - 1; }
  void values(double x, std::span<double> out) const;
  double value(int i, double x) const;

 private:
  const LagrangeBasis* nodal_;
};

// Nodal and edge bases on a GLL grid; owns the grid so the bases stay valid.
class MimeticBasis {
 public:
  explicit MimeticBasis(int order);
  MimeticBasis(const MimeticBasis& other) : MimeticBasis(other.order()) {}
  MimeticBasis& operator=(const MimeticBasis&) = delete;

  int order() const { return grid_.order; }
  const GllGrid& grid() const { return grid_; }
  const LagrangeBasis& nodal() const { return nodal_; }
  const EdgeBasis& edge() const { return edge_; }

 private:
  GllGrid grid_;
  LagrangeBasis nodal_;
  EdgeBasis edge_;
};

// Values of both bases at a set of points: nodal[q][i], slope[q][i], edge[q][i].
struct BasisTable {
  int points = 0;
  int order = 0;
  std::vector<double> nodal;
  std::vector<double> slope;
  std::vector<double> edge;

  double l(int q, int i) const { return nodal[q * (order + 1) + i]; }
  double dl(int q, int i) const { return slope[q * (order + 1) + i]; }
  double e(int q, int i) const { return edge[q * order + i]; }
};

BasisTable tabulate(const MimeticBasis& basis, std::span<const double> points);

enum class Direction { xi, eta };

// Tensor-product reference forms on [-1,1]^2.
double tensor_eval_zero(const MimeticBasis& b, int i, int j, double xi, double eta);
// Coefficient of d(xi) (direction xi, basis e_i(xi) l_j(eta)) or of d(eta)
// (direction eta, basis l_i(xi) e_j(eta)).
double tensor_eval_one(const MimeticBasis& b, Direction direction, int i, int j, double xi, double eta);
double tensor_eval_two(const MimeticBasis& b, int i, int j, double xi, double eta);

}  // namespace mmsem
