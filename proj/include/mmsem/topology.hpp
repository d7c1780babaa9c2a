#pragma once

#include <Eigen/Sparse>

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

namespace mmsem {

// Multi-index into a tensor-product complex. `axes` is a bit mask of the
// directions the cell extends along; `index` holds node positions for the
// remaining directions and interval positions for the spanned ones.
struct CellIndex {
  unsigned axes = 0;
  std::array<int, 3> index{0, 0, 0};
};

// Structured cell complex of a tensor grid in 2 or 3 dimensions.
//
// k-cells are grouped by orientation (axis subsets of size k in
// lexicographic order, so in 2D all xi-directed edges precede the
// eta-directed ones). Inside a group numbering is lexicographic with the
// first axis running fastest.
class CellComplex {
 public:
  CellComplex(int dim, std::span<const int> edges_per_axis);

  int dim() const { return dim_; }
  int edges(int axis) const { return edges_[axis]; }
  int count(int k) const;

  std::span<const unsigned> orientations(int k) const { return groups_[k]; }
  std::array<int, 3> extent(unsigned axes) const;

  int cell_id(int k, const CellIndex& cell) const;
  CellIndex cell(int k, int id) const;

  // 2D shorthands.
  int node(int i, int j) const { return cell_id(0, {0u, {i, j, 0}}); }
  int xi_edge(int i, int j) const { return cell_id(1, {1u, {i, j, 0}}); }
  int eta_edge(int i, int j) const { return cell_id(1, {2u, {i, j, 0}}); }
  int face(int i, int j) const { return cell_id(2, {3u, {i, j, 0}}); }

 private:
  int dim_;
  std::array<int, 3> edges_{0, 0, 0};
  std::array<std::vector<unsigned>, 4> groups_;
  std::array<std::vector<int>, 4> offsets_;
};

// Real-valued k-cochain: one number per k-cell.
struct Cochain {
  int degree = 0;
  Eigen::VectorXd values;
};

// Coboundary matrix from (k-1)-cochains to k-cochains; its transpose is the
// boundary operator on chains.
struct IncidenceMatrix {
  int degree = 1;
  Eigen::SparseMatrix<int, Eigen::RowMajor> coboundary;

  Eigen::SparseMatrix<int> boundary() const { return coboundary.transpose(); }
  Eigen::SparseMatrix<double> as_real() const { return coboundary.cast<double>(); }
};

IncidenceMatrix incidence(const CellComplex& complex, int k);

Cochain coboundary_apply(const IncidenceMatrix& d, const Cochain& c);
Eigen::VectorXi coboundary_apply(const IncidenceMatrix& d, const Eigen::VectorXi& c);

// One "row col value" line per stored entry.
void write_triplets(std::ostream& out, const IncidenceMatrix& d);

}  // namespace mmsem
