#include "mmsem/topology.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mmsem {

namespace {

// Axis subsets of size k in lexicographic order of their sorted members.
std::vector<unsigned> subsets(int dim, int k) {
  std::vector<unsigned> out;
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    unsigned mask = 0;
    for (int a : pick) mask |= 1u << a;
    out.push_back(mask);
    int i = k - 1;
    while (i >= 0 && pick[i] == dim - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int m = i + 1; m < k; ++m) pick[m] = pick[m - 1] + 1;
  }
  return out;
}

}  // namespace

CellComplex::CellComplex(int dim, std::span<const int> edges_per_axis) : dim_(dim) {
  if (dim < 2 || dim > 3) throw std::invalid_argument("cell complex dimension must be 2 or 3");
  if (static_cast<int>(edges_per_axis.size()) != dim)
    throw std::invalid_argument("expected one edge count per axis");
  for (int a = 0; a < dim; ++a) {
    if (edges_per_axis[a] < 1) throw std::invalid_argument("edge count per axis must be positive");
    edges_[a] = edges_per_axis[a];
  }
  for (int k = 0; k <= dim; ++k) {
    groups_[k] = subsets(dim, k);
    offsets_[k].assign(1, 0);
    for (unsigned g : groups_[k]) {
      const auto ext = extent(g);
      int n = 1;
      for (int a = 0; a < dim; ++a) n *= ext[a];
      offsets_[k].push_back(offsets_[k].back() + n);
    }
  }
}

int CellComplex::count(int k) const {
  if (k < 0 || k > dim_) return 0;
  return offsets_[k].back();
}

std::array<int, 3> CellComplex::extent(unsigned axes) const {
  std::array<int, 3> ext{1, 1, 1};
  for (int a = 0; a < dim_; ++a) ext[a] = (axes >> a & 1u) ? edges_[a] : edges_[a] + 1;
  return ext;
}

int CellComplex::cell_id(int k, const CellIndex& cell) const {
  const auto& g = groups_[k];
  const auto it = std::find(g.begin(), g.end(), cell.axes);
  if (it == g.end()) throw std::out_of_range("cell orientation does not match degree");
  const auto ext = extent(cell.axes);
  int id = 0;
  for (int a = dim_ - 1; a >= 0; --a) {
    if (cell.index[a] < 0 || cell.index[a] >= ext[a]) throw std::out_of_range("cell index out of range");
    id = id * ext[a] + cell.index[a];
  }
  return offsets_[k][it - g.begin()] + id;
}

CellIndex CellComplex::cell(int k, int id) const {
  if (id < 0 || id >= count(k)) throw std::out_of_range("cell id out of range");
  const auto& off = offsets_[k];
  const auto grp = std::upper_bound(off.begin(), off.end(), id) - off.begin() - 1;
  CellIndex c;
  c.axes = groups_[k][grp];
  const auto ext = extent(c.axes);
  int rem = id - off[grp];
  for (int a = 0; a < dim_; ++a) {
    c.index[a] = rem % ext[a];
    rem /= ext[a];
  }
  return c;
}

IncidenceMatrix incidence(const CellComplex& complex, int k) {
  if (k < 1 || k > complex.dim())
    throw std::invalid_argument("incidence degree must lie in 1.." + std::to_string(complex.dim()));
  const int dim = complex.dim();
  std::vector<Eigen::Triplet<int>> entries;
  entries.reserve(static_cast<std::size_t>(complex.count(k)) * 2 * k);
  for (int row = 0; row < complex.count(k); ++row) {
    const CellIndex c = complex.cell(k, row);
    for (int a = 0; a < dim; ++a) {
      if (!(c.axes >> a & 1u)) continue;
      int above = 0;
      for (int b = a + 1; b < dim; ++b)
        if (!(c.axes >> b & 1u)) ++above;
      const int sign = above % 2 ? -1 : 1;
      CellIndex f{c.axes & ~(1u << a), c.index};
      entries.emplace_back(row, complex.cell_id(k - 1, f), -sign);
      ++f.index[a];
      entries.emplace_back(row, complex.cell_id(k - 1, f), sign);
    }
  }
  IncidenceMatrix d;
  d.degree = k;
  d.coboundary.resize(complex.count(k), complex.count(k - 1));
  d.coboundary.setFromTriplets(entries.begin(), entries.end());
  return d;
}

Cochain coboundary_apply(const IncidenceMatrix& d, const Cochain& c) {
  if (c.degree != d.degree - 1 || c.values.size() != d.coboundary.cols())
    throw std::invalid_argument("cochain does not match coboundary operator");
  return {d.degree, d.as_real() * c.values};
}

Eigen::VectorXi coboundary_apply(const IncidenceMatrix& d, const Eigen::VectorXi& c) {
  if (c.size() != d.coboundary.cols()) throw std::invalid_argument("cochain does not match coboundary operator");
  return d.coboundary * c;
}

void write_triplets(std::ostream& out, const IncidenceMatrix& d) {
  for (int r = 0; r < d.coboundary.outerSize(); ++r)
    for (Eigen::SparseMatrix<int, Eigen::RowMajor>::InnerIterator it(d.coboundary, r); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace mmsem
