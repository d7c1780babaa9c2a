#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mmsem/topology.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

using namespace mmsem;

namespace {

CellComplex complex2(int nx, int ny) {
  const std::array<int, 2> e{nx, ny};
  return CellComplex(2, e);
}

CellComplex complex3(int nx, int ny, int nz) {
  const std::array<int, 3> e{nx, ny, nz};
  return CellComplex(3, e);
}

using IntMatrix = std::vector<std::vector<int>>;

IntMatrix dense(const Eigen::SparseMatrix<int>& m) {
  IntMatrix out(m.rows(), std::vector<int>(m.cols(), 0));
  for (int c = 0; c < m.outerSize(); ++c)
    for (Eigen::SparseMatrix<int>::InnerIterator it(m, c); it; ++it) out[it.row()][it.col()] = it.value();
  return out;
}

// True if b equals a after permuting rows, permuting columns and flipping
// the sign of whole columns.
bool equivalent(const IntMatrix& a, const IntMatrix& b) {
  if (a.size() != b.size() || a.front().size() != b.front().size()) return false;
  const int cols = static_cast<int>(a.front().size());
  IntMatrix sorted_b = b;
  std::sort(sorted_b.begin(), sorted_b.end());
  std::vector<int> perm(cols);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (int signs = 0; signs < (1 << cols); ++signs) {
      IntMatrix t = a;
      for (auto& row : t) {
        std::vector<int> r(cols);
        for (int c = 0; c < cols; ++c) r[c] = row[perm[c]] * ((signs >> c) & 1 ? -1 : 1);
        row = r;
      }
      std::sort(t.begin(), t.end());
      if (t == sorted_b) return true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

bool is_zero(const Eigen::SparseMatrix<int, Eigen::RowMajor>& m) {
  for (int r = 0; r < m.outerSize(); ++r)
    for (Eigen::SparseMatrix<int, Eigen::RowMajor>::InnerIterator it(m, r); it; ++it)
      if (it.value() != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("cell counts of small complexes") {
  const CellComplex quad = complex2(1, 1);
  CHECK(quad.count(0) == 4);
  CHECK(quad.count(1) == 4);
  CHECK(quad.count(2) == 1);

  const CellComplex cube = complex3(1, 1, 1);
  CHECK(cube.count(0) == 8);
  CHECK(cube.count(1) == 12);
  CHECK(cube.count(2) == 6);
  CHECK(cube.count(3) == 1);

  const CellComplex grid = complex2(2, 2);
  CHECK(grid.count(0) == 9);
  CHECK(grid.count(1) == 12);
  CHECK(grid.count(2) == 4);
}

TEST_CASE("invalid complexes are rejected") {
  const std::array<int, 1> one{3};
  const std::array<int, 4> four{1, 1, 1, 1};
  const std::array<int, 2> zero{2, 0};
  const std::array<int, 3> short_list{2, 2, 2};
  CHECK_THROWS_AS(CellComplex(1, one), std::invalid_argument);
  CHECK_THROWS_AS(CellComplex(4, four), std::invalid_argument);
  CHECK_THROWS_AS(CellComplex(2, zero), std::invalid_argument);
  CHECK_THROWS_AS(CellComplex(2, short_list), std::invalid_argument);
}

TEST_CASE("xi-directed edges are numbered before eta-directed edges, first axis fastest") {
  const CellComplex g = complex2(3, 2);
  CHECK(g.xi_edge(0, 0) == 0);
  CHECK(g.xi_edge(1, 0) == 1);
  CHECK(g.xi_edge(0, 1) == 3);
  CHECK(g.eta_edge(0, 0) == 3 * 3);
  CHECK(g.eta_edge(1, 0) == 3 * 3 + 1);
  CHECK(g.node(1, 1) == 5);
  CHECK(g.face(2, 1) == 5);
}

TEST_CASE("cell id and multi-index round trip") {
  for (const CellComplex& c : {complex2(3, 2), complex3(2, 1, 3)}) {
    for (int k = 0; k <= c.dim(); ++k)
      for (int id = 0; id < c.count(k); ++id) {
        const CellIndex cell = c.cell(k, id);
        CHECK(std::popcount(cell.axes) == k);
        CHECK(c.cell_id(k, cell) == id);
      }
  }
}

TEST_CASE("cell lookups out of range throw") {
  const CellComplex g = complex2(2, 2);
  CHECK_THROWS_AS(g.cell(1, g.count(1)), std::out_of_range);
  CHECK_THROWS_AS(g.cell(0, -1), std::out_of_range);
  CHECK_THROWS_AS(g.cell_id(1, CellIndex{3u, {0, 0, 0}}), std::out_of_range);
  CHECK_THROWS_AS(g.cell_id(0, CellIndex{0u, {3, 0, 0}}), std::out_of_range);
  CHECK_THROWS_AS(incidence(g, 0), std::invalid_argument);
  CHECK_THROWS_AS(incidence(g, 3), std::invalid_argument);
}

TEST_CASE("incidence matrices compose to zero") {
  for (int nx = 1; nx <= 4; ++nx)
    for (int ny = 1; ny <= 4; ++ny) {
      const CellComplex g = complex2(nx, ny);
      const Eigen::SparseMatrix<int, Eigen::RowMajor> dd = incidence(g, 2).coboundary * incidence(g, 1).coboundary;
      CHECK(dd.rows() == g.count(2));
      CHECK(dd.cols() == g.count(0));
      CHECK(is_zero(dd));
    }
  for (const auto& e : {std::array<int, 3>{1, 1, 1}, std::array<int, 3>{2, 3, 1}, std::array<int, 3>{3, 2, 2}}) {
    const CellComplex c = complex3(e[0], e[1], e[2]);
    CHECK(is_zero(incidence(c, 2).coboundary * incidence(c, 1).coboundary));
    CHECK(is_zero(incidence(c, 3).coboundary * incidence(c, 2).coboundary));
  }
}

TEST_CASE("every edge has one incoming and one outgoing endpoint") {
  for (const CellComplex& c : {complex2(3, 2), complex3(2, 2, 1)}) {
    const IncidenceMatrix d = incidence(c, 1);
    for (int r = 0; r < d.coboundary.rows(); ++r) {
      CHECK(d.coboundary.row(r).sum() == 0);
      CHECK(d.coboundary.row(r).nonZeros() == 2);
    }
  }
}

TEST_CASE("divergence stencil of a 2-cell") {
  const CellComplex g = complex2(3, 3);
  const IncidenceMatrix d = incidence(g, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int f = g.face(i, j);
      CHECK(d.coboundary.coeff(f, g.eta_edge(i + 1, j)) == 1);
      CHECK(d.coboundary.coeff(f, g.eta_edge(i, j)) == -1);
      CHECK(d.coboundary.coeff(f, g.xi_edge(i, j + 1)) == 1);
      CHECK(d.coboundary.coeff(f, g.xi_edge(i, j)) == -1);
      CHECK(d.coboundary.row(f).nonZeros() == 4);
    }
}

TEST_CASE("curl stencil of a 0-cochain") {
  const CellComplex g = complex2(3, 2);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(-9, 9);
  Eigen::VectorXi w(g.count(0));
  for (int n = 0; n < w.size(); ++n) w[n] = pick(rng);
  const Eigen::VectorXi z = coboundary_apply(incidence(g, 1), w);
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j < 2; ++j) CHECK(z[g.eta_edge(i, j)] == w[g.node(i, j + 1)] - w[g.node(i, j)]);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= 2; ++j) CHECK(z[g.xi_edge(i, j)] == w[g.node(i, j)] - w[g.node(i + 1, j)]);
}

TEST_CASE("constant 0-cochain has zero coboundary") {
  const CellComplex g = complex2(4, 3);
  const Cochain one{0, Eigen::VectorXd::Ones(g.count(0))};
  const Cochain z = coboundary_apply(incidence(g, 1), one);
  CHECK(z.degree == 1);
  CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("applying the coboundary twice gives zero") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> real(-1.0, 1.0);
  std::uniform_int_distribution<int> integer(-50, 50);
  const CellComplex g = complex2(5, 4);
  Cochain c{0, Eigen::VectorXd(g.count(0))};
  for (int n = 0; n < c.values.size(); ++n) c.values[n] = std::ldexp(std::round(real(rng) * 1024), -10);
  const Cochain twice = coboundary_apply(incidence(g, 2), coboundary_apply(incidence(g, 1), c));
  CHECK(twice.degree == 2);
  CHECK(twice.values.cwiseAbs().maxCoeff() == 0.0);

  const CellComplex c3 = complex3(2, 3, 2);
  Eigen::VectorXi a(c3.count(1));
  for (int n = 0; n < a.size(); ++n) a[n] = integer(rng);
  const Eigen::VectorXi b = coboundary_apply(incidence(c3, 3), coboundary_apply(incidence(c3, 2), a));
  CHECK(b.cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("coboundary and boundary are dual") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> pick(-20, 20);
  const CellComplex c = complex3(2, 2, 3);
  for (int k = 1; k <= 3; ++k) {
    const IncidenceMatrix d = incidence(c, k);
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXi cochain(c.count(k - 1));
      Eigen::VectorXi chain(c.count(k));
      for (int n = 0; n < cochain.size(); ++n) cochain[n] = pick(rng);
      for (int n = 0; n < chain.size(); ++n) chain[n] = pick(rng);
      const Eigen::VectorXi boundary = d.boundary() * chain;
      CHECK(coboundary_apply(d, cochain).dot(chain) == cochain.dot(boundary));
    }
  }
}

TEST_CASE("coboundary rejects cochains of the wrong size") {
  const CellComplex g = complex2(2, 2);
  const Cochain wrong{0, Eigen::VectorXd::Zero(g.count(0) + 1)};
  CHECK_THROWS_AS(coboundary_apply(incidence(g, 1), wrong), std::invalid_argument);
  CHECK_THROWS_AS(coboundary_apply(incidence(g, 2), Eigen::VectorXi::Zero(3)), std::invalid_argument);
}

TEST_CASE("unit cube boundary of the volume") {
  const CellComplex cube = complex3(1, 1, 1);
  const IntMatrix b = dense(incidence(cube, 3).boundary());
  std::vector<int> column;
  for (const auto& row : b) column.push_back(row[0]);
  CHECK(column == std::vector<int>{-1, 1, -1, 1, -1, 1});
}

TEST_CASE("unit cube boundary of the faces matches the reference table") {
  // Rows are edges, columns faces; numbering and face orientation of the
  // table are arbitrary, so equality is up to permutation and column signs.
  const IntMatrix reference{{-1, 0, 1, 0, 0, 0},  {1, 0, 0, -1, 0, 0},  {0, 1, -1, 0, 0, 0},  {0, -1, 0, 1, 0, 0},
                            {1, 0, 0, 0, -1, 0},  {-1, 0, 0, 0, 0, 1},  {0, -1, 0, 0, 1, 0},  {0, 1, 0, 0, 0, -1},
                            {0, 0, -1, 0, 1, 0},  {0, 0, 1, 0, 0, -1},  {0, 0, 0, 1, -1, 0},  {0, 0, 0, -1, 0, 1}};
  const CellComplex cube = complex3(1, 1, 1);
  const IntMatrix b = dense(incidence(cube, 2).boundary());
  REQUIRE(b.size() == 12);
  REQUIRE(b.front().size() == 6);
  CHECK(equivalent(b, reference));

  IntMatrix broken = reference;
  broken[0][0] = 1;
  CHECK_FALSE(equivalent(b, broken));
}

TEST_CASE("triplet dump lists every stored entry") {
  const CellComplex g = complex2(2, 1);
  const IncidenceMatrix d = incidence(g, 2);
  std::ostringstream out;
  write_triplets(out, d);
  std::istringstream in(out.str());
  int rows = 0;
  int r = 0, c = 0, v = 0;
  while (in >> r >> c >> v) {
    CHECK(d.coboundary.coeff(r, c) == v);
    ++rows;
  }
  CHECK(rows == d.coboundary.nonZeros());
}
