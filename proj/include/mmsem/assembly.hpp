#pragma once

#include "mmsem/geometry.hpp"
#include "mmsem/topology.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mmsem {

using ScalarField = std::function<double(double x, double y)>;
// Velocity-like field (u, v). As a 1-cochain it is stored through its
// fluxes: int u dy on eta-directed edges and int v dx on xi-directed edges.
using VectorField = std::function<Eigen::Vector2d(double x, double y)>;

using SparseMatrix = Eigen::SparseMatrix<double>;

// Element-local to global numbering of k-cells plus boundary cell lists.
// Boundary lists run along increasing x (bottom, top) or y (left, right).
struct DofMap {
  std::array<int, 3> global_count{};
  std::array<std::vector<std::vector<int>>, 3> local_to_global;
  std::array<std::vector<int>, 4> boundary_nodes;
  std::array<std::vector<int>, 4> boundary_edges;

  int count(int k) const { return global_count[k]; }
  const std::vector<int>& element_cells(int k, int e) const { return local_to_global[k][e]; }
  const std::vector<int>& nodes_on(Segment s) const { return boundary_nodes[static_cast<int>(s)]; }
  const std::vector<int>& edges_on(Segment s) const { return boundary_edges[static_cast<int>(s)]; }
};

DofMap build_dof_map(const MappedMesh& mesh);

// Discrete Hodge inner product of degree k, symmetric positive definite.
SparseMatrix assemble_mass(const MappedMesh& mesh, const DofMap& dofs, int k);

// Element-local incidence matrices scattered through the DofMap.
IncidenceMatrix assemble_global_incidence(const MappedMesh& mesh, const DofMap& dofs, int k);

// Reductions use Gauss quadrature with N+3 points per cell direction.
Cochain reduce_zero_form(const MappedMesh& mesh, const DofMap& dofs, const ScalarField& f);
Cochain reduce_flux(const MappedMesh& mesh, const DofMap& dofs, const VectorField& u);
Cochain reduce_density(const MappedMesh& mesh, const DofMap& dofs, const ScalarField& p);

// Pointwise reconstruction inside element e at reference point (xi, eta).
// Throws std::out_of_range outside [-1,1]^2.
double reconstruct_zero_form(const MappedMesh& mesh, const DofMap& dofs, const Cochain& c, int e, double xi, double eta);
Eigen::Vector2d reconstruct_gradient(const MappedMesh& mesh, const DofMap& dofs, const Cochain& c, int e, double xi,
                                     double eta);
Eigen::Vector2d reconstruct_flux(const MappedMesh& mesh, const DofMap& dofs, const Cochain& c, int e, double xi,
                                 double eta);
double reconstruct_density(const MappedMesh& mesh, const DofMap& dofs, const Cochain& c, int e, double xi, double eta);

struct FieldSample {
  int element = 0;
  double xi = 0.0;
  double eta = 0.0;
  Point2 at;
  double value = 0.0;        // 0- and 2-cochains
  Eigen::Vector2d vector{};  // 1-cochains
};

// Values on a uniform samples x samples reference grid in every element.
std::vector<FieldSample> reconstruct(const MappedMesh& mesh, const DofMap& dofs, const Cochain& c, int samples);

// Boundary terms. Segments without data contribute nothing.
// b1[node] = contour integral of l_node (u . t) with counterclockwise t.
Eigen::VectorXd assemble_b1(const MappedMesh& mesh, const DofMap& dofs,
                            const std::array<std::optional<VectorField>, 4>& velocity);
// b2[edge] = contour integral of p times the outward flux of the edge basis.
Eigen::VectorXd assemble_b2(const MappedMesh& mesh, const DofMap& dofs,
                            const std::array<std::optional<ScalarField>, 4>& pressure);

enum class ForcingMode { cochain, consistent };

// Right-hand side of the momentum equation: M1 times the reduced forcing
// (cochain) or the L2 pairing of each velocity basis function with f
// (consistent).
Eigen::VectorXd assemble_load(const MappedMesh& mesh, const DofMap& dofs, const VectorField& f, ForcingMode mode);

// Cell areas (reduction of the unit density).
Eigen::VectorXd cell_areas(const MappedMesh& mesh, const DofMap& dofs);

// One "row col value" line per stored entry.
void write_coo(std::ostream& out, const SparseMatrix& m);

}  // namespace mmsem
