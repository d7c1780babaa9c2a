#pragma once

#include "mmsem/assembly.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmsem {

// Boundary condition pairs per boundary segment.
enum class BcType {
  velocity,                      // normal velocity essential, tangential velocity natural
  tangential_velocity_pressure,  // tangential velocity and pressure natural
  vorticity_normal_velocity,     // vorticity and normal velocity essential
  vorticity_pressure,            // vorticity essential, pressure natural
};

std::string to_string(BcType bc);
BcType parse_bc(const std::string& name);

bool prescribes_vorticity(BcType bc);
bool prescribes_normal_velocity(BcType bc);
bool prescribes_tangential_velocity(BcType bc);
bool prescribes_pressure(BcType bc);

// Data for one boundary segment; only the members required by its BcType
// are read.
struct SegmentData {
  std::optional<VectorField> velocity;
  std::optional<ScalarField> vorticity;
  std::optional<ScalarField> pressure;
};

struct StokesProblem {
  double viscosity = 1.0;
  VectorField forcing;
  ForcingMode forcing_mode = ForcingMode::cochain;
  std::array<BcType, 4> bc{BcType::velocity, BcType::velocity, BcType::velocity, BcType::velocity};
  std::array<SegmentData, 4> data;
  // Pressure cell pinned when no segment carries pressure; -1 means last.
  int gauge_cell = -1;
  // Store the velocity as E10 psi with psi on a dyadic lattice, which makes
  // E21 u vanish exactly in floating point.
  bool lattice_velocity = true;
};

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown used for the pressure block. `dual` stands for M2 p, which turns
// the continuity rows into E21 u = 0 with integer coefficients.
enum class PressureUnknown { primal, dual };

// Symmetric saddle-point system in the unknown order (w, u, p).
struct SaddleSystem {
  PressureUnknown pressure_unknown = PressureUnknown::primal;
  std::array<int, 3> sizes{};
  SparseMatrix matrix;
  Eigen::VectorXd rhs;

  int offset(int k) const { return k == 0 ? 0 : k == 1 ? sizes[0] : sizes[0] + sizes[1]; }
  int size() const { return sizes[0] + sizes[1] + sizes[2]; }
};

SaddleSystem assemble_system(const MappedMesh& mesh, const DofMap& dofs, const StokesProblem& problem,
                             PressureUnknown pressure_unknown = PressureUnknown::primal);

// Essential values removed symmetrically; `free` lists the retained rows.
struct ReducedSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<int> free;
  std::vector<int> fixed;
  Eigen::VectorXd fixed_values;
  bool pressure_gauge = false;
  bool harmonic_gauge = false;
};

// Throws std::invalid_argument when a segment lacks the data its type needs.
ReducedSystem apply_bcs(const MappedMesh& mesh, const DofMap& dofs, const StokesProblem& problem,
                        const SaddleSystem& system);

// Stream function of a (nearly) solenoidal flux cochain rounded to a dyadic
// lattice fine enough that its coboundary is computed without rounding.
Cochain lattice_stream_function(const CellComplex& complex, const Cochain& velocity);

// Shift a pressure cochain along `direction` (a constant density or the
// discrete pressure kernel) so that its total is zero.
void fix_pressure_gauge(Cochain& p, const Eigen::VectorXd& direction);

struct Solution {
  Cochain vorticity;
  Cochain velocity;
  Cochain pressure;
  bool pressure_gauge = false;
  double residual = 0.0;
};

// Sparse LU solve of the dual-pressure system followed by p = M2^{-1} (M2 p). Throws SingularSystemError if factorisation fails and
// std::runtime_error if the relative residual exceeds 1e-10.
Solution solve(const MappedMesh& mesh, const DofMap& dofs, const StokesProblem& problem);

}  // namespace mmsem
