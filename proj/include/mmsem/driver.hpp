#pragma once

#include "mmsem/solver.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mmsem {

// Analytic Stokes solution on the unit square with w = rot u and
// nu curl w + grad p = f.
struct ExactSolution {
  ScalarField vorticity;
  VectorField vorticity_gradient;
  VectorField velocity;
  ScalarField divergence;
  ScalarField pressure;
  VectorField forcing;
};

ExactSolution manufactured_solution(double viscosity = 1.0);

// Segment data for `bc` taken from an exact solution.
StokesProblem manufactured_problem(const ExactSolution& exact, BcType bc, double viscosity = 1.0);

struct ErrorNorms {
  double w_l2 = 0.0;
  double dw_l2 = 0.0;
  double w_h = 0.0;
  double u_l2 = 0.0;
  double du_l2 = 0.0;
  double u_h = 0.0;
  double p_l2 = 0.0;
};

// L2 and H-norm errors by Gauss quadrature with N+3 points per direction.
// With `match_pressure_mean` the discrete pressure is shifted to the exact
// mean before comparison.
ErrorNorms error_norms(const MappedMesh& mesh, const DofMap& dofs, const Solution& s, const ExactSolution& exact,
                       bool match_pressure_mean);

struct DivergenceReport {
  double cochain_max = 0.0;
  double pointwise_l1 = 0.0;
  double pointwise_l2 = 0.0;
  double pointwise_max = 0.0;
};

DivergenceReport divergence_report(const MappedMesh& mesh, const DofMap& dofs, const Cochain& velocity,
                                   int samples = 8);

struct RunConfig {
  int order = 2;
  int elements = 2;
  MapKind map = MapKind::cartesian;
  BcType bc = BcType::velocity;
  QuadratureKind quadrature = QuadratureKind::standard;
  ForcingMode forcing = ForcingMode::cochain;
};

struct RunResult {
  RunConfig config;
  double h = 0.0;
  ErrorNorms errors;
  DivergenceReport divergence;
  std::array<int, 3> dofs{};
  double seconds = 0.0;
};

RunResult run_manufactured(const RunConfig& config);

// Sweeps: h-refinement over `elements`, p-refinement over `orders`.
std::vector<RunResult> run_h_study(RunConfig base, const std::vector<int>& elements);
std::vector<RunResult> run_p_study(RunConfig base, const std::vector<int>& orders);

// Observed order between consecutive rows: log(e_prev / e) / log(h_prev / h).
double observed_rate(double e_prev, double e, double h_prev, double h);

// CSV with columns h, M, N, bc, map, err_w_L2, err_w_H, err_u_L2, err_p_L2,
// div_max and rate_* (h-studies only).
void write_study_csv(std::ostream& out, const std::vector<RunResult>& rows, bool with_rates);

// Stream function psi with E10 psi = u and psi = 0 at the bottom-left corner.
// Built by marching along the bottom row then up every column.
Cochain stream_function(const MappedMesh& mesh, const Cochain& velocity);
// Same construction along the opposite path (left column, then rows).
Cochain stream_function_transposed(const MappedMesh& mesh, const Cochain& velocity);

struct CavityConfig {
  int elements = 6;
  int order = 6;
  Grading grading = Grading::boundary_refined;
  int samples = 41;          // centerline points
  int symmetry_samples = 9;  // per element and direction
};

struct CenterlinePoint {
  double coordinate = 0.0;
  double value = 0.0;
};

struct CavityResult {
  Solution solution;
  Cochain stream;
  std::vector<CenterlinePoint> u_vertical;    // u(1/2, y)
  std::vector<CenterlinePoint> v_horizontal;  // v(x, 1/2)
  double symmetry_defect = 0.0;
  double stream_path_defect = 0.0;
  double stream_coboundary_defect = 0.0;
  DivergenceReport divergence;
};

StokesProblem cavity_problem();
CavityResult run_cavity(const CavityConfig& config);
void write_centerlines(std::ostream& out, const CavityResult& r);
// Gnuplot-style blocks "x y w |u| p psi" per element.
void write_cavity_fields(std::ostream& out, const MappedMesh& mesh, const DofMap& dofs, const CavityResult& r,
                         int samples);

}  // namespace mmsem
