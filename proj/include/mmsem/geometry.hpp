#pragma once

#include "mmsem/basis.hpp"
#include "mmsem/topology.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mmsem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

enum class MapKind { cartesian, sine };
enum class Grading { uniform, boundary_refined };
enum class QuadratureKind { standard, over };
enum class Segment { bottom = 0, right = 1, top = 2, left = 3 };

inline constexpr std::array<Segment, 4> all_segments{Segment::bottom, Segment::right, Segment::top, Segment::left};

std::string to_string(MapKind kind);
std::string to_string(Segment segment);

// Jacobian of (xi, eta) -> (x, y); columns are d/dxi and d/deta.
struct Jacobian {
  double x_xi = 1.0;
  double x_eta = 0.0;
  double y_xi = 0.0;
  double y_eta = 1.0;

  double det() const { return x_xi * y_eta - x_eta * y_xi; }
};

// Reference-space weights of the discrete Hodge inner products at one point.
struct MetricData {
  Jacobian jac;
  double det = 1.0;
  double w0 = 1.0;                 // 0-forms: det J
  std::array<double, 3> g{};       // 1-forms: (J^T J)^{-1} det J as (11, 12, 22)
  double w2 = 1.0;                 // 2-forms: 1 / det J
};

MetricData metric_at(const Jacobian& jac);

// Map of one quadrilateral: the reference square onto a tile
// [x0,x1] x [y0,y1] of the unit square, optionally followed by the
// sinusoidal deformation of the whole square.
class ElementMap {
 public:
  static constexpr double default_amplitude = 0.2;

  ElementMap(MapKind kind, double x0, double x1, double y0, double y1, double amplitude = default_amplitude);

  MapKind kind() const { return kind_; }
  Point2 evaluate(double xi, double eta) const;
  Jacobian jacobian(double xi, double eta) const;

 private:
  MapKind kind_;
  double x0_, x1_, y0_, y1_;
  double amplitude_;
};

// Throws std::domain_error naming the element and point when det J <= 0.
std::vector<MetricData> metric_factors(const ElementMap& map, std::span<const double> points_1d, int element_id = 0);

struct MeshOptions {
  int elements_per_axis = 2;
  int order = 2;
  MapKind map = MapKind::cartesian;
  Grading grading = Grading::uniform;
  QuadratureKind quadrature = QuadratureKind::standard;
  double amplitude = ElementMap::default_amplitude;
};

// Structured M x M mesh of the unit square with per-element maps, the
// global and element-local cell complexes and metric data precomputed at
// the assembly quadrature points.
class MappedMesh {
 public:
  explicit MappedMesh(const MeshOptions& options);

  const MeshOptions& options() const { return options_; }
  int elements_per_axis() const { return options_.elements_per_axis; }
  int order() const { return options_.order; }
  int element_count() const { return static_cast<int>(elements_.size()); }
  int element_id(int ex, int ey) const { return ey * elements_per_axis() + ex; }
  std::array<int, 2> element_position(int e) const {
    return {e % elements_per_axis(), e / elements_per_axis()};
  }

  const ElementMap& element(int e) const { return elements_[e]; }
  std::span<const double> breakpoints() const { return breaks_; }
  double mesh_size() const { return 1.0 / elements_per_axis(); }

  const CellComplex& global() const { return global_; }
  const CellComplex& local() const { return local_; }
  const MimeticBasis& basis() const { return basis_; }

  const QuadratureRule& quadrature() const { return quad_; }
  const BasisTable& table() const { return table_; }
  // Tensor quadrature point (qx, qy) of element e; qx runs fastest.
  const MetricData& metric(int e, int qx, int qy) const { return metric_[e][qy * quad_.size() + qx]; }

  bool on_boundary(Segment s, int ex, int ey) const;

 private:
  MeshOptions options_;
  std::vector<double> breaks_;
  std::vector<ElementMap> elements_;
  CellComplex global_;
  CellComplex local_;
  MimeticBasis basis_;
  QuadratureRule quad_;
  BasisTable table_;
  std::vector<std::vector<MetricData>> metric_;
};

MappedMesh build_mesh(const MeshOptions& options);

struct Location {
  int element = 0;
  double xi = 0.0;
  double eta = 0.0;
};

// Element and reference coordinates of a physical point, if inside.
std::optional<Location> locate(const MappedMesh& mesh, Point2 p);

void write_summary(std::ostream& out, const MappedMesh& mesh);

}  // namespace mmsem
