// Command-line front end: convergence studies, lid-driven cavity and single
// manufactured-solution solves.

#include "mmsem/driver.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace {

using namespace mmsem;

struct Options {
  std::vector<int> orders;
  std::vector<int> elements;
  MapKind map = MapKind::cartesian;
  std::string bc = "vel";
  QuadratureKind quad = QuadratureKind::standard;
  ForcingMode forcing = ForcingMode::cochain;
  Grading grading = Grading::boundary_refined;
  std::string out;
  int samples = 41;
};

// Output file or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--map", o.map, "Element map")
      ->transform(CLI::CheckedTransformer(std::map<std::string, MapKind>{{"cartesian", MapKind::cartesian},
                                                                         {"sine", MapKind::sine}}));
  cmd->add_option("--bc", o.bc, "Boundary condition type")
      ->check(CLI::IsMember({"vel", "tanvel-pres", "vort-normvel", "vort-pres"}));
  cmd->add_option("--quad", o.quad, "Mass matrix quadrature")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, QuadratureKind>{{"default", QuadratureKind::standard}, {"over", QuadratureKind::over}}));
  cmd->add_option("--forcing", o.forcing, "Momentum load")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, ForcingMode>{{"cochain", ForcingMode::cochain}, {"consistent", ForcingMode::consistent}}));
  cmd->add_option("--out", o.out, "Output file (stdout if omitted)");
}

RunConfig base_config(const Options& o) {
  RunConfig c;
  c.map = o.map;
  c.bc = parse_bc(o.bc);
  c.quadrature = o.quad;
  c.forcing = o.forcing;
  return c;
}

int converge_h(const Options& o) {
  Sink sink(o.out);
  bool header = true;
  for (int n : o.orders) {
    RunConfig c = base_config(o);
    c.order = n;
    const auto rows = run_h_study(c, o.elements);
    std::ostringstream csv;
    write_study_csv(csv, rows, true);
    std::string text = csv.str();
    if (!header) text = text.substr(text.find('\n') + 1);
    sink.stream() << text;
    header = false;
  }
  return 0;
}

int converge_p(const Options& o) {
  Sink sink(o.out);
  bool header = true;
  for (int m : o.elements) {
    RunConfig c = base_config(o);
    c.elements = m;
    const auto rows = run_p_study(c, o.orders);
    std::ostringstream csv;
    write_study_csv(csv, rows, false);
    std::string text = csv.str();
    if (!header) text = text.substr(text.find('\n') + 1);
    sink.stream() << text;
    header = false;
  }
  return 0;
}

int cavity(const Options& o) {
  CavityConfig c;
  c.order = o.orders.empty() ? 6 : o.orders.front();
  c.elements = o.elements.empty() ? 6 : o.elements.front();
  c.grading = o.grading;
  c.samples = o.samples;
  const CavityResult r = run_cavity(c);
  std::cout << "symmetry defect " << r.symmetry_defect << '\n'
            << "stream function path defect " << r.stream_path_defect << '\n'
            << "stream function coboundary defect " << r.stream_coboundary_defect << '\n'
            << "divergence cochain max " << r.divergence.cochain_max << " pointwise max "
            << r.divergence.pointwise_max << '\n';
  const std::string prefix = o.out.empty() ? "cavity" : o.out;
  std::ofstream lines(prefix + "_centerlines.csv");
  write_centerlines(lines, r);
  MeshOptions mo;
  mo.elements_per_axis = c.elements;
  mo.order = c.order;
  mo.grading = c.grading;
  const MappedMesh mesh = build_mesh(mo);
  const DofMap dofs = build_dof_map(mesh);
  std::ofstream fields(prefix + "_fields.dat");
  write_cavity_fields(fields, mesh, dofs, r, 2 * c.order + 1);
  std::cout << "wrote " << prefix << "_centerlines.csv and " << prefix << "_fields.dat\n";
  return 0;
}

int solve_one(const Options& o) {
  RunConfig c = base_config(o);
  c.order = o.orders.empty() ? 2 : o.orders.front();
  c.elements = o.elements.empty() ? 4 : o.elements.front();
  const RunResult r = run_manufactured(c);
  const ErrorNorms& e = r.errors;
  std::cout << "h " << r.h << "  N " << c.order << "  dofs " << r.dofs[0] << ' ' << r.dofs[1] << ' ' << r.dofs[2]
            << '\n'
            << "||w - w_h||   " << e.w_l2 << "\n|w - w_h|_H   " << e.w_h << "\n||u - u_h||   " << e.u_l2
            << "\n|u - u_h|_H   " << e.u_h << "\n||p - p_h||   " << e.p_l2 << '\n'
            << "div cochain max " << r.divergence.cochain_max << "  pointwise L1 " << r.divergence.pointwise_l1
            << " L2 " << r.divergence.pointwise_l2 << " max " << r.divergence.pointwise_max << '\n'
            << "time " << r.seconds << " s\n";
  if (!o.out.empty()) {
    Sink sink(o.out);
    write_study_csv(sink.stream(), {r}, false);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mimetic spectral element solver for 2D Stokes flow"};
  app.require_subcommand(1);

  Options h, p, cav, one;
  h.orders = {2};
  h.elements = {2, 4, 8, 16, 32, 64};
  p.orders = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  p.elements = {4};

  auto* ch = app.add_subcommand("converge-h", "Error and rates under mesh refinement");
  ch->add_option("--order", h.orders, "Polynomial orders");
  ch->add_option("--elements", h.elements, "Elements per direction");
  add_common(ch, h);

  auto* cp = app.add_subcommand("converge-p", "Error under order refinement");
  cp->add_option("--order", p.orders, "Polynomial orders");
  cp->add_option("--elements", p.elements, "Elements per direction");
  add_common(cp, p);

  auto* cc = app.add_subcommand("cavity", "Lid-driven cavity");
  cc->add_option("--order", cav.orders, "Polynomial order");
  cc->add_option("--elements", cav.elements, "Elements per direction");
  cc->add_option("--grading", cav.grading, "Element spacing")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Grading>{{"uniform", Grading::uniform}, {"gll", Grading::boundary_refined}}));
  cc->add_option("--samples", cav.samples, "Centerline samples");
  cc->add_option("--out", cav.out, "Output file prefix");

  auto* cs = app.add_subcommand("solve", "Single manufactured-solution solve");
  cs->add_option("--order", one.orders, "Polynomial order");
  cs->add_option("--elements", one.elements, "Elements per direction");
  add_common(cs, one);

  CLI11_PARSE(app, argc, argv);
  try {
    if (ch->parsed()) return converge_h(h);
    if (cp->parsed()) return converge_p(p);
    if (cc->parsed()) return cavity(cav);
    if (cs->parsed()) return solve_one(one);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
