#include "smpnp/poisson.hpp"

#include <cmath>
#include <istream>
#include <sstream>

namespace smpnp {

namespace {

constexpr double kFourPi = 4.0 * 3.14159265358979323846;

}  // namespace

std::vector<FixedCharge> parse_pqr(std::istream& in) {
  std::vector<FixedCharge> charges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string record;
    ls >> record;
    if (record != "ATOM" && record != "HETATM") continue;
    std::vector<std::string> fields;
    std::string tok;
    while (ls >> tok) fields.push_back(tok);
    if (fields.size() < 5)
      throw std::runtime_error("pqr parse error, line " + std::to_string(line_no) +
                               ": fewer than five fields after the record name");
    FixedCharge c;
    double* slots[5] = {&c.position.x, &c.position.y, &c.position.z, &c.charge, &c.radius};
    for (int k = 0; k < 5; ++k) {
      const std::string& f = fields[fields.size() - 5 + k];
      std::size_t used = 0;
      try {
        *slots[k] = std::stod(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != f.size())
        throw std::runtime_error("pqr parse error, line " + std::to_string(line_no) +
                                 ": malformed numeric field '" + f + "'");
    }
    charges.push_back(c);
  }
  return charges;
}

std::vector<FixedCharge> parse_pqr(const std::string& text) {
  std::istringstream in(text);
  return parse_pqr(in);
}

CoulombEval coulomb_potential(const std::vector<FixedCharge>& charges, const Vec3& x, double eps_m,
                              double prefactor) {
  const double scale = prefactor / (kFourPi * eps_m);
  CoulombEval out;
  for (const FixedCharge& c : charges) {
    Vec3 d = x - c.position;
    double r2 = dot(d, d);
    if (r2 <= 0.0 || r2 < 1e-24)
      throw std::domain_error("coulomb_potential: evaluation at a charge position");
    double r = std::sqrt(r2);
    out.value += scale * c.charge / r;
    out.gradient += (-scale * c.charge / (r2 * r)) * d;
  }
  return out;
}

NodalField solve_harmonic(const Mesh& mesh, const std::vector<FixedCharge>& charges,
                          const PhysicalConstants& constants, double tol) {
  bool has_molecule = false;
  for (const auto& t : mesh.tets) has_molecule = has_molecule || t.region == RegionTag::Molecule;
  if (!has_molecule) throw std::runtime_error("solve_harmonic: empty molecule region");

  std::vector<double> coeff(mesh.tet_count(), 1.0);
  LinearSystem sys;
  sys.matrix = assemble_weighted_laplacian(mesh, coeff, RegionFilter::Molecule);
  sys.rhs.assign(mesh.vertex_count(), 0.0);

  // Identity rows outside the molecule closure keep the system nonsingular.
  const std::vector<char> in_molecule = molecule_vertex_mask(mesh);
  auto& vals = sys.matrix.values();
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (!in_molecule[v]) vals[sys.matrix.find(v, v)] = 1.0;

  for (std::int32_t v : boundary_vertices(mesh, BoundaryTag::Interface)) {
    double us = coulomb_potential(charges, mesh.vertices[v], constants.eps_m,
                                  constants.source_prefactor)
                    .value;
    sys.constraints.emplace_back(v, -us);
  }
  if (sys.constraints.empty())
    throw std::runtime_error("solve_harmonic: molecule region has no interface boundary");

  sys = apply_dirichlet(std::move(sys));
  return solve_cg(sys.matrix, sys.rhs, tol, 10000, Preconditioner::Jacobi);
}

NodalField interface_jump_load(const Mesh& mesh, const std::vector<FixedCharge>& charges,
                               const NodalField& harmonic, const PhysicalConstants& constants) {
  NodalField load(mesh.vertex_count(), 0.0);
  const auto& rule = triangle_quadrature();
  for (const InterfaceFace& info : interface_faces(mesh)) {
    const BoundaryFace& f = mesh.faces[info.face];
    const Vec3& a = mesh.vertices[f.v[0]];
    const Vec3& b = mesh.vertices[f.v[1]];
    const Vec3& c = mesh.vertices[f.v[2]];

    // grad u^h is the constant P1 gradient on the molecule-side element
    const ElementGeometry g = element_geometry(mesh, info.molecule_tet);
    const auto& tv = mesh.tets[info.molecule_tet].v;
    Vec3 grad_h{0, 0, 0};
    for (int i = 0; i < 4; ++i) grad_h += harmonic[tv[i]] * g.grad[i];
    const double dh_dn = dot(grad_h, info.outward_normal);

    for (const auto& q : rule) {
      Vec3 x = q.bary[0] * a + q.bary[1] * b + q.bary[2] * c;
      Vec3 grad_s =
          coulomb_potential(charges, x, constants.eps_m, constants.source_prefactor).gradient;
      double flux = dot(grad_s, info.outward_normal) + dh_dn;
      double w = -constants.eps_m * flux * q.weight * info.area;
      for (int k = 0; k < 3; ++k) load[f.v[k]] += w * q.bary[k];
    }
  }
  return load;
}

SparseMatrix poisson_matrix(const Mesh& mesh, const TetAssembler& assembler,
                            const PhysicalConstants& constants) {
  SparseMatrix m = assembler.fresh();
  std::array<std::array<double, 4>, 4> local;
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const double eps =
        mesh.tets[t].region == RegionTag::Molecule ? constants.eps_m : constants.eps_s;
    const ElementGeometry g = element_geometry(mesh, t);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) local[i][j] = eps * g.e[i][j];
    assembler.add(m, t, local);
  }
  return m;
}

NodalField ion_charge_load(const Mesh& mesh, const std::vector<NodalField>& concentrations,
                           const std::vector<Species>& species, double source_prefactor) {
  if (concentrations.size() != species.size())
    throw std::invalid_argument("ion_charge_load: species/concentration count mismatch");
  NodalField load(mesh.vertex_count(), 0.0);
  if (species.empty()) return load;

  // P1 x P1 products are quadratic, the degree-2 rule integrates them exactly.
  const QuadratureRule& rule = quadrature(2);
  for (int t = 0; t < mesh.tet_count(); ++t) {
    if (mesh.tets[t].region != RegionTag::Solvent) continue;
    const auto& tv = mesh.tets[t].v;
    const double vol = mesh.tet_volume(t);
    double charge_nodal[4];
    for (int i = 0; i < 4; ++i) {
      double s = 0.0;
      for (std::size_t sp = 0; sp < species.size(); ++sp)
        s += species[sp].valence * concentrations[sp][tv[i]];
      charge_nodal[i] = s;
    }
    for (const auto& q : rule.points) {
      double rho = 0.0;
      for (int i = 0; i < 4; ++i) rho += q.bary[i] * charge_nodal[i];
      double w = source_prefactor * rho * q.weight * vol;
      for (int i = 0; i < 4; ++i) load[tv[i]] += w * q.bary[i];
    }
  }
  return load;
}

LinearSystem assemble_poisson(const Mesh& mesh, const TetAssembler& assembler,
                              const std::vector<NodalField>& concentrations,
                              const std::vector<Species>& species,
                              const PhysicalConstants& constants, const ScalarField& u0,
                              const NodalField* extra_load) {
  LinearSystem sys;
  sys.matrix = poisson_matrix(mesh, assembler, constants);
  sys.rhs = ion_charge_load(mesh, concentrations, species, constants.source_prefactor);
  if (extra_load) {
    if (extra_load->size() != sys.rhs.size())
      throw std::invalid_argument("assemble_poisson: extra load length mismatch");
    for (std::size_t i = 0; i < sys.rhs.size(); ++i) sys.rhs[i] += (*extra_load)[i];
  }
  for (std::int32_t v : boundary_vertices(mesh, BoundaryTag::Dirichlet))
    sys.constraints.emplace_back(v, u0(mesh.vertices[v]));
  return sys;
}

}  // namespace smpnp
