#include "smpnp/np_assembly.hpp"

#include <cmath>

namespace smpnp {

namespace {

// Vertices with no solvent element keep an identity row; the constraint set
// carries the Dirichlet data on the outer boundary.
void finish_np_system(const Mesh& mesh, LinearSystem& sys, const ScalarField& dirichlet_value) {
  const std::vector<char> in_solvent = solvent_vertex_mask(mesh);
  auto& vals = sys.matrix.values();
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (!in_solvent[v]) {
      int k = sys.matrix.find(v, v);
      vals[k] = 1.0;
    }
  for (std::int32_t v : boundary_vertices(mesh, BoundaryTag::Dirichlet))
    if (in_solvent[v]) sys.constraints.emplace_back(v, dirichlet_value(mesh.vertices[v]));
}

}  // namespace

NpSystem assemble_np_iafem(const Mesh& mesh, const TetAssembler& assembler, const Species& species,
                           const NodalField& psi, const ScalarField& dirichlet_value) {
  if (psi.size() != static_cast<std::size_t>(mesh.vertex_count()))
    throw std::invalid_argument("assemble_np_iafem: psi length mismatch");

  NpSystem np;
  np.scheme = Discretization::Iafem;
  np.system.matrix = assembler.fresh();
  np.system.rhs.assign(mesh.vertex_count(), 0.0);

  const double d = species.diffusion;
  std::array<std::array<double, 4>, 4> local;
  for (int t = 0; t < mesh.tet_count(); ++t) {
    if (mesh.tets[t].region != RegionTag::Solvent) continue;
    const ElementGeometry g = element_geometry(mesh, t);
    const auto& tv = mesh.tets[t].v;
    double p[4];
    for (int i = 0; i < 4; ++i) p[i] = psi[tv[i]];
    for (int i = 0; i < 4; ++i) {
      double diag = 0.0;
      for (int j = 0; j < 4; ++j) {
        if (j == i) continue;
        local[i][j] = d * bernoulli(p[i] - p[j]) * g.e[i][j];
        diag -= d * bernoulli(p[j] - p[i]) * g.e[i][j];
      }
      local[i][i] = diag;
    }
    assembler.add(np.system.matrix, t, local);
  }
  finish_np_system(mesh, np.system, dirichlet_value);
  return np;
}

NpSystem assemble_np_standard(const Mesh& mesh, const TetAssembler& assembler,
                              const Species& species, const NodalField& u,
                              const std::vector<NodalField>& prev_concentrations,
                              const std::vector<Species>& all_species,
                              const ScalarField& dirichlet_value, double a0,
                              double packing_scale) {
  if (u.size() != static_cast<std::size_t>(mesh.vertex_count()))
    throw std::invalid_argument("assemble_np_standard: potential length mismatch");
  if (prev_concentrations.size() != all_species.size())
    throw std::invalid_argument("assemble_np_standard: concentration/species count mismatch");

  NpSystem np;
  np.scheme = Discretization::Standard;
  np.system.matrix = assembler.fresh();
  np.system.rhs.assign(mesh.vertex_count(), 0.0);

  const double d = species.diffusion;
  const double z = species.valence;
  const double entropy_weight = species.steric_ratio(a0) / packing_scale;  // k_i / s
  const std::size_t ns = all_species.size();
  std::vector<double> packing_volume(ns);  // s * a_l^3
  for (std::size_t l = 0; l < ns; ++l) {
    double a = all_species[l].size;
    packing_volume[l] = packing_scale * a * a * a;
  }

  const QuadratureRule& rule = quadrature(2);
  std::array<std::array<double, 4>, 4> local;
  for (int t = 0; t < mesh.tet_count(); ++t) {
    if (mesh.tets[t].region != RegionTag::Solvent) continue;
    const ElementGeometry g = element_geometry(mesh, t);
    const auto& tv = mesh.tets[t].v;

    Vec3 grad_u{0, 0, 0};
    for (int i = 0; i < 4; ++i) grad_u += u[tv[i]] * g.grad[i];
    // frozen gradient sum S = sum_l s a_l^3 grad c_l^n, constant per element
    Vec3 grad_sum{0, 0, 0};
    for (std::size_t l = 0; l < ns; ++l) {
      Vec3 gc{0, 0, 0};
      for (int i = 0; i < 4; ++i) gc += prev_concentrations[l][tv[i]] * g.grad[i];
      grad_sum += packing_volume[l] * gc;
    }

    // diffusion + drift; the drift column factor int_T phi_j = V/4 is exact
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        local[i][j] = d * g.e[i][j] + d * z * dot(grad_u, g.grad[i]) * g.volume * 0.25;

    if (entropy_weight != 0.0) {
      // steric term with the packing denominator frozen at the previous
      // iterate, interpolated at the quadrature points
      for (const auto& q : rule.points) {
        double packing = 0.0;
        for (std::size_t l = 0; l < ns; ++l) {
          double c = 0.0;
          for (int i = 0; i < 4; ++i) c += q.bary[i] * prev_concentrations[l][tv[i]];
          packing += packing_volume[l] * c;
        }
        double denom = 1.0 - packing;
        if (!(denom > 0.0))
          throw PackingError(tv[0], denom);
        double w = q.weight * g.volume * d * entropy_weight / denom;
        for (int i = 0; i < 4; ++i) {
          double row = w * dot(grad_sum, g.grad[i]);
          for (int j = 0; j < 4; ++j) local[i][j] += row * q.bary[j];
        }
      }
    }
    assembler.add(np.system.matrix, t, local);
  }
  finish_np_system(mesh, np.system, dirichlet_value);
  return np;
}

std::vector<double> np_residual(const NpSystem& np, const NodalField& c) {
  std::vector<double> r = np.system.matrix.multiply(c);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= np.system.rhs[i];
  for (const auto& constraint : np.system.constraints) r[constraint.first] = 0.0;
  return r;
}

}  // namespace smpnp
