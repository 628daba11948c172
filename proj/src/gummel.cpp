#include "smpnp/gummel.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace smpnp {

double convergence_metric(const NodalField& u_new, const NodalField& u_old) {
  if (u_new.size() != u_old.size())
    throw std::invalid_argument("convergence_metric: length mismatch");
  double diff2 = 0.0, norm2_new = 0.0;
  for (std::size_t i = 0; i < u_new.size(); ++i) {
    double d = u_new[i] - u_old[i];
    diff2 += d * d;
    norm2_new += u_new[i] * u_new[i];
  }
  if (norm2_new == 0.0)
    return diff2 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(diff2 / norm2_new);
}

NodalField relax(const NodalField& old_field, const NodalField& new_field, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("relax: alpha must lie in (0, 1)");
  if (old_field.size() != new_field.size())
    throw std::invalid_argument("relax: length mismatch");
  NodalField out(new_field.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = alpha * old_field[i] + (1.0 - alpha) * new_field[i];
  return out;
}

namespace {

// apply_dirichlet is affine in the right-hand side, so the eliminated matrix
// and the base vector (column compensation + prescribed values) are computed
// once and fresh loads are added on unconstrained rows each sweep.
struct ConstrainedSystem {
  SparseMatrix matrix;
  std::vector<double> rhs_base;
  std::vector<char> constrained;

  ConstrainedSystem() = default;
  ConstrainedSystem(LinearSystem sys) {
    constrained.assign(sys.rhs.size(), 0);
    for (const auto& c : sys.constraints) constrained[c.first] = 1;
    std::fill(sys.rhs.begin(), sys.rhs.end(), 0.0);
    LinearSystem eliminated = apply_dirichlet(std::move(sys));
    matrix = std::move(eliminated.matrix);
    rhs_base = std::move(eliminated.rhs);
  }

  std::vector<double> rhs_with(const NodalField& load) const {
    std::vector<double> rhs = rhs_base;
    for (std::size_t i = 0; i < rhs.size(); ++i)
      if (!constrained[i]) rhs[i] += load[i];
    return rhs;
  }
};

}  // namespace

GummelResult gummel_solve(const GummelProblem& problem, const GummelConfig& config,
                          std::ostream* log, const GummelObserver& observer) {
  if (!problem.mesh) throw std::invalid_argument("gummel_solve: missing mesh");
  if (problem.species.empty()) throw std::invalid_argument("gummel_solve: no species");
  if (!(config.tol > 0.0)) throw std::invalid_argument("gummel_solve: tol must be positive");
  if (config.max_iter < 1) throw std::invalid_argument("gummel_solve: max_iter must be >= 1");

  const Mesh& mesh = *problem.mesh;
  const int nv = mesh.vertex_count();
  const std::size_t ns = problem.species.size();
  const PhysicalConstants& constants = problem.constants;

  // The PNP model is the size-free limit; zeroing the sizes makes the Psi and
  // assembly paths literally identical to SMPNP with a_i = 0.
  std::vector<Species> species = problem.species;
  if (config.model == Model::Pnp)
    for (Species& s : species) s.size = 0.0;

  TetAssembler assembler(mesh);

  // Boundary data.
  ScalarField u_bc = problem.u_dirichlet;
  if (!u_bc) {
    double u0 = problem.u0;
    u_bc = [u0](const Vec3&) { return u0; };
  }
  std::vector<ScalarField> c_bc(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    if (i < problem.c_dirichlet.size() && problem.c_dirichlet[i]) {
      c_bc[i] = problem.c_dirichlet[i];
    } else {
      double bulk = molar_to_number_density(species[i].bulk_molar, constants.gamma);
      c_bc[i] = [bulk](const Vec3&) { return bulk; };
    }
  }

  // Singular + harmonic components and the interface jump load are fixed for
  // the whole iteration; they exist only when fixed charges meet a molecule
  // region.
  NodalField fixed_load(nv, 0.0);
  bool has_molecule = false;
  for (const auto& t : mesh.tets) has_molecule = has_molecule || t.region == RegionTag::Molecule;
  if (!problem.charges.empty() && has_molecule) {
    NodalField harmonic = solve_harmonic(mesh, problem.charges, constants);
    fixed_load = interface_jump_load(mesh, problem.charges, harmonic, constants);
  }
  if (!problem.poisson_extra_load.empty()) {
    if (problem.poisson_extra_load.size() != static_cast<std::size_t>(nv))
      throw std::invalid_argument("gummel_solve: poisson_extra_load length mismatch");
    for (int i = 0; i < nv; ++i) fixed_load[i] += problem.poisson_extra_load[i];
  }

  // Fixed Poisson operator.
  LinearSystem poisson_sys;
  poisson_sys.matrix = poisson_matrix(mesh, assembler, constants);
  poisson_sys.rhs.assign(nv, 0.0);
  for (std::int32_t v : boundary_vertices(mesh, BoundaryTag::Dirichlet))
    poisson_sys.constraints.emplace_back(v, u_bc(mesh.vertices[v]));
  ConstrainedSystem poisson(std::move(poisson_sys));

  // Initial iterate: u = 0; concentrations at bulk (Dirichlet-lifted) on the
  // solvent region unless the literal zero start is requested.
  NodalField u(nv, 0.0);
  std::vector<NodalField> c(ns, NodalField(nv, 0.0));
  if (!config.zero_init) {
    const std::vector<char> in_solvent = solvent_vertex_mask(mesh);
    for (std::size_t i = 0; i < ns; ++i)
      for (int v = 0; v < nv; ++v)
        if (in_solvent[v]) c[i][v] = c_bc[i](mesh.vertices[v]);
  }

  GummelResult result;
  result.u = u;
  result.concentrations = c;

  for (int n = 1; n <= config.max_iter; ++n) {
    try {
      // (1) Poisson with the latest concentrations.
      NodalField load = ion_charge_load(mesh, c, species, constants.source_prefactor);
      for (int i = 0; i < nv; ++i) load[i] += fixed_load[i];
      SolveStats poisson_stats;
      NodalField u_new = solve_cg(poisson.matrix, poisson.rhs_with(load), config.poisson_tol,
                                  100000, Preconditioner::Jacobi, &poisson_stats);

      // (2) Modified potentials from the previous (relaxed) iterate.
      std::vector<NodalField> psi = psi_fields(u, c, species, constants.a0, problem.packing_scale);

      // (3) Transport solve per species.
      std::vector<NodalField> c_new(ns);
      std::vector<int> np_iters(ns, 0);
      for (std::size_t i = 0; i < ns; ++i) {
        NpSystem np = config.discretization == Discretization::Iafem
                          ? assemble_np_iafem(mesh, assembler, species[i], psi[i], c_bc[i])
                          : assemble_np_standard(mesh, assembler, species[i], u, c, species,
                                                  c_bc[i], constants.a0, problem.packing_scale);
        if (i < problem.np_extra_load.size() && !problem.np_extra_load[i].empty())
          for (int v = 0; v < nv; ++v) np.system.rhs[v] += problem.np_extra_load[i][v];
        np.system = apply_dirichlet(std::move(np.system));
        SolveStats np_stats;
        c_new[i] = solve_bicgstab(np.system.matrix, np.system.rhs, config.np_tol, 100000,
                                  Preconditioner::Jacobi, &np_stats);
        np_iters[i] = np_stats.iterations;
      }

      // (4) Convergence test on u, then under-relaxation.
      double metric = convergence_metric(u_new, u);
      result.history.push_back({n, metric, poisson_stats.iterations, np_iters});
      if (log) {
        (*log) << "iter " << n << " metric " << metric << " poisson_iters "
               << poisson_stats.iterations << " np_iters ";
        for (std::size_t i = 0; i < ns; ++i) (*log) << (i ? "," : "") << np_iters[i];
        (*log) << "\n";
      }

      if (metric < config.tol) {
        result.converged = true;
        result.iterations = n;
        result.u = std::move(u_new);
        result.concentrations = std::move(c_new);
        if (observer) observer(n, result.u, result.concentrations);
        return result;
      }
      u = relax(u, u_new, config.alpha);
      for (std::size_t i = 0; i < ns; ++i) c[i] = relax(c[i], c_new[i], config.alpha);
      result.u = u;
      result.concentrations = c;
      result.iterations = n;
      if (observer) observer(n, u, c);
    } catch (const SolverError& e) {
      throw GummelError(n, e.what());
    }
  }

  result.converged = false;
  result.failure = "no convergence within " + std::to_string(config.max_iter) +
                   " sweeps, last metric " +
                   std::to_string(result.history.empty() ? 0.0 : result.history.back().metric);
  return result;
}

}  // namespace smpnp
