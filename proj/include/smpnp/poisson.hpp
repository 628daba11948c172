#pragma once

#include <iosfwd>

#include "smpnp/fem.hpp"
#include "smpnp/physics.hpp"

namespace smpnp {

/// Fixed partial charge: position in Angstrom, charge in units of e_c.
struct FixedCharge {
  Vec3 position;
  double charge = 0.0;
  double radius = 0.0;  // parsed from PQR, retained but unused
};

/// Reads ATOM/HETATM records; the last five whitespace-separated fields of a
/// record are x y z charge radius. REMARK and other records are skipped.
/// Malformed numeric fields raise std::runtime_error with the line number.
std::vector<FixedCharge> parse_pqr(std::istream& in);
std::vector<FixedCharge> parse_pqr(const std::string& text);

struct CoulombEval {
  double value = 0.0;
  Vec3 gradient;
};

/// Dimensionless singular potential u^s = prefactor/(4 pi eps_m) sum
/// q_j/|x - x_j| and its analytic gradient. Evaluation at (or numerically on
/// top of) a charge position raises std::domain_error.
CoulombEval coulomb_potential(const std::vector<FixedCharge>& charges, const Vec3& x, double eps_m,
                              double prefactor);

/// Harmonic component on the molecule region: Laplace solve with Dirichlet
/// data -u^s on the interface vertices, CG to 1e-10. The returned field is
/// zero outside the molecule closure.
NodalField solve_harmonic(const Mesh& mesh, const std::vector<FixedCharge>& charges,
                          const PhysicalConstants& constants, double tol = 1e-10);

/// Surface load from the interface jump condition:
/// L[v] = -eps_m int_F d(u^s + u^h)/dn phi_v dS summed over interface faces,
/// with n the molecule-side outward normal, grad u^s analytic at the 3-point
/// surface quadrature nodes and grad u^h the molecule-side element gradient.
NodalField interface_jump_load(const Mesh& mesh, const std::vector<FixedCharge>& charges,
                               const NodalField& harmonic, const PhysicalConstants& constants);

/// Regularized Poisson system: matrix (eps_m/eps_s weighted Laplacian over
/// the whole domain), right-hand side source_prefactor * sum_i z_i c_i over
/// solvent elements plus `extra_load` (interface jump and/or manufactured
/// sources), Dirichlet u = u0 on the outer boundary.
LinearSystem assemble_poisson(const Mesh& mesh, const TetAssembler& assembler,
                              const std::vector<NodalField>& concentrations,
                              const std::vector<Species>& species,
                              const PhysicalConstants& constants, const ScalarField& u0,
                              const NodalField* extra_load = nullptr);

/// The fixed matrix part of assemble_poisson, reusable across Gummel sweeps.
SparseMatrix poisson_matrix(const Mesh& mesh, const TetAssembler& assembler,
                            const PhysicalConstants& constants);

/// The concentration-dependent part of the Poisson right-hand side.
NodalField ion_charge_load(const Mesh& mesh, const std::vector<NodalField>& concentrations,
                           const std::vector<Species>& species, double source_prefactor);

}  // namespace smpnp
