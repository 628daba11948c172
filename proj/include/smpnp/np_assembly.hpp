#pragma once

#include "smpnp/fem.hpp"
#include "smpnp/physics.hpp"

namespace smpnp {

enum class Discretization { Iafem, Standard };

/// Linear system for one species' nodal concentration on the solvent region.
/// Vertices outside the solvent closure get identity rows with zero value;
/// Dirichlet constraints sit on the outer (Dirichlet-tagged) boundary. The
/// zero-flux condition on the interface is natural, so no boundary term
/// appears.
struct NpSystem {
  LinearSystem system;
  Discretization scheme = Discretization::Iafem;
};

/// Inverse-averaging scheme: per solvent element, off-diagonal entries
/// D B(Psi_i - Psi_j) e_ij and diagonal -sum_k D B(Psi_k - Psi_i) e_ik.
/// `assembler` must have been built for `mesh`.
NpSystem assemble_np_iafem(const Mesh& mesh, const TetAssembler& assembler, const Species& species,
                           const NodalField& psi, const ScalarField& dirichlet_value);

/// Standard Galerkin scheme of the size-modified flux, semi-implicit: the
/// packing denominator and the gradient sum are frozen at the previous
/// iterate, the unknown concentration enters linearly.
NpSystem assemble_np_standard(const Mesh& mesh, const TetAssembler& assembler,
                              const Species& species, const NodalField& u,
                              const std::vector<NodalField>& prev_concentrations,
                              const std::vector<Species>& all_species,
                              const ScalarField& dirichlet_value, double a0,
                              double packing_scale = 1.0);

/// A c - b on unconstrained rows, zero on constrained ones.
std::vector<double> np_residual(const NpSystem& np, const NodalField& c);

}  // namespace smpnp
