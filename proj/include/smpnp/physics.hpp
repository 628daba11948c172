#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smpnp/fem.hpp"

namespace smpnp {

/// Unit system: lengths in Angstrom, concentrations in number density (1/A^3),
/// potentials dimensionless (u = beta e_c phi). Molar concentrations appear
/// only at I/O boundaries. The composite Poisson prefactors are configured
/// scalars: `source_prefactor` is beta e_c^2 / eps_0 in Angstrom (7042.94 at
/// 298.15 K) and the matrix carries the relative permittivities; dimensionless
/// runs set all three to 1.
struct PhysicalConstants {
  double eps_m = 2.0;   // molecule region relative permittivity
  double eps_s = 80.0;  // solvent region relative permittivity
  double gamma = 6.022140857e-4;        // mol/L -> 1/A^3
  double a0 = 3.1;                      // solvent molecule size, A
  double source_prefactor = 7042.9395563784365;  // beta e_c^2/eps_0, A
  double thermal_voltage = 0.025693;    // k_B T/e_c at 298.15 K, V
};

/// One mobile ion species. Diffusion in A^2/ps; size in A; bulk concentration
/// in mol/L. `diffusion_molecule` is the optional channel/molecule-region
/// override carried for channel-style setups.
struct Species {
  std::string name;
  int valence = 0;
  double diffusion = 0.0;
  std::optional<double> diffusion_molecule;
  double size = 0.0;
  double bulk_molar = 0.0;

  double steric_ratio(double a0) const {  // k_i = a_i^3 / a0^3
    double r = size / a0;
    return r * r * r;
  }
};

/// Bernoulli function B(t) = t/(e^t - 1) with the cubic Taylor branch for
/// |t| <= 1e-4. Strictly positive, B(0) = 1, no overflow through |t| = 700.
double bernoulli(double t);

/// Inverse average of e^{-Psi} along an edge with linear Psi, inverted:
/// e^{Psi_i} B(Psi_i - Psi_j). Symmetric in (i, j); evaluated in log space
/// once Psi_i exceeds 500 to dodge exp overflow.
double edge_coefficient(double psi_i, double psi_j);

double molar_to_number_density(double molar, double gamma);
double number_density_to_molar(double density, double gamma);

class PackingError : public std::runtime_error {
 public:
  PackingError(int vertex, double argument)
      : std::runtime_error("packing violation at vertex " + std::to_string(vertex) +
                           ": 1 - sum(a^3 c) = " + std::to_string(argument)),
        vertex(vertex), argument(argument) {}
  int vertex;
  double argument;
};

/// Modified potentials Psi_i = z_i u - (k_i/s) ln(1 - s sum_l a_l^3 c_l) with
/// s = packing_scale. Physical runs use s = 1 with concentrations in 1/A^3;
/// the manufactured-solution problem keeps the paper's form with s = gamma.
/// Throws PackingError when the log argument is not positive and
/// std::invalid_argument on non-finite input.
std::vector<NodalField> psi_fields(const NodalField& u,
                                   const std::vector<NodalField>& concentrations,
                                   const std::vector<Species>& species, double a0,
                                   double packing_scale = 1.0);

}  // namespace smpnp
