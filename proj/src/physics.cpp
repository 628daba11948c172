#include "smpnp/physics.hpp"

#include <cmath>

namespace smpnp {

double bernoulli(double t) {
  if (std::abs(t) <= 1e-4) return ((-1.0 / 720.0 * t * t + 1.0 / 12.0) * t - 0.5) * t + 1.0;
  if (t > 0.0) {
    // t e^{-t} / (1 - e^{-t}) keeps the exponential bounded for large t
    double e = std::exp(-t);
    return t * e / (1.0 - e);
  }
  return t / std::expm1(t);
}

namespace {

double log_bernoulli(double t) {
  if (std::abs(t) <= 1e-4) return std::log(bernoulli(t));
  if (t > 0.0) return std::log(t) - t - std::log1p(-std::exp(-t));
  return std::log(-t) - std::log1p(-std::exp(t));
}

}  // namespace

double edge_coefficient(double psi_i, double psi_j) {
  if (!std::isfinite(psi_i) || !std::isfinite(psi_j))
    throw std::invalid_argument("edge_coefficient: non-finite input");
  if (psi_i > 500.0) return std::exp(psi_i + log_bernoulli(psi_i - psi_j));
  return std::exp(psi_i) * bernoulli(psi_i - psi_j);
}

double molar_to_number_density(double molar, double gamma) {
  if (molar < 0.0) throw std::invalid_argument("molar_to_number_density: negative concentration");
  return molar * gamma;
}

double number_density_to_molar(double density, double gamma) {
  if (density < 0.0) throw std::invalid_argument("number_density_to_molar: negative concentration");
  return density / gamma;
}

std::vector<NodalField> psi_fields(const NodalField& u,
                                   const std::vector<NodalField>& concentrations,
                                   const std::vector<Species>& species, double a0,
                                   double packing_scale) {
  const std::size_t n = u.size();
  const std::size_t k = species.size();
  if (concentrations.size() != k)
    throw std::invalid_argument("psi_fields: species/concentration count mismatch");
  for (const auto& c : concentrations)
    if (c.size() != n) throw std::invalid_argument("psi_fields: field length mismatch");

  std::vector<double> packing_volume(k);  // s * a_i^3
  std::vector<double> entropy_weight(k);  // k_i / s
  for (std::size_t i = 0; i < k; ++i) {
    packing_volume[i] = packing_scale * species[i].size * species[i].size * species[i].size;
    entropy_weight[i] = species[i].steric_ratio(a0) / packing_scale;
  }

  std::vector<NodalField> psi(k, NodalField(n, 0.0));
  for (std::size_t v = 0; v < n; ++v) {
    if (!std::isfinite(u[v]))
      throw std::invalid_argument("psi_fields: non-finite potential at vertex " +
                                  std::to_string(v));
    double arg = 1.0;
    for (std::size_t l = 0; l < k; ++l) {
      double c = concentrations[l][v];
      if (!std::isfinite(c))
        throw std::invalid_argument("psi_fields: non-finite concentration at vertex " +
                                    std::to_string(v));
      arg -= packing_volume[l] * c;
    }
    if (!(arg > 0.0)) throw PackingError(static_cast<int>(v), arg);
    double log_term = std::log(arg);
    for (std::size_t i = 0; i < k; ++i)
      psi[i][v] = species[i].valence * u[v] - entropy_weight[i] * log_term;
  }
  return psi;
}

}  // namespace smpnp
