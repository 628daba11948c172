#pragma once

#include <array>
#include <functional>
#include <vector>

#include "smpnp/mesh.hpp"
#include "smpnp/sparse.hpp"

namespace smpnp {

/// One real value per mesh vertex (potential, concentration, modified
/// potential, ...).
using NodalField = std::vector<double>;

/// P1 geometry of one tetrahedron: volume, the constant gradients of the four
/// barycentric basis functions, and the geometric stiffness entries
/// e[i][j] = integral over T of grad(phi_j) . grad(phi_i). Row sums vanish,
/// e[i][j] = e[j][i], and the gradients sum to zero.
struct ElementGeometry {
  double volume = 0.0;
  std::array<Vec3, 4> grad;
  std::array<std::array<double, 4>, 4> e;
};

ElementGeometry element_geometry(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3);

inline ElementGeometry element_geometry(const Mesh& mesh, int t) {
  const auto& tv = mesh.tets[t].v;
  return element_geometry(mesh.vertices[tv[0]], mesh.vertices[tv[1]], mesh.vertices[tv[2]],
                          mesh.vertices[tv[3]]);
}

struct QuadraturePoint {
  std::array<double, 4> bary;
  double weight;  // weights sum to 1; integral = volume * sum w_q f(x_q)
};

struct QuadratureRule {
  int degree = 0;
  std::vector<QuadraturePoint> points;
};

/// Symmetric rules on the reference tetrahedron, exact for polynomials up to
/// the stated total degree. Supported degrees: 1, 2, 4.
const QuadratureRule& quadrature(int degree);

/// 3-point degree-2 rule on the reference triangle, for surface loads.
struct TriQuadraturePoint {
  std::array<double, 3> bary;
  double weight;
};
const std::vector<TriQuadraturePoint>& triangle_quadrature();

enum class RegionFilter { All, Solvent, Molecule };

inline bool region_selected(RegionFilter filter, RegionTag tag) {
  return filter == RegionFilter::All ||
         (filter == RegionFilter::Solvent && tag == RegionTag::Solvent) ||
         (filter == RegionFilter::Molecule && tag == RegionTag::Molecule);
}

/// A[i][j] = sum over selected tets of coeff(T) * e_ij^T. Assembly order is
/// fixed (elements in order, 4x4 entries each), so the result is bit-identical
/// across runs and exactly symmetric.
SparseMatrix assemble_weighted_laplacian(const Mesh& mesh, const std::vector<double>& coeff_per_tet,
                                         RegionFilter filter = RegionFilter::All);

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

/// b[i] = sum over selected tets of the quadrature of density * phi_i.
NodalField assemble_load(const Mesh& mesh, const ScalarField& density,
                         RegionFilter filter = RegionFilter::All, int degree = 2);

/// Elementwise degree-4 quadrature of (u_h - u)^2 and |grad u_h - grad u|^2.
double l2_error(const Mesh& mesh, const NodalField& field, const ScalarField& exact);
double h1_seminorm_error(const Mesh& mesh, const NodalField& field, const VectorField& exact_grad);

/// Evaluates the exact function at every vertex.
NodalField interpolate(const Mesh& mesh, const ScalarField& f);

/// CSR pattern shared by all systems on one mesh, with per-element slots for
/// O(1) accumulation. The pattern is the union of all element vertex pairs
/// plus every diagonal, so isolated vertices still get an identity row.
class TetAssembler {
 public:
  explicit TetAssembler(const Mesh& mesh);

  /// Zeroed matrix with the cached pattern.
  SparseMatrix fresh() const { return skeleton_; }

  /// Adds local[i][j] to entry (v_i, v_j) of `into` for element t.
  void add(SparseMatrix& into, int t, const std::array<std::array<double, 4>, 4>& local) const;

 private:
  SparseMatrix skeleton_;
  std::vector<std::array<int, 16>> slots_;
};

}  // namespace smpnp
