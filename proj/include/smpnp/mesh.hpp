#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "smpnp/vec3.hpp"

namespace smpnp {

enum class RegionTag : std::uint8_t { Solvent = 0, Molecule = 1 };
enum class BoundaryTag : std::uint8_t { Dirichlet = 0, Neumann = 1, Interface = 2 };

const char* to_string(RegionTag tag);
const char* to_string(BoundaryTag tag);

struct Tetra {
  std::array<std::int32_t, 4> v;
  RegionTag region = RegionTag::Solvent;
};

struct BoundaryFace {
  std::array<std::int32_t, 3> v;
  BoundaryTag tag = BoundaryTag::Dirichlet;
};

struct Box {
  Vec3 lo;
  Vec3 hi;
};

/// Tetrahedral mesh with region-tagged elements and tagged boundary faces.
/// Exterior faces carry Dirichlet/Neumann tags; interior faces separating a
/// solvent element from a molecule element carry the Interface tag (such faces
/// belong to two elements, one on each side). Immutable by convention once
/// built; the tagging helpers below return modified copies.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Tetra> tets;
  std::vector<BoundaryFace> faces;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int tet_count() const { return static_cast<int>(tets.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }

  Vec3 tet_centroid(int t) const;
  double tet_volume(int t) const;  // signed volume under the stored ordering
};

double signed_tet_volume(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3);

/// Uniform Kuhn (Freudenthal) subdivision of an axis-aligned box: n cells per
/// axis, 6 tetrahedra per cell. All elements are tagged Solvent and every
/// outer face Dirichlet. Throws std::invalid_argument for n < 1 or a
/// degenerate box.
Mesh generate_cube_mesh(int n, const Box& bounds);

/// Retags every element whose centroid lies within `radius` of `center` as
/// Molecule, then rebuilds the interface face list (interior faces whose two
/// elements disagree on region). Interface faces are stored with the
/// molecule-side outward orientation.
Mesh tag_spherical_region(const Mesh& mesh, const Vec3& center, double radius,
                          int* retagged_count = nullptr);

/// Splits the Dirichlet outer boundary into top/bottom (z extremes) Dirichlet
/// and lateral Neumann faces, the channel-style configuration.
Mesh retag_boundary_top_bottom(const Mesh& mesh, double z_lo, double z_hi, double tol = 1e-9);

struct ValidationReport {
  std::vector<std::string> violations;
  int volume_violations = 0;
  int index_violations = 0;
  int incidence_violations = 0;
  int tag_violations = 0;
  double total_volume = 0.0;
  int solvent_tets = 0;
  int molecule_tets = 0;
  int dirichlet_faces = 0;
  int neumann_faces = 0;
  int interface_faces = 0;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Checks volume positivity, index ranges, face incidence counts and tag
/// consistency. Never throws; all findings go into the report.
ValidationReport validate(const Mesh& mesh);

/// Vertices incident to at least one solvent element.
std::vector<char> solvent_vertex_mask(const Mesh& mesh);

/// Vertices incident to at least one molecule element.
std::vector<char> molecule_vertex_mask(const Mesh& mesh);

/// Vertices lying on boundary faces with the given tag.
std::vector<std::int32_t> boundary_vertices(const Mesh& mesh, BoundaryTag tag);

/// Interface face paired with its molecule-side element.
struct InterfaceFace {
  int face = -1;        // index into mesh.faces
  int molecule_tet = -1;
  Vec3 outward_normal;  // unit normal pointing out of the molecule region
  double area = 0.0;
};

std::vector<InterfaceFace> interface_faces(const Mesh& mesh);

}  // namespace smpnp
