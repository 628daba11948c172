#include "smpnp/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace smpnp {

namespace {

struct FaceKey {
  std::array<std::int32_t, 3> v;  // sorted

  bool operator==(const FaceKey& o) const { return v == o.v; }
};

struct FaceKeyHash {
  std::size_t operator()(const FaceKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int32_t x : k.v) {
      h ^= static_cast<std::size_t>(x);
      h *= 1099511628211ull;
    }
    return h;
  }
};

FaceKey make_key(std::int32_t a, std::int32_t b, std::int32_t c) {
  std::array<std::int32_t, 3> v{a, b, c};
  std::sort(v.begin(), v.end());
  return FaceKey{v};
}

// Local faces of a positively oriented tet, outward-oriented.
constexpr int kLocalFaces[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};

struct FaceIncidence {
  int count = 0;
  int tet[2] = {-1, -1};
  int local[2] = {-1, -1};
};

std::unordered_map<FaceKey, FaceIncidence, FaceKeyHash> face_incidence(const Mesh& mesh) {
  std::unordered_map<FaceKey, FaceIncidence, FaceKeyHash> inc;
  inc.reserve(mesh.tets.size() * 2);
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const auto& tv = mesh.tets[t].v;
    for (int f = 0; f < 4; ++f) {
      FaceKey key = make_key(tv[kLocalFaces[f][0]], tv[kLocalFaces[f][1]], tv[kLocalFaces[f][2]]);
      FaceIncidence& e = inc[key];
      if (e.count < 2) {
        e.tet[e.count] = t;
        e.local[e.count] = f;
      }
      ++e.count;
    }
  }
  return inc;
}

}  // namespace

const char* to_string(RegionTag tag) {
  return tag == RegionTag::Solvent ? "solvent" : "molecule";
}

const char* to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Dirichlet: return "dirichlet";
    case BoundaryTag::Neumann: return "neumann";
    case BoundaryTag::Interface: return "interface";
  }
  return "?";
}

double signed_tet_volume(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3) {
  return dot(cross(p1 - p0, p2 - p0), p3 - p0) / 6.0;
}

Vec3 Mesh::tet_centroid(int t) const {
  const auto& tv = tets[t].v;
  return 0.25 * (vertices[tv[0]] + vertices[tv[1]] + vertices[tv[2]] + vertices[tv[3]]);
}

double Mesh::tet_volume(int t) const {
  const auto& tv = tets[t].v;
  return signed_tet_volume(vertices[tv[0]], vertices[tv[1]], vertices[tv[2]], vertices[tv[3]]);
}

Mesh generate_cube_mesh(int n, const Box& bounds) {
  if (n < 1) throw std::invalid_argument("generate_cube_mesh: n must be >= 1");
  const Vec3 ext = bounds.hi - bounds.lo;
  if (!(ext.x > 0.0) || !(ext.y > 0.0) || !(ext.z > 0.0))
    throw std::invalid_argument("generate_cube_mesh: degenerate bounds");

  Mesh mesh;
  const int m = n + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(m) * m * m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        mesh.vertices.push_back({bounds.lo.x + ext.x * i / n,
                                 bounds.lo.y + ext.y * j / n,
                                 bounds.lo.z + ext.z * k / n});

  auto vid = [m](int i, int j, int k) { return (k * m + j) * m + i; };

  // Kuhn subdivision: one tet per permutation of the axis order, every tet
  // sharing the cell diagonal (0,0,0)-(1,1,1). Odd permutations get two
  // vertices swapped to keep the signed volume positive.
  constexpr int kPerm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {1, 0, 2}, {2, 1, 0}};
  constexpr bool kOdd[6] = {false, false, false, true, true, true};

  mesh.tets.reserve(static_cast<std::size_t>(n) * n * n * 6);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < 6; ++p) {
          int off[4][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {1, 1, 1}};
          off[1][kPerm[p][0]] = 1;
          off[2][kPerm[p][0]] = 1;
          off[2][kPerm[p][1]] = 1;
          std::array<std::int32_t, 4> tv;
          for (int c = 0; c < 4; ++c)
            tv[c] = vid(i + off[c][0], j + off[c][1], k + off[c][2]);
          if (kOdd[p]) std::swap(tv[1], tv[2]);
          mesh.tets.push_back({tv, RegionTag::Solvent});
        }

  // Exterior faces (incidence 1) become Dirichlet boundary faces, kept in
  // element order with the owning tet's outward orientation.
  auto inc = face_incidence(mesh);
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const auto& tv = mesh.tets[t].v;
    for (int f = 0; f < 4; ++f) {
      std::array<std::int32_t, 3> fv{tv[kLocalFaces[f][0]], tv[kLocalFaces[f][1]],
                                     tv[kLocalFaces[f][2]]};
      if (inc.at(make_key(fv[0], fv[1], fv[2])).count == 1)
        mesh.faces.push_back({fv, BoundaryTag::Dirichlet});
    }
  }
  return mesh;
}

Mesh tag_spherical_region(const Mesh& mesh, const Vec3& center, double radius,
                          int* retagged_count) {
  if (!(radius > 0.0)) throw std::invalid_argument("tag_spherical_region: radius must be > 0");
  Mesh out = mesh;
  int retagged = 0;
  for (int t = 0; t < out.tet_count(); ++t) {
    if (distance(out.tet_centroid(t), center) <= radius) {
      if (out.tets[t].region != RegionTag::Molecule) ++retagged;
      out.tets[t].region = RegionTag::Molecule;
    }
  }
  if (retagged_count) *retagged_count = retagged;

  // Drop stale interface faces, then re-derive them from interior faces whose
  // two elements disagree on region. Orientation is taken outward from the
  // molecule-side element.
  std::vector<BoundaryFace> kept;
  for (const auto& f : out.faces)
    if (f.tag != BoundaryTag::Interface) kept.push_back(f);
  out.faces = std::move(kept);

  auto inc = face_incidence(out);
  for (int t = 0; t < out.tet_count(); ++t) {
    if (out.tets[t].region != RegionTag::Molecule) continue;
    const auto& tv = out.tets[t].v;
    for (int f = 0; f < 4; ++f) {
      std::array<std::int32_t, 3> fv{tv[kLocalFaces[f][0]], tv[kLocalFaces[f][1]],
                                     tv[kLocalFaces[f][2]]};
      const FaceIncidence& e = inc.at(make_key(fv[0], fv[1], fv[2]));
      if (e.count != 2) continue;
      int other = e.tet[0] == t ? e.tet[1] : e.tet[0];
      if (out.tets[other].region == RegionTag::Solvent)
        out.faces.push_back({fv, BoundaryTag::Interface});
    }
  }
  return out;
}

Mesh retag_boundary_top_bottom(const Mesh& mesh, double z_lo, double z_hi, double tol) {
  Mesh out = mesh;
  for (auto& f : out.faces) {
    if (f.tag == BoundaryTag::Interface) continue;
    bool on_lo = true, on_hi = true;
    for (int k = 0; k < 3; ++k) {
      double z = out.vertices[f.v[k]].z;
      on_lo = on_lo && std::abs(z - z_lo) <= tol;
      on_hi = on_hi && std::abs(z - z_hi) <= tol;
    }
    f.tag = (on_lo || on_hi) ? BoundaryTag::Dirichlet : BoundaryTag::Neumann;
  }
  return out;
}

ValidationReport validate(const Mesh& mesh) {
  ValidationReport rep;
  const int nv = mesh.vertex_count();
  char buf[160];

  for (int t = 0; t < mesh.tet_count(); ++t) {
    bool in_range = true;
    for (std::int32_t v : mesh.tets[t].v)
      if (v < 0 || v >= nv) in_range = false;
    if (!in_range) {
      std::snprintf(buf, sizeof buf, "tet %d references an out-of-range vertex", t);
      rep.violations.emplace_back(buf);
      ++rep.index_violations;
      continue;
    }
    double vol = mesh.tet_volume(t);
    if (!(vol > 0.0)) {
      std::snprintf(buf, sizeof buf, "tet %d has non-positive volume %.3e", t, vol);
      rep.violations.emplace_back(buf);
      ++rep.volume_violations;
    } else {
      rep.total_volume += vol;
    }
    if (mesh.tets[t].region == RegionTag::Solvent)
      ++rep.solvent_tets;
    else
      ++rep.molecule_tets;
  }

  auto inc = face_incidence(mesh);

  for (int fi = 0; fi < mesh.face_count(); ++fi) {
    const auto& f = mesh.faces[fi];
    bool in_range = true;
    for (std::int32_t v : f.v)
      if (v < 0 || v >= nv) in_range = false;
    if (!in_range) {
      std::snprintf(buf, sizeof buf, "face %d references an out-of-range vertex", fi);
      rep.violations.emplace_back(buf);
      ++rep.index_violations;
      continue;
    }
    switch (f.tag) {
      case BoundaryTag::Dirichlet: ++rep.dirichlet_faces; break;
      case BoundaryTag::Neumann: ++rep.neumann_faces; break;
      case BoundaryTag::Interface: ++rep.interface_faces; break;
    }
    auto it = inc.find(make_key(f.v[0], f.v[1], f.v[2]));
    int count = it == inc.end() ? 0 : it->second.count;
    if (f.tag == BoundaryTag::Interface) {
      if (count != 2) {
        std::snprintf(buf, sizeof buf, "interface face %d is incident to %d tets, expected 2", fi,
                      count);
        rep.violations.emplace_back(buf);
        ++rep.incidence_violations;
      } else {
        RegionTag r0 = mesh.tets[it->second.tet[0]].region;
        RegionTag r1 = mesh.tets[it->second.tet[1]].region;
        if (r0 == r1) {
          std::snprintf(buf, sizeof buf,
                        "interface face %d does not separate molecule from solvent", fi);
          rep.violations.emplace_back(buf);
          ++rep.tag_violations;
        }
      }
    } else {
      if (count != 1) {
        std::snprintf(buf, sizeof buf, "boundary face %d is incident to %d tets, expected 1", fi,
                      count);
        rep.violations.emplace_back(buf);
        ++rep.incidence_violations;
      }
    }
  }

  // Every exterior mesh face must be covered by a stored boundary face, and
  // every interior solvent/molecule face must be tagged Interface.
  std::unordered_map<FaceKey, BoundaryTag, FaceKeyHash> stored;
  for (const auto& f : mesh.faces) stored[make_key(f.v[0], f.v[1], f.v[2])] = f.tag;
  for (const auto& [key, e] : inc) {
    if (e.count == 1 && !stored.count(key)) {
      std::snprintf(buf, sizeof buf, "exterior face of tet %d carries no boundary tag", e.tet[0]);
      rep.violations.emplace_back(buf);
      ++rep.tag_violations;
    }
    if (e.count == 2 && mesh.tets[e.tet[0]].region != mesh.tets[e.tet[1]].region) {
      auto it = stored.find(key);
      if (it == stored.end() || it->second != BoundaryTag::Interface) {
        std::snprintf(buf, sizeof buf, "region-separating face between tets %d and %d not tagged interface",
                      e.tet[0], e.tet[1]);
        rep.violations.emplace_back(buf);
        ++rep.tag_violations;
      }
    }
  }

  return rep;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << "tets: " << (solvent_tets + molecule_tets) << " (" << solvent_tets << " solvent, "
     << molecule_tets << " molecule), total volume " << total_volume << "\n"
     << "faces: " << dirichlet_faces << " dirichlet, " << neumann_faces << " neumann, "
     << interface_faces << " interface\n"
     << "violations: " << violations.size() << "\n";
  for (const auto& v : violations) os << "  " << v << "\n";
  return os.str();
}

std::vector<char> solvent_vertex_mask(const Mesh& mesh) {
  std::vector<char> mask(mesh.vertex_count(), 0);
  for (const auto& t : mesh.tets)
    if (t.region == RegionTag::Solvent)
      for (std::int32_t v : t.v) mask[v] = 1;
  return mask;
}

std::vector<char> molecule_vertex_mask(const Mesh& mesh) {
  std::vector<char> mask(mesh.vertex_count(), 0);
  for (const auto& t : mesh.tets)
    if (t.region == RegionTag::Molecule)
      for (std::int32_t v : t.v) mask[v] = 1;
  return mask;
}

std::vector<std::int32_t> boundary_vertices(const Mesh& mesh, BoundaryTag tag) {
  std::vector<char> mask(mesh.vertex_count(), 0);
  for (const auto& f : mesh.faces)
    if (f.tag == tag)
      for (std::int32_t v : f.v) mask[v] = 1;
  std::vector<std::int32_t> out;
  for (int i = 0; i < mesh.vertex_count(); ++i)
    if (mask[i]) out.push_back(i);
  return out;
}

std::vector<InterfaceFace> interface_faces(const Mesh& mesh) {
  auto inc = face_incidence(mesh);
  std::vector<InterfaceFace> out;
  for (int fi = 0; fi < mesh.face_count(); ++fi) {
    const auto& f = mesh.faces[fi];
    if (f.tag != BoundaryTag::Interface) continue;
    auto it = inc.find(make_key(f.v[0], f.v[1], f.v[2]));
    if (it == inc.end() || it->second.count != 2)
      throw std::runtime_error("interface_faces: face without two incident tets");
    int mol = -1;
    for (int s = 0; s < 2; ++s)
      if (mesh.tets[it->second.tet[s]].region == RegionTag::Molecule) mol = it->second.tet[s];
    if (mol < 0) throw std::runtime_error("interface_faces: face without a molecule-side tet");

    const Vec3& a = mesh.vertices[f.v[0]];
    const Vec3& b = mesh.vertices[f.v[1]];
    const Vec3& c = mesh.vertices[f.v[2]];
    Vec3 nrm = cross(b - a, c - a);
    double area2 = norm(nrm);
    nrm = nrm / area2;
    Vec3 face_centroid = (a + b + c) / 3.0;
    if (dot(nrm, face_centroid - mesh.tet_centroid(mol)) < 0.0) nrm = -1.0 * nrm;
    out.push_back({fi, mol, nrm, 0.5 * area2});
  }
  return out;
}

}  // namespace smpnp
