#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "smpnp/mesh.hpp"

namespace smpnp {

/// Maps Gmsh physical ids onto region/boundary tags. Supplied by the run
/// configuration, never hard-coded.
struct MshTagMap {
  std::map<int, RegionTag> region;      // tetrahedron physical id -> region
  std::map<int, BoundaryTag> boundary;  // triangle physical id -> boundary
};

struct MshParseResult {
  Mesh mesh;
  int skipped_elements = 0;  // elements of types other than triangle/tet
};

class MshParseError : public std::runtime_error {
 public:
  MshParseError(int line, const std::string& what)
      : std::runtime_error("msh parse error, line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Reads Gmsh ASCII 2.2 ($MeshFormat/$Nodes/$Elements). Element types 4
/// (tetrahedron) and 2 (triangle) are mapped through `tags`; other types are
/// skipped and counted. Malformed input raises MshParseError with the
/// offending line number.
MshParseResult parse_msh(std::istream& in, const MshTagMap& tags);
MshParseResult parse_msh(const std::string& text, const MshTagMap& tags);

/// Writes Gmsh ASCII 2.2 with physical ids taken from the reverse of `tags`.
/// Coordinates are printed with 17 significant digits so parse/write
/// round-trips are exact.
void write_msh(std::ostream& out, const Mesh& mesh, const MshTagMap& tags);
std::string write_msh(const Mesh& mesh, const MshTagMap& tags);

/// Plain-text mesh dump: header "smpnp-mesh 1", then counts, then one
/// vertex/tet/face per line.
void write_mesh_dump(std::ostream& out, const Mesh& mesh);
Mesh read_mesh_dump(std::istream& in);

}  // namespace smpnp
