#include "smpnp/msh_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace smpnp {

namespace {

struct LineReader {
  std::istream& in;
  int line_no = 0;

  bool next(std::string& line) {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::string expect() {
    std::string line;
    if (!next(line)) throw MshParseError(line_no + 1, "unexpected end of file");
    return line;
  }
};

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

MshParseResult parse_msh(std::istream& in, const MshTagMap& tags) {
  LineReader rd{in};
  MshParseResult result;
  Mesh& mesh = result.mesh;
  std::unordered_map<long, std::int32_t> node_index;

  std::string line;
  bool saw_nodes = false, saw_elements = false;
  while (rd.next(line)) {
    std::istringstream ls(line);
    std::string section;
    ls >> section;
    if (section.empty()) continue;

    if (section == "$MeshFormat") {
      std::istringstream fs(rd.expect());
      double version = 0;
      int file_type = -1, data_size = 0;
      if (!(fs >> version >> file_type >> data_size))
        throw MshParseError(rd.line_no, "malformed $MeshFormat header");
      if (version < 2.0 || version >= 3.0)
        throw MshParseError(rd.line_no, "unsupported msh version " + std::to_string(version));
      if (file_type != 0) throw MshParseError(rd.line_no, "binary msh files are not supported");
      if (rd.expect() != "$EndMeshFormat")
        throw MshParseError(rd.line_no, "expected $EndMeshFormat");
    } else if (section == "$Nodes") {
      saw_nodes = true;
      std::istringstream cs(rd.expect());
      long count = -1;
      if (!(cs >> count) || count < 0) throw MshParseError(rd.line_no, "malformed node count");
      mesh.vertices.reserve(count);
      for (long i = 0; i < count; ++i) {
        std::istringstream ns(rd.expect());
        long id;
        double x, y, z;
        if (!(ns >> id >> x >> y >> z)) throw MshParseError(rd.line_no, "malformed node record");
        if (!node_index.emplace(id, mesh.vertex_count()).second)
          throw MshParseError(rd.line_no, "duplicate node id " + std::to_string(id));
        mesh.vertices.push_back({x, y, z});
      }
      if (rd.expect() != "$EndNodes") throw MshParseError(rd.line_no, "expected $EndNodes");
    } else if (section == "$Elements") {
      if (!saw_nodes) throw MshParseError(rd.line_no, "$Elements before $Nodes");
      saw_elements = true;
      std::istringstream cs(rd.expect());
      long count = -1;
      if (!(cs >> count) || count < 0) throw MshParseError(rd.line_no, "malformed element count");
      for (long i = 0; i < count; ++i) {
        std::istringstream es(rd.expect());
        long id;
        int type, ntags;
        if (!(es >> id >> type >> ntags))
          throw MshParseError(rd.line_no, "malformed element record");
        std::vector<int> etags(ntags);
        for (int k = 0; k < ntags; ++k)
          if (!(es >> etags[k])) throw MshParseError(rd.line_no, "truncated element tags");

        int nodes_needed = type == 4 ? 4 : type == 2 ? 3 : 0;
        if (nodes_needed == 0) {
          ++result.skipped_elements;
          continue;
        }
        if (ntags < 1)
          throw MshParseError(rd.line_no, "element " + std::to_string(id) + " has no tags");
        std::array<std::int32_t, 4> conn{};
        for (int k = 0; k < nodes_needed; ++k) {
          long nid;
          if (!(es >> nid)) throw MshParseError(rd.line_no, "truncated element connectivity");
          auto it = node_index.find(nid);
          if (it == node_index.end())
            throw MshParseError(rd.line_no, "element references unknown node " + std::to_string(nid));
          conn[k] = it->second;
        }
        int physical = etags[0];
        if (type == 4) {
          auto it = tags.region.find(physical);
          if (it == tags.region.end())
            throw MshParseError(rd.line_no,
                                "no region mapping for physical tag " + std::to_string(physical));
          mesh.tets.push_back({{conn[0], conn[1], conn[2], conn[3]}, it->second});
        } else {
          auto it = tags.boundary.find(physical);
          if (it == tags.boundary.end())
            throw MshParseError(rd.line_no,
                                "no boundary mapping for physical tag " + std::to_string(physical));
          mesh.faces.push_back({{conn[0], conn[1], conn[2]}, it->second});
        }
      }
      if (rd.expect() != "$EndElements") throw MshParseError(rd.line_no, "expected $EndElements");
    }
    // unknown sections are ignored line by line until the next '$'
  }
  if (!saw_nodes || !saw_elements)
    throw MshParseError(rd.line_no, "missing $Nodes or $Elements section");
  return result;
}

MshParseResult parse_msh(const std::string& text, const MshTagMap& tags) {
  std::istringstream in(text);
  return parse_msh(in, tags);
}

void write_msh(std::ostream& out, const Mesh& mesh, const MshTagMap& tags) {
  std::map<RegionTag, int> region_id;
  for (const auto& [id, tag] : tags.region) region_id.emplace(tag, id);
  std::map<BoundaryTag, int> boundary_id;
  for (const auto& [id, tag] : tags.boundary) boundary_id.emplace(tag, id);

  auto region_physical = [&](RegionTag t) {
    auto it = region_id.find(t);
    if (it == region_id.end())
      throw std::runtime_error(std::string("write_msh: no physical id for region ") + to_string(t));
    return it->second;
  };
  auto boundary_physical = [&](BoundaryTag t) {
    auto it = boundary_id.find(t);
    if (it == boundary_id.end())
      throw std::runtime_error(std::string("write_msh: no physical id for boundary ") + to_string(t));
    return it->second;
  };

  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << mesh.vertex_count() << "\n";
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    const Vec3& p = mesh.vertices[i];
    out << (i + 1) << ' ' << fmt17(p.x) << ' ' << fmt17(p.y) << ' ' << fmt17(p.z) << "\n";
  }
  out << "$EndNodes\n";
  out << "$Elements\n" << (mesh.tet_count() + mesh.face_count()) << "\n";
  long eid = 1;
  for (const auto& f : mesh.faces) {
    out << eid++ << " 2 1 " << boundary_physical(f.tag);
    for (std::int32_t v : f.v) out << ' ' << (v + 1);
    out << "\n";
  }
  for (const auto& t : mesh.tets) {
    out << eid++ << " 4 1 " << region_physical(t.region);
    for (std::int32_t v : t.v) out << ' ' << (v + 1);
    out << "\n";
  }
  out << "$EndElements\n";
}

std::string write_msh(const Mesh& mesh, const MshTagMap& tags) {
  std::ostringstream os;
  write_msh(os, mesh, tags);
  return os.str();
}

void write_mesh_dump(std::ostream& out, const Mesh& mesh) {
  out << "smpnp-mesh 1\n";
  out << mesh.vertex_count() << ' ' << mesh.tet_count() << ' ' << mesh.face_count() << "\n";
  for (const Vec3& p : mesh.vertices)
    out << fmt17(p.x) << ' ' << fmt17(p.y) << ' ' << fmt17(p.z) << "\n";
  for (const auto& t : mesh.tets) {
    for (std::int32_t v : t.v) out << v << ' ';
    out << to_string(t.region) << "\n";
  }
  for (const auto& f : mesh.faces) {
    for (std::int32_t v : f.v) out << v << ' ';
    out << to_string(f.tag) << "\n";
  }
}

Mesh read_mesh_dump(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "smpnp-mesh" || version != 1)
    throw std::runtime_error("read_mesh_dump: not a smpnp-mesh 1 stream");
  int nv = 0, nt = 0, nf = 0;
  if (!(in >> nv >> nt >> nf)) throw std::runtime_error("read_mesh_dump: malformed counts");
  Mesh mesh;
  mesh.vertices.resize(nv);
  for (auto& p : mesh.vertices)
    if (!(in >> p.x >> p.y >> p.z)) throw std::runtime_error("read_mesh_dump: truncated vertices");
  mesh.tets.resize(nt);
  for (auto& t : mesh.tets) {
    std::string tag;
    if (!(in >> t.v[0] >> t.v[1] >> t.v[2] >> t.v[3] >> tag))
      throw std::runtime_error("read_mesh_dump: truncated tets");
    if (tag == "solvent")
      t.region = RegionTag::Solvent;
    else if (tag == "molecule")
      t.region = RegionTag::Molecule;
    else
      throw std::runtime_error("read_mesh_dump: unknown region tag '" + tag + "'");
  }
  mesh.faces.resize(nf);
  for (auto& f : mesh.faces) {
    std::string tag;
    if (!(in >> f.v[0] >> f.v[1] >> f.v[2] >> tag))
      throw std::runtime_error("read_mesh_dump: truncated faces");
    if (tag == "dirichlet")
      f.tag = BoundaryTag::Dirichlet;
    else if (tag == "neumann")
      f.tag = BoundaryTag::Neumann;
    else if (tag == "interface")
      f.tag = BoundaryTag::Interface;
    else
      throw std::runtime_error("read_mesh_dump: unknown boundary tag '" + tag + "'");
  }
  return mesh;
}

}  // namespace smpnp
