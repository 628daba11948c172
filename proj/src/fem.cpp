#include "smpnp/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace smpnp {

ElementGeometry element_geometry(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3) {
  ElementGeometry g;
  const Vec3 d1 = p1 - p0, d2 = p2 - p0, d3 = p3 - p0;
  const double det6 = dot(cross(d1, d2), d3);  // 6 * volume
  if (!(det6 > 0.0))
    throw std::invalid_argument("element_geometry: degenerate or inverted tetrahedron");
  g.volume = det6 / 6.0;

  // grad(lambda_i) rows of the inverse edge matrix; lambda_0 closes the
  // partition of unity.
  const Vec3 c23 = cross(d2, d3), c31 = cross(d3, d1), c12 = cross(d1, d2);
  g.grad[1] = c23 / det6;
  g.grad[2] = c31 / det6;
  g.grad[3] = c12 / det6;
  g.grad[0] = {-(g.grad[1].x + g.grad[2].x + g.grad[3].x),
               -(g.grad[1].y + g.grad[2].y + g.grad[3].y),
               -(g.grad[1].z + g.grad[2].z + g.grad[3].z)};

  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g.e[i][j] = g.volume * dot(g.grad[i], g.grad[j]);
  return g;
}

const QuadratureRule& quadrature(int degree) {
  static const QuadratureRule deg1 = {1, {{{0.25, 0.25, 0.25, 0.25}, 1.0}}};

  static const QuadratureRule deg2 = [] {
    QuadratureRule r{2, {}};
    const double a = 0.58541019662496845;  // (5 + 3 sqrt 5)/20
    const double b = 0.13819660112501051;  // (5 - sqrt 5)/20
    for (int i = 0; i < 4; ++i) {
      std::array<double, 4> bary{b, b, b, b};
      bary[i] = a;
      r.points.push_back({bary, 0.25});
    }
    return r;
  }();

  // Keast 14-point rule, exact through total degree 5.
  static const QuadratureRule deg4 = [] {
    QuadratureRule r{4, {}};
    const double w1 = 0.11268792571801585;
    const double b1 = 0.31088591926330061;
    const double a1 = 1.0 - 3.0 * b1;
    const double w2 = 0.073493043116361950;
    const double b2 = 0.092735250310891226;
    const double a2 = 1.0 - 3.0 * b2;
    const double w3 = 0.042546020777081466;
    const double c3 = 0.045503704125649649;
    const double d3 = 0.5 - c3;
    for (int i = 0; i < 4; ++i) {
      std::array<double, 4> bary{b1, b1, b1, b1};
      bary[i] = a1;
      r.points.push_back({bary, w1});
    }
    for (int i = 0; i < 4; ++i) {
      std::array<double, 4> bary{b2, b2, b2, b2};
      bary[i] = a2;
      r.points.push_back({bary, w2});
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 4; ++j) {
        std::array<double, 4> bary{d3, d3, d3, d3};
        bary[i] = c3;
        bary[j] = c3;
        r.points.push_back({bary, w3});
      }
    return r;
  }();

  switch (degree) {
    case 1: return deg1;
    case 2: return deg2;
    case 4: return deg4;
    default: throw std::invalid_argument("quadrature: unsupported degree " + std::to_string(degree));
  }
}

const std::vector<TriQuadraturePoint>& triangle_quadrature() {
  static const std::vector<TriQuadraturePoint> rule = {
      {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, 1.0 / 3.0},
      {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, 1.0 / 3.0},
      {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, 1.0 / 3.0},
  };
  return rule;
}

SparseMatrix assemble_weighted_laplacian(const Mesh& mesh, const std::vector<double>& coeff_per_tet,
                                         RegionFilter filter) {
  if (coeff_per_tet.size() != mesh.tets.size())
    throw std::invalid_argument("assemble_weighted_laplacian: coefficient size mismatch");
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.tets.size() * 16 + mesh.vertices.size());
  // Explicit diagonal so every row exists in the pattern.
  for (int v = 0; v < mesh.vertex_count(); ++v) triplets.push_back({v, v, 0.0});
  for (int t = 0; t < mesh.tet_count(); ++t) {
    if (!region_selected(filter, mesh.tets[t].region)) continue;
    const ElementGeometry g = element_geometry(mesh, t);
    const auto& tv = mesh.tets[t].v;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        triplets.push_back({tv[i], tv[j], coeff_per_tet[t] * g.e[i][j]});
  }
  return SparseMatrix::from_triplets(mesh.vertex_count(), std::move(triplets));
}

NodalField assemble_load(const Mesh& mesh, const ScalarField& density, RegionFilter filter,
                         int degree) {
  const QuadratureRule& rule = quadrature(degree);
  NodalField b(mesh.vertex_count(), 0.0);
  for (int t = 0; t < mesh.tet_count(); ++t) {
    if (!region_selected(filter, mesh.tets[t].region)) continue;
    const auto& tv = mesh.tets[t].v;
    const Vec3& p0 = mesh.vertices[tv[0]];
    const Vec3& p1 = mesh.vertices[tv[1]];
    const Vec3& p2 = mesh.vertices[tv[2]];
    const Vec3& p3 = mesh.vertices[tv[3]];
    const double vol = signed_tet_volume(p0, p1, p2, p3);
    for (const auto& q : rule.points) {
      Vec3 x = q.bary[0] * p0 + q.bary[1] * p1 + q.bary[2] * p2 + q.bary[3] * p3;
      double f = density(x) * q.weight * vol;
      for (int i = 0; i < 4; ++i) b[tv[i]] += f * q.bary[i];
    }
  }
  return b;
}

double l2_error(const Mesh& mesh, const NodalField& field, const ScalarField& exact) {
  const QuadratureRule& rule = quadrature(4);
  double acc = 0.0;
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const auto& tv = mesh.tets[t].v;
    const Vec3& p0 = mesh.vertices[tv[0]];
    const Vec3& p1 = mesh.vertices[tv[1]];
    const Vec3& p2 = mesh.vertices[tv[2]];
    const Vec3& p3 = mesh.vertices[tv[3]];
    const double vol = signed_tet_volume(p0, p1, p2, p3);
    for (const auto& q : rule.points) {
      Vec3 x = q.bary[0] * p0 + q.bary[1] * p1 + q.bary[2] * p2 + q.bary[3] * p3;
      double uh = 0.0;
      for (int i = 0; i < 4; ++i) uh += q.bary[i] * field[tv[i]];
      double diff = uh - exact(x);
      acc += q.weight * vol * diff * diff;
    }
  }
  return std::sqrt(acc);
}

double h1_seminorm_error(const Mesh& mesh, const NodalField& field, const VectorField& exact_grad) {
  const QuadratureRule& rule = quadrature(4);
  double acc = 0.0;
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const auto& tv = mesh.tets[t].v;
    Vec3 gh{0.0, 0.0, 0.0};
    for (int i = 0; i < 4; ++i) gh += field[tv[i]] * g.grad[i];
    const Vec3& p0 = mesh.vertices[tv[0]];
    const Vec3& p1 = mesh.vertices[tv[1]];
    const Vec3& p2 = mesh.vertices[tv[2]];
    const Vec3& p3 = mesh.vertices[tv[3]];
    for (const auto& q : rule.points) {
      Vec3 x = q.bary[0] * p0 + q.bary[1] * p1 + q.bary[2] * p2 + q.bary[3] * p3;
      Vec3 diff = gh - exact_grad(x);
      acc += q.weight * g.volume * dot(diff, diff);
    }
  }
  return std::sqrt(acc);
}

NodalField interpolate(const Mesh& mesh, const ScalarField& f) {
  NodalField out(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) out[v] = f(mesh.vertices[v]);
  return out;
}

TetAssembler::TetAssembler(const Mesh& mesh) {
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.tets.size() * 16 + mesh.vertices.size());
  for (int v = 0; v < mesh.vertex_count(); ++v) triplets.push_back({v, v, 0.0});
  for (const auto& t : mesh.tets)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) triplets.push_back({t.v[i], t.v[j], 0.0});
  skeleton_ = SparseMatrix::from_triplets(mesh.vertex_count(), std::move(triplets));

  slots_.resize(mesh.tets.size());
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const auto& tv = mesh.tets[t].v;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        int k = skeleton_.find(tv[i], tv[j]);
        slots_[t][i * 4 + j] = k;
      }
  }
}

void TetAssembler::add(SparseMatrix& into, int t,
                       const std::array<std::array<double, 4>, 4>& local) const {
  auto& vals = into.values();
  const auto& slot = slots_[t];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) vals[slot[i * 4 + j]] += local[i][j];
}

}  // namespace smpnp
