#include "hmls/normals.hpp"

#include <algorithm>
#include <cmath>

namespace hmls {

namespace {

// interior angle at corner a of triangle (a, b, c), arccos clamped for
// floating-point safety near degenerate corners
double corner_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 u = normalized(b - a);
  const Vec3 v = normalized(c - a);
  return std::acos(std::clamp(dot(u, v), -1.0, 1.0));
}

}  // namespace

void face_normals(const TriMesh& mesh, std::vector<Vec3>& normals,
                  std::vector<std::uint8_t>& degenerate) {
  const int nf = mesh.face_count();
  normals.assign(nf, Vec3{});
  degenerate.assign(nf, 0);
  for (int f = 0; f < nf; ++f) {
    const auto& t = mesh.faces[f];
    const Vec3 n = cross(mesh.vertices[t[1]] - mesh.vertices[t[0]],
                         mesh.vertices[t[2]] - mesh.vertices[t[0]]);
    const double len = norm(n);
    if (len > 0.0) {
      normals[f] = n / len;
    } else {
      degenerate[f] = 1;
    }
  }
}

NormalField vertex_normals(const TriMesh& mesh, const Adjacency& adj) {
  NormalField field;
  face_normals(mesh, field.face, field.face_degenerate);
  const int nv = mesh.vertex_count();
  field.vertex.assign(nv, Vec3{});
  field.vertex_degenerate.assign(nv, 0);
  for (int i = 0; i < nv; ++i) {
    Vec3 sum{};
    for (int f : adj.vertex_faces[i]) {
      if (field.face_degenerate[f]) continue;  // degenerate faces contribute nothing
      const auto& t = mesh.faces[f];
      const int k = t[0] == i ? 0 : (t[1] == i ? 1 : 2);
      const double angle = corner_angle(mesh.vertices[t[k]],
                                        mesh.vertices[t[(k + 1) % 3]],
                                        mesh.vertices[t[(k + 2) % 3]]);
      sum += angle * field.face[f];
    }
    const double len = norm(sum);
    if (len > 0.0) {
      field.vertex[i] = sum / len;
    } else {
      field.vertex_degenerate[i] = 1;
    }
  }
  return field;
}

}  // namespace hmls
