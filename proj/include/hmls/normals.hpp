#pragma once

#include <cstdint>
#include <vector>

#include "hmls/mesh.hpp"

namespace hmls {

/// Unit normals per face and per vertex. Degenerate faces (zero area) get a
/// zero vector and a flag; vertices whose incident faces are all degenerate,
/// or whose angle-weighted sum cancels exactly, are flagged as well.
struct NormalField {
  std::vector<Vec3> face;
  std::vector<std::uint8_t> face_degenerate;
  std::vector<Vec3> vertex;
  std::vector<std::uint8_t> vertex_degenerate;
};

/// Normalized cross product of the edge vectors in face order.
void face_normals(const TriMesh& mesh, std::vector<Vec3>& normals,
                  std::vector<std::uint8_t>& degenerate);

/// Angle-weighted average of incident face normals: the weight of each face
/// is its interior angle at the vertex.
NormalField vertex_normals(const TriMesh& mesh, const Adjacency& adj);

}  // namespace hmls
