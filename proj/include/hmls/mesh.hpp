#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hmls/vec3.hpp"

namespace hmls {

using Rgb = std::array<unsigned char, 3>;

/// Indexed triangle mesh. Faces are vertex-index triples, counterclockwise
/// orientation. Non-manifold and boundary meshes are accepted as-is.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
};

/// Throws MeshError if any face index is out of range or a face repeats a
/// vertex index within itself.
void validate(const TriMesh& mesh);

/// Per-vertex incidence: faces containing the vertex, and the edge-connected
/// 1-ring. Immutable after construction.
struct Adjacency {
  std::vector<std::vector<int>> vertex_faces;
  std::vector<std::vector<int>> vertex_ring;
};

Adjacency build_adjacency(const TriMesh& mesh);

struct MeshStats {
  double average_edge_length = 0.0;
  std::size_t edge_count = 0;
  Vec3 bbox_min, bbox_max;
  int vertex_count = 0;
  int face_count = 0;
};

/// Unique undirected edges derived from the faces, each counted once.
std::vector<std::array<int, 2>> unique_edges(const TriMesh& mesh);

/// Arithmetic mean over unique undirected edges. Throws MeshError when the
/// mesh has no edges.
double average_edge_length(const TriMesh& mesh);

MeshStats compute_stats(const TriMesh& mesh);

/// Order-independent hash of the face list; used to verify that filtering and
/// serialization leave connectivity untouched.
std::uint64_t connectivity_hash(const TriMesh& mesh);

}  // namespace hmls
