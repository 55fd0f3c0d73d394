#include "hmls/mesh.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "hmls/errors.hpp"

namespace hmls {

void validate(const TriMesh& mesh) {
  const int nv = mesh.vertex_count();
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& t = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv)
        throw MeshError("face " + std::to_string(f) + ": vertex index " +
                        std::to_string(t[k]) + " out of range [0," +
                        std::to_string(nv) + ")");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw MeshError("face " + std::to_string(f) +
                      " repeats a vertex index within itself");
  }
}

Adjacency build_adjacency(const TriMesh& mesh) {
  Adjacency adj;
  const int nv = mesh.vertex_count();
  adj.vertex_faces.resize(nv);
  adj.vertex_ring.resize(nv);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto& t = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      adj.vertex_faces[t[k]].push_back(f);
      adj.vertex_ring[t[k]].push_back(t[(k + 1) % 3]);
      adj.vertex_ring[t[k]].push_back(t[(k + 2) % 3]);
    }
  }
  for (auto& ring : adj.vertex_ring) {
    std::sort(ring.begin(), ring.end());
    ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
  }
  // sorted face lists make the adjacency independent of face order on input
  for (auto& faces : adj.vertex_faces) std::sort(faces.begin(), faces.end());
  return adj;
}

std::vector<std::array<int, 2>> unique_edges(const TriMesh& mesh) {
  std::vector<std::array<int, 2>> edges;
  edges.reserve(mesh.faces.size() * 3);
  for (const auto& t : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      edges.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

double average_edge_length(const TriMesh& mesh) {
  const auto edges = unique_edges(mesh);
  if (edges.empty()) throw MeshError("mesh has no edges");
  double sum = 0.0;
  for (const auto& e : edges) sum += distance(mesh.vertices[e[0]], mesh.vertices[e[1]]);
  return sum / static_cast<double>(edges.size());
}

MeshStats compute_stats(const TriMesh& mesh) {
  MeshStats s;
  s.vertex_count = mesh.vertex_count();
  s.face_count = mesh.face_count();
  const auto edges = unique_edges(mesh);
  s.edge_count = edges.size();
  if (!edges.empty()) {
    double sum = 0.0;
    for (const auto& e : edges) sum += distance(mesh.vertices[e[0]], mesh.vertices[e[1]]);
    s.average_edge_length = sum / static_cast<double>(edges.size());
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  s.bbox_min = {inf, inf, inf};
  s.bbox_max = {-inf, -inf, -inf};
  for (const auto& p : mesh.vertices) {
    for (int k = 0; k < 3; ++k) {
      s.bbox_min[k] = std::min(s.bbox_min[k], p[k]);
      s.bbox_max[k] = std::max(s.bbox_max[k], p[k]);
    }
  }
  return s;
}

std::uint64_t connectivity_hash(const TriMesh& mesh) {
  // FNV-1a over the face index stream
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (v >> (8 * byte)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(mesh.vertices.size()));
  mix(static_cast<std::uint64_t>(mesh.faces.size()));
  for (const auto& t : mesh.faces) {
    mix(static_cast<std::uint64_t>(t[0]));
    mix(static_cast<std::uint64_t>(t[1]));
    mix(static_cast<std::uint64_t>(t[2]));
  }
  return h;
}

}  // namespace hmls
