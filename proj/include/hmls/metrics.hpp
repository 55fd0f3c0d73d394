#pragma once

#include <cstdint>
#include <vector>

#include "hmls/mesh.hpp"

namespace hmls {

struct ErrorReport {
  std::vector<double> per_vertex;  // displacement magnitudes
  double mean = 0.0;
  double max = 0.0;
  double rms = 0.0;
  int count = 0;
};

/// Per-vertex ||a_i - b_i|| plus aggregates. Throws MeshError when the vertex
/// counts differ.
ErrorReport displacement_report(const TriMesh& a, const TriMesh& b);

/// Exact closest point on triangle (a, b, c) to p.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c);

struct SignedDistanceMap {
  std::vector<double> values;  // one per query vertex
  std::vector<Rgb> colors;     // cyan (negative) / green (zero) / purple (positive)
};

/// Distance from every query vertex to the target surface: min over target
/// triangles of the exact point-triangle distance, signed by the target
/// normal interpolated at the closest point.
SignedDistanceMap signed_distance_map(const TriMesh& query, const TriMesh& target);

struct CurvatureField {
  std::vector<double> values;          // signed mean curvature
  std::vector<std::uint8_t> flagged;   // boundary / zero-area / non-manifold vertices
  std::vector<Rgb> colors;             // blue (lowest) to red (highest)
};

/// Discrete mean curvature from the cotangent Laplacian and the Voronoi-mixed
/// vertex area, signed by the vertex normal direction.
CurvatureField mean_curvature(const TriMesh& mesh);

/// Zero-anchored diverging ramp: negative values fade green -> cyan, positive
/// green -> purple. Endpoints sit at the 5th/95th percentiles so outliers do
/// not flatten the map.
std::vector<Rgb> signed_color_ramp(const std::vector<double>& values);

/// Linear blue -> red ramp between the 5th/95th percentiles, skipping flagged
/// entries (they render gray).
std::vector<Rgb> linear_color_ramp(const std::vector<double>& values,
                                   const std::vector<std::uint8_t>& flagged);

}  // namespace hmls
