#include "hmls/noise.hpp"

#include "hmls/errors.hpp"
#include "hmls/normals.hpp"
#include "hmls/rng.hpp"

namespace hmls {

TriMesh add_noise(const TriMesh& mesh, const NoiseSpec& spec) {
  if (!(spec.magnitude_factor >= 0.0))
    throw ParamError("noise magnitude must be >= 0");
  validate(mesh);
  TriMesh out = mesh;
  if (spec.magnitude_factor == 0.0) return out;

  const double amplitude = spec.magnitude_factor * average_edge_length(mesh);
  Rng rng(spec.seed);
  if (spec.model == NoiseModel::GaussianRandomDirection) {
    for (auto& p : out.vertices) {
      const double g = amplitude * rng.normal();
      p += g * rng.unit_vector();
    }
  } else {
    const NormalField field = vertex_normals(mesh, build_adjacency(mesh));
    for (int i = 0; i < out.vertex_count(); ++i) {
      const double t = rng.uniform(-amplitude, amplitude);
      if (!field.vertex_degenerate[i]) out.vertices[i] += t * field.vertex[i];
    }
  }
  return out;
}

}  // namespace hmls
