#pragma once

#include <cstdint>

#include "hmls/mesh.hpp"

namespace hmls {

enum class NoiseModel {
  GaussianRandomDirection,  // g ~ N(0, sigma^2) along a uniform random direction
  UniformNormalDirection,   // t ~ U(-a, a) along the vertex normal
};

/// Synthetic corruption. The magnitude is expressed in units of the mesh's
/// average edge length; the seed fully determines the output.
struct NoiseSpec {
  NoiseModel model = NoiseModel::GaussianRandomDirection;
  double magnitude_factor = 0.0;
  std::uint64_t seed = 0;
};

TriMesh add_noise(const TriMesh& mesh, const NoiseSpec& spec);

}  // namespace hmls
