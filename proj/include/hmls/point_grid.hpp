#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hmls/vec3.hpp"

namespace hmls {

/// Neighborhood of a center point: indices sorted by ascending distance,
/// distance ties broken by ascending index. Contains the center itself
/// (distance 0) unless coincident lower-index points fill the cap first.
struct NeighborSet {
  int center = -1;
  std::vector<int> indices;
  std::vector<double> distances;

  int size() const { return static_cast<int>(indices.size()); }
};

/// Uniform hash grid over an immutable snapshot of point positions.
/// Queries return exactly the brute-force result set: all points with
/// ||p_i - p_j||^2 <= R^2, capped at the m nearest.
class PointIndex {
 public:
  PointIndex(std::vector<Vec3> positions, double cell_hint);

  NeighborSet gather(int center, double radius, int cap) const;

  /// Same query around an arbitrary position; the result's center is -1.
  NeighborSet gather_at(const Vec3& q, double radius, int cap) const;

  const std::vector<Vec3>& positions() const { return positions_; }

 private:
  struct CellHash {
    std::size_t operator()(std::uint64_t key) const {
      // Fibonacci mix; the low bits of packed cell coords are too regular
      return static_cast<std::size_t>(key * 0x9e3779b97f4a7c15ull);
    }
  };

  std::uint64_t cell_key(const Vec3& p) const;

  std::vector<Vec3> positions_;
  double cell_size_ = 1.0;
  std::unordered_map<std::uint64_t, std::vector<int>, CellHash> cells_;
};

}  // namespace hmls
