#include "hmls/point_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hmls/errors.hpp"

namespace hmls {

namespace {

// packed 21-bit signed cell coordinates
std::uint64_t pack(std::int64_t cx, std::int64_t cy, std::int64_t cz) {
  constexpr std::int64_t bias = 1ll << 20;
  constexpr std::uint64_t mask = (1ull << 21) - 1;
  return ((static_cast<std::uint64_t>(cx + bias) & mask) << 42) |
         ((static_cast<std::uint64_t>(cy + bias) & mask) << 21) |
         (static_cast<std::uint64_t>(cz + bias) & mask);
}

std::int64_t cell_coord(double v, double cell) {
  return static_cast<std::int64_t>(std::floor(v / cell));
}

}  // namespace

PointIndex::PointIndex(std::vector<Vec3> positions, double cell_hint)
    : positions_(std::move(positions)) {
  if (positions_.empty()) throw ParamError("PointIndex needs at least one point");
  if (cell_hint > 0.0 && std::isfinite(cell_hint)) {
    cell_size_ = cell_hint;
  } else {
    Vec3 lo = positions_[0], hi = positions_[0];
    for (const auto& p : positions_) {
      for (int k = 0; k < 3; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }
    const double diag = norm(hi - lo);
    cell_size_ = diag > 0.0 ? diag / 32.0 : 1.0;
  }
  cells_.reserve(positions_.size());
  for (int i = 0; i < static_cast<int>(positions_.size()); ++i)
    cells_[cell_key(positions_[i])].push_back(i);
}

std::uint64_t PointIndex::cell_key(const Vec3& p) const {
  return pack(cell_coord(p.x, cell_size_), cell_coord(p.y, cell_size_),
              cell_coord(p.z, cell_size_));
}

NeighborSet PointIndex::gather(int center, double radius, int cap) const {
  if (center < 0 || center >= static_cast<int>(positions_.size()))
    throw ParamError("gather: vertex id out of range");
  NeighborSet out = gather_at(positions_[center], radius, cap);
  out.center = center;
  return out;
}

NeighborSet PointIndex::gather_at(const Vec3& q, double radius, int cap) const {
  if (!(radius > 0.0)) throw ParamError("gather: radius must be positive");
  if (cap < 1) throw ParamError("gather: neighbor cap must be >= 1");

  const double r2 = radius * radius;
  const std::int64_t x0 = cell_coord(q.x - radius, cell_size_);
  const std::int64_t x1 = cell_coord(q.x + radius, cell_size_);
  const std::int64_t y0 = cell_coord(q.y - radius, cell_size_);
  const std::int64_t y1 = cell_coord(q.y + radius, cell_size_);
  const std::int64_t z0 = cell_coord(q.z - radius, cell_size_);
  const std::int64_t z1 = cell_coord(q.z + radius, cell_size_);

  std::vector<std::pair<double, int>> hits;  // (squared distance, index)
  for (std::int64_t cx = x0; cx <= x1; ++cx)
    for (std::int64_t cy = y0; cy <= y1; ++cy)
      for (std::int64_t cz = z0; cz <= z1; ++cz) {
        const auto it = cells_.find(pack(cx, cy, cz));
        if (it == cells_.end()) continue;
        for (int j : it->second) {
          const double d2 = squared_norm(positions_[j] - q);
          if (d2 <= r2) hits.emplace_back(d2, j);
        }
      }

  std::sort(hits.begin(), hits.end());
  if (static_cast<int>(hits.size()) > cap) hits.resize(cap);

  NeighborSet out;
  out.indices.reserve(hits.size());
  out.distances.reserve(hits.size());
  for (const auto& [d2, j] : hits) {
    out.indices.push_back(j);
    out.distances.push_back(std::sqrt(d2));
  }
  return out;
}

}  // namespace hmls
