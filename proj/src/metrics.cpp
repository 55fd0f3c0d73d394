#include "hmls/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "hmls/errors.hpp"
#include "hmls/normals.hpp"
#include "hmls/point_grid.hpp"

namespace hmls {

ErrorReport displacement_report(const TriMesh& a, const TriMesh& b) {
  if (a.vertices.size() != b.vertices.size())
    throw MeshError("displacement report: vertex counts differ (" +
                    std::to_string(a.vertices.size()) + " vs " +
                    std::to_string(b.vertices.size()) + ")");
  ErrorReport r;
  r.count = a.vertex_count();
  r.per_vertex.reserve(a.vertices.size());
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    const double d = distance(a.vertices[i], b.vertices[i]);
    r.per_vertex.push_back(d);
    sum += d;
    sum2 += d * d;
    r.max = std::max(r.max, d);
  }
  if (r.count > 0) {
    r.mean = sum / r.count;
    r.rms = std::sqrt(sum2 / r.count);
  }
  return r;
}

namespace {

Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = squared_norm(ab);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

}  // namespace

// Ericson, Real-Time Collision Detection, 5.1.5; degenerate triangles fall
// back to the nearest of the three edges.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c) {
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = dot(ab, ap);
  const double d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp);
  const double d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;

  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp);
  const double d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0)
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);

  const double denom = va + vb + vc;
  if (!(denom > 0.0)) {
    // zero-area triangle
    Vec3 best = closest_point_on_segment(p, a, b);
    for (const Vec3 q : {closest_point_on_segment(p, b, c),
                         closest_point_on_segment(p, a, c)}) {
      if (squared_norm(p - q) < squared_norm(p - best)) best = q;
    }
    return best;
  }
  const double v = vb / denom;
  const double w = vc / denom;
  return a + v * ab + w * ac;
}

namespace {

struct Percentiles {
  double lo = 0.0;
  double hi = 0.0;
};

Percentiles percentile_5_95(std::vector<double> sorted) {
  Percentiles p;
  if (sorted.empty()) return p;
  std::sort(sorted.begin(), sorted.end());
  const auto at = [&](double q) {
    const auto i = static_cast<std::size_t>(
        std::llround(q * static_cast<double>(sorted.size() - 1)));
    return sorted[std::min(i, sorted.size() - 1)];
  };
  p.lo = at(0.05);
  p.hi = at(0.95);
  return p;
}

Rgb lerp_color(const Rgb& a, const Rgb& b, double t) {
  t = std::clamp(t, 0.0, 1.0);
  Rgb out;
  for (int k = 0; k < 3; ++k)
    out[k] = static_cast<unsigned char>(std::lround(a[k] + t * (b[k] - a[k])));
  return out;
}

constexpr Rgb kPurple{128, 0, 192};
constexpr Rgb kGreen{0, 192, 0};
constexpr Rgb kCyan{0, 192, 192};
constexpr Rgb kBlue{40, 60, 220};
constexpr Rgb kRed{220, 40, 40};
constexpr Rgb kGray{128, 128, 128};

}  // namespace

std::vector<Rgb> signed_color_ramp(const std::vector<double>& values) {
  const Percentiles p = percentile_5_95(values);
  const double pos_span = std::max(p.hi, 0.0);
  const double neg_span = std::max(-p.lo, 0.0);
  std::vector<Rgb> colors;
  colors.reserve(values.size());
  for (double v : values) {
    if (v >= 0.0) {
      colors.push_back(pos_span > 0.0 ? lerp_color(kGreen, kPurple, v / pos_span) : kGreen);
    } else {
      colors.push_back(neg_span > 0.0 ? lerp_color(kGreen, kCyan, -v / neg_span) : kGreen);
    }
  }
  return colors;
}

std::vector<Rgb> linear_color_ramp(const std::vector<double>& values,
                                   const std::vector<std::uint8_t>& flagged) {
  std::vector<double> kept;
  kept.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (flagged.empty() || !flagged[i]) kept.push_back(values[i]);
  const Percentiles p = percentile_5_95(kept);
  const double span = p.hi - p.lo;
  std::vector<Rgb> colors;
  colors.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!flagged.empty() && flagged[i]) {
      colors.push_back(kGray);
    } else {
      colors.push_back(span > 0.0 ? lerp_color(kBlue, kRed, (values[i] - p.lo) / span)
                                  : kGreen);
    }
  }
  return colors;
}

SignedDistanceMap signed_distance_map(const TriMesh& query, const TriMesh& target) {
  if (target.faces.empty()) throw MeshError("signed distance: target has no faces");
  validate(target);
  validate(query);

  const NormalField field = vertex_normals(target, build_adjacency(target));

  // grid over triangle centroids; a query within distance D of a triangle has
  // that triangle's centroid within D + max corner spread
  std::vector<Vec3> centroids;
  centroids.reserve(target.faces.size());
  double max_spread = 0.0;
  for (const auto& t : target.faces) {
    const Vec3 c = (target.vertices[t[0]] + target.vertices[t[1]] +
                    target.vertices[t[2]]) / 3.0;
    centroids.push_back(c);
    for (int k = 0; k < 3; ++k)
      max_spread = std::max(max_spread, distance(c, target.vertices[t[k]]));
  }
  const PointIndex index(centroids, max_spread > 0.0 ? 2.0 * max_spread : 0.0);

  const MeshStats stats = compute_stats(target);
  const double diag = distance(stats.bbox_min, stats.bbox_max);

  auto face_closest = [&](int f, const Vec3& q) {
    const auto& t = target.faces[f];
    return closest_point_on_triangle(q, target.vertices[t[0]],
                                     target.vertices[t[1]],
                                     target.vertices[t[2]]);
  };

  SignedDistanceMap out;
  out.values.reserve(query.vertices.size());
  for (const Vec3& q : query.vertices) {
    // expanding probe: the nearest centroids bound the true distance from
    // above, then one conservative gather captures every candidate triangle
    double upper = std::numeric_limits<double>::infinity();
    const double r0 = std::max(max_spread, diag > 0.0 ? diag / 64.0 : 1.0);
    for (double r = r0; r < 4.0 * (diag + r0); r *= 2.0) {
      const NeighborSet probe = index.gather_at(q, r, 8);
      if (probe.size() == 0) continue;
      for (int f : probe.indices)
        upper = std::min(upper, distance(q, face_closest(f, q)));
      break;
    }

    double best = std::numeric_limits<double>::infinity();
    int best_face = -1;
    Vec3 best_point;
    auto consider = [&](int f) {
      const Vec3 cp = face_closest(f, q);
      const double d2 = squared_norm(q - cp);
      if (d2 < best) {
        best = d2;
        best_face = f;
        best_point = cp;
      }
    };
    if (std::isfinite(upper)) {
      const NeighborSet candidates = index.gather_at(
          q, upper + max_spread + r0 * 1e-12, target.face_count());
      for (int f : candidates.indices) consider(f);
    }
    if (best_face < 0) {
      for (int f = 0; f < target.face_count(); ++f) consider(f);
    }
    const auto& t = target.faces[best_face];
    // barycentric coordinates of the closest point for normal interpolation
    const Vec3 e0 = target.vertices[t[1]] - target.vertices[t[0]];
    const Vec3 e1 = target.vertices[t[2]] - target.vertices[t[0]];
    const Vec3 d = best_point - target.vertices[t[0]];
    const double a00 = squared_norm(e0), a01 = dot(e0, e1), a11 = squared_norm(e1);
    const double b0 = dot(d, e0), b1 = dot(d, e1);
    const double det = a00 * a11 - a01 * a01;
    double v = 0.0, w = 0.0;
    if (det > 0.0) {
      v = (a11 * b0 - a01 * b1) / det;
      w = (a00 * b1 - a01 * b0) / det;
    }
    const Vec3 n = normalized((1.0 - v - w) * field.vertex[t[0]] +
                              v * field.vertex[t[1]] + w * field.vertex[t[2]]);
    const double dist = std::sqrt(best);
    const double sign = dot(q - best_point, n) < 0.0 ? -1.0 : 1.0;
    out.values.push_back(sign * dist);
  }
  out.colors = signed_color_ramp(out.values);
  return out;
}

CurvatureField mean_curvature(const TriMesh& mesh) {
  validate(mesh);
  const Adjacency adj = build_adjacency(mesh);
  const NormalField field = vertex_normals(mesh, adj);
  const int nv = mesh.vertex_count();

  CurvatureField out;
  out.values.assign(nv, 0.0);
  out.flagged.assign(nv, 0);

  // boundary / non-manifold detection: count faces per undirected edge
  std::map<std::pair<int, int>, int> edge_faces;
  for (const auto& t : mesh.faces)
    for (int k = 0; k < 3; ++k) {
      const int a = std::min(t[k], t[(k + 1) % 3]);
      const int b = std::max(t[k], t[(k + 1) % 3]);
      ++edge_faces[{a, b}];
    }
  for (const auto& [edge, count] : edge_faces)
    if (count != 2) {
      out.flagged[edge.first] = 1;
      out.flagged[edge.second] = 1;
    }

  std::vector<Vec3> laplacian(nv);
  std::vector<double> mixed_area(nv, 0.0);
  for (const auto& t : mesh.faces) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    const double area2 = norm(cross(b - a, c - a));  // twice the area
    if (area2 == 0.0) {
      for (int k = 0; k < 3; ++k) out.flagged[t[k]] = 1;
      continue;
    }
    // cotangents of the three corner angles
    double cot[3];
    double corner_dot[3];
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh.vertices[t[k]];
      const Vec3& q = mesh.vertices[t[(k + 1) % 3]];
      const Vec3& r = mesh.vertices[t[(k + 2) % 3]];
      corner_dot[k] = dot(q - p, r - p);
      cot[k] = corner_dot[k] / area2;
    }
    // cot at corner k weights the opposite edge (k+1, k+2)
    for (int k = 0; k < 3; ++k) {
      const int i = t[(k + 1) % 3];
      const int j = t[(k + 2) % 3];
      const Vec3 diff = mesh.vertices[i] - mesh.vertices[j];
      laplacian[i] += 0.5 * cot[k] * diff;
      laplacian[j] -= 0.5 * cot[k] * diff;
    }
    // Voronoi-mixed area
    const double area = area2 / 2.0;
    const bool obtuse0 = corner_dot[0] < 0.0;
    const bool obtuse1 = corner_dot[1] < 0.0;
    const bool obtuse2 = corner_dot[2] < 0.0;
    if (obtuse0 || obtuse1 || obtuse2) {
      for (int k = 0; k < 3; ++k) {
        const bool obtuse_here = corner_dot[k] < 0.0;
        mixed_area[t[k]] += obtuse_here ? area / 2.0 : area / 4.0;
      }
    } else {
      for (int k = 0; k < 3; ++k) {
        const double l2_next = squared_norm(mesh.vertices[t[(k + 1) % 3]] - mesh.vertices[t[k]]);
        const double l2_prev = squared_norm(mesh.vertices[t[(k + 2) % 3]] - mesh.vertices[t[k]]);
        mixed_area[t[k]] += (l2_next * cot[(k + 2) % 3] + l2_prev * cot[(k + 1) % 3]) / 8.0;
      }
    }
  }

  for (int i = 0; i < nv; ++i) {
    if (adj.vertex_faces[i].empty() || field.vertex_degenerate[i]) {
      out.flagged[i] = 1;
      continue;
    }
    if (!(mixed_area[i] > 0.0)) {
      out.flagged[i] = 1;
      continue;
    }
    const double magnitude = norm(laplacian[i]) / (2.0 * mixed_area[i]);
    const double sign = dot(laplacian[i], field.vertex[i]) < 0.0 ? -1.0 : 1.0;
    out.values[i] = sign * magnitude;
  }
  out.colors = linear_color_ramp(out.values, out.flagged);
  return out;
}

}  // namespace hmls
