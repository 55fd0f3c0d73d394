#include "hmls/filter.hpp"

#include <atomic>
#include <chrono>
#include <cmath>

#include "hmls/errors.hpp"
#include "hmls/normals.hpp"
#include "hmls/parallel.hpp"
#include "hmls/rng.hpp"

namespace hmls {

void validate(const FilterParams& params) {
  if (params.iterations < 1) throw ParamError("iterations must be >= 1");
  if (params.neighbor_cap < 1) throw ParamError("neighbor cap m must be >= 1");
  if (!(params.gamma >= 0.0)) throw ParamError("gamma must be >= 0");
  if (!(params.eta_factor > 0.0)) throw ParamError("eta must be positive");
  if (!(params.c_floor > 0.0)) throw ParamError("c floor must be positive");
  if (params.threads < 0) throw ParamError("threads must be >= 0");
  if (params.kernel == KernelMode::Isotropic) {
    if (!(params.sigma_r_factor > 0.0))
      throw ParamError("isotropic kernel requires sigma_r > 0");
  } else {
    if (!(params.radius_factor > 0.0))
      throw ParamError("neighborhood radius must be positive");
    if (!(params.sigma_s_factor > 0.0) && !(params.noise_magnitude_factor > 0.0))
      throw ParamError("anisotropic kernel requires sigma_s > 0 (or a declared noise magnitude)");
  }
}

FilterScales resolve_scales(double edge_length, const FilterParams& params) {
  if (!(edge_length > 0.0)) throw ParamError("average edge length must be positive");
  FilterScales s;
  s.edge_length = edge_length;
  s.eta = params.eta_factor * edge_length;
  if (params.kernel == KernelMode::Isotropic) {
    s.sigma = params.sigma_r_factor * edge_length;
    s.radius = 2.0 * s.sigma;  // neighborhood sphere of the isotropic kernel
  } else {
    // default sigma_s: half of the declared maximum noise magnitude
    s.sigma = params.sigma_s_factor > 0.0
                  ? params.sigma_s_factor * edge_length
                  : 0.5 * params.noise_magnitude_factor * edge_length;
    s.radius = params.radius_factor * edge_length;
  }
  return s;
}

PairTerms pair_terms(const Vec3& pi, const Vec3& ni, const Vec3& pj,
                     const Vec3& nj, const FilterScales& scales,
                     const FilterParams& params) {
  PairTerms t;
  t.c = std::max(dot(ni, nj), params.c_floor);
  t.d = std::max(0.5 * (std::abs(dot(ni, pi - pj)) + std::abs(dot(nj, pj - pi))),
                 scales.eta);
  const double arg = params.kernel == KernelMode::Isotropic
                         ? squared_norm(pi - pj)
                         : t.d * t.d;
  t.w = std::exp(-arg / (2.0 * scales.sigma * scales.sigma));
  return t;
}

double normal_curvature(const Vec3& pi, const Vec3& ni, const Vec3& pj) {
  const double d2 = squared_norm(pi - pj);
  if (d2 == 0.0) throw ParamError("normal_curvature: coincident points");
  return 2.0 * dot(ni, pi - pj) / d2;
}

double compute_mu(std::span<const PairTerms> terms) {
  if (terms.empty()) return 1.0;
  double num = 0.0;
  double den = 0.0;
  for (const auto& t : terms) {
    num += t.w * t.d;
    den += t.w * t.c * t.d;
  }
  return num / den;  // den > 0: every factor is floored away from zero
}

SymMat3 accumulate_filter_matrix(std::span<const double> weights,
                                 std::span<const Vec3> normals, double mu,
                                 double gamma, const Vec3& center_normal) {
  SymMat3 m;
  double wsum = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    wsum += weights[j];
    m += SymMat3::outer(normals[j], weights[j] * mu);
  }
  m += SymMat3::identity(wsum + gamma);
  m += SymMat3::outer(center_normal, -gamma);
  return m;
}

bool verify_positive_definite(const SymMat3& m, int trials, std::uint64_t seed) {
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    if (!(m.quad(rng.unit_vector()) > 0.0)) return false;
  }
  return m.min_eigenvalue() > 0.0;
}

VertexResult filter_vertex(const NeighborSet& neighbors,
                           std::span<const Vec3> positions,
                           std::span<const Vec3> normals,
                           std::span<const std::uint8_t> normal_degenerate,
                           const Vec3& anchor, const FilterScales& scales,
                           const FilterParams& params) {
  const int i = neighbors.center;
  const Vec3 pi = positions[i];
  const Vec3 ni = normals[i];
  VertexResult out;
  out.position = pi;
  if (!normal_degenerate.empty() && normal_degenerate[i]) {
    out.solved = false;
    return out;
  }

  // mu is computed from the proper pairs only; the self pair (d at the eta
  // floor, c = 1) would spoil the exact sphere/cylinder recovery that the
  // curvature-matched mu provides.
  static thread_local std::vector<PairTerms> terms;
  static thread_local std::vector<int> kept;
  terms.clear();
  kept.clear();
  for (int j : neighbors.indices) {
    if (j == i) continue;
    if (!normal_degenerate.empty() && normal_degenerate[j]) continue;
    terms.push_back(pair_terms(pi, ni, positions[j], normals[j], scales, params));
    kept.push_back(j);
  }
  out.mu = compute_mu(terms);

  const PairTerms self = pair_terms(pi, ni, pi, ni, scales, params);
  SymMat3 m = SymMat3::identity(self.w + params.gamma);
  m += SymMat3::outer(ni, self.w * out.mu);
  Vec3 rhs = self.w * (pi + out.mu * ni * dot(ni, pi));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const double w = terms[k].w;
    const Vec3& pj = positions[kept[k]];
    const Vec3& nj = normals[kept[k]];
    m += SymMat3::identity(w);
    m += SymMat3::outer(nj, w * out.mu);
    rhs += w * (pj + out.mu * nj * dot(nj, pj));
  }
  // line constraint M_i* = gamma (I - n_i n_i^T); the gamma I part is already
  // in the accumulator
  m += SymMat3::outer(ni, -params.gamma);
  rhs += params.gamma * (anchor - ni * dot(ni, anchor));

  if (const auto solved = m.solve(rhs)) {
    out.position = *solved;
  } else {
    out.solved = false;
  }
  return out;
}

TriMesh filter_mesh(const TriMesh& mesh, const FilterParams& params,
                    const ProgressSink& progress, FilterReport* report) {
  validate(params);
  validate(mesh);
  const FilterScales scales = resolve_scales(average_edge_length(mesh), params);
  const Adjacency adj = build_adjacency(mesh);

  TriMesh current = mesh;
  std::vector<Vec3> next(current.vertices.size());
  if (report) *report = {};

  for (int iter = 0; iter < params.iterations; ++iter) {
    const auto t0 = std::chrono::steady_clock::now();
    const NormalField field = vertex_normals(current, adj);
    const PointIndex index(current.vertices, scales.radius);
    std::atomic<long long> failures{0};
    std::atomic<long long> skipped{0};

    const std::vector<Vec3>& pos = current.vertices;
    parallel_for(current.vertex_count(), params.threads, [&](int begin, int end) {
      for (int i = begin; i < end; ++i) {
        if (field.vertex_degenerate[i]) {
          next[i] = pos[i];
          skipped.fetch_add(1, std::memory_order_relaxed);
          continue;
        }
        Vec3 anchor = pos[i];
        if (params.constraint == ConstraintMode::Centroid &&
            !adj.vertex_ring[i].empty()) {
          Vec3 sum{};
          for (int j : adj.vertex_ring[i]) sum += pos[j];
          anchor = sum / static_cast<double>(adj.vertex_ring[i].size());
        }
        const NeighborSet nb = index.gather(i, scales.radius, params.neighbor_cap);
        const VertexResult res =
            filter_vertex(nb, pos, field.vertex, field.vertex_degenerate,
                          anchor, scales, params);
        next[i] = res.position;
        if (!res.solved) failures.fetch_add(1, std::memory_order_relaxed);
      }
    });

    double max_disp = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i)
      max_disp = std::max(max_disp, distance(next[i], current.vertices[i]));
    current.vertices.swap(next);

    IterationStats stats;
    stats.iteration = iter + 1;
    stats.max_displacement = max_disp;
    stats.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0).count();
    stats.solve_failures = failures.load();
    stats.skipped_vertices = skipped.load();
    if (progress) progress(stats);
    if (report) {
      report->iterations.push_back(stats);
      report->solve_failures += stats.solve_failures;
      report->skipped_vertices += stats.skipped_vertices;
    }
  }
  return current;
}

TriMesh taubin_filter(const TriMesh& mesh, double lambda, double mu,
                      int iterations) {
  if (!(lambda > 0.0)) throw ParamError("taubin: lambda must be positive");
  if (!(mu <= 0.0)) throw ParamError("taubin: mu must be <= 0");
  if (iterations < 1) throw ParamError("taubin: iterations must be >= 1");
  validate(mesh);
  const Adjacency adj = build_adjacency(mesh);

  TriMesh current = mesh;
  std::vector<Vec3> next(current.vertices.size());
  auto step = [&](double factor) {
    const std::vector<Vec3>& pos = current.vertices;
    for (int i = 0; i < current.vertex_count(); ++i) {
      const auto& ring = adj.vertex_ring[i];
      if (ring.empty()) {
        next[i] = pos[i];
        continue;
      }
      Vec3 centroid{};
      for (int j : ring) centroid += pos[j];
      centroid /= static_cast<double>(ring.size());
      next[i] = pos[i] + factor * (centroid - pos[i]);
    }
    current.vertices.swap(next);
  };
  for (int iter = 0; iter < iterations; ++iter) {
    step(lambda);
    step(mu);
  }
  return current;
}

}  // namespace hmls
