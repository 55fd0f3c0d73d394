#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hmls/mesh.hpp"
#include "hmls/point_grid.hpp"
#include "hmls/sym_mat3.hpp"

namespace hmls {

enum class KernelMode { Anisotropic, Isotropic };
enum class ConstraintMode { Vertex, Centroid };

/// Tunables of the vertex filter. Length-like fields are multiples of the
/// average edge length l_e of the input mesh and are resolved to absolute
/// lengths once, before the first iteration.
struct FilterParams {
  double radius_factor = 2.0;    // R / l_e (ignored in isotropic mode, where R = 2 sigma_r)
  double sigma_s_factor = 0.0;   // sigma_s / l_e; 0 = derive from noise_magnitude_factor
  double sigma_r_factor = 0.0;   // sigma_r / l_e
  KernelMode kernel = KernelMode::Anisotropic;
  int neighbor_cap = 100;        // m, at most this many nearest points per neighborhood
  double gamma = 1000.0;         // line constraint strength
  double eta_factor = 0.001;     // plane-distance floor eta / l_e
  double c_floor = 0.001;        // floor of the normal agreement term
  ConstraintMode constraint = ConstraintMode::Vertex;
  int iterations = 1;
  double noise_magnitude_factor = 0.0;  // declared max noise amplitude / l_e
  int threads = 1;               // 0 = hardware concurrency
};

/// Throws ParamError on an invalid combination.
void validate(const FilterParams& params);

/// Absolute lengths derived from l_e; frozen across iterations so results do
/// not depend on intermediate shrinkage.
struct FilterScales {
  double edge_length = 0.0;  // l_e
  double radius = 0.0;       // neighborhood radius R
  double sigma = 0.0;        // sigma_s (anisotropic) or sigma_r (isotropic)
  double eta = 0.0;          // plane-distance floor
};

FilterScales resolve_scales(double edge_length, const FilterParams& params);

/// Per-pair quantities: clamped normal agreement c_ij, floored symmetrized
/// plane distance d_ij, kernel weight w_ij.
struct PairTerms {
  double c = 0.0;
  double d = 0.0;
  double w = 0.0;
};

PairTerms pair_terms(const Vec3& pi, const Vec3& ni, const Vec3& pj,
                     const Vec3& nj, const FilterScales& scales,
                     const FilterParams& params);

/// Normal curvature along the chord p_i -> p_j estimated by the osculating
/// arc through both points with normal n_i at p_i.
double normal_curvature(const Vec3& pi, const Vec3& ni, const Vec3& pj);

/// Balance parameter mu_i = sum(w d) / sum(w c d) over the given pair terms.
/// The terms must not include the center's self pair; an empty span (isolated
/// vertex) yields the flat-surface value 1. Always finite and >= 1.
double compute_mu(std::span<const PairTerms> terms);

/// Sum of w_j (I + mu n_j n_j^T) over neighbors plus gamma (I - n_c n_c^T);
/// the system matrix of the per-vertex fit. Exposed for property tests.
SymMat3 accumulate_filter_matrix(std::span<const double> weights,
                                 std::span<const Vec3> normals, double mu,
                                 double gamma, const Vec3& center_normal);

/// Samples `trials` random unit vectors x and checks x^T M x > 0 for every
/// one, plus closed-form smallest-eigenvalue positivity.
bool verify_positive_definite(const SymMat3& m, int trials, std::uint64_t seed);

struct VertexResult {
  Vec3 position;
  bool solved = true;
  double mu = 1.0;
};

/// One closed-form vertex update. `anchor` is the line-constraint point p_i*
/// (the vertex itself or its 1-ring centroid). Neighbors with degenerate
/// normals are ignored; a numerically unsolvable system returns the input
/// position with solved = false.
VertexResult filter_vertex(const NeighborSet& neighbors,
                           std::span<const Vec3> positions,
                           std::span<const Vec3> normals,
                           std::span<const std::uint8_t> normal_degenerate,
                           const Vec3& anchor, const FilterScales& scales,
                           const FilterParams& params);

struct IterationStats {
  int iteration = 0;
  double max_displacement = 0.0;
  double seconds = 0.0;
  long long solve_failures = 0;
  long long skipped_vertices = 0;
};

using ProgressSink = std::function<void(const IterationStats&)>;

struct FilterReport {
  std::vector<IterationStats> iterations;
  long long solve_failures = 0;
  long long skipped_vertices = 0;
};

/// Runs `params.iterations` passes: recompute vertex normals, rebuild the
/// spatial index, reposition every vertex from the current positions (Jacobi
/// update), swap. Connectivity is returned untouched.
TriMesh filter_mesh(const TriMesh& mesh, const FilterParams& params,
                    const ProgressSink& progress = {},
                    FilterReport* report = nullptr);

/// Classic lambda|mu smoothing: alternating uniform-Laplacian steps with
/// factors lambda then mu, Jacobi update per step. Baseline for comparisons.
TriMesh taubin_filter(const TriMesh& mesh, double lambda, double mu,
                      int iterations);

}  // namespace hmls
