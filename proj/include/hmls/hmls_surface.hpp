#pragma once

#include <vector>

#include "hmls/mesh.hpp"
#include "hmls/sym_mat3.hpp"

namespace hmls {

enum class SurfaceKernel { CubicBSpline, Gaussian };

/// Point-normal samples on a uniformly parametrized grid: sample (a, b) sits
/// at parameter (a, b), a in [0, nu), b in [0, nv). Periodic directions wrap
/// the kernel support. Every balance parameter must satisfy mu > -1, which
/// keeps the evaluation matrix positive definite wherever the kernel support
/// is nonempty.
struct HermiteSamples {
  int nu = 0;
  int nv = 0;
  bool periodic_u = false;
  bool periodic_v = false;
  std::vector<Vec3> points;   // nu * nv entries, index b * nu + a
  std::vector<Vec3> normals;  // unit
  std::vector<double> mu;     // per sample
  SurfaceKernel kernel = SurfaceKernel::CubicBSpline;
  double support = 2.0;       // one-sided support radius in parameter units
  double sigma = 1.0;         // Gaussian width (unused by the B-spline kernel)
};

void validate(const HermiteSamples& samples);

/// One-dimensional kernel value at parameter offset t.
double kernel_weight(const HermiteSamples& samples, double t);

/// Evaluates the moving-constant fit at parameter (u, v):
/// p(u,v) = [sum w_j M_j]^-1 sum w_j M_j p_j with M_j = I + mu_j n_j n_j^T
/// and tensor-product weights w_j. Throws NumericError on empty support.
Vec3 evaluate(const HermiteSamples& samples, double u, double v);

/// Evaluates on an eval_nu x eval_nv parameter grid and triangulates the
/// result, closing seams along periodic directions.
TriMesh sample_surface(const HermiteSamples& samples, int eval_nu, int eval_nv);

/// Point-normal grid sampled from a torus (z axis, tube radius minor_radius,
/// ring radius major_radius), with a constant balance parameter.
HermiteSamples make_torus_samples(int major_count, int minor_count,
                                  double major_radius, double minor_radius,
                                  double mu);

}  // namespace hmls
