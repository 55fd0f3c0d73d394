#include "hmls/hmls_surface.hpp"

#include <cmath>
#include <string>

#include "hmls/errors.hpp"

namespace hmls {

namespace {

double bspline3(double t) {
  const double u = std::abs(t);
  if (u < 1.0) return (4.0 - 6.0 * u * u + 3.0 * u * u * u) / 6.0;
  if (u < 2.0) {
    const double s = 2.0 - u;
    return s * s * s / 6.0;
  }
  return 0.0;
}

// parameter offset from sample a to query u, wrapped into (-n/2, n/2] for
// periodic directions
double offset(double u, int a, int n, bool periodic) {
  double d = u - static_cast<double>(a);
  if (periodic) {
    const double period = static_cast<double>(n);
    d -= period * std::round(d / period);
  }
  return d;
}

}  // namespace

void validate(const HermiteSamples& samples) {
  if (samples.nu < 1 || samples.nv < 1)
    throw ParamError("sample grid must be at least 1x1");
  const std::size_t n = static_cast<std::size_t>(samples.nu) * samples.nv;
  if (samples.points.size() != n || samples.normals.size() != n ||
      samples.mu.size() != n)
    throw ParamError("sample arrays must match the grid size");
  if (!(samples.support > 0.0)) throw ParamError("kernel support must be positive");
  if (samples.kernel == SurfaceKernel::Gaussian && !(samples.sigma > 0.0))
    throw ParamError("Gaussian kernel width must be positive");
  for (double m : samples.mu)
    if (!(m > -1.0))
      throw ParamError("balance parameter must be > -1, got " + std::to_string(m));
}

double kernel_weight(const HermiteSamples& samples, double t) {
  if (std::abs(t) > samples.support) return 0.0;
  if (samples.kernel == SurfaceKernel::CubicBSpline) return bspline3(t);
  return std::exp(-t * t / (2.0 * samples.sigma * samples.sigma));
}

Vec3 evaluate(const HermiteSamples& samples, double u, double v) {
  SymMat3 m;
  Vec3 rhs;
  double wsum = 0.0;
  for (int b = 0; b < samples.nv; ++b) {
    const double dv = offset(v, b, samples.nv, samples.periodic_v);
    if (std::abs(dv) > samples.support) continue;
    const double wv = kernel_weight(samples, dv);
    if (wv == 0.0) continue;
    for (int a = 0; a < samples.nu; ++a) {
      const double du = offset(u, a, samples.nu, samples.periodic_u);
      if (std::abs(du) > samples.support) continue;
      const double w = wv * kernel_weight(samples, du);
      if (w == 0.0) continue;
      const std::size_t j = static_cast<std::size_t>(b) * samples.nu + a;
      const Vec3& n = samples.normals[j];
      const Vec3& p = samples.points[j];
      m += SymMat3::identity(w);
      m += SymMat3::outer(n, w * samples.mu[j]);
      rhs += w * (p + samples.mu[j] * n * dot(n, p));
      wsum += w;
    }
  }
  if (wsum <= 0.0) throw NumericError("surface evaluation: empty kernel support");
  const auto solved = m.solve(rhs);
  if (!solved) throw NumericError("surface evaluation: singular system");
  return *solved;
}

TriMesh sample_surface(const HermiteSamples& samples, int eval_nu, int eval_nv) {
  validate(samples);
  if (eval_nu < 2 || eval_nv < 2)
    throw ParamError("evaluation grid must be at least 2x2");
  TriMesh out;
  out.vertices.reserve(static_cast<std::size_t>(eval_nu) * eval_nv);
  for (int b = 0; b < eval_nv; ++b) {
    const double v = samples.periodic_v
                         ? static_cast<double>(b) * samples.nv / eval_nv
                         : static_cast<double>(b) * (samples.nv - 1) / (eval_nv - 1);
    for (int a = 0; a < eval_nu; ++a) {
      const double u = samples.periodic_u
                           ? static_cast<double>(a) * samples.nu / eval_nu
                           : static_cast<double>(a) * (samples.nu - 1) / (eval_nu - 1);
      out.vertices.push_back(evaluate(samples, u, v));
    }
  }
  const int cols = samples.periodic_u ? eval_nu : eval_nu - 1;
  const int rows = samples.periodic_v ? eval_nv : eval_nv - 1;
  for (int b = 0; b < rows; ++b) {
    for (int a = 0; a < cols; ++a) {
      const int a1 = (a + 1) % eval_nu;
      const int b1 = (b + 1) % eval_nv;
      const int v00 = b * eval_nu + a;
      const int v10 = b * eval_nu + a1;
      const int v01 = b1 * eval_nu + a;
      const int v11 = b1 * eval_nu + a1;
      out.faces.push_back({v00, v10, v11});
      out.faces.push_back({v00, v11, v01});
    }
  }
  return out;
}

HermiteSamples make_torus_samples(int major_count, int minor_count,
                                  double major_radius, double minor_radius,
                                  double mu) {
  if (major_count < 3 || minor_count < 3)
    throw ParamError("torus sampling needs at least 3 samples per direction");
  if (!(major_radius > minor_radius) || !(minor_radius > 0.0))
    throw ParamError("torus radii must satisfy major > minor > 0");
  HermiteSamples s;
  s.nu = major_count;
  s.nv = minor_count;
  s.periodic_u = true;
  s.periodic_v = true;
  const std::size_t n = static_cast<std::size_t>(major_count) * minor_count;
  s.points.reserve(n);
  s.normals.reserve(n);
  s.mu.assign(n, mu);
  for (int b = 0; b < minor_count; ++b) {
    const double beta = 2.0 * M_PI * b / minor_count;
    for (int a = 0; a < major_count; ++a) {
      const double alpha = 2.0 * M_PI * a / major_count;
      const double ring = major_radius + minor_radius * std::cos(beta);
      s.points.push_back({ring * std::cos(alpha), ring * std::sin(alpha),
                          minor_radius * std::sin(beta)});
      s.normals.push_back({std::cos(beta) * std::cos(alpha),
                           std::cos(beta) * std::sin(alpha), std::sin(beta)});
    }
  }
  return s;
}

}  // namespace hmls
