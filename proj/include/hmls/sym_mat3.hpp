#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "hmls/vec3.hpp"

namespace hmls {

/// Symmetric 3x3 matrix stored as its six unique entries.
/// Used to accumulate the per-vertex filter systems; symmetry is exact by
/// construction, so the accumulated sums stay symmetric bit-for-bit.
struct SymMat3 {
  double xx = 0.0, xy = 0.0, xz = 0.0, yy = 0.0, yz = 0.0, zz = 0.0;

  static SymMat3 identity(double s = 1.0) { return {s, 0.0, 0.0, s, 0.0, s}; }

  /// s * n n^T
  static SymMat3 outer(const Vec3& n, double s = 1.0) {
    return {s * n.x * n.x, s * n.x * n.y, s * n.x * n.z,
            s * n.y * n.y, s * n.y * n.z, s * n.z * n.z};
  }

  SymMat3& operator+=(const SymMat3& r) {
    xx += r.xx; xy += r.xy; xz += r.xz;
    yy += r.yy; yz += r.yz; zz += r.zz;
    return *this;
  }

  SymMat3& operator*=(double s) {
    xx *= s; xy *= s; xz *= s; yy *= s; yz *= s; zz *= s;
    return *this;
  }

  Vec3 mul(const Vec3& v) const {
    return {xx * v.x + xy * v.y + xz * v.z,
            xy * v.x + yy * v.y + yz * v.z,
            xz * v.x + yz * v.y + zz * v.z};
  }

  /// x^T M x
  double quad(const Vec3& v) const {
    return xx * v.x * v.x + yy * v.y * v.y + zz * v.z * v.z +
           2.0 * (xy * v.x * v.y + xz * v.x * v.z + yz * v.y * v.z);
  }

  double max_abs() const {
    return std::max({std::abs(xx), std::abs(xy), std::abs(xz),
                     std::abs(yy), std::abs(yz), std::abs(zz)});
  }

  double frobenius_norm() const {
    return std::sqrt(xx * xx + yy * yy + zz * zz +
                     2.0 * (xy * xy + xz * xz + yz * yz));
  }

  double trace() const { return xx + yy + zz; }

  double determinant() const {
    return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) +
           xz * (xy * yz - yy * xz);
  }

  /// Cholesky solve of M x = b. Fails (nullopt) when a pivot underflows,
  /// i.e. the matrix is not numerically positive definite.
  std::optional<Vec3> solve_cholesky(const Vec3& b) const {
    const double floor = 1e-13 * std::max(max_abs(), 1e-300);
    const double d0 = xx;
    if (d0 <= floor) return std::nullopt;
    const double l00 = std::sqrt(d0);
    const double l10 = xy / l00;
    const double l20 = xz / l00;
    const double d1 = yy - l10 * l10;
    if (d1 <= floor) return std::nullopt;
    const double l11 = std::sqrt(d1);
    const double l21 = (yz - l20 * l10) / l11;
    const double d2 = zz - l20 * l20 - l21 * l21;
    if (d2 <= floor) return std::nullopt;
    const double l22 = std::sqrt(d2);
    // forward then backward substitution
    const double y0 = b.x / l00;
    const double y1 = (b.y - l10 * y0) / l11;
    const double y2 = (b.z - l20 * y0 - l21 * y1) / l22;
    Vec3 x;
    x.z = y2 / l22;
    x.y = (y1 - l21 * x.z) / l11;
    x.x = (y0 - l10 * x.y - l20 * x.z) / l00;
    return x;
  }

  /// Direct solve via adjugate and determinant; works for any invertible
  /// symmetric matrix, positive definite or not.
  std::optional<Vec3> solve_adjugate(const Vec3& b) const {
    const double det = determinant();
    const double scale = std::max(max_abs(), 1e-300);
    if (std::abs(det) <= 1e-40 * scale * scale * scale) return std::nullopt;
    const double a00 = yy * zz - yz * yz;
    const double a01 = xz * yz - xy * zz;
    const double a02 = xy * yz - xz * yy;
    const double a11 = xx * zz - xz * xz;
    const double a12 = xz * xy - xx * yz;
    const double a22 = xx * yy - xy * xy;
    return Vec3{(a00 * b.x + a01 * b.y + a02 * b.z) / det,
                (a01 * b.x + a11 * b.y + a12 * b.z) / det,
                (a02 * b.x + a12 * b.y + a22 * b.z) / det};
  }

  /// Cholesky with adjugate fallback when a pivot underflows.
  std::optional<Vec3> solve(const Vec3& b) const {
    if (auto x = solve_cholesky(b)) return x;
    return solve_adjugate(b);
  }

  /// Smallest eigenvalue, closed form for symmetric 3x3 matrices.
  double min_eigenvalue() const {
    const double p1 = xy * xy + xz * xz + yz * yz;
    if (p1 == 0.0) return std::min({xx, yy, zz});
    const double q = trace() / 3.0;
    const double p2 = (xx - q) * (xx - q) + (yy - q) * (yy - q) +
                      (zz - q) * (zz - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    SymMat3 b = *this;
    b.xx -= q; b.yy -= q; b.zz -= q;
    b *= 1.0 / p;
    const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    // eigenvalues are q + 2p cos(phi + 2k pi/3); k = 1 gives the smallest
    return q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  }
};

inline SymMat3 operator+(SymMat3 a, const SymMat3& b) { return a += b; }
inline SymMat3 operator*(SymMat3 a, double s) { return a *= s; }
inline SymMat3 operator*(double s, SymMat3 a) { return a *= s; }

}  // namespace hmls
