#pragma once

// Small dense linear algebra for one qubit: complex 2x2 matrices, real
// 3-vectors and 3x3 matrices for the Bloch picture, 4x4 Hermitian
// eigenvalues for Choi spectra, and unit quaternions for SU(2) rotations.
// Everything is a plain immutable value; every function is pure.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "qfid/errors.hpp"

namespace qfid {

using cplx = std::complex<double>;

inline bool is_finite(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// ---------------------------------------------------------------------------
// Real 3-vectors and 3x3 matrices (Bloch picture)
// ---------------------------------------------------------------------------

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }

  double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(Vec3 o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  bool all_finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

struct Mat3 {
  // Row-major entries.
  std::array<double, 9> e{};

  static Mat3 identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
  static Mat3 diag(double a, double b, double c) {
    return {{a, 0, 0, 0, b, 0, 0, 0, c}};
  }

  double operator()(int r, int c) const { return e[3 * r + c]; }
  double& operator()(int r, int c) { return e[3 * r + c]; }

  Vec3 apply(Vec3 v) const {
    return {e[0] * v.x + e[1] * v.y + e[2] * v.z,
            e[3] * v.x + e[4] * v.y + e[5] * v.z,
            e[6] * v.x + e[7] * v.y + e[8] * v.z};
  }

  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
        r(i, j) = s;
      }
    return r;
  }

  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  double det() const {
    return e[0] * (e[4] * e[8] - e[5] * e[7]) - e[1] * (e[3] * e[8] - e[5] * e[6]) +
           e[2] * (e[3] * e[7] - e[4] * e[6]);
  }

  bool all_finite() const {
    return std::all_of(e.begin(), e.end(), [](double v) { return std::isfinite(v); });
  }
};

// ---------------------------------------------------------------------------
// Complex 2x2 matrices
// ---------------------------------------------------------------------------

struct Mat2 {
  // Row-major entries (a00, a01, a10, a11).
  std::array<cplx, 4> e{};

  static Mat2 zero() { return {}; }
  static Mat2 identity() { return {{cplx(1), cplx(0), cplx(0), cplx(1)}}; }
  static Mat2 pauli_x() { return {{cplx(0), cplx(1), cplx(1), cplx(0)}}; }
  static Mat2 pauli_y() {
    return {{cplx(0), cplx(0, -1), cplx(0, 1), cplx(0)}};
  }
  static Mat2 pauli_z() { return {{cplx(1), cplx(0), cplx(0), cplx(-1)}}; }
  // sigma_0 .. sigma_3 with sigma_0 = identity.
  static Mat2 pauli(int j) {
    switch (j) {
      case 0: return identity();
      case 1: return pauli_x();
      case 2: return pauli_y();
      default: return pauli_z();
    }
  }

  cplx operator()(int r, int c) const { return e[2 * r + c]; }
  cplx& operator()(int r, int c) { return e[2 * r + c]; }

  friend Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {{a.e[0] + b.e[0], a.e[1] + b.e[1], a.e[2] + b.e[2], a.e[3] + b.e[3]}};
  }
  friend Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {{a.e[0] - b.e[0], a.e[1] - b.e[1], a.e[2] - b.e[2], a.e[3] - b.e[3]}};
  }
  friend Mat2 operator*(cplx s, const Mat2& a) {
    return {{s * a.e[0], s * a.e[1], s * a.e[2], s * a.e[3]}};
  }
  friend Mat2 operator*(double s, const Mat2& a) { return cplx(s) * a; }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {{a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
             a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]}};
  }

  cplx trace() const { return e[0] + e[3]; }
  cplx det() const { return e[0] * e[3] - e[1] * e[2]; }

  Mat2 adjoint() const {
    return {{std::conj(e[0]), std::conj(e[2]), std::conj(e[1]), std::conj(e[3])}};
  }
  // Entrywise complex conjugate in the computational basis.
  Mat2 conjugate() const {
    return {{std::conj(e[0]), std::conj(e[1]), std::conj(e[2]), std::conj(e[3])}};
  }

  double max_abs() const {
    double m = 0;
    for (cplx v : e) m = std::max(m, std::abs(v));
    return m;
  }

  friend double max_abs_diff(const Mat2& a, const Mat2& b) {
    return (a - b).max_abs();
  }

  bool is_hermitian(double tol) const {
    return std::abs(e[0].imag()) <= tol && std::abs(e[3].imag()) <= tol &&
           std::abs(e[1] - std::conj(e[2])) <= tol;
  }
  bool is_unitary(double tol) const {
    return max_abs_diff(adjoint() * (*this), identity()) <= tol;
  }
  bool all_finite() const {
    return std::all_of(e.begin(), e.end(), [](cplx v) { return is_finite(v); });
  }
};

inline Mat2 mat2_mul(const Mat2& a, const Mat2& b) { return a * b; }
inline cplx mat2_trace(const Mat2& a) { return a.trace(); }

// Eigenvalues of a Hermitian 2x2 matrix, descending.  Only the Hermitian
// part of the input is consulted.
inline std::array<double, 2> herm2_eigenvalues(const Mat2& a) {
  const double p = a.e[0].real();
  const double r = a.e[3].real();
  const cplx q = 0.5 * (a.e[1] + std::conj(a.e[2]));
  const double mid = 0.5 * (p + r);
  const double rad = std::hypot(0.5 * (p - r), std::abs(q));
  return {mid + rad, mid - rad};
}

// Hermitian PSD square root via the closed-form 2x2 eigendecomposition.
// Eigenvalues in [-1e-10, 0) are clamped to zero; anything lower is a
// genuine NotPsd error.
inline Mat2 herm2_sqrt(const Mat2& a) {
  constexpr double kClamp = 1e-10;
  if (!a.is_hermitian(1e-10)) throw NotPsd("herm2_sqrt: input is not Hermitian");
  const Mat2 h = 0.5 * (a + a.adjoint());
  auto [hi, lo] = herm2_eigenvalues(h);
  if (lo < -kClamp) throw NotPsd("herm2_sqrt: negative eigenvalue");
  hi = std::max(hi, 0.0);
  lo = std::max(lo, 0.0);
  const double gap = hi - lo;
  if (gap <= 1e-15 * std::max(1.0, hi)) {
    // Scalar matrix within roundoff.
    return std::sqrt(0.5 * (hi + lo)) * Mat2::identity();
  }
  // P_hi = (h - lo*I)/(hi - lo); sqrt = sqrt(hi) P_hi + sqrt(lo) (I - P_hi).
  const Mat2 p_hi = (1.0 / gap) * (h - lo * Mat2::identity());
  return std::sqrt(hi) * p_hi + std::sqrt(lo) * (Mat2::identity() - p_hi);
}

// ---------------------------------------------------------------------------
// Complex 4x4 matrices (Choi carriers)
// ---------------------------------------------------------------------------

struct Mat4 {
  // Row-major entries.
  std::array<cplx, 16> e{};

  cplx operator()(int r, int c) const { return e[4 * r + c]; }
  cplx& operator()(int r, int c) { return e[4 * r + c]; }

  cplx trace() const { return e[0] + e[5] + e[10] + e[15]; }

  bool is_hermitian(double tol) const {
    for (int r = 0; r < 4; ++r)
      for (int c = r; c < 4; ++c)
        if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
    return true;
  }
  bool all_finite() const {
    return std::all_of(e.begin(), e.end(), [](cplx v) { return is_finite(v); });
  }
};

// Eigenvalues of a 4x4 Hermitian matrix, descending, by cyclic Jacobi
// rotations iterated until the off-diagonal norm drops below 1e-13.
// Unconditionally convergent for Hermitian input; NoConvergence after 100
// sweeps signals a malformed matrix.
inline std::array<double, 4> herm4_eigenvalues(const Mat4& m) {
  if (!m.is_hermitian(1e-12))
    throw NotHermitian("herm4_eigenvalues: input is not Hermitian within 1e-12");

  Mat4 a = m;
  // Work on the exact Hermitian part so the diagonal stays real.
  for (int r = 0; r < 4; ++r) {
    a(r, r) = cplx(a(r, r).real(), 0.0);
    for (int c = r + 1; c < 4; ++c) {
      const cplx v = 0.5 * (a(r, c) + std::conj(a(c, r)));
      a(r, c) = v;
      a(c, r) = std::conj(v);
    }
  }

  const auto off_norm = [&a] {
    double s = 0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_norm() < 1e-13) {
      std::array<double, 4> ev{a(0, 0).real(), a(1, 1).real(), a(2, 2).real(),
                               a(3, 3).real()};
      std::sort(ev.begin(), ev.end(), std::greater<>());
      return ev;
    }
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const double r = std::abs(a(p, q));
        if (r < 1e-300) continue;
        const cplx phase = a(p, q) / r;
        // tan(theta) root with |theta| <= pi/4 that zeroes a(p,q).
        const double tau = (a(p, p).real() - a(q, q).real()) / (2.0 * r);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Columns: col_p' = c*col_p + s*conj(phase)*col_q,
        //          col_q' = -s*phase*col_p + c*col_q.
        for (int k = 0; k < 4; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp + s * std::conj(phase) * akq;
          a(k, q) = -s * phase * akp + c * akq;
        }
        for (int k = 0; k < 4; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + s * phase * aqk;
          a(q, k) = -s * std::conj(phase) * apk + c * aqk;
        }
        a(p, q) = cplx(0);
        a(q, p) = cplx(0);
        a(p, p) = cplx(a(p, p).real(), 0.0);
        a(q, q) = cplx(a(q, q).real(), 0.0);
      }
    }
  }
  throw NoConvergence("herm4_eigenvalues: no convergence after 100 sweeps");
}

// ---------------------------------------------------------------------------
// Unit quaternions and SU(2)
// ---------------------------------------------------------------------------

// Convention: q = (w, x, y, z) represents the rotation by angle t about the
// unit axis n with w = cos(t/2) and (x,y,z) = sin(t/2) n, matching the SU(2)
// element u = w*I - i (x sx + y sy + z sz).  Quaternions double-cover
// rotations; q and -q act identically on Bloch vectors.
struct UnitQuaternion {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  static UnitQuaternion identity() { return {}; }

  static UnitQuaternion from_components(double w, double x, double y, double z) {
    const double n2 = w * w + x * x + y * y + z * z;
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > 1e-12)
      throw InvalidState("UnitQuaternion: components are not unit length");
    return {w, x, y, z};
  }

  static UnitQuaternion from_axis_angle(Vec3 axis, double angle) {
    const double n = axis.norm();
    if (!(n > 0) || !axis.all_finite())
      throw InvalidState("UnitQuaternion: zero or non-finite axis");
    const double s = std::sin(0.5 * angle) / n;
    return {std::cos(0.5 * angle), s * axis.x, s * axis.y, s * axis.z};
  }

  double dot(UnitQuaternion o) const {
    return w * o.w + x * o.x + y * o.y + z * o.z;
  }

  // Hamilton product; (a*b) rotates by b first, then a.
  friend UnitQuaternion operator*(UnitQuaternion a, UnitQuaternion b) {
    UnitQuaternion q{a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                     a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                     a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                     a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
    const double n = std::sqrt(q.dot(q));
    return {q.w / n, q.x / n, q.y / n, q.z / n};
  }

  Mat3 rotation_matrix() const {
    return {{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
             2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
             2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
  }

  Vec3 rotate(Vec3 v) const { return rotation_matrix().apply(v); }
};

// exp(-i angle/2 n.sigma) for a (not necessarily normalized) axis n.
inline Mat2 su2_rotation(Vec3 axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0) || !axis.all_finite())
    throw InvalidState("su2_rotation: zero or non-finite axis");
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle) / n;
  const cplx i(0, 1);
  return {{cplx(c) - i * (s * axis.z), -i * (s * axis.x) - (s * axis.y),
           -i * (s * axis.x) + (s * axis.y), cplx(c) + i * (s * axis.z)}};
}

inline Mat2 su2_from_quaternion(UnitQuaternion q) {
  const cplx i(0, 1);
  return {{cplx(q.w) - i * q.z, -i * q.x - q.y, -i * q.x + q.y, cplx(q.w) + i * q.z}};
}

// Quaternion of a 2x2 unitary: rescale by a phase so det = 1, then read off
// u = w*I - i (x sx + y sy + z sz).  Sign convention: w >= 0; a w of zero
// (within 1e-12) breaks the tie by the first nonzero of (x, y, z).
inline UnitQuaternion quaternion_from_su2(const Mat2& u) {
  if (!u.all_finite() || !u.is_unitary(1e-10))
    throw NotUnitary("quaternion_from_su2: input is not unitary within 1e-10");
  const cplx root = std::sqrt(u.det());
  const Mat2 v = (cplx(1) / root) * u;
  double w = 0.5 * (v.e[0] + v.e[3]).real();
  double z = 0.5 * (v.e[3] - v.e[0]).imag();
  double x = -0.5 * (v.e[1] + v.e[2]).imag();
  double y = 0.5 * (v.e[2] - v.e[1]).real();
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n, x /= n, y /= n, z /= n;
  bool flip = w < 0;
  if (std::abs(w) <= 1e-12) {
    w = 0;
    if (x != 0) flip = x < 0;
    else if (y != 0) flip = y < 0;
    else flip = z < 0;
  }
  if (flip) w = -w, x = -x, y = -y, z = -z;
  return {w, x, y, z};
}

}  // namespace qfid
