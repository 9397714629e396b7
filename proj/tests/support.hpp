#pragma once

// Shared test helpers: seeded random targets, channels and states, plus the
// independent oracles the suites check against.  Everything here is
// test-only and stays off the library's implementation paths.

#include <random>

#include "qfid/qfid.hpp"

namespace testsupport {

using namespace qfid;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gaussian(std::mt19937_64& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

// Haar-uniform SU(2) element (uniform unit quaternion) times a random global
// phase, so callers also exercise the det-rescaling paths.
inline Mat2 random_unitary(std::mt19937_64& rng) {
  double q[4];
  double n2 = 0;
  do {
    n2 = 0;
    for (double& v : q) {
      v = gaussian(rng);
      n2 += v * v;
    }
  } while (n2 < 1e-12);
  const double n = std::sqrt(n2);
  const Mat2 su2 = su2_from_quaternion(
      UnitQuaternion::from_components(q[0] / n, q[1] / n, q[2] / n, q[3] / n));
  const double alpha = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return cplx(std::cos(alpha), std::sin(alpha)) * su2;
}

inline UnitQuaternion random_quaternion(std::mt19937_64& rng) {
  return quaternion_from_su2(random_unitary(rng));
}

inline TargetMap random_target(std::mt19937_64& rng, bool anti_unitary) {
  const Mat2 u = random_unitary(rng);
  return anti_unitary ? TargetMap::anti_unitary(u) : TargetMap::unitary(u);
}

inline Mat2 random_mat2(std::mt19937_64& rng) {
  Mat2 m;
  for (cplx& v : m.e) v = cplx(gaussian(rng), gaussian(rng));
  return m;
}

// f(S) for Hermitian positive definite S via the 2x2 spectral decomposition.
template <typename Fn>
Mat2 herm2_apply(const Mat2& s, Fn&& f) {
  const auto [hi, lo] = herm2_eigenvalues(s);
  if (hi - lo <= 1e-14 * std::max(1.0, std::abs(hi)))
    return f(0.5 * (hi + lo)) * Mat2::identity();
  const Mat2 h = 0.5 * (s + s.adjoint());
  const Mat2 p_hi = (1.0 / (hi - lo)) * (h - lo * Mat2::identity());
  return f(hi) * p_hi + f(lo) * (Mat2::identity() - p_hi);
}

// Random 4-operator trace-preserving (hence CP) Kraus set: gaussian blocks
// normalized by S^{-1/2}, S = sum G^dag G.
inline KrausChannel random_kraus_channel(std::mt19937_64& rng, int n_ops = 4) {
  std::vector<Mat2> g;
  Mat2 s = Mat2::zero();
  for (int i = 0; i < n_ops; ++i) {
    g.push_back(random_mat2(rng));
    s = s + g.back().adjoint() * g.back();
  }
  const Mat2 s_inv_sqrt = herm2_apply(s, [](double x) { return 1.0 / std::sqrt(x); });
  std::vector<Mat2> k;
  for (const Mat2& gi : g) k.push_back(gi * s_inv_sqrt);
  return KrausChannel::build(std::move(k));
}

// Random trace-preserving affine map, usually not completely positive:
// rotation * diag(s) * rotation with |s_i| <= 0.9 plus a safe translation,
// so the closed ball maps strictly inside itself.
inline AffineBlochMap random_affine_map(std::mt19937_64& rng) {
  const Mat3 r1 = random_quaternion(rng).rotation_matrix();
  const Mat3 r2 = random_quaternion(rng).rotation_matrix();
  double smax = 0;
  Mat3 d{};
  for (int i = 0; i < 3; ++i) {
    const double s = uniform(rng, -0.9, 0.9);
    d(i, i) = s;
    smax = std::max(smax, std::abs(s));
  }
  const double budget = 0.9 * (1.0 - smax);
  Vec3 t{gaussian(rng), gaussian(rng), gaussian(rng)};
  const double n = t.norm();
  t = n > 0 ? (uniform(rng, 0.0, budget) / n) * t : Vec3{0, 0, 0};
  return AffineBlochMap::build(r1 * d * r2, t);
}

// The canonical trace-preserving map that is positive but not completely
// positive.
inline AffineBlochMap transpose_map() {
  return AffineBlochMap::build(Mat3::diag(1, -1, 1), {0, 0, 0});
}

inline Channel random_channel(std::mt19937_64& rng) {
  if (rng() % 2 == 0) return Channel(random_kraus_channel(rng));
  return Channel(random_affine_map(rng));
}

inline DensityMatrix random_pure_state(std::mt19937_64& rng) {
  const double u = uniform(rng, -1.0, 1.0);
  const double phi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return pure_state(std::acos(u), phi);
}

inline DensityMatrix random_mixed_state(std::mt19937_64& rng) {
  const double r = std::cbrt(uniform(rng, 0.0, 1.0));
  const double u = uniform(rng, -1.0, 1.0);
  const double phi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double st = std::sqrt(1.0 - u * u);
  return bloch_to_density(
      {r * st * std::cos(phi), r * st * std::sin(phi), r * u});
}

// Average fidelity of a unitary channel V.V^dag against a unitary target U,
// derived by hand from the Pauli-basis formula: (2 + |Tr(U^dag V)|^2) / 6.
inline double two_unitary_oracle(const Mat2& u, const Mat2& v) {
  return (2.0 + std::norm((u.adjoint() * v).trace())) / 6.0;
}

}  // namespace testsupport
