#pragma once

// Qubit states as density matrices and Bloch vectors, plus the canonical
// probe-state sets: the six cardinal states, the paper's four tetrahedral
// states, and rotated octahedra.

#include <string>
#include <vector>

#include "qfid/linalg.hpp"

namespace qfid {

// Bloch coordinates; states live in the closed unit ball, pure states on the
// unit sphere.  The ball constraint is enforced where states are built
// (bloch_to_density), not on the raw vector, so intermediate affine algebra
// can use Vec3 freely.
using BlochVector = Vec3;

class DensityMatrix {
 public:
  // Validates: Hermitian within 1e-10, unit trace within 1e-10, eigenvalues
  // >= -1e-10.
  static DensityMatrix from_matrix(const Mat2& m) {
    if (!m.all_finite() || !m.is_hermitian(1e-10))
      throw InvalidState("DensityMatrix: not Hermitian within 1e-10");
    if (std::abs(m.trace() - cplx(1)) > 1e-10)
      throw InvalidState("DensityMatrix: trace != 1 within 1e-10");
    if (herm2_eigenvalues(m)[1] < -1e-10)
      throw InvalidState("DensityMatrix: negative eigenvalue");
    return DensityMatrix(m);
  }

  const Mat2& matrix() const { return m_; }

  BlochVector bloch() const {
    return {(m_ * Mat2::pauli_x()).trace().real(),
            (m_ * Mat2::pauli_y()).trace().real(),
            (m_ * Mat2::pauli_z()).trace().real()};
  }

  // Tr(rho^2); 1 for pure states, 1/2 for the maximally mixed state.
  double purity() const { return (m_ * m_).trace().real(); }
  bool is_pure(double tol = 1e-10) const { return std::abs(purity() - 1.0) <= tol; }

 private:
  explicit DensityMatrix(const Mat2& m) : m_(m) {}
  friend DensityMatrix bloch_to_density(BlochVector v);
  friend DensityMatrix pure_state(double theta, double phi);

  Mat2 m_;
};

// rho = (I + v.sigma)/2; BlochVectorTooLong if |v|^2 > 1 + 1e-10.
inline DensityMatrix bloch_to_density(BlochVector v) {
  if (!v.all_finite() || v.norm2() > 1.0 + 1e-10)
    throw BlochVectorTooLong("bloch_to_density: |v| > 1");
  const cplx i(0, 1);
  return DensityMatrix({{0.5 * (1.0 + v.z), 0.5 * (v.x - i * v.y),
                         0.5 * (v.x + i * v.y), 0.5 * (1.0 - v.z)}});
}

inline BlochVector density_to_bloch(const DensityMatrix& rho) { return rho.bloch(); }

// Pure state at colatitude theta, azimuth phi:
// (I + sin(theta)cos(phi) sx + sin(theta)sin(phi) sy + cos(theta) sz)/2.
inline DensityMatrix pure_state(double theta, double phi) {
  const double st = std::sin(theta);
  const BlochVector v{st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
  const cplx i(0, 1);
  return DensityMatrix({{0.5 * (1.0 + v.z), 0.5 * (v.x - i * v.y),
                         0.5 * (v.x + i * v.y), 0.5 * (1.0 - v.z)}});
}

inline const DensityMatrix& maximally_mixed_state() {
  static const DensityMatrix rho0 = bloch_to_density({0, 0, 0});
  return rho0;
}

// A weighted set of pure probe states.  Every set built here satisfies
// sum_k w_k rho_k = I/2, the first-moment condition behind the probe-state
// reductions of the average fidelity.
struct ProbeSet {
  std::vector<DensityMatrix> states;
  std::vector<double> weights;
  std::string label;

  static ProbeSet build(std::vector<DensityMatrix> states, std::vector<double> weights,
                        std::string label) {
    if (states.empty() || states.size() != weights.size())
      throw InvalidState("ProbeSet: mismatched states/weights");
    double sum = 0;
    for (double w : weights) {
      if (!(w > 0)) throw InvalidState("ProbeSet: weights must be positive");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw InvalidState("ProbeSet: weights must sum to 1");
    for (const DensityMatrix& s : states)
      if (!s.is_pure()) throw InvalidState("ProbeSet: states must be pure");
    return {std::move(states), std::move(weights), std::move(label)};
  }
};

// The six axial pure states, fixed order (+x, -x, +y, -y, +z, -z), each with
// weight 1/6.  This order is part of the CSV/report contract.
inline ProbeSet cardinal_probe_set() {
  const double w = 1.0 / 6.0;
  return ProbeSet::build(
      {bloch_to_density({1, 0, 0}), bloch_to_density({-1, 0, 0}),
       bloch_to_density({0, 1, 0}), bloch_to_density({0, -1, 0}),
       bloch_to_density({0, 0, 1}), bloch_to_density({0, 0, -1})},
      {w, w, w, w, w, w}, "cardinal");
}

// The four tetrahedral states with sign patterns (+++), (--+), (-+-), (+--),
// each with weight 1/4.
inline ProbeSet tetrahedron_probe_set() {
  const double s = 1.0 / std::sqrt(3.0);
  const double w = 0.25;
  return ProbeSet::build(
      {bloch_to_density({s, s, s}), bloch_to_density({-s, -s, s}),
       bloch_to_density({-s, s, -s}), bloch_to_density({s, -s, -s})},
      {w, w, w, w}, "tetrahedron");
}

// The cardinal octahedron rigidly rotated by q, weights 1/6.
inline ProbeSet rotated_octahedron_probe_set(UnitQuaternion q) {
  const Mat3 r = q.rotation_matrix();
  const BlochVector axes[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                               {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<DensityMatrix> states;
  states.reserve(6);
  for (const BlochVector& v : axes) {
    BlochVector u = r.apply(v);
    const double n = u.norm();
    states.push_back(bloch_to_density((1.0 / n) * u));
  }
  const double w = 1.0 / 6.0;
  return ProbeSet::build(std::move(states), {w, w, w, w, w, w}, "octahedron");
}

}  // namespace qfid
