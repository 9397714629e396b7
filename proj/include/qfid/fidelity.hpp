#pragma once

// State fidelities and the average-map-fidelity estimators.  The six-state
// estimator is the reference; the Pauli-basis formula, probe-set averages,
// spherical quadrature, and Monte Carlo are independent routes that must
// agree with it (see the verify command and the acceptance suite).

#include <cassert>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "qfid/channels.hpp"
#include "qfid/linalg.hpp"
#include "qfid/states.hpp"

namespace qfid {

// A probability-like overlap.  The raw estimate is kept for cross-estimator
// comparisons; value() clamps to [0, 1] at the output boundary.
struct FidelityValue {
  double raw = 0.0;

  double value() const { return std::clamp(raw, 0.0, 1.0); }
};

inline FidelityValue make_fidelity(double raw) {
  assert(raw >= -1e-12 && raw <= 1.0 + 1e-12);
  return FidelityValue{raw};
}

struct QuadratureSpec {
  int n_theta = 2;  // Gauss-Legendre nodes in cos(theta)
  int n_phi = 4;    // uniform nodes in phi
};

struct MonteCarloSpec {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
};

struct MonteCarloResult {
  FidelityValue fidelity;
  double standard_error = 0.0;
};

// ---------------------------------------------------------------------------
// State fidelities
// ---------------------------------------------------------------------------

// Uhlmann fidelity via the square-root chain (Tr sqrt(sqrt(r1) r2 sqrt(r1)))^2.
inline FidelityValue uhlmann_fidelity_via_sqrt(const DensityMatrix& rho1,
                                               const DensityMatrix& rho2) {
  const Mat2 s1 = herm2_sqrt(rho1.matrix());
  const Mat2 inner = s1 * rho2.matrix() * s1;
  const double tr = herm2_sqrt(inner).trace().real();
  return make_fidelity(tr * tr);
}

// Uhlmann fidelity in the qubit closed form
// F = Tr(r1 r2) + 2 sqrt(det r1 * det r2).
inline FidelityValue uhlmann_fidelity(const DensityMatrix& rho1,
                                      const DensityMatrix& rho2) {
  const double cross = (rho1.matrix() * rho2.matrix()).trace().real();
  const double d1 = std::max(rho1.matrix().det().real(), 0.0);
  const double d2 = std::max(rho2.matrix().det().real(), 0.0);
  const double f = cross + 2.0 * std::sqrt(d1 * d2);
  assert(std::abs(f - uhlmann_fidelity_via_sqrt(rho1, rho2).raw) < 1e-9);
  return make_fidelity(f);
}

// Tr(psi rho) for pure psi; equals the Uhlmann fidelity in that case.
inline FidelityValue pure_overlap_fidelity(const DensityMatrix& psi,
                                           const DensityMatrix& rho) {
  if (!psi.is_pure()) throw NotPure("pure_overlap_fidelity: psi is not pure");
  return make_fidelity((psi.matrix() * rho.matrix()).trace().real());
}

namespace detail {

// Per-state fidelity Tr(T[psi] M[psi]) on a raw pure-state matrix; the inner
// loop of every estimator.
inline double state_fidelity_raw(const TargetMap& t, const Channel& m,
                                 const Mat2& psi) {
  return (t.apply_linear(psi) * m.apply_linear(psi)).trace().real();
}

inline Mat2 pure_state_matrix(double cos_theta, double phi) {
  const double st = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  const double x = st * std::cos(phi);
  const double y = st * std::sin(phi);
  const cplx i(0, 1);
  return {{0.5 * (1.0 + cos_theta), 0.5 * (x - i * y), 0.5 * (x + i * y),
           0.5 * (1.0 - cos_theta)}};
}

}  // namespace detail

inline FidelityValue state_fidelity_under_map(const TargetMap& t, const Channel& m,
                                              const DensityMatrix& psi) {
  if (!psi.is_pure()) throw NotPure("state_fidelity_under_map: psi is not pure");
  return make_fidelity(detail::state_fidelity_raw(t, m, psi.matrix()));
}

// ---------------------------------------------------------------------------
// Average-fidelity estimators
// ---------------------------------------------------------------------------

// Gauss-Legendre nodes and weights on [-1, 1] (weights sum to 2), by Newton
// iteration on the Legendre recurrence.
inline std::vector<std::pair<double, double>> gauss_legendre(int n) {
  if (n < 1) throw ParameterOutOfRange("gauss_legendre: n must be >= 1");
  std::vector<std::pair<double, double>> nw(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2 * j + 1) * x * p2 - j * p3) / (j + 1);
      }
      dp = n * (x * p1 - p2) / (x * x - 1.0);
      const double dx = -p1 / dp;
      x += dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nw[i] = {-x, w};
    nw[n - 1 - i] = {x, w};
  }
  return nw;
}

// Average of Tr(T[psi] M[psi]) over the Bloch sphere: Gauss-Legendre in
// u = cos(theta) times the uniform rule in phi.  The integrand is quadratic
// in the Bloch coordinates, so n_theta >= 2 and n_phi >= 4 are already exact.
inline FidelityValue average_fidelity_quadrature(const TargetMap& t, const Channel& m,
                                                 const QuadratureSpec& q) {
  if (q.n_theta < 2 || q.n_phi < 4)
    throw ParameterOutOfRange("QuadratureSpec: need n_theta >= 2 and n_phi >= 4");
  const auto nodes = gauss_legendre(q.n_theta);
  double sum = 0;
  for (const auto& [u, w] : nodes) {
    double ring = 0;
    for (int k = 0; k < q.n_phi; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / q.n_phi;
      ring += detail::state_fidelity_raw(t, m, detail::pure_state_matrix(u, phi));
    }
    sum += 0.5 * w * ring / q.n_phi;
  }
  return make_fidelity(sum);
}

// Pauli-basis closed form
//   F = 1/2 + 1/3 sum_j Tr(T[sigma_j/2] M[sigma_j/2]),
// with the channel extended to the traceless sigma_j/2 as the difference of
// two state applications M[rho_j] - M[rho_0].
inline FidelityValue average_fidelity_pauli(const TargetMap& t, const Channel& m) {
  if (m.is_kraus()) {
    Mat2 sum = Mat2::zero();
    for (const Mat2& k : m.kraus().operators()) sum = sum + k.adjoint() * k;
    if (max_abs_diff(sum, Mat2::identity()) > 1e-9)
      throw NotTracePreserving("average_fidelity_pauli: channel is not TP");
  }
  const Mat2 m_mixed = m.apply_linear(maximally_mixed_state().matrix());
  double acc = 0.5;
  for (int j = 1; j <= 3; ++j) {
    const Mat2 half_sigma = 0.5 * Mat2::pauli(j);
    const Mat2 rho_j = maximally_mixed_state().matrix() + half_sigma;
    const Mat2 m_diff = m.apply_linear(rho_j) - m_mixed;
    acc += (t.apply_linear(half_sigma) * m_diff).trace().real() / 3.0;
  }
  return make_fidelity(acc);
}

// The headline reduction: the plain average of the six axial state
// fidelities.
inline FidelityValue average_fidelity_six_state(const TargetMap& t, const Channel& m) {
  static const ProbeSet probes = cardinal_probe_set();
  double acc = 0;
  for (const DensityMatrix& rho : probes.states)
    acc += detail::state_fidelity_raw(t, m, rho.matrix());
  return make_fidelity(acc / 6.0);
}

// Weighted probe-set average; exact for any set whose first two Bloch
// moments match the sphere (regular tetrahedra and octahedra).
inline FidelityValue average_fidelity_probe_set(const TargetMap& t, const Channel& m,
                                                const ProbeSet& p) {
  double acc = 0;
  for (std::size_t k = 0; k < p.states.size(); ++k)
    acc += p.weights[k] * detail::state_fidelity_raw(t, m, p.states[k].matrix());
  return make_fidelity(acc);
}

// Haar-uniform Monte Carlo estimate of the sphere average.  Sampling is
// sequential from a single mt19937_64 stream with an explicit 53-bit double
// conversion, so a given seed yields bit-identical results everywhere.
inline MonteCarloResult average_fidelity_monte_carlo(const TargetMap& t,
                                                     const Channel& m,
                                                     const MonteCarloSpec& s) {
  if (s.samples < 1)
    throw ParameterOutOfRange("MonteCarloSpec: need at least one sample");
  std::mt19937_64 rng(s.seed);
  const auto uniform01 = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  double mean = 0, m2 = 0;
  for (std::uint64_t k = 1; k <= s.samples; ++k) {
    const double u = 2.0 * uniform01() - 1.0;
    const double phi = 2.0 * std::numbers::pi * uniform01();
    const double f = detail::state_fidelity_raw(t, m, detail::pure_state_matrix(u, phi));
    const double delta = f - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (f - mean);
  }
  const double n = static_cast<double>(s.samples);
  const double se = s.samples > 1 ? std::sqrt(m2 / (n - 1.0)) / std::sqrt(n) : 0.0;
  return {make_fidelity(mean), se};
}

}  // namespace qfid
