#pragma once

// Composite rotation sequences under the two canonical NMR systematic
// errors (pulse length, off-resonance), with three figures of merit for the
// realized rotation: average map fidelity, quaternion fidelity, and
// point-to-point fidelity.
//
// Quaternion fidelity here is the absolute quaternion inner product
// |q_u . q_v| (adopted convention; it is phase-free and equals 1 exactly
// when the rotations coincide).

#include <string>
#include <vector>

#include "qfid/channels.hpp"
#include "qfid/fidelity.hpp"
#include "qfid/linalg.hpp"

namespace qfid {

// One hard pulse: a rotation by nominal_angle about an axis in the xy-plane
// at azimuth `phase`.
struct PulseSpec {
  double nominal_angle = 0.0;  // radians, >= 0
  double phase = 0.0;          // radians
};

struct PulseSequence {
  std::vector<PulseSpec> pulses;  // applied in list order; nonempty
  std::string label;
};

// Systematic errors applied uniformly to every pulse of a sequence:
// each rotation angle is scaled by (1 + pulse_length_fraction), and an
// off-resonance ratio f tilts the axis to (cos p, sin p, f)/sqrt(1+f^2)
// while scaling the angle by sqrt(1+f^2).
struct ErrorModel {
  double pulse_length_fraction = 0.0;  // |eps| <= 1
  double off_resonance_fraction = 0.0; // |f| <= 1
};

namespace detail {

inline void validate(const PulseSpec& p) {
  if (!std::isfinite(p.nominal_angle) || !std::isfinite(p.phase) ||
      p.nominal_angle < 0.0)
    throw InvalidState("PulseSpec: nominal_angle must be finite and >= 0");
}

inline void validate(const ErrorModel& e) {
  if (!std::isfinite(e.pulse_length_fraction) ||
      !std::isfinite(e.off_resonance_fraction) ||
      std::abs(e.pulse_length_fraction) > 1.0 ||
      std::abs(e.off_resonance_fraction) > 1.0)
    throw ParameterOutOfRange("ErrorModel: |eps| and |f| must be <= 1");
}

}  // namespace detail

inline Mat2 pulse_unitary(const PulseSpec& p, const ErrorModel& e) {
  detail::validate(p);
  detail::validate(e);
  const double f = e.off_resonance_fraction;
  const double tilt = std::sqrt(1.0 + f * f);
  const Vec3 axis{std::cos(p.phase), std::sin(p.phase), f};
  return su2_rotation(axis, p.nominal_angle * (1.0 + e.pulse_length_fraction) * tilt);
}

// Chronological product: the first pulse in the list acts first, so
// U = U_n ... U_1.
inline Mat2 sequence_unitary(const PulseSequence& s, const ErrorModel& e) {
  if (s.pulses.empty()) throw InvalidState("PulseSequence: empty sequence");
  Mat2 u = Mat2::identity();
  for (const PulseSpec& p : s.pulses) u = pulse_unitary(p, e) * u;
  return u;
}

// |q_u . q_v|; invariant under a global phase of either input.
inline double quaternion_fidelity(const Mat2& u, const Mat2& v) {
  return std::abs(quaternion_from_su2(u).dot(quaternion_from_su2(v)));
}

// Overlap of a fixed target state with the image of a fixed start state,
// e.g. inversion +z -> -z.
inline FidelityValue point_to_point_fidelity(const PulseSequence& s, const ErrorModel& e,
                                             const DensityMatrix& start,
                                             const DensityMatrix& target) {
  if (!start.is_pure() || !target.is_pure())
    throw NotPure("point_to_point_fidelity: start and target must be pure");
  const Mat2 v = sequence_unitary(s, e);
  return make_fidelity(
      (target.matrix() * (v * start.matrix() * v.adjoint())).trace().real());
}

struct SequenceReport {
  Mat2 realized_unitary;
  FidelityValue average_fidelity;   // six-state, vs the ideal target
  double quaternion_fidelity = 0.0; // adopted convention, see header note
  FidelityValue point_to_point;
};

// All three figures of merit computed from the same realized unitary.
inline SequenceReport sequence_report(const PulseSequence& s, const ErrorModel& e,
                                      const TargetMap& ideal_target,
                                      const DensityMatrix& start,
                                      const DensityMatrix& target) {
  if (ideal_target.kind() != TargetMap::Kind::Unitary)
    throw InvalidState("sequence_report: ideal target must be unitary");
  const Mat2 v = sequence_unitary(s, e);
  SequenceReport r;
  r.realized_unitary = v;
  r.average_fidelity =
      average_fidelity_six_state(ideal_target, Channel(KrausChannel::from_unitary(v)));
  r.quaternion_fidelity = quaternion_fidelity(ideal_target.matrix(), v);
  r.point_to_point = point_to_point_fidelity(s, e, start, target);
  return r;
}

// Built-in sequences: the plain 180x inversion and the 90x-180y-90x
// composite inversion.
inline PulseSequence preset_sequence(const std::string& name) {
  const double pi = std::numbers::pi;
  if (name == "plain_180x") return {{{pi, 0.0}}, "plain_180x"};
  if (name == "composite_90x_180y_90x")
    return {{{0.5 * pi, 0.0}, {pi, 0.5 * pi}, {0.5 * pi, 0.0}},
            "composite_90x_180y_90x"};
  throw InvalidState("preset_sequence: unknown preset '" + name + "'");
}

}  // namespace qfid
