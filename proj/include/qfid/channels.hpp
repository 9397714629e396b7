#pragma once

// Target maps (unitary or anti-unitary) and general trace-preserving qubit
// maps in Kraus, affine-Bloch, and Choi form, with conversions, a complete
// positivity test, and the standard named noise channels.
//
// Trace preservation is the only structural requirement on a channel here;
// complete positivity is checked and reported separately, never required.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qfid/linalg.hpp"
#include "qfid/states.hpp"

namespace qfid {

// ---------------------------------------------------------------------------
// Ideal target: a unitary, or an anti-unitary written in Wigner form as a
// unitary following computational-basis conjugation.
// ---------------------------------------------------------------------------

class TargetMap {
 public:
  enum class Kind { Unitary, AntiUnitary };

  static TargetMap unitary(const Mat2& u) { return TargetMap(u, Kind::Unitary); }
  static TargetMap anti_unitary(const Mat2& u) {
    return TargetMap(u, Kind::AntiUnitary);
  }
  static TargetMap rotation(Vec3 axis, double angle, Kind kind = Kind::Unitary) {
    return TargetMap(su2_rotation(axis, angle), kind);
  }

  const Mat2& matrix() const { return u_; }
  Kind kind() const { return kind_; }

  // Real-linear action on Hermitian operands: U X U^dag, with an entrywise
  // conjugation of X first in the anti-unitary case.
  Mat2 apply_linear(const Mat2& x) const {
    const Mat2& in = kind_ == Kind::AntiUnitary ? x.conjugate() : x;
    return u_ * in * u_.adjoint();
  }

 private:
  TargetMap(const Mat2& u, Kind kind) : u_(u), kind_(kind) {
    if (!u.all_finite() || !u.is_unitary(1e-10))
      throw NotUnitary("TargetMap: matrix is not unitary within 1e-10");
  }

  Mat2 u_;
  Kind kind_;
};

inline DensityMatrix apply_target(const TargetMap& t, const DensityMatrix& rho) {
  return DensityMatrix::from_matrix(t.apply_linear(rho.matrix()));
}

// ---------------------------------------------------------------------------
// Kraus form
// ---------------------------------------------------------------------------

class KrausChannel {
 public:
  // Validates trace preservation: sum K_i^dag K_i = I within 1e-9.  At least
  // one operator; compositions may carry more than four.
  static KrausChannel build(std::vector<Mat2> operators) {
    if (operators.empty())
      throw InvalidState("KrausChannel: needs at least one operator");
    Mat2 sum = Mat2::zero();
    for (const Mat2& k : operators) {
      if (!k.all_finite()) throw InvalidState("KrausChannel: non-finite operator");
      sum = sum + k.adjoint() * k;
    }
    if (max_abs_diff(sum, Mat2::identity()) > 1e-9)
      throw NotTracePreserving("KrausChannel: sum K^dag K != I within 1e-9");
    return KrausChannel(std::move(operators));
  }

  static KrausChannel identity() { return build({Mat2::identity()}); }
  static KrausChannel from_unitary(const Mat2& u) {
    if (!u.is_unitary(1e-10))
      throw NotUnitary("KrausChannel: matrix is not unitary within 1e-10");
    return build({u});
  }

  const std::vector<Mat2>& operators() const { return ops_; }

  Mat2 apply_linear(const Mat2& x) const {
    Mat2 out = Mat2::zero();
    for (const Mat2& k : ops_) out = out + k * x * k.adjoint();
    return out;
  }

 private:
  explicit KrausChannel(std::vector<Mat2> ops) : ops_(std::move(ops)) {}
  std::vector<Mat2> ops_;
};

// ---------------------------------------------------------------------------
// Affine Bloch form: v -> a v + t.  Trace preservation is built into the
// parameterization; positivity on states (ball into ball) is validated on a
// deterministic sphere sample.  Complete positivity is NOT implied.
// ---------------------------------------------------------------------------

class AffineBlochMap {
 public:
  static AffineBlochMap build(const Mat3& a, Vec3 t) {
    if (!a.all_finite() || !t.all_finite())
      throw InvalidState("AffineBlochMap: non-finite entries");
    for (const Vec3& v : sample_sphere()) {
      if ((a.apply(v) + t).norm() > 1.0 + 1e-9)
        throw InvalidState("AffineBlochMap: image leaves the Bloch ball");
    }
    return AffineBlochMap(a, t);
  }

  const Mat3& linear() const { return a_; }
  Vec3 translation() const { return t_; }

  Vec3 apply_bloch(Vec3 v) const { return a_.apply(v) + t_; }

  // Complex-linear extension via the Pauli coefficients of x: the trace
  // component is preserved, the traceless components transform by (a, t).
  Mat2 apply_linear(const Mat2& x) const {
    const cplx c0 = x.trace();
    const cplx cx = (x * Mat2::pauli_x()).trace();
    const cplx cy = (x * Mat2::pauli_y()).trace();
    const cplx cz = (x * Mat2::pauli_z()).trace();
    const cplx ox = a_(0, 0) * cx + a_(0, 1) * cy + a_(0, 2) * cz + c0 * t_.x;
    const cplx oy = a_(1, 0) * cx + a_(1, 1) * cy + a_(1, 2) * cz + c0 * t_.y;
    const cplx oz = a_(2, 0) * cx + a_(2, 1) * cy + a_(2, 2) * cz + c0 * t_.z;
    const cplx i(0, 1);
    return {{0.5 * (c0 + oz), 0.5 * (ox - i * oy), 0.5 * (ox + i * oy),
             0.5 * (c0 - oz)}};
  }

 private:
  AffineBlochMap(const Mat3& a, Vec3 t) : a_(a), t_(t) {}

  static const std::vector<Vec3>& sample_sphere() {
    static const std::vector<Vec3> pts = [] {
      std::vector<Vec3> v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                             {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
      constexpr int n = 250;
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (int k = 0; k < n; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        v.push_back({r * std::cos(golden * k), r * std::sin(golden * k), z});
      }
      return v;
    }();
    return pts;
  }

  Mat3 a_;
  Vec3 t_;
};

// ---------------------------------------------------------------------------
// Channel: either representation behind one apply surface
// ---------------------------------------------------------------------------

class Channel {
 public:
  Channel(KrausChannel k) : rep_(std::move(k)) {}
  Channel(AffineBlochMap a) : rep_(std::move(a)) {}

  static Channel identity() { return Channel(KrausChannel::identity()); }

  bool is_kraus() const { return std::holds_alternative<KrausChannel>(rep_); }
  const KrausChannel& kraus() const { return std::get<KrausChannel>(rep_); }
  const AffineBlochMap& affine() const { return std::get<AffineBlochMap>(rep_); }

  Mat2 apply_linear(const Mat2& x) const {
    return std::visit([&x](const auto& m) { return m.apply_linear(x); }, rep_);
  }

 private:
  std::variant<KrausChannel, AffineBlochMap> rep_;
};

inline DensityMatrix apply_channel(const Channel& m, const DensityMatrix& rho) {
  if (!m.is_kraus()) {
    // Bloch path; absorb the map's 1e-9 ball tolerance by renormalizing
    // vectors that land just outside.
    Vec3 v = m.affine().apply_bloch(rho.bloch());
    const double n = v.norm();
    if (n > 1.0) {
      if (n > 1.0 + 1e-9)
        throw InvalidState("apply_channel: output outside the Bloch ball");
      v = (1.0 / n) * v;
    }
    return bloch_to_density(v);
  }
  Mat2 out = m.kraus().apply_linear(rho.matrix());
  const double tr = out.trace().real();
  // Absorb the channel's 1e-9 trace-preservation slack.
  if (std::abs(tr - 1.0) > 1e-12) out = (1.0 / tr) * out;
  return DensityMatrix::from_matrix(out);
}

inline DensityMatrix apply_channel(const KrausChannel& m, const DensityMatrix& rho) {
  return apply_channel(Channel(m), rho);
}

// a_jk = Tr(sigma_j M[sigma_k])/2, t_j = Tr(sigma_j M[I])/2.
inline AffineBlochMap kraus_to_affine(const KrausChannel& m) {
  Mat3 a;
  const Mat2 mid = m.apply_linear(Mat2::identity());
  const Vec3 t{0.5 * (Mat2::pauli_x() * mid).trace().real(),
               0.5 * (Mat2::pauli_y() * mid).trace().real(),
               0.5 * (Mat2::pauli_z() * mid).trace().real()};
  for (int k = 1; k <= 3; ++k) {
    const Mat2 img = m.apply_linear(Mat2::pauli(k));
    for (int j = 1; j <= 3; ++j)
      a(j - 1, k - 1) = 0.5 * (Mat2::pauli(j) * img).trace().real();
  }
  return AffineBlochMap::build(a, t);
}

inline AffineBlochMap to_affine(const Channel& m) {
  return m.is_kraus() ? kraus_to_affine(m.kraus()) : m.affine();
}

// ---------------------------------------------------------------------------
// Choi form; Tr(c) = 2 normalization so complete positivity is a plain
// eigenvalue sign test.
// ---------------------------------------------------------------------------

struct ChoiMatrix {
  Mat4 c;
};

namespace detail {

// Choi matrix of any linear map given by its action on the matrix units:
// c = sum_mn M[E_mn] (x) E_mn, row index 2p+q (p: output, q: reference).
template <typename Fn>
Mat4 choi_from_action(Fn&& act) {
  Mat4 c;
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) {
      Mat2 e = Mat2::zero();
      e(m, n) = cplx(1);
      const Mat2 img = act(e);
      for (int p = 0; p < 2; ++p)
        for (int r = 0; r < 2; ++r) c(2 * p + m, 2 * r + n) += img(p, r);
    }
  // Symmetrize away rounding noise so the Hermitian invariant is exact.
  for (int r = 0; r < 4; ++r)
    for (int s = r; s < 4; ++s) {
      const cplx v = 0.5 * (c(r, s) + std::conj(c(s, r)));
      c(r, s) = v;
      c(s, r) = std::conj(v);
    }
  return c;
}

}  // namespace detail

inline ChoiMatrix kraus_to_choi(const KrausChannel& m) {
  return {detail::choi_from_action([&m](const Mat2& e) { return m.apply_linear(e); })};
}

inline ChoiMatrix choi_of(const Channel& m) {
  return {detail::choi_from_action([&m](const Mat2& e) { return m.apply_linear(e); })};
}

inline double choi_min_eigenvalue(const ChoiMatrix& c) {
  return herm4_eigenvalues(c.c)[3];
}

inline bool choi_is_cp(const ChoiMatrix& c) { return choi_min_eigenvalue(c) >= -1e-9; }

// ---------------------------------------------------------------------------
// Named noise channels (operator lists documented in the CLI manual)
// ---------------------------------------------------------------------------

inline KrausChannel named_channel(const std::string& name, double parameter) {
  if (!std::isfinite(parameter) || parameter < 0.0 || parameter > 1.0)
    throw ParameterOutOfRange("named_channel: parameter must lie in [0, 1]");
  const double p = parameter;
  if (name == "identity") return KrausChannel::identity();
  if (name == "depolarizing") {
    if (p == 0.0) return KrausChannel::identity();
    const double c = std::sqrt(p / 4.0);
    return KrausChannel::build({std::sqrt(1.0 - 0.75 * p) * Mat2::identity(),
                                c * Mat2::pauli_x(), c * Mat2::pauli_y(),
                                c * Mat2::pauli_z()});
  }
  if (name == "amplitude_damping") {
    if (p == 0.0) return KrausChannel::identity();
    return KrausChannel::build(
        {{{cplx(1), cplx(0), cplx(0), cplx(std::sqrt(1.0 - p))}},
         {{cplx(0), cplx(std::sqrt(p)), cplx(0), cplx(0)}}});
  }
  if (name == "phase_damping") {
    if (p == 0.0) return KrausChannel::identity();
    return KrausChannel::build(
        {{{cplx(1), cplx(0), cplx(0), cplx(std::sqrt(1.0 - p))}},
         {{cplx(0), cplx(0), cplx(0), cplx(std::sqrt(p))}}});
  }
  if (name == "bit_flip") {
    if (p == 0.0) return KrausChannel::identity();
    return KrausChannel::build(
        {std::sqrt(1.0 - p) * Mat2::identity(), std::sqrt(p) * Mat2::pauli_x()});
  }
  if (name == "phase_flip") {
    if (p == 0.0) return KrausChannel::identity();
    return KrausChannel::build(
        {std::sqrt(1.0 - p) * Mat2::identity(), std::sqrt(p) * Mat2::pauli_z()});
  }
  throw UnknownChannel("named_channel: unknown channel '" + name + "'");
}

// Kraus set {L_j K_i} of (then o first).  The product set is kept as-is, so
// composing n-op with m-op channels yields n*m operators.
inline KrausChannel compose_channels(const KrausChannel& first,
                                     const KrausChannel& then) {
  std::vector<Mat2> ops;
  ops.reserve(first.operators().size() * then.operators().size());
  for (const Mat2& l : then.operators())
    for (const Mat2& k : first.operators()) ops.push_back(l * k);
  return KrausChannel::build(std::move(ops));
}

// (a2, t2) o (a1, t1) = (a2 a1, a2 t1 + t2).
inline AffineBlochMap compose_affine(const AffineBlochMap& first,
                                     const AffineBlochMap& then) {
  return AffineBlochMap::build(then.linear() * first.linear(),
                               then.linear().apply(first.translation()) +
                                   then.translation());
}

// ---------------------------------------------------------------------------
// ChannelSpec: the in-memory form of a channel description in a CLI input
// file, lowered to a runtime Channel on demand.
// ---------------------------------------------------------------------------

struct ChannelSpec {
  struct Unitary {
    Vec3 axis;
    double angle = 0.0;
  };
  struct NamedNoise {
    std::string name;
    double parameter = 0.0;
  };
  struct Kraus {
    std::vector<Mat2> operators;  // 1..4 operators at the input boundary
  };
  struct Affine {
    Mat3 a;
    Vec3 t;
  };
  struct Composition {
    std::vector<ChannelSpec> parts;  // applied in list order
  };

  std::variant<Unitary, NamedNoise, Kraus, Affine, Composition> spec;
};

inline Channel lower(const ChannelSpec& cs) {
  struct Visitor {
    Channel operator()(const ChannelSpec::Unitary& u) const {
      return Channel(KrausChannel::from_unitary(su2_rotation(u.axis, u.angle)));
    }
    Channel operator()(const ChannelSpec::NamedNoise& n) const {
      return Channel(named_channel(n.name, n.parameter));
    }
    Channel operator()(const ChannelSpec::Kraus& k) const {
      if (k.operators.size() > 4)
        throw InvalidState("ChannelSpec: at most 4 Kraus operators");
      return Channel(KrausChannel::build(k.operators));
    }
    Channel operator()(const ChannelSpec::Affine& a) const {
      return Channel(AffineBlochMap::build(a.a, a.t));
    }
    Channel operator()(const ChannelSpec::Composition& c) const {
      if (c.parts.empty())
        throw InvalidState("ChannelSpec: empty composition");
      Channel acc = lower(c.parts.front());
      for (std::size_t i = 1; i < c.parts.size(); ++i) {
        Channel next = lower(c.parts[i]);
        if (acc.is_kraus() && next.is_kraus()) {
          acc = Channel(compose_channels(acc.kraus(), next.kraus()));
        } else {
          acc = Channel(compose_affine(to_affine(acc), to_affine(next)));
        }
      }
      return acc;
    }
  };
  return std::visit(Visitor{}, cs.spec);
}

}  // namespace qfid
