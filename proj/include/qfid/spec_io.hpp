#pragma once

// JSON input documents for the CLI and the small formatting/file helpers
// shared by the commands.  Structural problems (wrong types, missing fields,
// unknown enum tags) raise ParseError with a "field.path: message"
// diagnostic; numeric-domain violations surface later as the library's own
// error types when the parsed spec is lowered.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "qfid/channels.hpp"
#include "qfid/fidelity.hpp"
#include "qfid/pulses.hpp"

namespace qfid::io {

using nlohmann::json;

enum class EstimatorKind { SixState, Pauli, Tetrahedron, Quadrature, MonteCarlo };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::SixState;
  QuadratureSpec quadrature;                  // n_theta, n_phi
  MonteCarloSpec monte_carlo{100000, 12345};  // samples, seed
};

struct SweepRange {
  double min = 0.0, max = 0.0;
  int steps = 1;
};

struct SweepSpec {
  SweepRange epsilon;
  SweepRange off_resonance;
  std::optional<BlochVector> start;         // default +z
  std::optional<BlochVector> point_target;  // default: ideal image of start
};

struct RunDocument {
  std::optional<TargetMap> target;
  std::optional<ChannelSpec> channel;
  std::optional<PulseSequence> sequence;
  std::optional<SweepSpec> sweep;
  EstimatorSpec estimator;
};

// ---------------------------------------------------------------------------
// Formatting and file helpers
// ---------------------------------------------------------------------------

// 17 significant digits: enough for exact decimal round-trip of any double.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Write via a temp file and rename, so failures never leave partial output.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open output file " + tmp.string());
    out << content;
    if (!out.flush()) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read input file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return text;
}

// ---------------------------------------------------------------------------
// Estimator names
// ---------------------------------------------------------------------------

inline EstimatorKind estimator_from_name(const std::string& name) {
  if (name == "six_state") return EstimatorKind::SixState;
  if (name == "pauli") return EstimatorKind::Pauli;
  if (name == "tetrahedron") return EstimatorKind::Tetrahedron;
  if (name == "quadrature") return EstimatorKind::Quadrature;
  if (name == "monte_carlo") return EstimatorKind::MonteCarlo;
  throw ParseError("estimator.name: unknown estimator '" + name + "'");
}

inline const char* estimator_name(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::SixState: return "six_state";
    case EstimatorKind::Pauli: return "pauli";
    case EstimatorKind::Tetrahedron: return "tetrahedron";
    case EstimatorKind::Quadrature: return "quadrature";
    default: return "monte_carlo";
  }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path + ": " + msg);
}

inline const json& member(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

inline const json* opt_member(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

inline double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

inline int as_count(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

inline std::uint64_t as_u64(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    fail(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

inline std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

inline cplx parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected an [re, im] pair");
  return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
}

inline Mat2 parse_mat2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected a 2x2 matrix");
  Mat2 m;
  for (int r = 0; r < 2; ++r) {
    const json& row = j[r];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != 2) fail(rp, "expected a row of 2 entries");
    for (int c = 0; c < 2; ++c)
      m(r, c) = parse_complex(row[c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline Vec3 parse_vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected a 3-vector");
  return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]"),
          as_number(j[2], path + "[2]")};
}

inline Mat3 parse_mat3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected a 3x3 matrix");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    const json& row = j[r];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != 3) fail(rp, "expected a row of 3 entries");
    for (int c = 0; c < 3; ++c)
      m(r, c) = as_number(row[c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline TargetMap parse_target(const json& j, const std::string& path) {
  TargetMap::Kind kind = TargetMap::Kind::Unitary;
  if (const json* k = opt_member(j, path, "kind")) {
    const std::string s = as_string(*k, path + ".kind");
    if (s == "unitary") kind = TargetMap::Kind::Unitary;
    else if (s == "anti_unitary") kind = TargetMap::Kind::AntiUnitary;
    else fail(path + ".kind", "expected \"unitary\" or \"anti_unitary\"");
  }
  const json* matrix = opt_member(j, path, "matrix");
  const json* axis = opt_member(j, path, "axis");
  if ((matrix != nullptr) == (axis != nullptr))
    fail(path, "expected exactly one of \"matrix\" or \"axis\"+\"angle\"");
  Mat2 u;
  if (matrix) {
    u = parse_mat2(*matrix, path + ".matrix");
  } else {
    const Vec3 ax = parse_vec3(*axis, path + ".axis");
    const double angle = as_number(member(j, path, "angle"), path + ".angle");
    u = su2_rotation(ax, angle);
  }
  return kind == TargetMap::Kind::Unitary ? TargetMap::unitary(u)
                                          : TargetMap::anti_unitary(u);
}

inline ChannelSpec parse_channel(const json& j, const std::string& path) {
  const std::string type = as_string(member(j, path, "type"), path + ".type");
  if (type == "unitary") {
    ChannelSpec::Unitary u;
    u.axis = parse_vec3(member(j, path, "axis"), path + ".axis");
    u.angle = as_number(member(j, path, "angle"), path + ".angle");
    return {u};
  }
  if (type == "named") {
    ChannelSpec::NamedNoise n;
    n.name = as_string(member(j, path, "name"), path + ".name");
    static const char* known[] = {"identity",      "depolarizing", "amplitude_damping",
                                  "phase_damping", "bit_flip",     "phase_flip"};
    bool ok = false;
    for (const char* k : known) ok = ok || n.name == k;
    if (!ok) fail(path + ".name", "unknown channel '" + n.name + "'");
    if (const json* p = opt_member(j, path, "parameter"))
      n.parameter = as_number(*p, path + ".parameter");
    return {n};
  }
  if (type == "kraus") {
    const json& ops = member(j, path, "operators");
    const std::string op_path = path + ".operators";
    if (!ops.is_array() || ops.empty() || ops.size() > 4)
      fail(op_path, "expected 1 to 4 operator matrices");
    ChannelSpec::Kraus k;
    for (std::size_t i = 0; i < ops.size(); ++i)
      k.operators.push_back(parse_mat2(ops[i], op_path + "[" + std::to_string(i) + "]"));
    return {k};
  }
  if (type == "affine") {
    ChannelSpec::Affine a;
    a.a = parse_mat3(member(j, path, "a"), path + ".a");
    a.t = parse_vec3(member(j, path, "t"), path + ".t");
    return {a};
  }
  if (type == "composition") {
    const json& parts = member(j, path, "of");
    const std::string parts_path = path + ".of";
    if (!parts.is_array() || parts.empty())
      fail(parts_path, "expected a nonempty array of channels");
    ChannelSpec::Composition c;
    for (std::size_t i = 0; i < parts.size(); ++i)
      c.parts.push_back(
          parse_channel(parts[i], parts_path + "[" + std::to_string(i) + "]"));
    return {c};
  }
  fail(path + ".type", "unknown channel type '" + type + "'");
}

inline PulseSequence parse_sequence(const json& j, const std::string& path) {
  if (j.is_string()) return preset_sequence(j.get<std::string>());
  const json& pulses = member(j, path, "pulses");
  const std::string pp = path + ".pulses";
  if (!pulses.is_array() || pulses.empty()) fail(pp, "expected a nonempty array");
  PulseSequence s;
  for (std::size_t i = 0; i < pulses.size(); ++i) {
    const json& p = pulses[i];
    const std::string ip = pp + "[" + std::to_string(i) + "]";
    s.pulses.push_back({as_number(member(p, ip, "angle"), ip + ".angle"),
                        as_number(member(p, ip, "phase"), ip + ".phase")});
  }
  if (const json* label = opt_member(j, path, "label"))
    s.label = as_string(*label, path + ".label");
  return s;
}

inline SweepRange parse_range(const json& j, const std::string& path) {
  SweepRange r;
  r.min = as_number(member(j, path, "min"), path + ".min");
  r.max = as_number(member(j, path, "max"), path + ".max");
  r.steps = as_count(member(j, path, "steps"), path + ".steps");
  if (r.steps < 1) fail(path + ".steps", "expected steps >= 1");
  if (r.min > r.max) fail(path, "expected min <= max");
  return r;
}

inline BlochVector parse_pure_bloch(const json& j, const std::string& path) {
  Vec3 v = parse_vec3(j, path);
  const double n = v.norm();
  if (std::abs(n - 1.0) > 1e-6) fail(path, "expected a unit Bloch vector");
  return (1.0 / n) * v;
}

inline SweepSpec parse_sweep(const json& j, const std::string& path) {
  SweepSpec s;
  s.epsilon = parse_range(member(j, path, "epsilon"), path + ".epsilon");
  s.off_resonance =
      parse_range(member(j, path, "off_resonance"), path + ".off_resonance");
  if (const json* v = opt_member(j, path, "start"))
    s.start = parse_pure_bloch(*v, path + ".start");
  if (const json* v = opt_member(j, path, "point_target"))
    s.point_target = parse_pure_bloch(*v, path + ".point_target");
  return s;
}

inline EstimatorSpec parse_estimator(const json& j, const std::string& path) {
  EstimatorSpec e;
  if (const json* n = opt_member(j, path, "name"))
    e.kind = estimator_from_name(as_string(*n, path + ".name"));
  if (const json* v = opt_member(j, path, "n_theta"))
    e.quadrature.n_theta = as_count(*v, path + ".n_theta");
  if (const json* v = opt_member(j, path, "n_phi"))
    e.quadrature.n_phi = as_count(*v, path + ".n_phi");
  if (const json* v = opt_member(j, path, "samples"))
    e.monte_carlo.samples = as_u64(*v, path + ".samples");
  if (const json* v = opt_member(j, path, "seed"))
    e.monte_carlo.seed = as_u64(*v, path + ".seed");
  return e;
}

inline std::pair<int, int> line_column_of(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line, col = 1;
    else ++col;
  }
  return {line, col};
}

}  // namespace detail

inline RunDocument parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column_of(text, e.byte ? e.byte - 1 : 0);
    throw ParseError("line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": malformed JSON (" + e.what() + ")");
  }
  if (!j.is_object()) throw ParseError("document: expected a JSON object");

  RunDocument doc;
  if (const json* t = detail::opt_member(j, "document", "target"))
    doc.target = detail::parse_target(*t, "target");
  if (const json* c = detail::opt_member(j, "document", "channel"))
    doc.channel = detail::parse_channel(*c, "channel");
  if (const json* s = detail::opt_member(j, "document", "sequence"))
    doc.sequence = detail::parse_sequence(*s, "sequence");
  if (const json* s = detail::opt_member(j, "document", "sweep"))
    doc.sweep = detail::parse_sweep(*s, "sweep");
  if (const json* e = detail::opt_member(j, "document", "estimator"))
    doc.estimator = detail::parse_estimator(*e, "estimator");
  return doc;
}

}  // namespace qfid::io
