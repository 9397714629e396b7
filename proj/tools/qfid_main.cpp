// qfid: average fidelity between an ideal single-qubit operation and an
// arbitrary trace-preserving map, plus composite-pulse error sweeps.
//
// Exit codes: 0 success, 2 input parse error, 3 invariant violation
// (e.g. non-trace-preserving channel), 4 estimator disagreement in `verify`.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qfid/qfid.hpp"
#include "qfid/spec_io.hpp"

namespace {

using namespace qfid;

constexpr double kVerifyTolerance = 1e-8;

struct CommonOptions {
  std::string input_path;
  std::string output_path;
  std::string estimator;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

io::RunDocument load_document(const CommonOptions& opt) {
  io::RunDocument doc = io::parse_document(io::read_file(opt.input_path));
  if (!opt.estimator.empty())
    doc.estimator.kind = io::estimator_from_name(opt.estimator);
  if (opt.seed) doc.estimator.monte_carlo.seed = *opt.seed;
  return doc;
}

Channel lower_with_cp_advisory(const ChannelSpec& spec, bool quiet) {
  Channel ch = lower(spec);
  // Trace preservation is required; complete positivity is advisory only.
  const double min_eig = choi_min_eigenvalue(choi_of(ch));
  if (min_eig < -1e-9 && !quiet)
    std::cerr << "warning: channel is not completely positive (min Choi eigenvalue "
              << io::format_g17(min_eig) << "); proceeding, trace preservation "
              << "is sufficient for the average fidelity\n";
  return ch;
}

void emit(const CommonOptions& opt, const std::string& text) {
  if (opt.output_path.empty()) {
    std::cout << text;
  } else {
    io::write_file_atomic(opt.output_path, text);
  }
}

FidelityValue run_estimator(io::EstimatorKind kind, const TargetMap& target,
                            const Channel& channel, const io::EstimatorSpec& spec,
                            double* standard_error = nullptr) {
  switch (kind) {
    case io::EstimatorKind::SixState:
      return average_fidelity_six_state(target, channel);
    case io::EstimatorKind::Pauli:
      return average_fidelity_pauli(target, channel);
    case io::EstimatorKind::Tetrahedron:
      return average_fidelity_probe_set(target, channel, tetrahedron_probe_set());
    case io::EstimatorKind::Quadrature:
      return average_fidelity_quadrature(target, channel, spec.quadrature);
    default: {
      const MonteCarloResult r =
          average_fidelity_monte_carlo(target, channel, spec.monte_carlo);
      if (standard_error) *standard_error = r.standard_error;
      return r.fidelity;
    }
  }
}

int cmd_fidelity(const CommonOptions& opt) {
  const io::RunDocument doc = load_document(opt);
  if (!doc.target || !doc.channel)
    throw ParseError("document: 'target' and 'channel' are required for fidelity");
  const Channel channel = lower_with_cp_advisory(*doc.channel, opt.quiet);

  double se = -1.0;
  const FidelityValue fv =
      run_estimator(doc.estimator.kind, *doc.target, channel, doc.estimator, &se);

  std::ostringstream out;
  out << "estimator: " << io::estimator_name(doc.estimator.kind) << "\n";
  out << "average_fidelity: " << io::format_g17(fv.value()) << "\n";
  if (doc.estimator.kind == io::EstimatorKind::MonteCarlo)
    out << "standard_error: " << io::format_g17(se) << "\n";
  // The six per-cardinal-state fidelities are the experimentally measurable
  // quantities; print them always.
  static const char* labels[6] = {"+x", "-x", "+y", "-y", "+z", "-z"};
  const ProbeSet cardinal = cardinal_probe_set();
  for (int j = 0; j < 6; ++j) {
    const FidelityValue f =
        state_fidelity_under_map(*doc.target, channel, cardinal.states[j]);
    out << "per_state_fidelity[" << labels[j] << "]: " << io::format_g17(f.value())
        << "\n";
  }
  emit(opt, out.str());
  return 0;
}

int cmd_verify(const CommonOptions& opt) {
  const io::RunDocument doc = load_document(opt);
  if (!doc.target || !doc.channel)
    throw ParseError("document: 'target' and 'channel' are required for verify");
  const Channel channel = lower_with_cp_advisory(*doc.channel, opt.quiet);

  const double six = average_fidelity_six_state(*doc.target, channel).raw;
  // A fixed generic rotation; any rigid rotation of the octahedron must give
  // the same average.
  const UnitQuaternion rot = UnitQuaternion::from_axis_angle({1, 2, 3}, 0.7);

  struct Row {
    const char* name;
    double value;
    bool excluded = false;
    double se = 0.0;
  };
  std::vector<Row> rows;
  rows.push_back({"six_state", six});
  rows.push_back({"pauli", average_fidelity_pauli(*doc.target, channel).raw});
  rows.push_back({"tetrahedron",
                  average_fidelity_probe_set(*doc.target, channel,
                                             tetrahedron_probe_set())
                      .raw});
  rows.push_back({"octahedron",
                  average_fidelity_probe_set(*doc.target, channel,
                                             rotated_octahedron_probe_set(rot))
                      .raw});
  rows.push_back({"quadrature",
                  average_fidelity_quadrature(*doc.target, channel,
                                              doc.estimator.quadrature)
                      .raw});
  const MonteCarloResult mc =
      average_fidelity_monte_carlo(*doc.target, channel, doc.estimator.monte_carlo);
  rows.push_back({"monte_carlo", mc.fidelity.raw, true, mc.standard_error});

  std::ostringstream out;
  out << "estimator      value                     |value - six_state|\n";
  double max_disc = 0;
  for (const Row& r : rows) {
    const double disc = std::abs(r.value - six);
    out << r.name << std::string(15 - std::string(r.name).size(), ' ')
        << io::format_g17(r.value);
    if (r.excluded) {
      out << " (+/- " << io::format_g17(r.se) << ", excluded)";
    } else {
      out << std::string(
                 std::max<int>(1, 26 - static_cast<int>(
                                           io::format_g17(r.value).size())),
                 ' ')
          << io::format_g17(disc);
      max_disc = std::max(max_disc, disc);
    }
    out << "\n";
  }
  out << "max_discrepancy: " << io::format_g17(max_disc) << "\n";
  std::cout << out.str();
  return max_disc < kVerifyTolerance ? 0 : 4;
}

double grid_value(const io::SweepRange& r, int k) {
  if (r.steps == 1) return r.min;
  return r.min + k * (r.max - r.min) / (r.steps - 1);
}

int cmd_sweep(const CommonOptions& opt) {
  const io::RunDocument doc = load_document(opt);
  if (!doc.target || !doc.sequence || !doc.sweep)
    throw ParseError(
        "document: 'target', 'sequence' and 'sweep' are required for sweep");
  if (doc.target->kind() != TargetMap::Kind::Unitary)
    throw InvalidState("sweep: the ideal target must be unitary");

  const BlochVector start_v = doc.sweep->start.value_or(BlochVector{0, 0, 1});
  const DensityMatrix start = bloch_to_density(start_v);
  const DensityMatrix point_target =
      doc.sweep->point_target ? bloch_to_density(*doc.sweep->point_target)
                              : apply_target(*doc.target, start);

  std::ostringstream csv;
  csv << "epsilon,off_resonance,avg_fidelity,quaternion_fidelity,point_to_point\n";
  // Row-major grid order: epsilon is the outer loop.
  for (int i = 0; i < doc.sweep->epsilon.steps; ++i) {
    const double eps = grid_value(doc.sweep->epsilon, i);
    for (int j = 0; j < doc.sweep->off_resonance.steps; ++j) {
      const double f = grid_value(doc.sweep->off_resonance, j);
      const ErrorModel err{eps, f};
      const Mat2 v = sequence_unitary(*doc.sequence, err);
      const FidelityValue avg =
          run_estimator(doc.estimator.kind, *doc.target,
                        Channel(KrausChannel::from_unitary(v)), doc.estimator);
      const double qf = quaternion_fidelity(doc.target->matrix(), v);
      const FidelityValue p2p =
          point_to_point_fidelity(*doc.sequence, err, start, point_target);
      csv << io::format_g17(eps) << ',' << io::format_g17(f) << ','
          << io::format_g17(avg.value()) << ',' << io::format_g17(qf) << ','
          << io::format_g17(p2p.value()) << "\n";
    }
  }
  emit(opt, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"average fidelity of single-qubit maps and composite pulses"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::uint64_t seed_value = 0;

  const auto add_common = [&](CLI::App* sub, bool with_estimator, bool with_output) {
    sub->add_option("input", opt.input_path, "input JSON document")->required();
    if (with_output)
      sub->add_option("-o,--output", opt.output_path, "write the report here");
    if (with_estimator)
      sub->add_option("--estimator", opt.estimator,
                      "six_state|pauli|tetrahedron|quadrature|monte_carlo");
    sub->add_option("--seed", seed_value, "Monte Carlo seed override");
    sub->add_flag("--quiet", opt.quiet, "suppress warnings");
  };

  CLI::App* fid = app.add_subcommand(
      "fidelity", "average fidelity of a channel against an ideal target");
  add_common(fid, true, true);
  CLI::App* verify = app.add_subcommand(
      "verify", "run all estimators on one input and report discrepancies");
  add_common(verify, false, false);
  CLI::App* sweep = app.add_subcommand(
      "sweep", "CSV error sweep of a pulse sequence against an ideal target");
  add_common(sweep, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* active = fid->parsed() ? fid : (verify->parsed() ? verify : sweep);
  if (active->count("--seed") > 0) opt.seed = seed_value;

  try {
    if (fid->parsed()) return cmd_fidelity(opt);
    if (verify->parsed()) return cmd_verify(opt);
    return cmd_sweep(opt);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
