#include "cli.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "magtor/magtor.hpp"

namespace magtor::cli {

namespace {

using io::json;

constexpr std::array<std::pair<Command, std::string_view>, 13> kCommands{{
    {Command::Validate, "validate"},
    {Command::Signature, "signature"},
    {Command::NormalForm, "normal-form"},
    {Command::Spectrum, "spectrum"},
    {Command::Equiv, "equiv"},
    {Command::Kahler, "kahler"},
    {Command::Reconstruct, "reconstruct"},
    {Command::Obstruction, "obstruction"},
    {Command::Phi, "phi"},
    {Command::Deform, "deform"},
    {Command::Flow, "flow"},
    {Command::Lengths, "lengths"},
    {Command::Demo, "demo"},
}};

constexpr std::array<std::string_view, 6> kCheckNames{"pairing", "equivalence", "kahler",
                                                     "spectrum", "conjugacy", "lengths"};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

RunResult verdict(bool value, const json& doc) { return {value ? 0 : 1, dump(doc)}; }

void require_inputs(const RunConfig& config, std::size_t count) {
  if (config.inputs.size() != count) {
    invalid(std::string(command_name(config.command)) + " expects " + std::to_string(count) + " input file(s), got " +
            std::to_string(config.inputs.size()));
  }
}

TorusMagneticSystem load_system_unchecked(const std::filesystem::path& path) {
  return io::system_from_json(io::read_json_file(path));
}

TorusMagneticSystem load_system(const std::filesystem::path& path) {
  TorusMagneticSystem sys = load_system_unchecked(path);
  require_valid(sys);
  return sys;
}

const json& matrix_field(const json& doc) {
  if (doc.is_object() && doc.contains("matrix")) return doc["matrix"];
  return doc;
}

Eigen::MatrixXd real_matrix_from_json(const json& doc) {
  if (!doc.is_array() || doc.empty() || !doc.front().is_array()) {
    throw Error(ErrorCode::SchemaViolation, "'matrix' must be a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(doc.size());
  const auto cols = static_cast<Eigen::Index>(doc.front().size());
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = doc[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::SchemaViolation, "'matrix' row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (v.is_number()) {
        out(i, j) = v.get<double>();
      } else if (v.is_string()) {
        out(i, j) = parse_rational(v.get<std::string>()).convert_to<double>();
      } else {
        throw Error(ErrorCode::SchemaViolation, "'matrix' entries must be numbers or \"p/q\" strings");
      }
    }
  }
  return out;
}

void require_square(std::size_t rows, std::size_t cols, std::size_t dim, std::string_view what) {
  if (rows != dim || cols != dim) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be " + std::to_string(dim) + "x" +
                                                  std::to_string(dim));
  }
}

std::vector<double> times_or(const RunConfig& config, std::vector<double> fallback) {
  return config.times.empty() ? fallback : config.times;
}

// Commands -------------------------------------------------------------------

RunResult run_validate(const RunConfig& config) {
  require_inputs(config, 1);
  const ValidationReport report = validate_system(load_system_unchecked(config.inputs[0]));
  return verdict(report.ok(), io::to_json(report));
}

RunResult run_signature(const RunConfig& config) {
  require_inputs(config, 1);
  const TorusMagneticSystem sys = load_system(config.inputs[0]);
  json doc = io::to_json(spectral_signature(sys, config.tolerance_for("pairing")));
  doc["volume_exact"] = symplectic_volume(sys.magnetic()).str();
  doc["f_matrix"] = io::to_json(f_matrix(sys));
  return {0, dump(doc)};
}

RunResult run_normal_form(const RunConfig& config) {
  require_inputs(config, 1);
  const TorusMagneticSystem sys = load_system(config.inputs[0]);
  const NormalForm nf = chern_invariant_factors(sys.magnetic());
  const json doc{{"factors", io::to_json(nf.factors)},
                 {"transform", io::to_json(nf.transform.matrix())},
                 {"determinant", nf.transform.determinant()},
                 {"orientation_preserving", nf.orientation_preserving()},
                 {"verified", verify_normal_form(sys.magnetic(), nf.factors, nf.transform)}};
  return {0, dump(doc)};
}

RunResult run_spectrum(const RunConfig& config) {
  require_inputs(config, 1);
  if (!config.cutoff) invalid("spectrum requires --cutoff");
  const TorusMagneticSystem sys = load_system(config.inputs[0]);
  const SpectralSignature sig = spectral_signature(sys, config.tolerance_for("pairing"));
  return {0, dump(io::to_json(landau_spectrum(sig, config.k, *config.cutoff)))};
}

RunResult run_equiv(const RunConfig& config) {
  require_inputs(config, 2);
  const TorusMagneticSystem a = load_system(config.inputs[0]);
  const TorusMagneticSystem b = load_system(config.inputs[1]);
  const EquivalenceReport report = quantum_equivalent(a, b, config.tolerance_for("equivalence"));
  json doc = io::to_json(report);
  bool ok = report.equivalent;
  if (config.k_max) {
    if (!config.cutoff) invalid("--k-max requires --cutoff");
    const ConsistencyReport consistency =
        all_k_consistency(a, b, *config.k_max, *config.cutoff, config.tolerance_for("spectrum"));
    doc["all_k"] = json{{"k_max", *config.k_max},
                        {"all_equal", consistency.all_equal},
                        {"first_failing_k", consistency.first_failing_k},
                        {"agrees", consistency.agrees}};
    ok = ok && consistency.agrees;
  }
  return verdict(ok, doc);
}

RunResult run_kahler(const RunConfig& config) {
  require_inputs(config, 1);
  const bool kahler = is_kahler(load_system(config.inputs[0]), config.tolerance_for("kahler"));
  return verdict(kahler, json{{"kahler", kahler}});
}

RunResult run_reconstruct(const RunConfig& config) {
  require_inputs(config, 1);
  const LandauSpectrum spectrum = io::spectrum_from_json(io::read_json_file(config.inputs[0]));
  const ReconstructionResult result = reconstruct_signature(spectrum);
  const json doc{{"signature", io::to_json(result.signature)},
                 {"levels_consumed", result.levels_consumed},
                 {"consistent", result.consistent}};
  return verdict(result.consistent, doc);
}

RunResult run_obstruction(const RunConfig& config) {
  require_inputs(config, 2);
  const TorusMagneticSystem a = load_system(config.inputs[0]);
  const TorusMagneticSystem b = load_system(config.inputs[1]);
  const ObstructionReport report = phase_space_obstruction(a.magnetic(), b.magnetic());
  const json doc{{"verdict", std::string(to_string(report.verdict))},
                 {"first", io::to_json(report.first)},
                 {"second", io::to_json(report.second)}};
  return verdict(report.verdict == Obstruction::NotSymplectomorphic, doc);
}

RunResult run_phi(const RunConfig& config) {
  require_inputs(config, 1);
  const TorusMagneticSystem sys = load_system(config.inputs[0]);
  RatMatrix a = config.matrix
                    ? io::rational_matrix_from_json(matrix_field(io::read_json_file(*config.matrix)), "matrix")
                    : to_rational(sample_symplectic_for(sys.magnetic(), config.seed, 6));
  require_square(a.rows(), a.cols(), sys.dim(), "matrix");
  const PhiMap phi = build_phi(a, sys.magnetic());
  const PhiVerification check = verify_phi(phi, TwistedForm(sys.magnetic()), sys.metric());
  json doc{{"matrix", io::to_json(a)}, {"phi", io::to_json(phi)}, {"verification", io::to_json(check)}};
  bool ok = check.ok();
  if (!config.times.empty()) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::vector<CotangentState> states(10);
    for (auto& s : states) {
      s.q = Eigen::VectorXd::NullaryExpr(static_cast<Eigen::Index>(sys.dim()), [&] { return coord(rng); });
      s.p = Eigen::VectorXd::NullaryExpr(static_cast<Eigen::Index>(sys.dim()), [&] { return coord(rng); });
    }
    const ConjugacyReport conj =
        flow_conjugacy_check(sys, a, states, config.times, config.tolerance_for("conjugacy"));
    doc["conjugacy"] = json{{"worst_deviation", conj.worst_deviation}, {"ok", conj.ok}};
    ok = ok && conj.ok;
  }
  return verdict(ok, doc);
}

RunResult run_deform(const RunConfig& config) {
  require_inputs(config, 1);
  const TorusMagneticSystem sys = load_system(config.inputs[0]);
  const auto n = static_cast<Eigen::Index>(sys.dim());
  Eigen::MatrixXd s;
  if (config.matrix) {
    s = real_matrix_from_json(matrix_field(io::read_json_file(*config.matrix)));
    require_square(static_cast<std::size_t>(s.rows()), static_cast<std::size_t>(s.cols()), sys.dim(), "matrix");
  } else {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> entry(-0.5, 0.5);
    s = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return entry(rng); });
  }
  const std::vector<double> times = times_or(config, {0.0, 0.3, 1.0, 2.0});
  const DeformationResult family = deformation_family(sys.metric(), sys.magnetic(), s, times);
  const Eigen::MatrixXd omega = to_eigen(sys.magnetic().matrix());
  const double volume = symplectic_volume(sys.magnetic()).convert_to<double>();
  std::vector<SpectralSignature> signatures;
  for (const auto& member : family.members) {
    signatures.push_back(spectral_signature(member.metric, omega, volume, config.tolerance_for("pairing")));
  }
  return {0, dump(io::family_to_json(family, signatures))};
}

RunResult run_flow(const RunConfig& config) {
  require_inputs(config, 1);
  const TorusMagneticSystem sys = load_system(config.inputs[0]);
  CotangentState state;
  if (config.state) {
    state = io::state_from_json(io::read_json_file(*config.state), sys.dim());
  } else {
    state.q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.dim()));
    state.p = Eigen::VectorXd::Unit(static_cast<Eigen::Index>(sys.dim()), 0);
  }
  const std::vector<double> times = times_or(config, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const MagneticFlow flow(sys);
  std::vector<io::TrajectoryRow> rows;
  for (double t : times) {
    CotangentState moved = flow(state, t);
    const double energy = flow.energy(moved.p);
    rows.push_back({t, std::move(moved), energy});
  }
  std::ostringstream csv;
  csv << "# " << MagneticFlow::kSignConvention << "\n";
  io::write_trajectory_csv(csv, rows);
  return {0, csv.str()};
}

RunResult run_lengths(const RunConfig& config) {
  if (config.inputs.empty() || config.inputs.size() > 2) invalid("lengths expects one or two input files");
  if (!config.bound) invalid("lengths requires --bound");
  std::vector<LengthSpectrum> spectra;
  for (const auto& path : config.inputs) {
    spectra.push_back(length_spectrum(load_system(path).metric(), *config.bound, config.max_count));
  }
  if (spectra.size() == 1) return {0, dump(io::to_json(spectra.front()))};
  const bool same = same_length_spectrum(spectra[0], spectra[1], config.tolerance_for("lengths"));
  return verdict(same, json{{"same", same}, {"first", io::to_json(spectra[0])}, {"second", io::to_json(spectra[1])}});
}

// Demo -----------------------------------------------------------------------

IntMatrix interleaved_form(std::initializer_list<int> r) {
  IntMatrix out(2 * r.size(), 2 * r.size());
  std::size_t j = 0;
  for (int value : r) {
    out(2 * j, 2 * j + 1) = value;
    out(2 * j + 1, 2 * j) = -value;
    ++j;
  }
  return out;
}

RatMatrix diagonal_metric(std::initializer_list<int> entries) {
  RatMatrix out(entries.size(), entries.size());
  std::size_t i = 0;
  for (int value : entries) {
    out(i, i) = value;
    ++i;
  }
  return out;
}

TorusMagneticSystem make_system(std::initializer_list<int> metric, std::initializer_list<int> r) {
  TorusMagneticSystem sys(MetricGram(diagonal_metric(metric)), SymplecticGram(interleaved_form(r)));
  require_valid(sys);
  return sys;
}

struct DemoChecks {
  json list = json::array();
  bool all = true;

  void add(const std::string& name, bool passed) {
    list.push_back(json{{"name", name}, {"passed", passed}});
    all = all && passed;
  }
};

bool signature_is(const SpectralSignature& sig, std::vector<double> d_squared, double volume, double tol) {
  return signatures_match(sig, SpectralSignature{sig.m, std::move(d_squared), volume}, tol);
}

RunResult run_demo(const RunConfig& config) {
  if (!config.inputs.empty()) invalid("demo takes no input files");
  const double tol = config.tol;
  DemoChecks checks;

  const TorusMagneticSystem i_first = make_system({1, 1, 1, 4}, {2, 2});
  const TorusMagneticSystem i_second = make_system({1, 1, 1, 4}, {1, 4});
  const SpectralSignature sig_i1 = spectral_signature(i_first, config.tolerance_for("pairing"));
  const SpectralSignature sig_i2 = spectral_signature(i_second, config.tolerance_for("pairing"));
  const EquivalenceReport equiv_i = quantum_equivalent(i_first, i_second, config.tolerance_for("equivalence"));
  const bool kahler_i1 = is_kahler(i_first, config.tolerance_for("kahler"));
  const bool kahler_i2 = is_kahler(i_second, config.tolerance_for("kahler"));
  const ObstructionReport obstruction = phase_space_obstruction(i_first.magnetic(), i_second.magnetic());
  const ConsistencyReport all_k_i = all_k_consistency(i_first, i_second, 4, 25 * std::numbers::pi,
                                                       config.tolerance_for("spectrum"));

  checks.add("example_i.signature_omega", signature_is(sig_i1, {1, 2}, 4, tol));
  checks.add("example_i.signature_omega_prime", signature_is(sig_i2, {1, 2}, 4, tol));
  checks.add("example_i.quantum_equivalent", equiv_i.equivalent);
  checks.add("example_i.not_kahler", !kahler_i1 && !kahler_i2);
  checks.add("example_i.factors",
             obstruction.first == ChernFactors({2, 2}) && obstruction.second == ChernFactors({1, 4}));
  checks.add("example_i.obstruction", obstruction.verdict == Obstruction::NotSymplectomorphic);
  checks.add("example_i.spectra_k1_to_4", all_k_i.all_equal);

  const TorusMagneticSystem ii_first = make_system({1, 4, 1, 4}, {2, 2});
  const TorusMagneticSystem ii_second = make_system({1, 1, 4, 4}, {1, 4});
  const SpectralSignature sig_ii1 = spectral_signature(ii_first, config.tolerance_for("pairing"));
  const SpectralSignature sig_ii2 = spectral_signature(ii_second, config.tolerance_for("pairing"));
  const EquivalenceReport equiv_ii = quantum_equivalent(ii_first, ii_second, config.tolerance_for("equivalence"));
  const bool kahler_ii1 = is_kahler(ii_first, config.tolerance_for("kahler"));
  const bool kahler_ii2 = is_kahler(ii_second, config.tolerance_for("kahler"));
  const LengthSpectrum lengths_ii1 = length_spectrum(ii_first.metric(), 10.0, config.max_count);
  const LengthSpectrum lengths_ii2 = length_spectrum(ii_second.metric(), 10.0, config.max_count);
  const bool lengths_agree = same_length_spectrum(lengths_ii1, lengths_ii2, config.tolerance_for("lengths"));

  checks.add("example_ii.signature_h", signature_is(sig_ii1, {1, 1}, 4, tol));
  checks.add("example_ii.signature_h_prime", signature_is(sig_ii2, {1, 1}, 4, tol));
  checks.add("example_ii.quantum_equivalent", equiv_ii.equivalent);
  checks.add("example_ii.kahler", kahler_ii1 && kahler_ii2);
  checks.add("example_ii.isometric_length_spectra", lengths_agree);

  const json doc{
      {"coordinates", "x1,y1,x2,y2"},
      {"example_i",
       {{"systems", json::array({io::to_json(i_first), io::to_json(i_second)})},
        {"signatures", json::array({io::to_json(sig_i1), io::to_json(sig_i2)})},
        {"quantum_equivalent", equiv_i.equivalent},
        {"kahler", json::array({kahler_i1, kahler_i2})},
        {"factors", json::array({io::to_json(obstruction.first), io::to_json(obstruction.second)})},
        {"obstruction", std::string(to_string(obstruction.verdict))},
        {"spectra_equal_k1_to_4", all_k_i.all_equal}}},
      {"example_ii",
       {{"systems", json::array({io::to_json(ii_first), io::to_json(ii_second)})},
        {"signatures", json::array({io::to_json(sig_ii1), io::to_json(sig_ii2)})},
        {"quantum_equivalent", equiv_ii.equivalent},
        {"kahler", json::array({kahler_ii1, kahler_ii2})},
        {"length_spectra_agree_at_bound_10", lengths_agree}}},
      {"checks", checks.list},
      {"all_checks_passed", checks.all},
  };
  return verdict(checks.all, doc);
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [command, text] : kCommands) {
    if (text == name) return command;
  }
  return std::nullopt;
}

std::string_view command_name(Command command) {
  for (const auto& [value, text] : kCommands) {
    if (value == command) return text;
  }
  return "unknown";
}

double RunConfig::tolerance_for(std::string_view check) const {
  const auto it = tol_overrides.find(check);
  return it == tol_overrides.end() ? tol : it->second;
}

double parse_real(std::string_view text) {
  std::string body(text);
  double factor = 1.0;
  if (body.size() >= 2 && body.compare(body.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    body.resize(body.size() - 2);
    if (!body.empty() && body.back() == '*') body.pop_back();
    if (body.empty()) return factor;
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(body, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != body.size() || !std::isfinite(value)) {
    invalid("cannot parse \"" + std::string(text) + "\" as a real number");
  }
  return value * factor;
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  const json doc = io::read_json_file(path);
  if (!doc.is_object()) throw Error(ErrorCode::SchemaViolation, path.string() + ": expected a JSON object");
  if (doc.contains("tol")) {
    if (!doc["tol"].is_number()) throw Error(ErrorCode::SchemaViolation, "'tol' must be a number");
    config.tol = doc["tol"].get<double>();
  }
  if (doc.contains("checks")) {
    const json& checks = doc["checks"];
    if (!checks.is_object()) throw Error(ErrorCode::SchemaViolation, "'checks' must be an object");
    for (const auto& [name, value] : checks.items()) {
      if (std::find(kCheckNames.begin(), kCheckNames.end(), name) == kCheckNames.end()) {
        throw Error(ErrorCode::SchemaViolation, "unknown check '" + name + "' in 'checks'");
      }
      if (!value.is_number() || !(value.get<double>() > 0.0)) {
        throw Error(ErrorCode::SchemaViolation, "checks." + name + " must be a positive number");
      }
      config.tol_overrides[name] = value.get<double>();
    }
  }
}

RunResult run(const RunConfig& config) {
  try {
    if (!(config.tol > 0.0)) invalid("tol must be positive");
    if (config.k < 1) invalid("k must be a positive integer");
    if (config.k_max && *config.k_max < 1) invalid("k-max must be a positive integer");
    switch (config.command) {
      case Command::Validate: return run_validate(config);
      case Command::Signature: return run_signature(config);
      case Command::NormalForm: return run_normal_form(config);
      case Command::Spectrum: return run_spectrum(config);
      case Command::Equiv: return run_equiv(config);
      case Command::Kahler: return run_kahler(config);
      case Command::Reconstruct: return run_reconstruct(config);
      case Command::Obstruction: return run_obstruction(config);
      case Command::Phi: return run_phi(config);
      case Command::Deform: return run_deform(config);
      case Command::Flow: return run_flow(config);
      case Command::Lengths: return run_lengths(config);
      case Command::Demo: return run_demo(config);
    }
    invalid("unknown command");
  } catch (const Error& e) {
    return {2, dump(json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}})};
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  if (const char* env = std::getenv("MAGTOR_TOL")) {
    try {
      config.tol = parse_real(env);
    } catch (const Error& e) {
      err << "MAGTOR_TOL: " << e.what() << "\n";
      return 2;
    }
  }

  CLI::App app{"Flat-torus magnetic systems: invariants, spectra and classical equivalence"};
  std::string command;
  std::vector<std::string> inputs;
  std::optional<std::string> cutoff;
  std::optional<std::string> config_path;
  std::vector<std::string> names;
  for (const auto& entry : kCommands) names.emplace_back(entry.second);
  app.add_option("command", command, "Operation to run")->required()->check(CLI::IsMember(names));
  app.add_option("inputs", inputs, "System JSON files (a spectrum JSON for reconstruct)");
  auto* tol_flag = app.add_option("--tol", config.tol, "Relative tolerance (default 1e-9, or MAGTOR_TOL)");
  app.add_option("--config", config_path, "JSON file with {\"tol\": x, \"checks\": {name: x}}");
  app.add_option("--k", config.k, "Quantization level");
  app.add_option("--cutoff", cutoff, "Energy cutoff, e.g. 30 or 25pi");
  app.add_option("--k-max", config.k_max, "Check spectra at k = 1..k-max (equiv)");
  app.add_option("--seed", config.seed, "Seed for sampled matrices");
  app.add_option("--times", config.times, "Comma-separated times")->delimiter(',');
  app.add_option("--bound", config.bound, "Squared-length bound (lengths)");
  app.add_option("--max-count", config.max_count, "Largest number of lattice vectors kept (lengths)");
  app.add_option("--matrix", config.matrix, "JSON matrix: A for phi, S for deform");
  app.add_option("--state", config.state, "JSON {\"q\": [...], \"p\": [...]} for flow");
  app.add_option("--out", config.out, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  config.command = *parse_command(command);
  config.inputs.assign(inputs.begin(), inputs.end());
  RunResult result;
  try {
    if (config_path) {
      // An explicit --tol beats the file's base tolerance; per-check entries still apply.
      const double flag_tol = config.tol;
      apply_config_file(config, *config_path);
      if (tol_flag->count() > 0) config.tol = flag_tol;
    }
    if (cutoff) config.cutoff = parse_real(*cutoff);
    result = run(config);
  } catch (const Error& e) {
    result = {2, dump(json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}})};
  }

  if (result.exit_code == 2) err << "error: " << result.report;
  if (config.out) {
    std::ofstream file(*config.out);
    if (!file) {
      err << "cannot write " << config.out->string() << "\n";
      return 2;
    }
    file << result.report;
  } else {
    out << result.report;
  }
  return result.exit_code;
}

}  // namespace magtor::cli
