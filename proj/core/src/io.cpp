#include "magtor/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace magtor::io {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::SchemaViolation, what); }

const json& require_field(const json& doc, std::string_view field) {
  if (!doc.is_object()) schema_error("expected a JSON object");
  const auto it = doc.find(std::string(field));
  if (it == doc.end()) schema_error("missing field '" + std::string(field) + "'");
  return *it;
}

std::string entry_name(std::string_view field, std::size_t i, std::size_t j) {
  return std::string(field) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

Integer integer_from_json(const json& value, const std::string& where) {
  if (value.is_number_integer()) {
    return value.is_number_unsigned() ? Integer(value.get<std::uint64_t>()) : Integer(value.get<std::int64_t>());
  }
  if (value.is_string()) {
    try {
      return parse_integer(value.get<std::string>());
    } catch (const Error&) {
      schema_error(where + " must be an integer, got \"" + value.get<std::string>() + "\"");
    }
  }
  schema_error(where + " must be an integer, got " + value.dump());
}

Rational rational_from_json(const json& value, const std::string& where) {
  if (value.is_number_integer()) return Rational(integer_from_json(value, where));
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const Error& e) {
      schema_error(where + ": " + e.what());
    }
  }
  schema_error(where + " must be an integer or a \"p/q\" string, got " + value.dump());
}

template <class T, class Convert>
Matrix<T> matrix_from_json(const json& doc, std::string_view field, Convert convert) {
  if (!doc.is_array() || doc.empty()) schema_error("'" + std::string(field) + "' must be a non-empty array of rows");
  const std::size_t rows = doc.size();
  const std::size_t cols = doc.front().is_array() ? doc.front().size() : 0;
  Matrix<T> out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = doc[i];
    if (!row.is_array() || row.size() != cols) {
      schema_error("'" + std::string(field) + "' row " + std::to_string(i) + " has the wrong length");
    }
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = convert(row[j], entry_name(field, i, j));
  }
  return out;
}

Eigen::VectorXd vector_from_json(const json& doc, std::string_view field, std::size_t dim) {
  if (!doc.is_array() || doc.size() != dim) {
    schema_error("'" + std::string(field) + "' must be an array of " + std::to_string(dim) + " numbers");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    if (!doc[i].is_number()) schema_error("'" + std::string(field) + "' entries must be numbers");
    out(static_cast<Eigen::Index>(i)) = doc[i].get<double>();
  }
  return out;
}

json eigen_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) schema_error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte);
    schema_error(path.string() + ":" + std::to_string(line) + ":" + std::to_string(column) +
                 ": invalid JSON");
  }
}

RatMatrix rational_matrix_from_json(const json& doc, std::string_view field) {
  return matrix_from_json<Rational>(doc, field, rational_from_json);
}

IntMatrix integer_matrix_from_json(const json& doc, std::string_view field) {
  return matrix_from_json<Integer>(doc, field, integer_from_json);
}

TorusMagneticSystem system_from_json(const json& doc) {
  const json& m_field = require_field(doc, "m");
  if (!m_field.is_number_integer() || m_field.get<long long>() < 1) schema_error("'m' must be a positive integer");
  const auto m = m_field.get<std::size_t>();
  RatMatrix metric = rational_matrix_from_json(require_field(doc, "metric"), "metric");
  IntMatrix magnetic = integer_matrix_from_json(require_field(doc, "magnetic"), "magnetic");
  if (metric.rows() != 2 * m || metric.cols() != 2 * m) schema_error("'metric' must be 2m x 2m");
  if (magnetic.rows() != 2 * m || magnetic.cols() != 2 * m) schema_error("'magnetic' must be 2m x 2m");
  return TorusMagneticSystem(MetricGram(std::move(metric)), SymplecticGram(std::move(magnetic)));
}

json to_json(const RatMatrix& matrix) {
  json out = json::array();
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < matrix.cols(); ++j) row.push_back(to_string(matrix(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const IntMatrix& matrix) {
  json out = json::array();
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      const Integer& v = matrix(i, j);
      if (abs(v) < Integer(1) << 53) {
        row.push_back(v.convert_to<long long>());
      } else {
        row.push_back(v.str());
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const TorusMagneticSystem& sys) {
  return json{{"m", sys.m()}, {"metric", to_json(sys.metric().matrix())}, {"magnetic", to_json(sys.magnetic().matrix())}};
}

json to_json(const ValidationReport& report) {
  json checks = json::array();
  for (const auto& check : report.checks) {
    json entry{{"name", check.name}, {"passed", check.passed}};
    if (!check.detail.empty()) entry["detail"] = check.detail;
    checks.push_back(std::move(entry));
  }
  json out{{"valid", report.ok()}, {"checks", std::move(checks)}};
  if (report.failure) out["error"] = std::string(to_string(*report.failure));
  return out;
}

json to_json(const SpectralSignature& sig) {
  return json{{"m", sig.m}, {"d_squared", sig.d_squared}, {"volume", sig.sympl_volume}};
}

json to_json(const ChernFactors& r) {
  json out = json::array();
  for (const auto& v : r.values()) out.push_back(v.convert_to<long long>());
  return out;
}

json to_json(const LandauSpectrum& spectrum) {
  json levels = json::array();
  for (const auto& level : spectrum.levels) levels.push_back(json::array({level.energy, level.multiplicity.str()}));
  return json{{"k", spectrum.k}, {"cutoff", spectrum.cutoff}, {"levels", std::move(levels)}};
}

LandauSpectrum spectrum_from_json(const json& doc) {
  LandauSpectrum out;
  const json& k = require_field(doc, "k");
  if (!k.is_number_integer() || k.get<long long>() < 1) schema_error("'k' must be a positive integer");
  out.k = k.get<int>();
  const json& cutoff = require_field(doc, "cutoff");
  if (!cutoff.is_number() || !(cutoff.get<double>() > 0.0)) schema_error("'cutoff' must be a positive number");
  out.cutoff = cutoff.get<double>();
  const json& levels = require_field(doc, "levels");
  if (!levels.is_array()) schema_error("'levels' must be an array");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const json& level = levels[i];
    if (!level.is_array() || level.size() != 2 || !level[0].is_number()) {
      schema_error("levels[" + std::to_string(i) + "] must be [energy, multiplicity]");
    }
    out.levels.push_back(
        {level[0].get<double>(), integer_from_json(level[1], "levels[" + std::to_string(i) + "][1]")});
  }
  return out;
}

json to_json(const EquivalenceReport& report) {
  json out{{"equivalent", report.equivalent},
           {"d_squared_match", report.d_squared_match},
           {"volume_match", report.volume_match},
           {"first", to_json(report.first)},
           {"second", to_json(report.second)}};
  if (report.equivalent) {
    out["d_squared"] = report.first.d_squared;
    out["volume"] = report.first_volume.convert_to<long long>();
  } else {
    out["reason"] = report.reason;
  }
  return out;
}

json to_json(const PhiMap& phi) {
  return json{{"block_qq", to_json(phi.block_qq)}, {"block_qp", to_json(phi.block_qp)}};
}

json to_json(const PhiVerification& report) {
  return json{{"ok", report.ok()},
              {"preserves_form", report.preserves_form},
              {"preserves_hamiltonian", report.preserves_hamiltonian},
              {"lattice_equivariant", report.lattice_equivariant},
              {"failures", report.failures}};
}

json to_json(const LengthSpectrum& lengths) {
  // Group equal values so the output reads as a multiset.
  json values = json::array();
  std::size_t i = 0;
  while (i < lengths.squared_lengths.size()) {
    std::size_t j = i + 1;
    while (j < lengths.squared_lengths.size() &&
           approx_equal(lengths.squared_lengths[j], lengths.squared_lengths[i])) {
      ++j;
    }
    values.push_back(json::array({lengths.squared_lengths[i], j - i}));
    i = j;
  }
  return json{{"squared_lengths", std::move(values)},
              {"count", lengths.squared_lengths.size()},
              {"truncated", lengths.truncated}};
}

json family_to_json(const DeformationResult& family, std::span<const SpectralSignature> signatures) {
  json out = json::array();
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    const auto& member = family.members[i];
    json entry{{"t", member.t}, {"metric", eigen_to_json(member.metric)}, {"symplectic_defect", member.symplectic_defect}};
    if (i < signatures.size()) entry["signature"] = to_json(signatures[i]);
    out.push_back(std::move(entry));
  }
  return out;
}

CotangentState state_from_json(const json& doc, std::size_t dim) {
  return {vector_from_json(require_field(doc, "q"), "q", dim), vector_from_json(require_field(doc, "p"), "p", dim)};
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRow> rows) {
  if (rows.empty()) return;
  const auto dim = rows.front().state.q.size();
  out << "t";
  for (Eigen::Index i = 1; i <= dim; ++i) out << ",q" << i;
  for (Eigen::Index i = 1; i <= dim; ++i) out << ",p" << i;
  out << ",H\n";
  const auto precision = out.precision(17);
  for (const auto& row : rows) {
    out << row.t;
    for (Eigen::Index i = 0; i < dim; ++i) out << ',' << row.state.q(i);
    for (Eigen::Index i = 0; i < dim; ++i) out << ',' << row.state.p(i);
    out << ',' << row.energy << '\n';
  }
  out.precision(precision);
}

}  // namespace magtor::io
