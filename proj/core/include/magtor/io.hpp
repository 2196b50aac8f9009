#pragma once

// JSON and CSV surfaces. Rationals travel as "p/q" strings (or plain integers),
// multiplicities as decimal strings since they outgrow 64 bits for large k.

#include <filesystem>
#include <iosfwd>
#include <span>

#include <nlohmann/json.hpp>

#include "magtor/classical.hpp"
#include "magtor/flow.hpp"
#include "magtor/lengths.hpp"
#include "magtor/normal_form.hpp"
#include "magtor/spectra.hpp"
#include "magtor/system.hpp"

namespace magtor::io {

using nlohmann::json;

/// Reads and parses a JSON file. Syntax errors become SchemaViolation with
/// "path:line:column".
json read_json_file(const std::filesystem::path& path);

/// { "m": int, "metric": [[rational]], "magnetic": [[int]] }. Shape only; call
/// validate_system / require_valid for the mathematical invariants.
TorusMagneticSystem system_from_json(const json& doc);
json to_json(const TorusMagneticSystem& sys);

RatMatrix rational_matrix_from_json(const json& doc, std::string_view field);
IntMatrix integer_matrix_from_json(const json& doc, std::string_view field);
json to_json(const RatMatrix& matrix);
json to_json(const IntMatrix& matrix);

json to_json(const ValidationReport& report);
json to_json(const SpectralSignature& sig);
json to_json(const ChernFactors& r);

/// { "k": int, "cutoff": real, "levels": [[energy, "multiplicity"]] }
json to_json(const LandauSpectrum& spectrum);
LandauSpectrum spectrum_from_json(const json& doc);

json to_json(const EquivalenceReport& report);
json to_json(const PhiMap& phi);
json to_json(const PhiVerification& report);
json to_json(const LengthSpectrum& lengths);

/// [{ "t", "metric", "signature" }, ...]
json family_to_json(const DeformationResult& family, std::span<const SpectralSignature> signatures);

CotangentState state_from_json(const json& doc, std::size_t dim);

/// CSV rows "t,q_1..q_2m,p_1..p_2m,H" with a header line.
struct TrajectoryRow {
  double t = 0.0;
  CotangentState state;
  double energy = 0.0;
};
void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRow> rows);

}  // namespace magtor::io
