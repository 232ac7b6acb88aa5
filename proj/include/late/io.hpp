#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include <json.hpp>

#include "late/adversarial.hpp"
#include "late/boundary.hpp"
#include "late/dgp.hpp"
#include "late/estimation.hpp"
#include "late/sample_data.hpp"
#include "late/simulation.hpp"

namespace late {

using json = nlohmann::json;

inline constexpr const char* kDgpSchema = "late-dgp/1";
inline constexpr const char* kReportSchema = "late-report/1";
inline constexpr const char* kSimSchema = "late-sim/1";

/// Canonical serialization: sorted keys, two-space indent, trailing
/// newline. emit -> parse -> emit is byte-identical.
std::string canonical_dump(const json& j);

/// 64-bit FNV-1a of a string, hex-encoded; used to fingerprint configs.
std::string config_hash(const std::string& text);

// -- DGP documents ----------------------------------------------------------

using Dgp = std::variant<Theta, BinaryTheta>;

json theta_to_json(const Theta& theta);
json binary_theta_to_json(const BinaryTheta& theta);
json dgp_to_json(const Dgp& dgp);

/// Parses a DGP document (kind "continuous" or "binary"); throws ParseError
/// with a location hint on malformed input.
Dgp dgp_from_json(const json& doc);
Dgp load_dgp(std::istream& in, const std::string& origin);
Dgp load_dgp_file(const std::string& path);
void save_dgp_file(const std::string& path, const Dgp& dgp);

// -- CSV --------------------------------------------------------------------

struct CsvOptions {
    std::string y_col = "y";
    std::string d_col = "d";
    std::string z_col = "z";
};

/// Reads (y, d, z) rows from comma-separated text with a mandatory header.
/// Missing or non-numeric cells raise ParseError listing the bad line
/// numbers; a d or z value other than 0/1 raises NotBinary.
SampleData read_csv(std::istream& in, const CsvOptions& options = {});
SampleData read_csv_file(const std::string& path, const CsvOptions& options = {});

void write_csv(std::ostream& out, const SampleData& data, const CsvOptions& options = {});

// -- Report fragments -------------------------------------------------------

json estimates_to_json(const Estimates& est);
json bootstrap_to_json(const BootstrapCI& ci, Statistic stat);
json boundary_report_to_json(const BoundaryReport& report);
json forge_result_to_json(const ForgeResult& result);
json binary_forge_result_to_json(const BinaryForgeResult& result);
json membership_to_json(const MembershipFlags& flags);
json twin_experiment_to_json(const TwinExperimentReport& report);
json consistency_to_json(const ConsistencyReport& report);

}  // namespace late
