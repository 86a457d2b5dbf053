// io.hpp - CSV serialization, content hashing and run manifests

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "dephasing/experiments.hpp"

namespace dephasing::io {

/// Shortest-safe round-trip form: 17 significant digits, "inf"/"nan" spelled out.
std::string format_double(double x);

/// Header `t,D_T,S_L_corr,S_L_prod,r,s,phi,absA_corr,absA_prod`, one LF-terminated row per time.
std::string trajectory_csv(const TrajectoryTable& table);

/// Header `sweep_param,value,D_T_inf`, rows, then `# extremum: <kind> at <value>`.
std::string sweep_csv(const SweepTable& table, const Extremum& extremum);

std::string sha256_hex(std::string_view bytes);

/// Writes `contents` to `path` in binary mode; throws std::runtime_error on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// foo.csv -> foo.manifest.json
std::filesystem::path manifest_path(const std::filesystem::path& csv_path);

/// Config echo plus path, size and SHA-256 of the artifact.
nlohmann::json make_manifest(std::string_view subcommand, const nlohmann::json& config,
                             const std::filesystem::path& artifact, std::string_view contents);

}  // namespace dephasing::io
