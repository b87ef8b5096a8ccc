#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpp/experiments.hpp"
#include "lpp/verify.hpp"

// Serialization boundary: config parsing, CSV and JSON rendering, atomic
// file writes, checksums, and timestamps. Everything except the manifest
// (which embeds wall-clock timestamps) renders byte-identically for the same
// inputs.

namespace lpp {

inline constexpr const char* kToolVersion = "1.0.0";

// %.17g, enough digits to round-trip a double.
std::string format_sig17(double x);

// Fixed header
//   experiment,rho,N,param_name,param_value,replicas,hits,p_hat,ci_lo,ci_hi,
//   master_seed,far_multiplier,wall_time_s
// followed by one row per record.
std::string csv_string(const std::vector<EstimateRecord>& records);

std::string config_to_json_text(const ExperimentConfig& cfg);
// Rejects unknown keys and wrong types; missing fields keep their defaults.
ExperimentConfig config_from_json_text(const std::string& text);
// Parses {"runs": [config, ...]}.
std::vector<ExperimentConfig> sweep_from_json_text(const std::string& text);

std::string summary_json_string(const ExperimentConfig& cfg,
                                const ExperimentResult& result);
std::string verify_json_string(const std::vector<CheckResult>& results);

struct OutputFileInfo {
  std::string name;
  std::uint64_t checksum = 0;
  std::uint64_t bytes = 0;
};

std::string manifest_json_string(const std::string& command,
                                 const std::string& raw_config,
                                 const std::string& effective_config,
                                 std::uint64_t master_seed, int workers,
                                 const std::string& started,
                                 const std::string& finished,
                                 const std::vector<OutputFileInfo>& outputs);

std::uint64_t fnv1a64(const std::string& bytes);

// 2026-08-17T12:34:56Z
std::string iso8601_utc_now();

std::string read_file(const std::string& path);

// Writes to a sibling temp file and renames it into place, so consumers
// never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace lpp
