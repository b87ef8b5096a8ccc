#include "lpp/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lpp {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* const kCsvHeader =
    "experiment,rho,N,param_name,param_value,replicas,hits,p_hat,ci_lo,ci_hi,"
    "master_seed,far_multiplier,wall_time_s";

ordered_json config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["experiment"] = experiment_name(cfg.experiment);
  j["rho"] = cfg.rho;
  j["N"] = cfg.N;
  j["grid"] = cfg.grid;
  j["aux_grid"] = cfg.aux_grid;
  j["replicas"] = cfg.replicas;
  j["master_seed"] = cfg.master_seed;
  j["far_multiplier"] = cfg.far_multiplier;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["lambda"] = cfg.lambda;
  return j;
}

ordered_json check_to_json(const std::string& name, bool pass, double value,
                           double tolerance, const std::string& detail) {
  ordered_json j;
  j["name"] = name;
  j["pass"] = pass;
  j["value"] = value;
  j["tolerance"] = tolerance;
  j["detail"] = detail;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw HypothesisError("config: expected a JSON object");
  static const char* const kKeys[] = {
      "experiment", "rho",         "N",     "grid",  "aux_grid", "replicas",
      "master_seed", "far_multiplier", "alpha", "beta",  "lambda",
  };
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || item.key() == k;
    if (!known) throw HypothesisError("config: unknown key '" + item.key() + "'");
  }

  ExperimentConfig cfg;
  if (!j.contains("experiment") || !j["experiment"].is_string()) {
    throw HypothesisError("config: 'experiment' must be a string");
  }
  const std::string name = j["experiment"].get<std::string>();
  if (!experiment_from_name(name, cfg.experiment)) {
    throw HypothesisError("config: unknown experiment '" + name + "'");
  }

  const auto number = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) {
      throw HypothesisError(std::string("config: '") + key + "' must be a number");
    }
    return j[key].get<double>();
  };
  const auto integer = [&](const char* key, std::int64_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) {
      throw HypothesisError(std::string("config: '") + key + "' must be an integer");
    }
    return j[key].get<std::int64_t>();
  };
  const auto grid = [&](const char* key, std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_array()) {
      throw HypothesisError(std::string("config: '") + key +
                            "' must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : j[key]) {
      if (!v.is_number()) {
        throw HypothesisError(std::string("config: '") + key +
                              "' must be an array of numbers");
      }
      out.push_back(v.get<double>());
    }
    return out;
  };

  cfg.rho = number("rho", cfg.rho);
  cfg.N = integer("N", cfg.N);
  cfg.grid = grid("grid", cfg.grid);
  cfg.aux_grid = grid("aux_grid", cfg.aux_grid);
  cfg.replicas = integer("replicas", cfg.replicas);
  if (j.contains("master_seed")) {
    if (!j["master_seed"].is_number_unsigned() && !j["master_seed"].is_number_integer()) {
      throw HypothesisError("config: 'master_seed' must be an integer");
    }
    cfg.master_seed = j["master_seed"].get<std::uint64_t>();
  }
  cfg.far_multiplier = number("far_multiplier", cfg.far_multiplier);
  cfg.alpha = number("alpha", cfg.alpha);
  cfg.beta = number("beta", cfg.beta);
  cfg.lambda = number("lambda", cfg.lambda);
  return cfg;
}

}  // namespace

std::string format_sig17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csv_string(const std::vector<EstimateRecord>& records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const EstimateRecord& r : records) {
    out += r.experiment;
    out += ',';
    out += format_sig17(r.rho);
    out += ',';
    out += std::to_string(r.N);
    out += ',';
    out += r.param_name;
    out += ',';
    out += format_sig17(r.param_value);
    out += ',';
    out += std::to_string(r.replicas);
    out += ',';
    out += std::to_string(r.hits);
    out += ',';
    out += format_sig17(r.p_hat);
    out += ',';
    out += format_sig17(r.ci_lo);
    out += ',';
    out += format_sig17(r.ci_hi);
    out += ',';
    out += std::to_string(r.master_seed);
    out += ',';
    out += format_sig17(r.far_multiplier);
    out += ',';
    out += format_sig17(r.wall_time_s);
    out += '\n';
  }
  return out;
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  return config_to_json(cfg).dump(2) + "\n";
}

ExperimentConfig config_from_json_text(const std::string& text) {
  return config_from_json(nlohmann::json::parse(text));
}

std::vector<ExperimentConfig> sweep_from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object() || !j.contains("runs") || !j["runs"].is_array()) {
    throw HypothesisError("sweep config: expected an object with a 'runs' array");
  }
  std::vector<ExperimentConfig> out;
  for (const auto& run : j["runs"]) out.push_back(config_from_json(run));
  if (out.empty()) throw HypothesisError("sweep config: 'runs' is empty");
  return out;
}

std::string summary_json_string(const ExperimentConfig& cfg,
                                const ExperimentResult& result) {
  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["experiment"] = experiment_name(cfg.experiment);
  j["config"] = config_to_json(cfg);
  j["records"] = result.records.size();
  ordered_json fits = ordered_json::array();
  for (const ScalingFit& f : result.fits) {
    ordered_json jf;
    jf["transform"] = transform_name(f.transform);
    jf["slope"] = f.slope;
    jf["intercept"] = f.intercept;
    jf["r_squared"] = f.r_squared;
    jf["excluded"] = f.excluded;
    fits.push_back(std::move(jf));
  }
  j["fits"] = std::move(fits);
  ordered_json checks = ordered_json::array();
  for (const CheckOutcome& c : result.checks) {
    checks.push_back(check_to_json(c.name, c.pass, c.value, c.tolerance, c.detail));
  }
  j["checks"] = std::move(checks);
  return j.dump(2) + "\n";
}

std::string verify_json_string(const std::vector<CheckResult>& results) {
  ordered_json j;
  j["tool_version"] = kToolVersion;
  bool all_pass = true;
  ordered_json checks = ordered_json::array();
  for (const CheckResult& r : results) {
    all_pass = all_pass && r.pass;
    checks.push_back(check_to_json(r.name, r.pass, r.value, r.threshold, r.detail));
  }
  j["passed"] = all_pass;
  j["checks"] = std::move(checks);
  return j.dump(2) + "\n";
}

std::string manifest_json_string(const std::string& command,
                                 const std::string& raw_config,
                                 const std::string& effective_config,
                                 std::uint64_t master_seed, int workers,
                                 const std::string& started,
                                 const std::string& finished,
                                 const std::vector<OutputFileInfo>& outputs) {
  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["master_seed"] = master_seed;
  j["workers"] = workers;
  j["started_utc"] = started;
  j["finished_utc"] = finished;
  if (raw_config.empty()) {
    j["raw_config"] = nullptr;
  } else {
    j["raw_config"] = raw_config;
  }
  if (effective_config.empty()) {
    j["effective_config"] = nullptr;
  } else {
    j["effective_config"] = ordered_json::parse(effective_config);
  }
  ordered_json files = ordered_json::array();
  for (const OutputFileInfo& f : outputs) {
    ordered_json jf;
    jf["file"] = f.name;
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(f.checksum));
    jf["fnv1a64"] = hex;
    jf["bytes"] = f.bytes;
    files.push_back(std::move(jf));
  }
  j["outputs"] = std::move(files);
  return j.dump(2) + "\n";
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

}  // namespace lpp
