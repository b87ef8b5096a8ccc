#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <new>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lpp/experiments.hpp"
#include "lpp/io.hpp"
#include "lpp/verify.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int workers = 0;
  double far_multiplier = 4.0;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* fm_opt = nullptr;
};

void add_common(CLI::App* sub, CommonOpts& o, bool with_config) {
  if (with_config) {
    sub->add_option("--config", o.config_path, "JSON config file")
        ->required()
        ->check(CLI::ExistingFile);
  }
  o.seed_opt = sub->add_option("--seed", o.seed, "Override the master seed");
  sub->add_option("--workers", o.workers,
                  "Worker threads (0 = hardware default)");
  sub->add_option("--out", o.out_dir,
                  "Output directory (default: $LPPSIM_OUT_DIR or ./out)");
  o.fm_opt = sub->add_option("--far-multiplier", o.far_multiplier,
                             "Override the far-target multiplier");
}

std::filesystem::path resolve_out_dir(const CommonOpts& o) {
  std::string dir = o.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("LPPSIM_OUT_DIR");
    if (env != nullptr && *env != '\0') dir = env;
  }
  if (dir.empty()) dir = "out";
  std::filesystem::create_directories(dir);
  return dir;
}

void apply_overrides(lpp::ExperimentConfig& cfg, const CommonOpts& o) {
  if (o.seed_opt->count() > 0) cfg.master_seed = o.seed;
  if (o.fm_opt->count() > 0) cfg.far_multiplier = o.far_multiplier;
}

lpp::OutputFileInfo write_output(const std::filesystem::path& dir,
                                 const std::string& name,
                                 const std::string& content) {
  lpp::write_file_atomic((dir / name).string(), content);
  return {name, lpp::fnv1a64(content), content.size()};
}

void print_result(const lpp::ExperimentResult& result) {
  for (const lpp::ScalingFit& f : result.fits) {
    std::printf("fit %s: slope=%.4f intercept=%.4f r2=%.4f excluded=%lld\n",
                lpp::transform_name(f.transform), f.slope, f.intercept,
                f.r_squared, static_cast<long long>(f.excluded));
  }
  for (const lpp::CheckOutcome& c : result.checks) {
    std::printf("%s %s value=%.6g tolerance=%.6g%s%s\n",
                c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.tolerance,
                c.detail.empty() ? "" : "  ", c.detail.c_str());
  }
}

lpp::ExperimentResult run_into_dir(const lpp::ExperimentConfig& cfg,
                                   const std::string& raw_config,
                                   const std::string& command,
                                   const std::filesystem::path& dir,
                                   int workers) {
  lpp::validate_config(cfg);
  const std::string started = lpp::iso8601_utc_now();
  lpp::ExperimentResult result = lpp::run_experiment(cfg, workers);
  const std::string finished = lpp::iso8601_utc_now();

  std::vector<lpp::OutputFileInfo> outputs;
  outputs.push_back(
      write_output(dir, "estimates.csv", lpp::csv_string(result.records)));
  outputs.push_back(
      write_output(dir, "summary.json", lpp::summary_json_string(cfg, result)));
  write_output(dir, "manifest.json",
               lpp::manifest_json_string(command, raw_config,
                                         lpp::config_to_json_text(cfg),
                                         cfg.master_seed, workers, started,
                                         finished, outputs));
  std::printf("%s: %zu records, outputs in %s\n",
              lpp::experiment_name(cfg.experiment), result.records.size(),
              dir.string().c_str());
  return result;
}

int cmd_simulate(const CommonOpts& o) {
  const std::string raw = lpp::read_file(o.config_path);
  lpp::ExperimentConfig cfg = lpp::config_from_json_text(raw);
  apply_overrides(cfg, o);
  const std::filesystem::path dir = resolve_out_dir(o);
  const lpp::ExperimentResult result =
      run_into_dir(cfg, raw, "simulate", dir, o.workers);
  print_result(result);
  return 0;
}

int cmd_sweep(const CommonOpts& o) {
  const std::string raw = lpp::read_file(o.config_path);
  const std::vector<lpp::ExperimentConfig> runs = lpp::sweep_from_json_text(raw);
  const std::filesystem::path dir = resolve_out_dir(o);
  const std::string started = lpp::iso8601_utc_now();

  std::vector<lpp::OutputFileInfo> outputs;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    lpp::ExperimentConfig cfg = runs[i];
    apply_overrides(cfg, o);
    const std::string sub = "run_" + std::to_string(i) + "_" +
                            lpp::experiment_name(cfg.experiment);
    std::filesystem::create_directories(dir / sub);
    const lpp::ExperimentResult result =
        run_into_dir(cfg, "", "sweep", dir / sub, o.workers);
    print_result(result);
    for (const char* name : {"estimates.csv", "summary.json", "manifest.json"}) {
      const std::string content = lpp::read_file((dir / sub / name).string());
      outputs.push_back({sub + "/" + name, lpp::fnv1a64(content),
                         content.size()});
    }
  }
  const std::string finished = lpp::iso8601_utc_now();
  write_output(dir, "manifest.json",
               lpp::manifest_json_string("sweep", raw, "", 0, o.workers,
                                         started, finished, outputs));
  std::printf("sweep: %zu runs, outputs in %s\n", runs.size(),
              dir.string().c_str());
  return 0;
}

int cmd_plotdata(const CommonOpts& o) {
  const std::string raw = lpp::read_file(o.config_path);
  lpp::ExperimentConfig cfg = lpp::config_from_json_text(raw);
  apply_overrides(cfg, o);
  lpp::validate_config(cfg);
  const std::filesystem::path dir = resolve_out_dir(o);

  const std::string started = lpp::iso8601_utc_now();
  const lpp::ExperimentResult result = lpp::run_experiment(cfg, o.workers);
  const std::string finished = lpp::iso8601_utc_now();

  std::vector<lpp::OutputFileInfo> outputs;
  outputs.push_back(
      write_output(dir, "estimates.csv", lpp::csv_string(result.records)));

  std::vector<std::string> params;
  for (const lpp::EstimateRecord& r : result.records) {
    bool seen = false;
    for (const std::string& p : params) seen = seen || p == r.param_name;
    if (!seen) params.push_back(r.param_name);
  }
  const std::string exp_name = lpp::experiment_name(cfg.experiment);
  for (const std::string& param : params) {
    std::string dat = "# param_value p_hat ci_lo ci_hi\n";
    for (const lpp::EstimateRecord& r : result.records) {
      if (r.param_name != param) continue;
      dat += lpp::format_sig17(r.param_value);
      dat += ' ';
      dat += lpp::format_sig17(r.p_hat);
      dat += ' ';
      dat += lpp::format_sig17(r.ci_lo);
      dat += ' ';
      dat += lpp::format_sig17(r.ci_hi);
      dat += '\n';
    }
    outputs.push_back(write_output(dir, exp_name + "_" + param + ".dat", dat));
  }
  if (!result.fits.empty()) {
    std::string dat = "# transform slope intercept r_squared excluded\n";
    for (const lpp::ScalingFit& f : result.fits) {
      dat += lpp::transform_name(f.transform);
      dat += ' ';
      dat += lpp::format_sig17(f.slope);
      dat += ' ';
      dat += lpp::format_sig17(f.intercept);
      dat += ' ';
      dat += lpp::format_sig17(f.r_squared);
      dat += ' ';
      dat += std::to_string(f.excluded);
      dat += '\n';
    }
    outputs.push_back(write_output(dir, exp_name + "_fits.dat", dat));
  }
  write_output(dir, "manifest.json",
               lpp::manifest_json_string("plotdata", raw,
                                         lpp::config_to_json_text(cfg),
                                         cfg.master_seed, o.workers, started,
                                         finished, outputs));
  std::printf("%s: %zu records, %zu data files in %s\n", exp_name.c_str(),
              result.records.size(), outputs.size() - 1,
              dir.string().c_str());
  print_result(result);
  return 0;
}

int cmd_verify(const CommonOpts& o, const std::string& suite,
               std::int64_t realizations) {
  const std::uint64_t seed = o.seed_opt->count() > 0 ? o.seed : 1;
  const bool all = suite == "all";

  std::vector<lpp::CheckResult> results;
  const auto append = [&results](std::vector<lpp::CheckResult> batch) {
    for (lpp::CheckResult& r : batch) results.push_back(std::move(r));
  };
  if (all || suite == "lemmas") {
    append(lpp::run_exact_lemma_suite(realizations, seed, o.workers));
  }
  if (all || suite == "stationarity") {
    append(lpp::run_stationarity_check(seed, o.workers));
  }
  if (all || suite == "marginals") {
    append(lpp::run_busemann_marginals_check(seed, o.workers,
                                             o.far_multiplier));
  }
  if (all || suite == "step-distribution") {
    append(lpp::run_step_distribution_check(seed, o.workers));
  }
  if (all || suite == "stabilization") {
    append(lpp::run_stabilization_check(seed, o.workers));
  }
  if (all || suite == "bounds") {
    append(lpp::run_bounds_suite(seed, o.workers));
  }

  bool all_pass = true;
  for (const lpp::CheckResult& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("%s %s value=%.6g threshold=%.6g%s%s\n",
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.value, r.threshold,
                r.detail.empty() ? "" : "  ", r.detail.c_str());
  }

  const std::filesystem::path dir = resolve_out_dir(o);
  const std::string finished = lpp::iso8601_utc_now();
  std::vector<lpp::OutputFileInfo> outputs;
  outputs.push_back(write_output(dir, "verify_summary.json",
                                 lpp::verify_json_string(results)));
  write_output(dir, "manifest.json",
               lpp::manifest_json_string("verify", "", "", seed, o.workers,
                                         finished, finished, outputs));
  std::printf("verify: %zu checks, %s\n", results.size(),
              all_pass ? "all passed" : "FAILURES");
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential corner growth model: last-passage times, "
               "geodesics, Busemann functions, and Monte Carlo experiments"};
  app.set_version_flag("--version", std::string(lpp::kToolVersion));
  app.require_subcommand(1);

  CommonOpts sim_o;
  CLI::App* sim = app.add_subcommand("simulate", "Run one experiment config");
  add_common(sim, sim_o, true);

  CommonOpts ver_o;
  std::string suite = "all";
  std::int64_t realizations = 200;
  CLI::App* ver = app.add_subcommand("verify", "Run verification suites");
  add_common(ver, ver_o, false);
  ver->add_option("--suite", suite, "Which suite to run")
      ->check(CLI::IsMember({"all", "lemmas", "stationarity", "marginals",
                             "step-distribution", "stabilization",
                             "bounds"}));
  ver->add_option("--realizations", realizations,
                  "Realizations per size in the lemma suite")
      ->check(CLI::PositiveNumber);

  CommonOpts swp_o;
  CLI::App* swp = app.add_subcommand("sweep", "Run a list of configs");
  add_common(swp, swp_o, true);

  CommonOpts plt_o;
  CLI::App* plt =
      app.add_subcommand("plotdata", "Run one config and emit plot tables");
  add_common(plt, plt_o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_o);
    if (ver->parsed()) return cmd_verify(ver_o, suite, realizations);
    if (swp->parsed()) return cmd_sweep(swp_o);
    if (plt->parsed()) return cmd_plotdata(plt_o);
  } catch (const lpp::HypothesisError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const lpp::VerificationError& e) {
    std::fprintf(stderr, "verification failure: %s\n", e.what());
    return 2;
  } catch (const lpp::CapacityError& e) {
    std::fprintf(stderr, "capacity: %s\n", e.what());
    return 3;
  } catch (const std::bad_alloc&) {
    std::fprintf(stderr, "capacity: allocation failed\n");
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
