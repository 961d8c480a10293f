#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "phaseflow/config_io.hpp"
#include "phaseflow/output.hpp"
#include "phaseflow/verify.hpp"

namespace {

using namespace phaseflow;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  const ParsedConfig parsed = parse_config_file(path);
  if (!parsed.defaulted_keys.empty()) {
    std::cerr << "note: defaults used for";
    for (const std::string& k : parsed.defaulted_keys) std::cerr << ' ' << k;
    std::cerr << '\n';
  }
  return parsed.config;
}

void print_run_summary(const RunResult& run) {
  const FringeReport fr = fringe_analysis(run.rho_final);
  const DiscrepancyReport disc =
      born_discrepancy(run.rho_final, run.born_reference);
  std::cout << "steps " << run.diagnostics.steps << ", min dt "
            << fmt(run.diagnostics.min_dt) << " s, mass drift "
            << fmt(run.diagnostics.mass_drift) << ", leakage "
            << fmt(run.diagnostics.leakage) << '\n';
  std::cout << "rho(0) = " << fmt(fr.central_value) << " 1/m ("
            << (fr.central_is_minimum
                    ? "minimum"
                    : fr.central_is_maximum ? "maximum" : "flat")
            << "), split depth " << fmt(fr.split_depth);
  if (fr.fringe_spacing_estimate)
    std::cout << ", fringe spacing " << fmt(*fr.fringe_spacing_estimate)
              << " m";
  std::cout << '\n';
  std::cout << "Born discrepancy: Linf " << fmt(disc.linf_relative_high_density)
            << " on the >1% region, L2 " << fmt(disc.l2_global) << '\n';
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 double sigma_s_nm) {
  ExperimentConfig cfg = load_config(config_path);
  if (sigma_s_nm > 0.0) cfg.sigma_s_nm = sigma_s_nm;
  const RunResult run = run_double_slit(cfg);
  print_run_summary(run);
  const auto files = write_run_bundle(out_dir, run);
  std::cout << "wrote " << files.size() << " files under " << out_dir << '\n';
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::vector<double>& sigma_s_nm, int jobs) {
  const ExperimentConfig cfg = load_config(config_path);
  const auto entries = sweep_sigma_s(cfg, sigma_s_nm, jobs);
  const std::string summary = write_sweep_bundle(out_dir, entries);
  bool any_failed = false;
  for (const SweepEntry& e : entries) {
    if (e.result) {
      const FringeReport fr = fringe_analysis(e.result->rho_final);
      std::cout << "sigma_S " << fmt(e.sigma_s_nm) << " nm: split depth "
                << fmt(fr.split_depth) << ", central "
                << (fr.central_is_minimum
                        ? "minimum"
                        : fr.central_is_maximum ? "maximum" : "flat")
                << '\n';
    } else {
      any_failed = true;
      std::cout << "sigma_S " << fmt(e.sigma_s_nm)
                << " nm: FAILED: " << e.error << '\n';
    }
  }
  std::cout << "wrote " << summary << '\n';
  return any_failed ? 3 : 0;
}

int cmd_verify(const std::string& level_token, int jobs) {
  const VerifyLevel level =
      level_token == "full" ? VerifyLevel::Full : VerifyLevel::Quick;
  const auto results = run_verification(level, jobs);
  print_results(std::cout, results);
  return all_passed(results) ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Phase-guided probability transport for a two-slit matter wave"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  double sigma_override = 0.0;
  std::vector<double> sweep_values;
  int jobs = 0;
  std::string level = "quick";

  CLI::App* simulate =
      app.add_subcommand("simulate", "One run; writes a result bundle");
  simulate->add_option("--config", config_path,
                       "key = value config file (defaults otherwise)");
  simulate->add_option("--out", out_dir, "output directory")
      ->capture_default_str();
  simulate->add_option("--sigma-s-nm", sigma_override,
                       "override the guiding-wave width, in nm");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Independent runs over several guiding-wave widths");
  sweep->add_option("--config", config_path,
                    "key = value config file (defaults otherwise)");
  sweep->add_option("--out", out_dir, "output directory")
      ->capture_default_str();
  sweep
      ->add_option("--sigma-s-nm", sweep_values,
                   "guiding-wave widths to sweep, in nm")
      ->required()
      ->expected(-1);
  sweep->add_option("--jobs", jobs, "worker threads (0 = auto)");

  CLI::App* verify =
      app.add_subcommand("verify", "Built-in physics and regression checks");
  verify->add_option("--level", level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  verify->add_option("--jobs", jobs, "worker threads (0 = auto)");

  try {
    app.parse(argc, argv);
    if (simulate->parsed())
      return cmd_simulate(config_path, out_dir, sigma_override);
    if (sweep->parsed()) {
      const int j = jobs <= 0 ? 4 : jobs;
      return cmd_sweep(config_path, out_dir, sweep_values, j);
    }
    if (verify->parsed()) return cmd_verify(level, jobs);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const phaseflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const phaseflow::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
