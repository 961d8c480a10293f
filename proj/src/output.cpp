#include "phaseflow/output.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "phaseflow/config_io.hpp"

namespace phaseflow {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string str17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Shortest decimal string that parses back to the same double; used for
/// directory names where %.17g padding would be noise.
std::string str_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot write output file '" + path.string() + "'");
  return out;
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["mass_kg"] = c.mass_kg;
  j["slit_half_separation_nm"] = c.slit_half_separation_nm;
  j["sigma_rho_nm"] = c.sigma_rho_nm;
  j["sigma_s_nm"] = c.sigma_s_nm;
  j["t_final_ns"] = c.t_final_ns;
  j["grid_x_max_um"] = c.grid_x_max_um;
  j["grid_cells"] = c.grid_cells;
  j["cfl"] = c.cfl;
  j["node_epsilon"] = c.node_epsilon;
  j["scheme"] = scheme_name(c.scheme);
  j["max_steps"] = c.max_steps;
  return j;
}

}  // namespace

std::vector<std::string> write_run_bundle(const std::string& dir,
                                          const RunResult& run) {
  fs::path base(dir);
  std::error_code ec;
  fs::create_directories(base, ec);
  if (ec)
    throw ConfigError("cannot create output directory '" + dir +
                      "': " + ec.message());

  const Grid& grid = run.rho_final.grid;
  const Eigen::ArrayXd centers = grid.centers();
  const Eigen::ArrayXd vel =
      velocity(centers, run.config.t_final(), run.config.sampler());
  const FringeReport fringes = fringe_analysis(run.rho_final);
  const DiscrepancyReport disc =
      born_discrepancy(run.rho_final, run.born_reference);

  std::vector<std::string> written;

  {
    auto out = open_out(base / "data.csv");
    out << "x_m,rho,born_reference,velocity_at_t_final\n";
    for (Eigen::Index i = 0; i < centers.size(); ++i)
      out << str17(centers[i]) << ',' << str17(run.rho_final.values[i]) << ','
          << str17(run.born_reference.values[i]) << ',' << str17(vel[i])
          << '\n';
    written.push_back((base / "data.csv").string());
  }

  {
    auto out = open_out(base / "fringes.csv");
    out << "kind,position_m,height\n";
    for (const Extremum& m : fringes.maxima)
      out << "max," << str17(m.position) << ',' << str17(m.height) << '\n';
    for (const Extremum& m : fringes.minima)
      out << "min," << str17(m.position) << ',' << str17(m.height) << '\n';
    written.push_back((base / "fringes.csv").string());
  }

  {
    json j;
    j["version"] = kVersion;
    j["config"] = config_json(run.config);
    j["grid"] = {{"x_min_m", grid.x_min},
                 {"x_max_m", grid.x_max},
                 {"cells", grid.cells},
                 {"dx_m", grid.dx()}};
    j["diagnostics"] = {{"steps", run.diagnostics.steps},
                        {"min_dt_s", run.diagnostics.min_dt},
                        {"leakage", run.diagnostics.leakage},
                        {"mass_drift", run.diagnostics.mass_drift}};
    j["mass"] = {{"final", run.rho_final.mass_audit}};
    j["fringes"] = {
        {"n_maxima", fringes.maxima.size()},
        {"n_minima", fringes.minima.size()},
        {"central_value", fringes.central_value},
        {"central_is_minimum", fringes.central_is_minimum},
        {"split_depth", fringes.split_depth},
        {"fringe_spacing_estimate_m",
         fringes.fringe_spacing_estimate
             ? json(*fringes.fringe_spacing_estimate)
             : json(nullptr)}};
    j["born_discrepancy"] = {
        {"linf_relative_high_density", disc.linf_relative_high_density},
        {"l2_global", disc.l2_global}};
    auto out = open_out(base / "metadata.json");
    out << j.dump(2) << '\n';
    written.push_back((base / "metadata.json").string());
  }

  {
    auto out = open_out(base / "config_echo.cfg");
    out << format_config(run.config);
    written.push_back((base / "config_echo.cfg").string());
  }

  return written;
}

std::string write_sweep_bundle(const std::string& dir,
                               const std::vector<SweepEntry>& entries) {
  fs::path base(dir);
  std::error_code ec;
  fs::create_directories(base, ec);
  if (ec)
    throw ConfigError("cannot create output directory '" + dir +
                      "': " + ec.message());

  auto out = open_out(base / "summary.csv");
  out << "sigma_s_nm,status,split_depth,central_is_minimum,"
         "linf_born_discrepancy\n";
  for (const SweepEntry& e : entries) {
    if (!e.result) {
      out << str17(e.sigma_s_nm) << ',' << csv_quote(e.error) << ",,,\n";
      continue;
    }
    const FringeReport fringes = fringe_analysis(e.result->rho_final);
    const DiscrepancyReport disc =
        born_discrepancy(e.result->rho_final, e.result->born_reference);
    out << str17(e.sigma_s_nm) << ",ok," << str17(fringes.split_depth) << ','
        << (fringes.central_is_minimum ? 1 : 0) << ','
        << str17(disc.linf_relative_high_density) << '\n';
    write_run_bundle(
        (base / ("sigma_s_" + str_shortest(e.sigma_s_nm) + "nm")).string(),
        *e.result);
  }
  return (base / "summary.csv").string();
}

}  // namespace phaseflow
