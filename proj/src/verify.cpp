#include "phaseflow/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <thread>

#include "phaseflow/config_io.hpp"
#include "phaseflow/experiment.hpp"
#include "phaseflow/output.hpp"

namespace phaseflow {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Split depths for sigma_S = 100, 100.5, 101, 101.5 nm on the default grid,
// frozen from a verified run of this implementation as a regression anchor.
constexpr double kSplitDepthGolden[4] = {0.0, 0.028661360263571911,
                                         0.061771886371805418,
                                         0.095735509685001108};
constexpr double kSplitDepthTol = 2e-4;

struct AuditedRun {
  std::string name;
  SolverDiagnostics diag;
};

/// Lazily computed runs shared between checks.
struct Shared {
  int jobs = 1;
  std::optional<RunResult> born16;  // sigma_S = sigma_rho, defaults
  double born16_seconds = 0.0;
  std::optional<RunResult> anomaly16;  // sigma_S = 101.5 nm
  std::vector<SweepEntry> sweep;
  std::vector<AuditedRun> audited;  // every completed 2 ns run

  RunResult& born16_run() {
    if (!born16) {
      const auto t0 = std::chrono::steady_clock::now();
      born16 = run_double_slit(ExperimentConfig{});
      born16_seconds = seconds_since(t0);
      audited.push_back({"born_16384", born16->diagnostics});
    }
    return *born16;
  }

  RunResult& anomaly16_run() {
    if (!anomaly16) {
      for (const SweepEntry& e : sweep)
        if (e.result && e.sigma_s_nm == 101.5) anomaly16 = *e.result;
    }
    if (!anomaly16) {
      ExperimentConfig c;
      c.sigma_s_nm = 101.5;
      anomaly16 = run_double_slit(c);
      audited.push_back({"anomaly_16384", anomaly16->diagnostics});
    }
    return *anomaly16;
  }
};

CheckResult check_born_limit(Shared& s) {
  const RunResult& run = s.born16_run();
  const DiscrepancyReport disc =
      born_discrepancy(run.rho_final, run.born_reference);
  CheckResult r{"born_limit", false, ""};
  r.passed = disc.linf_relative_high_density < 0.01 && s.born16_seconds < 60.0;
  r.detail = "sigma_S = sigma_rho: relative Linf " +
             fmt(disc.linf_relative_high_density) +
             " on the >1% region (bound 0.01), " + fmt(s.born16_seconds) +
             " s (bound 60)";
  return r;
}

CheckResult check_anomaly_split(Shared& s) {
  const std::vector<double> sigmas{100.0, 100.5, 101.0, 101.5};
  s.sweep = sweep_sigma_s(ExperimentConfig{}, sigmas, s.jobs);
  CheckResult r{"anomaly_split", false, ""};
  std::vector<double> depths;
  for (const SweepEntry& e : s.sweep) {
    if (!e.result) {
      r.detail = "run at sigma_S = " + fmt(e.sigma_s_nm) +
                 " nm failed: " + e.error;
      return r;
    }
    s.audited.push_back({"sweep_" + fmt(e.sigma_s_nm) + "nm",
                         e.result->diagnostics});
    depths.push_back(fringe_analysis(e.result->rho_final).split_depth);
  }
  const FringeReport narrow = fringe_analysis(s.sweep.front().result->rho_final);
  const FringeReport wide = fringe_analysis(s.sweep.back().result->rho_final);
  bool monotone = true;
  for (size_t i = 0; i + 1 < depths.size(); ++i)
    monotone = monotone && depths[i + 1] >= depths[i];
  bool golden = true;
  for (size_t i = 0; i < depths.size(); ++i)
    golden = golden && std::abs(depths[i] - kSplitDepthGolden[i]) <
                           kSplitDepthTol;
  r.passed = wide.central_is_minimum && narrow.central_is_maximum &&
             monotone && golden;
  r.detail = "rho(0) is a " +
             std::string(wide.central_is_minimum ? "minimum" : "NON-minimum") +
             " at 101.5 nm and a " +
             std::string(narrow.central_is_maximum ? "maximum" : "NON-maximum") +
             " at 100 nm; depths " + fmt(depths[0]) + ", " + fmt(depths[1]) +
             ", " + fmt(depths[2]) + ", " + fmt(depths[3]) +
             (monotone ? " (nondecreasing" : " (NOT nondecreasing") +
             (golden ? ", match frozen values)" : ", drifted from frozen values)");
  return r;
}

CheckResult check_conservation(Shared& s) {
  s.born16_run();
  CheckResult r{"conservation", false, ""};
  double worst_drift = 0.0, worst_leak = 0.0;
  for (const AuditedRun& a : s.audited) {
    worst_drift = std::max(worst_drift, a.diag.mass_drift);
    worst_leak = std::max(worst_leak, a.diag.leakage);
  }
  r.passed = worst_drift < 1e-6 && worst_leak < 1e-6;
  r.detail = "across " + std::to_string(s.audited.size()) +
             " runs: max mass drift " + fmt(worst_drift) +
             ", max boundary leakage " + fmt(worst_leak) + " (bounds 1e-6)";
  return r;
}

CheckResult check_fv_vs_characteristics(Shared& s) {
  CheckResult r{"fv_vs_characteristics", false, ""};
  double worst = 0.0;
  for (const bool anomaly : {false, true}) {
    const RunResult& run = anomaly ? s.anomaly16_run() : s.born16_run();
    const ExperimentConfig& c = run.config;
    const DensityField rho0 = initial_density(c.wave_rho(), c.grid());
    const DensityField chars = propagate_characteristics(
        rho0, make_velocity_field(c.sampler()), c.t_final(),
        8 * c.grid_cells);
    const Eigen::ArrayXd& fv = run.rho_final.values;
    const double cut = 0.01 * fv.maxCoeff();
    double linf = 0.0;
    for (Eigen::Index i = 0; i < fv.size(); ++i)
      if (fv[i] > cut)
        linf = std::max(linf, std::abs(chars.values[i] - fv[i]) / fv[i]);
    worst = std::max(worst, linf);
    r.detail += std::string(anomaly ? "101.5 nm: " : "100 nm: ") + fmt(linf) +
                (anomaly ? "" : "; ");
  }
  r.passed = worst < 0.01;
  r.detail += " relative Linf on the >1% region (bound 0.01)";
  return r;
}

CheckResult check_short_time_series(Shared&) {
  ExperimentConfig c;
  c.t_final_ns = 0.02;
  const DensityField rho0 = initial_density(c.wave_rho(), c.grid());
  const VelocityField field = make_velocity_field(c.sampler());

  const DensityField fv = propagate_fv(rho0, field, c.t_final(), c.solver());
  const SeriesResult series =
      propagate_series(rho0, field, c.t_final(), 3, 64);
  const double l2 =
      std::sqrt((series.density.values - fv.values).square().sum() /
                fv.values.square().sum());

  // Term norms across a decade of final times; term k of the nested
  // integral must vanish at least as fast as t^(k+1).
  std::vector<double> log_t;
  std::vector<std::vector<double>> log_norms(3);
  for (int i = 0; i < 5; ++i) {
    const double t = c.t_final() * std::pow(10.0, -1.0 + 0.25 * i);
    const SeriesResult sr = propagate_series(rho0, field, t, 3, 64);
    log_t.push_back(std::log(t));
    for (int k = 0; k < 3; ++k)
      log_norms[k].push_back(std::log(sr.term_norms[k]));
  }
  CheckResult r{"short_time_series", false, ""};
  bool slopes_ok = true;
  std::string slope_txt;
  for (int k = 0; k < 3; ++k) {
    const double slope = fit_slope(log_t, log_norms[k]);
    slopes_ok = slopes_ok && slope >= static_cast<double>(k + 2) - 0.2;
    slope_txt += (k ? ", " : "") + fmt(slope);
  }
  r.passed = l2 < 1e-3 && slopes_ok && !series.diverged;
  r.detail = "order-3 sum vs FV at 0.02 ns: relative L2 " + fmt(l2) +
             " (bound 1e-3); term-norm slopes " + slope_txt +
             " (bounds 1.8, 2.8, 3.8)";
  return r;
}

CheckResult check_single_packet(Shared& s) {
  ExperimentConfig c;
  c.grid_cells = 8192;
  const DoubleSlitWave wave = c.wave_s();
  const double X = wave.half_separation_X;
  const double sig = wave.sigma;
  const double t = c.t_final();
  const VelocitySampler sampler{wave, c.node_epsilon,
                                PacketSelection::UpperOnly};

  // Velocity against the closed form hbar gamma (x-X) / (2 m sigma^2 (1+g^2)).
  const double g = gamma(t, sig, wave.constants);
  const Eigen::ArrayXd x =
      Eigen::ArrayXd::LinSpaced(2001, X - 6.0 * sig, X + 6.0 * sig);
  const Eigen::ArrayXd v = velocity(x, t, sampler);
  const Eigen::ArrayXd v_ref = wave.constants.hbar * g * (x - X) /
                               (2.0 * wave.constants.mass * sig * sig *
                                (1.0 + g * g));
  const double v_err =
      ((v - v_ref).abs() / v_ref.abs().maxCoeff()).maxCoeff();

  // Transported single packet keeps a Gaussian profile of width
  // sigma sqrt(1+gamma^2); measure via the second moment.
  const Grid grid = c.grid();
  const Eigen::ArrayXd centers = grid.centers();
  const DensityField rho0 = make_density_field(
      grid, 0.0,
      born_density(centers, 0.0, wave, PacketSelection::UpperOnly));
  SolverDiagnostics diag;
  const DensityField rho = propagate_fv(
      rho0,
      [&sampler](const Eigen::ArrayXd& xs, double tt) {
        return velocity(xs, tt, sampler);
      },
      t, c.solver(), &diag);
  s.audited.push_back({"single_packet_8192", diag});
  const double mass = rho.values.sum();
  const double mean = (rho.values * centers).sum() / mass;
  const double var = (rho.values * (centers - mean).square()).sum() / mass;
  const double width = std::sqrt(var);
  const double width_ref = sig * std::sqrt(1.0 + g * g);
  const double width_err = std::abs(width - width_ref) / width_ref;

  const double g_err = std::abs(g - 11.576763605054296);

  CheckResult r{"single_packet_oracles", false, ""};
  r.passed = v_err < 1e-8 && width_err < 5e-3 && g_err < 1e-3;
  r.detail = "velocity error " + fmt(v_err) + " (bound 1e-8); width " +
             fmt(width) + " vs " + fmt(width_ref) + " m, off by " +
             fmt(width_err) + " (bound 5e-3); gamma off by " + fmt(g_err) +
             " (bound 1e-3)";
  return r;
}

CheckResult check_fringe_spacing(Shared& s) {
  const RunResult& run = s.born16_run();
  const FringeReport fr = fringe_analysis(run.rho_final);
  const DoubleSlitWave wave = run.config.wave_s();
  const double g = gamma(run.config.t_final(), wave.sigma, wave.constants);
  const double expected = 2.0 * M_PI * wave.sigma * wave.sigma *
                          (1.0 + g * g) /
                          (wave.half_separation_X * g);
  CheckResult r{"fringe_spacing", false, ""};
  if (!fr.fringe_spacing_estimate) {
    r.detail = "no fringe spacing estimate (need >= 3 maxima)";
    return r;
  }
  const double rel = std::abs(*fr.fringe_spacing_estimate - expected) / expected;
  r.passed = rel < 0.05;
  r.detail = "median spacing " + fmt(*fr.fringe_spacing_estimate) + " m vs " +
             fmt(expected) + " m, off by " + fmt(rel) + " (bound 0.05)";
  return r;
}

CheckResult check_mirror_symmetry(Shared& s) {
  const RunResult& run = s.born16_run();
  const Eigen::ArrayXd& v = run.rho_final.values;
  const double peak = v.maxCoeff();
  double worst = 0.0;
  const Eigen::Index n = v.size();
  for (Eigen::Index i = 0; i < n / 2; ++i)
    worst = std::max(worst, std::abs(v[i] - v[n - 1 - i]));
  CheckResult r{"mirror_symmetry", false, ""};
  r.passed = worst < 1e-10 * peak;
  r.detail = "max |rho(x) - rho(-x)| = " + fmt(worst) + ", i.e. " +
             fmt(peak > 0 ? worst / peak : 0.0) +
             " of the peak (bound 1e-10 of the peak)";
  return r;
}

CheckResult check_grid_convergence(Shared& s) {
  // sigma_S = sigma_rho, where the Born density is the exact answer.
  const RunResult& fine = s.born16_run();
  ExperimentConfig c;
  c.grid_cells = 8192;
  const RunResult coarse = run_double_slit(c);
  s.audited.push_back({"convergence_8192", coarse.diagnostics});

  auto l1_error = [](const RunResult& run) {
    const Eigen::ArrayXd& ref = run.born_reference.values;
    const double cut = 0.1 * ref.maxCoeff();
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < ref.size(); ++i) {
      if (ref[i] > cut) {
        num += std::abs(run.rho_final.values[i] - ref[i]);
        den += ref[i];
      }
    }
    return num / den;
  };
  const double err_coarse = l1_error(coarse);
  const double err_fine = l1_error(fine);
  const double ratio = err_coarse / err_fine;
  CheckResult r{"grid_convergence", false, ""};
  r.passed = ratio >= 1.8;
  r.detail = "relative L1 error on the >10% region: " + fmt(err_coarse) +
             " at 8192 cells, " + fmt(err_fine) +
             " at 16384; halving dx shrank it " + fmt(ratio) +
             "x (bound 1.8)";
  return r;
}

}  // namespace

std::vector<CheckResult> run_verification(VerifyLevel level, int jobs) {
  Shared s;
  if (jobs <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    s.jobs = static_cast<int>(std::clamp(hw, 1u, 8u));
  } else {
    s.jobs = jobs;
  }

  struct Entry {
    int index;
    std::function<CheckResult(Shared&)> fn;
    bool quick;
  };
  // Conservation audits every run the other checks perform, so it executes
  // last; results are reported in index order regardless.
  const std::vector<Entry> entries{
      {1, check_born_limit, true},
      {2, check_anomaly_split, false},
      {4, check_fv_vs_characteristics, false},
      {5, check_short_time_series, true},
      {6, [](Shared& sh) { return check_single_packet(sh); }, true},
      {7, check_fringe_spacing, true},
      {8, check_mirror_symmetry, true},
      {9, check_grid_convergence, false},
      {3, check_conservation, true},
  };

  std::vector<std::pair<int, CheckResult>> results;
  for (const Entry& e : entries) {
    if (level == VerifyLevel::Quick && !e.quick) continue;
    results.emplace_back(e.index, e.fn(s));
  }
  std::sort(results.begin(), results.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<CheckResult> out;
  out.reserve(results.size());
  for (auto& [_, r] : results) out.push_back(std::move(r));
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed; });
}

void print_results(std::ostream& out, const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail
        << "\n";
}

}  // namespace phaseflow
