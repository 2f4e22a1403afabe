// Command-line driver: simulate, iterate, analyze, check, equilibrium.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rdt/calibration.hpp"
#include "rdt/config.hpp"
#include "rdt/dynamics.hpp"
#include "rdt/error.hpp"
#include "rdt/field_io.hpp"
#include "rdt/harness.hpp"
#include "rdt/invariants.hpp"
#include "rdt/littlewood_paley.hpp"

namespace fs = std::filesystem;
using namespace rdt;

namespace {

enum Exit { kOk = 0, kInvariant = 1, kInput = 2, kDivergence = 3, kGate = 4 };

const char* kComponentNames[4] = {"cA", "cB", "cC", "theta"};

int fail(const std::string& kind, const std::string& message, int code) {
  std::string line = message;
  for (char& ch : line)
    if (ch == '\n') ch = ' ';
  std::cerr << "error[" << kind << "]: " << line << "\n";
  return code;
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::input, "cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::input, "cannot write '" + path.string() + "'");
  return os;
}

void write_plot(const fs::path& dir, const std::string& csv, const std::string& x,
                const std::vector<std::string>& columns, bool logscale) {
  auto os = open_out(dir / "plot.gp");
  os << "set datafile separator ','\nset key autotitle columnhead\nset xlabel '" << x << "'\n";
  if (logscale) os << "set logscale y\n";
  os << "set terminal pngcairo size 900,600\nset output '" << fs::path(csv).stem().string()
     << ".png'\nplot ";
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << (i ? ", " : "") << "'" << csv << "' using '" << x << "':'" << columns[i]
       << "' with linespoints";
  os << "\n";
}

// --------------------------------------------------------------- simulate

int run_simulate(const std::string& config_path, const std::optional<std::string>& out,
                 bool plot) {
  const auto cfg = config::load(config_path);
  const fs::path dir = prepare_dir(out.value_or(cfg.out_dir));
  const auto eq = config::equilibrium(cfg);
  const auto data = config::initial_perturbation(cfg);
  auto state = dyn::ChemState::uniform(cfg.grid, eq);
  for (int i = 0; i < 4; ++i) state.component(i) += data.component(i);

  auto solver = cfg.solver;
  solver.reference = eq;
  const auto record = dyn::integrate(state, solver, cfg.params);
  {
    auto os = open_out(dir / "diagnostics.csv");
    dyn::write_diagnostics_csv(os, record);
  }
  fs::create_directories(dir / "fields");
  for (int i = 0; i < 4; ++i) {
    write_field(dir / "fields" / (std::string(kComponentNames[i]) + "_initial.rdtf"),
                record.snapshots.front().component(i));
    write_field(dir / "fields" / (std::string(kComponentNames[i]) + "_final.rdtf"),
                record.snapshots.back().component(i));
  }
  if (plot) write_plot(dir, "diagnostics.csv", "t", {"entropy", "energy"}, false);

  const auto rep = dyn::diagnostics(record);
  const bool entropy_ok = rep.min_entropy_increment >= -1e-8;
  const bool delta_ok = rep.min_delta >= -1e-12;
  const bool z_ok = rep.max_Z_drift <= 1e-9 * std::max(1.0, std::abs(record.Z0.front()));
  const bool energy_ok = rep.max_energy_drift_rate <= calib::kEnergyDriftRate;
  const bool constant = rep.max_energy_drift_rate == 0.0 && rep.min_entropy_increment == 0.0 &&
                        rep.max_Z_drift == 0.0;
  const bool ok = !record.failure && entropy_ok && delta_ok && z_ok && rep.constraint_ok;
  const std::string summary = fmt::format(
      "result={} steps={} constant={} entropy_monotone={} min_entropy_increment={:.6e} "
      "entropy_production={} min_delta={:.6e} conservation={} max_Z_drift={:.6e} "
      "eta_constraint={} energy_drift={} max_energy_drift_rate={:.6e} energy_drift_bound={:.6e} "
      "min_theta={:.6e} min_c={:.6e}",
      ok ? "pass" : "fail", record.times.empty() ? 0 : record.times.size() - 1,
      constant ? "true" : "false", entropy_ok ? "pass" : "fail", rep.min_entropy_increment,
      delta_ok ? "pass" : "fail", rep.min_delta, z_ok ? "pass" : "fail", rep.max_Z_drift,
      rep.constraint_ok ? "pass" : "fail", energy_ok ? "pass" : "info", rep.max_energy_drift_rate,
      calib::kEnergyDriftRate, rep.min_theta, rep.min_c);
  {
    auto os = open_out(dir / "summary.txt");
    os << summary << "\n";
    for (const auto& v : rep.violations) os << "violation: " << v << "\n";
  }
  std::cout << summary << "\n";
  if (record.failure) return fail("physics", *record.failure, kInvariant);
  if (!ok) return fail("invariant", "trajectory diagnostics failed, see summary.txt", kInvariant);
  return kOk;
}

// ---------------------------------------------------------------- iterate

int run_iterate(const std::string& config_path, const std::optional<std::string>& out, bool force,
                bool plot) {
  const auto cfg = config::load(config_path);
  const fs::path dir = prepare_dir(out.value_or(cfg.out_dir));
  const auto data = config::initial_perturbation(cfg);
  const auto P = lp::build_partition(cfg.grid);
  const auto gate = harness::smallness_gate(data, cfg.iteration.h, P);
  if (!gate.pass && !force)
    return fail("gate",
                fmt::format("data norm {:.6e} exceeds h^4 = {:.6e}; rerun with --force",
                            gate.measured, gate.bound),
                kGate);

  const auto report = harness::run_iteration(data, cfg.iteration, cfg.params);
  {
    auto os = open_out(dir / "iteration.csv");
    harness::write_iteration_csv(os, report);
  }
  if (plot)
    write_plot(dir, "iteration.csv", "k", {"norm_zA", "norm_w", "dnorm_zA", "dnorm_w"}, true);
  const std::string summary = harness::summary_line(report, gate, cfg.iteration);
  {
    auto os = open_out(dir / "summary.txt");
    os << summary << "\n";
  }
  std::cout << summary << "\n";
  if (report.status != harness::IterationStatus::converged)
    return fail("divergence", report.message, kDivergence);
  if (!report.est1_ok || !report.est2_ok)
    return fail("invariant", "iterate bound or difference decay failed", kInvariant);
  return kOk;
}

// ---------------------------------------------------------------- analyze

int run_analyze(double s, int r, const std::optional<std::string>& q_text, double dt,
                const std::vector<std::string>& files) {
  lp::FieldSeries series;
  for (std::size_t i = 0; i < files.size(); ++i) {
    Field u = read_field(files[i]);
    if (!series.fields.empty() && !(u.grid() == series.fields.front().grid()))
      throw Error(ErrorKind::input, "'" + files[i] + "' has a different grid");
    series.times.push_back(static_cast<double>(i) * dt);
    series.fields.push_back(std::move(u));
  }
  const lp::BesovIndex idx{s, 2, r};
  const GridSpec& grid = series.fields.front().grid();
  try {
    lp::require_admissible(idx, grid.dim());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorKind::input, e.what());
  }
  const auto P = lp::build_partition(grid);
  if (!q_text) {
    for (std::size_t i = 0; i < files.size(); ++i) {
      std::cout << "file," << files[i] << "\n";
      lp::write_norm_csv(std::cout, lp::besov_norm(series.fields[i], idx, P));
    }
    return kOk;
  }
  int q = 0;
  if (*q_text == "1") q = 1;
  else if (*q_text == "2") q = 2;
  else if (*q_text == "inf") q = lp::kInfinity;
  else throw Error(ErrorKind::input, "--q must be 1, 2 or inf");
  if (files.size() < 2 && q != lp::kInfinity)
    throw Error(ErrorKind::input, "time norms with q < inf need at least two files");
  std::cout << "series," << files.size() << "\n";
  lp::write_norm_csv(std::cout, lp::time_space_norm(series, q, idx, P));
  return kOk;
}

// ------------------------------------------------------------------ check

int run_check(const std::string& inject, const std::vector<std::string>& modules) {
  checks::CheckOptions opts;
  opts.fault = checks::parse_fault(inject);
  opts.modules = modules;
  const auto results = checks::run_checks(opts);
  std::vector<std::string> failed;
  for (const auto& r : results) {
    checks::print_result(std::cout, r);
    if (!r.pass) failed.push_back(r.module + "/" + r.name);
  }
  std::cout << fmt::format("checks={} failed={}\n", results.size(), failed.size());
  if (failed.empty()) return kOk;
  std::string list;
  for (const auto& f : failed) list += (list.empty() ? "" : ",") + f;
  return fail("invariant", fmt::format("{} failed: {}", failed.size(), list), kInvariant);
}

// ------------------------------------------------------------ equilibrium

int run_equilibrium(double a, double b, double c, const std::string& convention,
                    const std::optional<std::string>& config_path) {
  thermo::ThermoParams params;
  if (config_path) params = config::load(*config_path).params;
  const auto conv = thermo::parse_convention(convention);
  if (conv == thermo::RateConvention::mass_action)
    throw Error(ErrorKind::input, "--convention must be rt4 or r2");
  const thermo::Triple cc{a, b, c};
  for (double v : cc)
    if (!(v > 0.0)) throw Error(ErrorKind::input, "concentrations must be positive");
  const auto eq = thermo::find_equilibrium(cc, params, conv);
  const thermo::StatePoint p{eq.c_tilde, eq.theta_tilde};
  std::cout << fmt::format(
      "cA={:.17g} cB={:.17g} cC={:.17g} theta={:.17g} convention={} rate={:.3e} "
      "quotient={:.17g}\n",
      eq.c_tilde[0], eq.c_tilde[1], eq.c_tilde[2], eq.theta_tilde, thermo::to_string(conv),
      thermo::rate(p, params, conv), eq.c_tilde[0] * eq.c_tilde[1] / eq.c_tilde[2]);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reaction-diffusion-temperature toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  bool force = false, plot = false;
  auto* sim = app.add_subcommand("simulate", "integrate the dynamics from a config");
  sim->add_option("--config", config_path, "config file")->required();
  sim->add_option("--out", out_dir, "output directory (overrides out.dir)");
  sim->add_flag("--plot", plot, "also write a gnuplot script");

  auto* it = app.add_subcommand("iterate", "run the Picard iteration from a config");
  it->add_option("--config", config_path, "config file")->required();
  it->add_option("--out", out_dir, "output directory (overrides out.dir)");
  it->add_flag("--force", force, "run even when the smallness gate fails");
  it->add_flag("--plot", plot, "also write a gnuplot script");

  double s = 0.0, dt = 1.0;
  int r = 1;
  std::optional<std::string> q;
  std::vector<std::string> files;
  auto* an = app.add_subcommand("analyze", "Besov norms of RDTF1 field files");
  an->add_option("--s", s, "regularity index")->required();
  an->add_option("--r", r, "summability index, 1 or 2")->required();
  an->add_option("--q", q, "time integrability 1, 2 or inf (files form a series)");
  an->add_option("--dt", dt, "spacing of the series in time")->check(CLI::PositiveNumber);
  an->add_option("files", files, "field files")->required();

  std::string inject = "none";
  std::vector<std::string> modules;
  auto* ck = app.add_subcommand("check", "run the invariant suite");
  ck->add_option("--inject", inject, "fault to inject: phi-support, rate-sign");
  ck->add_option("--module", modules, "restrict to these modules");

  double ca = 1.0, cb = 1.0, cc = 1.0;
  std::string convention = "rt4";
  std::optional<std::string> eq_config;
  auto* eqc = app.add_subcommand("equilibrium", "equilibrium through given concentrations");
  eqc->add_option("--cA", ca, "seed concentration of A")->required();
  eqc->add_option("--cB", cb, "seed concentration of B")->required();
  eqc->add_option("--cC", cc, "seed concentration of C")->required();
  eqc->add_option("--convention", convention, "rt4 or r2");
  eqc->add_option("--config", eq_config, "take thermodynamic parameters from a config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("input", e.what(), kInput);
  }

  try {
    if (*sim) return run_simulate(config_path, out_dir, plot);
    if (*it) return run_iterate(config_path, out_dir, force, plot);
    if (*an) return run_analyze(s, r, q, dt, files);
    if (*ck) return run_check(inject, modules);
    if (*eqc) return run_equilibrium(ca, cb, cc, convention, eq_config);
  } catch (const PositivityError& e) {
    return fail("physics", e.what(), kInvariant);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::input: return fail("input", e.what(), kInput);
      case ErrorKind::physics: return fail("physics", e.what(), kInvariant);
      case ErrorKind::divergence: return fail("divergence", e.what(), kDivergence);
      case ErrorKind::gate: return fail("gate", e.what(), kGate);
    }
  } catch (const std::invalid_argument& e) {
    return fail("input", e.what(), kInput);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kInvariant);
  }
  return kOk;
}
