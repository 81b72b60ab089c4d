// fraclayer: solves, sweeps, fits and property checks for the nonlocal Allen-Cahn energy.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fraclayer/analysis.hpp"
#include "fraclayer/energy.hpp"
#include "fraclayer/extension.hpp"
#include "fraclayer/io.hpp"
#include "fraclayer/kernel.hpp"
#include "fraclayer/potential.hpp"
#include "fraclayer/properties.hpp"
#include "fraclayer/solver.hpp"

namespace fs = std::filesystem;
using namespace fraclayer;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kCheckFailed = 1, kInputError = 2;

struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  double s = 0.5;
  double h = 0.1;
  double R = 40;
  std::vector<double> R_schedule;
  std::vector<double> deltas = {0.05, 0.1, 0.2, 0.4};
  std::string potential = "quartic";
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  int trials = 1000;
  int n = 2;
  long samples = 1000000;
  int max_iters = 50000;
  double grad_tol = 1e-8;
  std::string seed_profile = "linear_ramp";
  std::vector<double> window = {0.2, 0.6};
};

json to_json(const RunConfig& c) {
  return {{"command", c.command},   {"s", c.s},
          {"h", c.h},               {"R", c.R},
          {"R_schedule", c.R_schedule}, {"deltas", c.deltas},
          {"potential", c.potential}, {"output_dir", c.output_dir},
          {"seed", c.seed},         {"trials", c.trials},
          {"n", c.n},               {"samples", c.samples},
          {"max_iters", c.max_iters}, {"grad_tol", c.grad_tol},
          {"seed_profile", c.seed_profile}, {"window", c.window}};
}

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw input_error("invalid --" + field + ": " + why);
}

void validate(const RunConfig& c) {
  require(c.s > 0 && c.s < 1, "s", "must lie in (0, 1)");
  require(c.h > 0 && std::isfinite(c.h), "h", "must be positive");
  require(c.R > 0 && std::isfinite(c.R), "R", "must be positive");
  for (size_t k = 0; k < c.R_schedule.size(); ++k) {
    require(c.R_schedule[k] > 0, "R-schedule", "entries must be positive");
    if (k) require(c.R_schedule[k] > c.R_schedule[k - 1], "R-schedule", "must be strictly increasing");
  }
  for (double d : c.deltas) require(d > 0 && d < 0.5, "deltas", "entries must lie in (0, 1/2)");
  require(c.trials > 0, "trials", "must be positive");
  require(c.samples >= 16, "samples", "must be at least 16");
  require(c.max_iters > 0, "max-iters", "must be positive");
  require(c.grad_tol > 0, "grad-tol", "must be positive");
  require(c.window.size() == 2 && c.window[0] > 0 && c.window[0] < c.window[1] && c.window[1] <= 1, "window",
          "must be f_lo,f_hi with 0 < f_lo < f_hi <= 1");
  require(c.seed_profile == "linear_ramp" || c.seed_profile == "sign_step", "seed-profile",
          "must be linear_ramp or sign_step");
  if (c.command == "compute-varpi") require(c.n >= 2, "n", "must be >= 2");
  if (c.command == "kernel-oracles")
    for (double R : c.R_schedule) require(R >= 1, "R-schedule", "kernel oracles need R >= 1");
  if (c.command == "shell-energy" || c.command == "extension-energy")
    for (double R : c.R_schedule) require(R >= 2, "R-schedule", "extension sweeps need R >= 2");
  if (c.command == "sweep-scaling") require(c.R_schedule.size() >= 3, "R-schedule", "need at least 3 windows");
}

PotentialSpec load_potential(const RunConfig& c) {
  if (c.potential == "quartic") return PotentialSpec::quartic();
  PotentialSpec W;
  try {
    W = load_potential_csv(c.potential);
  } catch (const std::exception& e) {
    throw input_error(std::string("invalid --potential: ") + e.what());
  }
  const auto rep = validate_double_well(W, 1e-8);
  for (const auto& chk : rep.checks)
    require(chk.pass, "potential", "check '" + chk.name + "' failed");
  return W;
}

std::string out_path(const RunConfig& c, const std::string& name) { return (fs::path(c.output_dir) / name).string(); }

void finish(const RunConfig& c, const std::vector<std::string>& outputs) {
  std::vector<std::string> inputs;
  if (c.potential != "quartic") inputs.push_back(c.potential);
  std::vector<std::string> paths;
  for (const auto& o : outputs) paths.push_back(out_path(c, o));
  write_manifest(c.output_dir, to_json(c), inputs, paths);
}

SolveOptions solve_options(const RunConfig& c) {
  SolveOptions o;
  o.max_iters = c.max_iters;
  o.grad_tol = c.grad_tol;
  o.seed_profile = c.seed_profile == "sign_step" ? SeedProfile::sign_step : SeedProfile::linear_ramp;
  return o;
}

json report_json(const SolveReport& r) {
  return {{"iterations", r.iterations},
          {"converged", r.converged},
          {"final_grad_norm", r.final_grad_norm},
          {"el_residual_max", r.el_residual_max},
          {"monotonicity_defect", r.monotonicity_defect},
          {"energy_history_monotone", r.energy_history_monotone},
          {"energy", r.energy}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

int solve_profile(const RunConfig& c) {
  const PotentialSpec W = load_potential(c);
  const FracOrder order(c.s);
  SolveOptions o = solve_options(c);
  o.record_trace = true;
  const Profile seed = make_seed(Grid1D::symmetric(c.R, c.h), o.seed_profile);
  o.seed_profile = SeedProfile::custom;
  auto [p, rep] = minimize(seed, order, W, o);
  const EnergyBreakdown e = energy(p, order, W);

  save_profile_csv(p, c.s, out_path(c, "profile.csv"));
  save_trace_csv(out_path(c, "trace.csv"), rep.trace);
  write_table_csv(out_path(c, "energy.csv"), {"R", "s", "k_in_in", "k_in_out", "potential", "total"},
                  {{c.R, c.s, e.k_in_in, e.k_in_out, e.potential, e.total}});
  json j = report_json(rep);
  j["breakdown"] = {{"k_in_in", e.k_in_in}, {"k_in_out", e.k_in_out}, {"potential", e.potential}, {"total", e.total}};
  write_json(out_path(c, "report.json"), j);
  finish(c, {"profile.csv", "trace.csv", "energy.csv", "report.json"});

  std::printf("solve-profile s=%g R=%g h=%g: F=%.12g iterations=%d el_residual=%.3e %s\n", c.s, c.R, c.h, e.total,
              rep.iterations, rep.el_residual_max, rep.converged ? "converged" : "NOT converged");
  return rep.converged ? kOk : kCheckFailed;
}

int sweep_scaling(const RunConfig& c) {
  const PotentialSpec W = load_potential(c);
  const FracOrder order(c.s);
  const auto runs = continuation_solve(c.R_schedule, c.h, order, W, solve_options(c));
  std::vector<double> Fs;
  std::vector<std::vector<double>> rows;
  bool converged = true;
  for (size_t k = 0; k < runs.size(); ++k) {
    const EnergyBreakdown e = energy(runs[k].first, order, W);
    Fs.push_back(e.total);
    converged = converged && runs[k].second.converged;
    rows.push_back({c.R_schedule[k], e.k_in_in, e.k_in_out, e.potential, e.total,
                    static_cast<double>(runs[k].second.iterations), runs[k].second.converged ? 1.0 : 0.0});
  }
  write_table_csv(out_path(c, "scaling.csv"),
                  {"R", "k_in_in", "k_in_out", "potential", "total", "iterations", "converged"}, rows);
  const ScalingFit f = fit_scaling(c.R_schedule, Fs, order);

  bool ok = converged;
  std::ostringstream msg;
  switch (f.regime) {
    case ScalingFit::Kind::power:
      ok = ok && std::abs(f.exponent - (1 - 2 * c.s)) <= 0.08;
      msg << "exponent=" << f.exponent << " (target " << 1 - 2 * c.s << " +- 0.08)";
      break;
    case ScalingFit::Kind::log:
      ok = ok && f.residual < 0.1;
      msg << "slope in log R=" << f.prefactor << " residual=" << f.residual << " (target < 0.1)";
      break;
    case ScalingFit::Kind::constant:
      ok = ok && f.tail_increment < 0.05 * f.prefactor;
      msg << "F(R_max)=" << f.prefactor << " tail increment=" << f.tail_increment << " (target < 5% of F)";
      break;
  }
  write_json(out_path(c, "fit.json"), {{"regime", static_cast<int>(f.regime)},
                                       {"exponent", f.exponent},
                                       {"prefactor", f.prefactor},
                                       {"intercept", f.intercept},
                                       {"residual", f.residual},
                                       {"tail_increment", f.tail_increment},
                                       {"pass", ok}});
  finish(c, {"scaling.csv", "fit.json"});
  std::printf("sweep-scaling s=%g: %s %s\n", c.s, msg.str().c_str(), verdict(ok));
  return ok ? kOk : kCheckFailed;
}

int fit_decay_cmd(const RunConfig& c) {
  const PotentialSpec W = load_potential(c);
  const FracOrder order(c.s);
  const auto runs = continuation_solve({0.2 * c.R, 0.5 * c.R, c.R}, c.h, order, W, solve_options(c));
  const Profile p = normalize_translation(runs.back().first);
  save_profile_csv(p, c.s, out_path(c, "profile.csv"));
  const std::pair<double, double> win{c.window[0], c.window[1]};
  const DecayFit a = fit_decay(p, DecayQuantity::one_minus_u, win);
  const DecayFit b = fit_decay(p, DecayQuantity::one_plus_u, win);
  const DecayFit d = fit_decay(p, DecayQuantity::abs_du, win);
  std::vector<std::vector<double>> rows;
  for (const auto& f : {a, b, d})
    rows.push_back({static_cast<double>(f.quantity), f.slope, f.intercept, f.r_squared, f.window.first,
                    f.window.second, static_cast<double>(f.points)});
  write_table_csv(out_path(c, "decay.csv"), {"quantity", "slope", "intercept", "r_squared", "x_lo", "x_hi", "points"},
                  rows);
  finish(c, {"profile.csv", "decay.csv"});
  const bool ok_u = std::abs(a.slope + 2 * c.s) <= 0.15;
  const bool ok_d = std::abs(d.slope + 1 + 2 * c.s) <= 0.2;
  std::printf("fit-decay s=%g R=%g h=%g: slope(1-u)=%.4f (target %.2f +- 0.15) slope(|u'|)=%.4f (target %.2f +- 0.2) %s\n",
              c.s, c.R, c.h, a.slope, -2 * c.s, d.slope, -1 - 2 * c.s, verdict(ok_u && ok_d));
  return ok_u && ok_d ? kOk : kCheckFailed;
}

int check_properties(const RunConfig& c) {
  const PotentialSpec W = load_potential(c);
  const FracOrder order(c.s);
  const int equality_trials = std::max(1, c.trials / 10);
  const int gradient_trials = std::max(1, c.trials / 20);
  std::vector<PropertyResult> res = {
      check_rearrangement(order, W, c.trials, c.seed),
      check_rearrangement_equality(order, W, equality_trials, c.seed + 1),
      check_clamp(order, W, c.trials, c.seed + 2),
      check_monotone_rearrange(order, W, c.trials, c.seed + 3),
      check_gradient(order, W, gradient_trials, c.seed + 4),
  };
  std::ofstream out(out_path(c, "properties.csv"));
  out << "check,trials,violations,worst\n";
  int violations = 0;
  for (const auto& r : res) {
    out << r.name << ',' << r.trials << ',' << r.violations << ',' << fmt_double(r.worst) << '\n';
    violations += r.violations;
  }
  out.close();
  finish(c, {"properties.csv"});
  std::printf("check-properties s=%g: %d checks, %d violations %s\n", c.s, static_cast<int>(res.size()), violations,
              verdict(violations == 0));
  return violations == 0 ? kOk : kCheckFailed;
}

int compute_varpi_cmd(const RunConfig& c) {
  const double v = compute_varpi(c.n, FracOrder(c.s));
  write_table_csv(out_path(c, "varpi.csv"), {"n", "s", "varpi"}, {{static_cast<double>(c.n), c.s, v}});
  finish(c, {"varpi.csv"});
  std::printf("compute-varpi n=%d s=%g: varpi=%.15g\n", c.n, c.s, v);
  return kOk;
}

Profile extension_layer(const RunConfig& c, const PotentialSpec& W, double half_width) {
  const FracOrder order(c.s);
  const auto runs = continuation_solve({half_width}, c.h, order, W, solve_options(c));
  return normalize_translation(runs.back().first);
}

int extension_energy(const RunConfig& c) {
  const PotentialSpec W = load_potential(c);
  const ExtensionParams P = make_extension_params(2, FracOrder(c.s));
  const double Rmax = c.R_schedule.back();
  const Profile layer = extension_layer(c, W, 4.2 * P.varpi * Rmax + 10 * c.h);
  std::vector<std::vector<double>> rows;
  std::vector<double> scaled;
  const FracOrder order(c.s);
  for (double R : c.R_schedule) {
    const ThetaCorrections th = theta_corrections(R, P, layer, W);
    const double sc = order.regime() == Regime::sub ? th.cross / std::pow(R, 2 - 2 * c.s)
                      : order.critical()            ? th.cross / (R * std::log(R))
                                                    : th.cross / R;
    scaled.push_back(sc);
    rows.push_back({R, th.cross, sc, th.theta1, th.theta2, th.theta3, th.scaled_theta4_proxy});
  }
  write_table_csv(out_path(c, "extension.csv"),
                  {"R", "cross", "cross_scaled", "theta1", "theta2", "theta3", "scaled_theta4_proxy"}, rows);
  finish(c, {"extension.csv"});
  bool ok = true;
  if (order.regime() == Regime::sub) {
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    ok = *hi < 4 * *lo;
  } else {
    for (size_t k = 1; k < scaled.size(); ++k) ok = ok && scaled[k] < scaled[k - 1];
  }
  std::printf("extension-energy s=%g varpi=%.6g: scaled cross %.6g .. %.6g, %s %s\n", c.s, P.varpi, scaled.front(),
              scaled.back(), order.regime() == Regime::sub ? "factor-4 band" : "strictly decreasing", verdict(ok));
  return ok ? kOk : kCheckFailed;
}

int shell_energy_cmd(const RunConfig& c) {
  const PotentialSpec W = load_potential(c);
  const ExtensionParams P = make_extension_params(2, FracOrder(c.s));
  const Profile layer = extension_layer(c, W, 1.05 * P.varpi * c.R_schedule.back() + 10 * c.h);
  std::vector<std::vector<double>> rows;
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (double R : c.R_schedule)
    for (double d : c.deltas) {
      const double F = shell_energy(R, d, P, layer, W);
      const double ratio = F / (d * R);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      rows.push_back({R, d, F, ratio});
    }
  write_table_csv(out_path(c, "shell.csv"), {"R", "delta", "F_shell", "ratio"}, rows);
  finish(c, {"shell.csv"});
  const bool ok = hi < 10 * lo;
  std::printf("shell-energy s=%g: F/(delta R) in [%.6g, %.6g] %s\n", c.s, lo, hi, verdict(ok));
  return ok ? kOk : kCheckFailed;
}

int kernel_oracles(const RunConfig& c) {
  const FracOrder order(c.s);
  std::vector<std::vector<double>> rows;
  bool ok = true;
  for (int n : {1, 2})
    for (double R : c.R_schedule) {
      const ShellIntegral si = shell_kernel_integral(R, n, order, c.samples, static_cast<unsigned>(c.seed));
      const bool pass = si.value + si.error <= si.paper_bound;
      ok = ok && pass;
      rows.push_back({static_cast<double>(n), R, si.value, si.error, si.paper_bound, pass ? 1.0 : 0.0});
    }
  write_table_csv(out_path(c, "kernel_oracles.csv"), {"n", "R", "value", "error_3sigma", "bound", "pass"}, rows);
  const double comp = companion_integral(1.0, order);
  write_table_csv(out_path(c, "companion.csv"), {"ell", "s", "value"}, {{1.0, c.s, comp}});
  finish(c, {"kernel_oracles.csv", "companion.csv"});
  std::printf("kernel-oracles s=%g: %zu shell integrals, companion(ell=1)=%.12g %s\n", c.s, rows.size(), comp,
              verdict(ok));
  return ok ? kOk : kCheckFailed;
}

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw input_error("invalid --" + field + ": '" + item + "' is not a number");
    }
  }
  return out;
}

}  // namespace

std::string short_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

struct Defaults {
  double s, h;
  double R = 40;
  std::string schedule, deltas, window;
};

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal Allen-Cahn layers: solves, sweeps, fits and property checks"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  RunConfig cfg;
  std::string schedule, deltas, window;
  std::map<std::string, Defaults> defaults;

  auto common = [&](CLI::App* sub, Defaults d) {
    defaults[sub->get_name()] = d;
    sub->add_option("--s", cfg.s, "fractional order in (0, 1) [default " + short_num(d.s) + "]");
    sub->add_option("--h", cfg.h, "grid spacing [default " + short_num(d.h) + "]");
    sub->add_option("--potential", cfg.potential, "'quartic' or a CSV with columns u,W,dW,ddW");
    sub->add_option("--out", cfg.output_dir, "output directory");
    sub->add_option("--seed", cfg.seed, "seed for random draws and QMC shifts");
    sub->add_option("--max-iters", cfg.max_iters, "solver iteration cap");
    sub->add_option("--grad-tol", cfg.grad_tol, "solver stopping tolerance on max |grad| / h");
    sub->add_option("--seed-profile", cfg.seed_profile, "linear_ramp or sign_step");
  };

  auto* solve = app.add_subcommand("solve-profile", "minimize F on [-R, R] with exterior data -1, +1");
  common(solve, {0.5, 0.1, 40});
  solve->add_option("--R", cfg.R, "half width of the window [default 40]");

  auto* sweep = app.add_subcommand("sweep-scaling", "continuation sweep in R and scaling-law fit");
  common(sweep, {0.25, 0.25, 40, "32,64,128,256,512"});
  sweep->add_option("--R-schedule", schedule, "comma separated windows [default 32,64,128,256,512]");

  auto* decay = app.add_subcommand("fit-decay", "decay exponents of the normalized layer");
  common(decay, {0.25, 0.1, 200, "", "", "0.2,0.6"});
  decay->add_option("--R", cfg.R, "half width of the window [default 200]");
  decay->add_option("--window", window, "fit fractions f_lo,f_hi of R [default 0.2,0.6]");

  auto* props = app.add_subcommand("check-properties", "rearrangement, clamp and gradient checks");
  common(props, {0.3, 0.1});
  props->add_option("--trials", cfg.trials, "random trials per check [default 1000]");

  auto* varpi = app.add_subcommand("compute-varpi", "dimensional normalization constant");
  common(varpi, {0.5, 0.1});
  varpi->add_option("--n", cfg.n, "dimension [default 2]");

  auto* ext = app.add_subcommand("extension-energy", "cross energy and theta corrections of the planar extension");
  common(ext, {0.75, 0.1, 40, "8,16,32"});
  ext->add_option("--R-schedule", schedule, "comma separated radii [default 8,16,32]");

  auto* shell = app.add_subcommand("shell-energy", "energy of the extension in thin annuli");
  common(shell, {0.75, 0.1, 40, "8,16,32,64", "0.05,0.1,0.2,0.4"});
  shell->add_option("--R-schedule", schedule, "comma separated radii [default 8,16,32,64]");
  shell->add_option("--deltas", deltas, "comma separated relative shell widths [default 0.05,0.1,0.2,0.4]");

  auto* oracles = app.add_subcommand("kernel-oracles", "shell kernel integrals against their bounds");
  common(oracles, {0.5, 0.1, 40, "1,2,4,8"});
  oracles->add_option("--R-schedule", schedule, "comma separated radii [default 1,2,4,8]");
  oracles->add_option("--samples", cfg.samples, "QMC points for n = 2 [default 1000000]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    const Defaults& d = defaults.at(cfg.command);
    if (sub->count("--s") == 0) cfg.s = d.s;
    if (sub->count("--h") == 0) cfg.h = d.h;
    if (cfg.command == "solve-profile" || cfg.command == "fit-decay")
      if (sub->count("--R") == 0) cfg.R = d.R;
    if (schedule.empty()) schedule = d.schedule;
    if (deltas.empty()) deltas = d.deltas;
    if (window.empty()) window = d.window;
    if (!schedule.empty()) cfg.R_schedule = parse_list(schedule, "R-schedule");
    if (!deltas.empty()) cfg.deltas = parse_list(deltas, "deltas");
    if (!window.empty()) cfg.window = parse_list(window, "window");
    validate(cfg);
    fs::create_directories(cfg.output_dir);

    if (cfg.command == "solve-profile") return solve_profile(cfg);
    if (cfg.command == "sweep-scaling") return sweep_scaling(cfg);
    if (cfg.command == "fit-decay") return fit_decay_cmd(cfg);
    if (cfg.command == "check-properties") return check_properties(cfg);
    if (cfg.command == "compute-varpi") return compute_varpi_cmd(cfg);
    if (cfg.command == "extension-energy") return extension_energy(cfg);
    if (cfg.command == "shell-energy") return shell_energy_cmd(cfg);
    if (cfg.command == "kernel-oracles") return kernel_oracles(cfg);
  } catch (const input_error& e) {
    std::cerr << "fraclayer: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "fraclayer: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kInputError;
}
