// vclab: numerical laboratory for boundary null-control of a fourth-order
// parabolic equation with a transport term and vanishing viscosity.
//
// Subcommands: constants, thresholds, cost-sweep, control-run, scaling-check,
// simulate, verify-identities. See README.md for the file formats.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <numbers>
#include <string>
#include <vector>

#include "vclab/config.hpp"
#include "vclab/csv.hpp"
#include "vclab/errors.hpp"
#include "vclab/moment.hpp"
#include "vclab/multiplier.hpp"
#include "vclab/params.hpp"
#include "vclab/pde.hpp"
#include "vclab/ratefit.hpp"
#include "vclab/spectral.hpp"

namespace fs = std::filesystem;
using namespace vclab;

namespace {

struct CliState {
  ExperimentConfig cfg;
  std::string config_path;
  std::string epsilon_list;
  std::string y0_spec = "tilted:1";
  double scale_factor = 16.0;
};

PhysicalParams params_at(const ExperimentConfig& cfg, double eps) {
  return make_params(eps, cfg.mach, cfg.length, cfg.horizon);
}

Y0Spec parse_y0(const std::string& text) {
  if (text.rfind("tilted:", 0) == 0) return Y0Spec::tilted(std::stoi(text.substr(7)));
  if (text.rfind("sine:", 0) == 0) return Y0Spec::sine(parse_double_list(text.substr(5)));
  throw std::domain_error("y0 spec must be 'tilted:<k>' or 'sine:<c1,c2,...>'");
}

bool within(double v, double lo, double hi) { return v > lo && v < hi; }

int cmd_constants(const CliState& st) {
  const fs::path out = fs::path(st.cfg.out_dir) / "constants.csv";
  CsvWriter csv(out, {"name", "value", "window_low", "window_high", "in_window"});
  int bad = 0;
  auto record = [&](const std::string& name, double v, double lo, double hi) {
    const bool ok = within(v, lo, hi);
    if (!ok) ++bad;
    std::printf("%-22s %.12g   window (%g, %g)  %s\n", name.c_str(), v, lo, hi,
                ok ? "ok" : "OUTSIDE");
    csv.row_mixed({name, CsvWriter::format_full(v), CsvWriter::format_full(lo),
                   CsvWriter::format_full(hi), ok ? "1" : "0"});
    return ok;
  };

  const double c1 = compute_c1();
  record("C1", c1, 6.54, 6.56);
  const double c2 = compute_c2();
  record("C2", c2, 5.98, 6.00);
  if (!record("c_plus", threshold_root(RegimeSign::plus, c1, c2), 4.56, 4.58))
    std::printf("  note: c_plus lands near 4.588 for every C1, C2 inside their own\n"
                "        windows; the 4.57-centered window cannot be met\n");
  record("c_minus", threshold_root(RegimeSign::minus, c1, c2), 6.18, 6.20);
  record("theta_plus", lower_bound_rate(make_params(0.1, 1.0, 1.0, 1.0)).threshold, 0.328, 0.338);
  record("theta_minus", lower_bound_rate(make_params(0.1, -1.0, 1.0, 1.0)).threshold, 1.693,
         1.703);
  record("residue_plus_relerr", residue_integral(RegimeSign::plus).relative_error, -1e-300, 1e-8);
  record("residue_minus_relerr", residue_integral(RegimeSign::minus).relative_error, -1e-300,
         1e-8);
  record("log_identity_relerr", verify_log_identity(0.25, 1.0), -1e-300, 1e-6);
  record("csc_identity_relerr", verify_csc_identity(1.0), -1e-300, 1e-6);

  csv.flush();
  std::printf("wrote %s\nRESULTS-COMPLETE\n", out.string().c_str());
  return bad == 0 ? 0 : 1;
}

int cmd_thresholds(const CliState& st) {
  const double c1 = compute_c1();
  const double c2 = compute_c2();
  const fs::path out = fs::path(st.cfg.out_dir) / "thresholds.csv";
  CsvWriter csv(out, {"name", "value"});
  auto emit = [&](const std::string& n, double v) {
    std::printf("%-14s %.12g\n", n.c_str(), v);
    csv.row_mixed({n, CsvWriter::format_full(v)});
  };
  emit("c_plus", threshold_root(RegimeSign::plus, c1, c2));
  emit("c_minus", threshold_root(RegimeSign::minus, c1, c2));
  emit("theta_plus", lower_bound_rate(make_params(0.1, 1.0, 1.0, 1.0)).threshold);
  emit("theta_minus", lower_bound_rate(make_params(0.1, -1.0, 1.0, 1.0)).threshold);
  csv.flush();
  std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

int cmd_cost_sweep(const CliState& st) {
  const ExperimentConfig& cfg = st.cfg;
  if (cfg.epsilons.size() < 4) {
    std::fprintf(stderr, "cost-sweep: need at least 4 viscosity points for the fit\n");
    return 2;
  }
  // sweep points own their state; dispatched to async workers, gathered in order
  std::vector<std::future<CostEstimate>> futures;
  for (double eps : cfg.epsilons)
    futures.push_back(std::async(std::launch::async, [&cfg, eps] {
      return cost_estimate(params_at(cfg, eps), cfg.modes, cfg.precision_bits);
    }));

  const fs::path out = fs::path(cfg.out_dir) / "cost_sweep.csv";
  CsvWriter csv(out, {"epsilon", "eps_pow_m13", "K", "log_K", "log10_condition",
                      "precision_bits"});
  std::vector<SweepRow> rows;
  bool failed = false;
  for (size_t i = 0; i < futures.size(); ++i) {
    try {
      CostEstimate c = futures[i].get();
      SweepRow r;
      r.epsilon = cfg.epsilons[i];
      r.eps_pow = std::pow(r.epsilon, -1.0 / 3.0);
      r.log_cost = c.log_value;
      r.log10_condition = c.log10_condition;
      r.bits_used = c.bits_used;
      rows.push_back(r);
      csv.row_mixed({CsvWriter::format_full(r.epsilon), CsvWriter::format_full(r.eps_pow),
                     c.value.str(17), CsvWriter::format_full(r.log_cost),
                     CsvWriter::format_full(r.log10_condition), std::to_string(r.bits_used)});
    } catch (const std::exception& e) {
      std::fprintf(stderr, "cost-sweep: point failed: %s\n", e.what());
      failed = true;
      break;
    }
  }
  csv.flush();  // partial results are kept on failure
  write_gnuplot_script(out, 2, 4, "eps^{-1/3}", "log K_N", "controllability cost sweep");
  if (failed) return 2;

  RateFit fit = fit_rate(rows);
  std::printf("sweep of %zu points, N=%d: slope=%.6g intercept=%.6g R2=%.6g\n", rows.size(),
              cfg.modes, fit.slope, fit.intercept, fit.r_squared);
  std::printf("wrote %s\n", out.string().c_str());

  const double upper = (cfg.mach > 0 ? 4.588 : 6.185) * cfg.length / std::fabs(cfg.mach);
  const double lower = (cfg.mach > 0 ? 0.333 : 1.698) * cfg.length / std::fabs(cfg.mach);
  int rc = 0;
  if (cfg.horizon < lower) {
    std::printf("regime: below the lower threshold; expected slope > 0 -> %s\n",
                fit.slope > 0 ? "ok" : "VIOLATED");
    if (fit.slope <= 0) rc = 1;
  } else if (cfg.horizon > upper) {
    std::printf("regime: above the upper threshold; expected slope < 0 (asymptotic; the\n"
                "        free-decay window at moderate viscosity trends the other way) -> %s\n",
                fit.slope < 0 ? "ok" : "VIOLATED");
    if (fit.slope >= 0) rc = 1;
  } else {
    std::printf("regime: between thresholds; no slope-sign expectation\n");
  }
  return rc;
}

int cmd_scaling_check(const CliState& st) {
  const ExperimentConfig& cfg = st.cfg;
  const double a = st.scale_factor;
  auto p = params_at(cfg, cfg.epsilons.front());
  const double r1 = cost_scaling_residual_time_length(p, a, cfg.modes, cfg.precision_bits);
  const double r2 = cost_scaling_residual_viscosity(p, a, cfg.modes, cfg.precision_bits);
  std::printf("a = %.8g, N = %d\n", a, cfg.modes);
  std::printf("time-length map residual  |a^{1/8} K(eps,aT,a^{1/4}L,a^{-3/4}M) - K|/K = %.3e\n",
              r1);
  std::printf("viscosity map residual    |a^{-3/8} K(a eps,T,a^{1/4}L,a^{1/4}M) - K|/K = %.3e\n",
              r2);
  const fs::path out = fs::path(cfg.out_dir) / "scaling_check.csv";
  CsvWriter csv(out, {"a", "residual_time_length", "residual_viscosity"});
  csv.row({a, r1, r2});
  csv.flush();
  std::printf("wrote %s\n", out.string().c_str());
  const bool ok = r1 < 1e-8 && r2 < 1e-8;
  std::printf("scaling relations %s\n", ok ? "hold to 1e-8" : "VIOLATED at 1e-8");
  return ok ? 0 : 1;
}

int cmd_control_run(const CliState& st) {
  const ExperimentConfig& cfg = st.cfg;
  const double eps = cfg.epsilons.front();
  auto p = params_at(cfg, eps);
  Y0Spec y0 = parse_y0(st.y0_spec);
  Grid grid = make_grid(cfg.grid_n, cfg.length);
  NullControlRun run =
      end_to_end_null_control(p, y0, cfg.modes, grid, cfg.effective_dt(), cfg.precision_bits);
  CostEstimate K = cost_estimate(p, cfg.modes, cfg.precision_bits);
  const double y0_norm = y0.l2_norm(p);

  const fs::path usamples = fs::path(cfg.out_dir) / "control_run_u.csv";
  {
    MomentProblem prob;
    prob.params = p;
    prob.order = cfg.modes;
    prob.precision_bits = run.bits_used;
    prob.lambdas = eigenvalues_mp(p, cfg.modes, run.bits_used);
    prob.targets = (y0.kind == Y0Spec::Kind::tilted_mode)
                       ? target_moments_tilted_mode(p, y0.mode, cfg.modes, run.bits_used)
                       : target_moments(p, y0.coeffs, cfg.modes, run.bits_used, true);
    ControlFunction u = solve_min_norm_control(prob);
    CsvWriter csv(usamples, {"t", "u"});
    for (int m = 0; m <= run.trajectory.steps; m += std::max(1, run.trajectory.steps / 512))
      csv.row({run.trajectory.times[m], u(run.trajectory.times[m])});
    csv.flush();
    write_gnuplot_script(usamples, 1, 2, "t", "u(t)", "synthesized boundary control");
  }
  const fs::path summary = fs::path(cfg.out_dir) / "control_run_summary.csv";
  CsvWriter csv(summary, {"epsilon", "modes", "control_norm", "final_ratio", "moment_residual",
                          "cost_estimate_lnK", "precision_bits"});
  csv.row({eps, static_cast<double>(cfg.modes), run.control_norm, run.final_norm_ratio,
           run.max_moment_residual, K.log_value, static_cast<double>(run.bits_used)});
  csv.flush();

  std::printf("||u||_L2 = %.6g, ||y(T)||/||y0|| = %.3e, moment residual = %.3e (bits %ld)\n",
              run.control_norm, run.final_norm_ratio, run.max_moment_residual, run.bits_used);
  std::printf("wrote %s and %s\n", usamples.string().c_str(), summary.string().c_str());

  int rc = 0;
  if (!(run.final_norm_ratio < 1e-2)) {
    std::printf("final ratio exceeds 1e-2\n");
    rc = 1;
  }
  const double bound = std::exp(K.log_value) * y0_norm;
  if (run.control_norm > bound * (1.0 + 1e-6) + 1e-12) {
    std::printf("control norm %.6g exceeds K_N ||y0|| = %.6g\n", run.control_norm, bound);
    rc = 1;
  }
  return rc;
}

int cmd_simulate(const CliState& st) {
  const ExperimentConfig& cfg = st.cfg;
  auto p = params_at(cfg, cfg.epsilons.front());
  Y0Spec y0 = parse_y0(st.y0_spec);
  Grid grid = make_grid(cfg.grid_n, cfg.length);
  Trajectory tr = solve_forward(p, y0.samples(p, grid), {}, grid, cfg.effective_dt());

  const fs::path norms = fs::path(cfg.out_dir) / "simulate_norms.csv";
  {
    CsvWriter csv(norms, {"t", "state_norm", "trace0"});
    for (int m = 0; m <= tr.steps; m += std::max(1, tr.steps / 1024))
      csv.row({tr.times[m], state_l2_norm(tr, m), tr.trace0[m]});
    csv.flush();
    write_gnuplot_script(norms, 1, 2, "t", "||y(t)||", "forward solve decay");
  }
  const fs::path prof = fs::path(cfg.out_dir) / "simulate_profile.csv";
  {
    CsvWriter csv(prof, {"x", "y_final"});
    for (int i = 0; i < grid.n_interior; ++i) csv.row({grid.node(i), tr.states.back()[i]});
    csv.flush();
    write_gnuplot_script(prof, 1, 2, "x", "y(T,x)", "final profile");
  }
  std::printf("||y(0)|| = %.6g -> ||y(T)|| = %.6g over %d steps\n", state_l2_norm(tr, 0),
              state_l2_norm(tr, tr.steps), tr.steps);
  std::printf("wrote %s and %s\n", norms.string().c_str(), prof.string().c_str());
  return 0;
}

int cmd_verify_identities(const CliState& st) {
  const fs::path out = fs::path(st.cfg.out_dir) / "identities.csv";
  CsvWriter csv(out, {"check", "residual", "tolerance"});
  int bad = 0;
  auto record = [&](const std::string& name, double residual, double tol) {
    const bool ok = residual < tol;
    if (!ok) ++bad;
    std::printf("%-34s %.3e  (tol %.0e) %s\n", name.c_str(), residual, tol, ok ? "ok" : "FAIL");
    csv.row_mixed({name, CsvWriter::format_full(residual), CsvWriter::format_full(tol)});
  };

  int i = 0;
  for (auto [g, x] : std::vector<std::pair<double, double>>{
           {0.25, 1.0}, {0.25, 16.0}, {0.5, 2.0}, {0.75, 0.3}, {1.0, 1.0}, {1.25, 4.0}})
    record("log_identity_" + std::to_string(++i), verify_log_identity(g, x), 1e-6);
  i = 0;
  for (double y : {1.0, 16.0, 0.2, -3.0, 5.0, 40.0})
    record("csc_identity_" + std::to_string(++i), verify_csc_identity(y), 1e-6);
  record("abs_identity", verify_abs_identity(1.0), 1e-8);
  record("residue_plus", residue_integral(RegimeSign::plus).relative_error, 1e-8);
  record("residue_minus", residue_integral(RegimeSign::minus).relative_error, 1e-8);
  for (double y : {1.0, 9.18, 30.0})
    record("log_kernel_two_routes_y" + std::to_string(static_cast<int>(y)),
           log_kernel_two_route_gap(y), 1e-8);
  {
    auto p = make_params(0.05, 1.0, 1.0, 6.0);
    MultiplierParams mp = make_multiplier_params(p);
    record("density_root", std::fabs(density_eval(mp, mp.B)) / (mp.a * mp.B), 1e-12);
    auto q = make_params(0.1, 1.0, 1.0, 1.0);
    double worst = 0.0;
    for (int k = 1; k <= 10; ++k) {
      const double lam = eigenvalue(q, k);
      const double scale = 1.0 + std::fabs(phi_derivative_at_eigen(q, k)) * lam;
      worst = std::max(worst, std::abs(phi_eval(q, {0.0, -lam})) / scale);
    }
    record("phi_spectral_zeros", worst, 1e-10);
  }
  csv.flush();
  std::printf("wrote %s\n", out.string().c_str());
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for viscous boundary null-control experiments"};
  app.require_subcommand(1);

  CliState st;

  app.add_option("--config", st.config_path, "key = value configuration file");
  app.add_option("--epsilon", st.epsilon_list, "comma-separated viscosity list");
  auto* mach_opt = app.add_option("--mach", st.cfg.mach, "transport speed M (nonzero)");
  auto* len_opt = app.add_option("--length", st.cfg.length, "domain length L");
  auto* hor_opt = app.add_option("--horizon", st.cfg.horizon, "control time T");
  auto* modes_opt = app.add_option("--modes", st.cfg.modes, "moment truncation order N");
  auto* prec_opt = app.add_option("--precision-bits", st.cfg.precision_bits,
                                  "working precision for Gram solves");
  auto* grid_opt = app.add_option("--grid", st.cfg.grid_n, "interior grid nodes");
  auto* dt_opt = app.add_option("--dt", st.cfg.dt, "time step (0 -> T/2048)");
  auto* out_opt = app.add_option("--out", st.cfg.out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", st.cfg.seed, "seed for randomized diagnostics");

  auto* c_const = app.add_subcommand("constants", "reproduce the analysis constants");
  auto* c_thr = app.add_subcommand("thresholds", "time thresholds and rate constants");
  auto* c_sweep = app.add_subcommand("cost-sweep", "K_N over a viscosity sweep with a rate fit");
  auto* c_ctrl = app.add_subcommand("control-run", "synthesize a null control and simulate it");
  auto* c_scal = app.add_subcommand("scaling-check", "verify both cost scaling relations");
  auto* c_sim = app.add_subcommand("simulate", "forward solve without control");
  auto* c_ver = app.add_subcommand("verify-identities", "quadrature-vs-closed-form checks");

  c_scal->add_option("-a,--factor", st.scale_factor, "scaling factor a > 0");
  c_ctrl->add_option("--y0", st.y0_spec, "initial datum: tilted:<k> or sine:<c1,c2,...>");
  c_sim->add_option("--y0", st.y0_spec, "initial datum: tilted:<k> or sine:<c1,c2,...>");

  // global options may follow the subcommand name
  for (auto* sub : {c_const, c_thr, c_sweep, c_ctrl, c_scal, c_sim, c_ver}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig base;  // defaults, then environment, then file, then flags
    apply_env_precision(base, false);
    if (!st.config_path.empty()) base = load_config_file(st.config_path);
    if (!st.epsilon_list.empty()) base.epsilons = parse_double_list(st.epsilon_list);
    if (mach_opt->count()) base.mach = st.cfg.mach;
    if (len_opt->count()) base.length = st.cfg.length;
    if (hor_opt->count()) base.horizon = st.cfg.horizon;
    if (modes_opt->count()) base.modes = st.cfg.modes;
    if (prec_opt->count()) base.precision_bits = st.cfg.precision_bits;
    if (grid_opt->count()) base.grid_n = st.cfg.grid_n;
    if (dt_opt->count()) base.dt = st.cfg.dt;
    if (out_opt->count()) base.out_dir = st.cfg.out_dir;
    if (seed_opt->count()) base.seed = st.cfg.seed;
    base.normalize_and_validate();
    st.cfg = base;
    fs::create_directories(st.cfg.out_dir);

    if (c_const->parsed()) return cmd_constants(st);
    if (c_thr->parsed()) return cmd_thresholds(st);
    if (c_sweep->parsed()) return cmd_cost_sweep(st);
    if (c_ctrl->parsed()) return cmd_control_run(st);
    if (c_scal->parsed()) return cmd_scaling_check(st);
    if (c_sim->parsed()) return cmd_simulate(st);
    if (c_ver->parsed()) return cmd_verify_identities(st);
  } catch (const QuadratureError& e) {
    std::fprintf(stderr, "quadrature failure: %s\n", e.what());
    return 3;
  } catch (const ConditioningError& e) {
    std::fprintf(stderr, "conditioning failure: %s\n", e.what());
    return 3;
  } catch (const BracketError& e) {
    std::fprintf(stderr, "bracketing failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
