// Command-line experiment runner.  Each subcommand exposes one library
// procedure, writes CSV artifacts plus an INI-style run manifest (config
// echo, version, seed, wall time), and exits 0 only when every asserted
// bound holds.  Exit codes: 0 pass, 1 bound violation, 2 config error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "circlenet/approximation.hpp"
#include "circlenet/dynamics.hpp"
#include "circlenet/serialize.hpp"
#include "circlenet/targets.hpp"
#include "circlenet/verification.hpp"

#ifndef CIRCLENET_VERSION
#define CIRCLENET_VERSION "unknown"
#endif

namespace {

using namespace circlenet;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  std::printf("wrote %s\n", path.c_str());
}

// Target spec: a corpus name, a .pwt file path, or inline piecewise text.
PiecewiseTrig resolve_target(const std::string& spec) {
  for (const std::string& n : target_names())
    if (n == spec) return target_by_name(spec);
  std::error_code ec;
  if (std::filesystem::exists(spec, ec)) return piecewise_from_text(read_file(spec));
  if (spec.find_first_of(" \n") != std::string::npos)
    return piecewise_from_text(spec);
  std::string names;
  for (const std::string& n : target_names()) names += " " + n;
  throw std::invalid_argument("unknown target '" + spec +
                              "'; expected one of:" + names +
                              ", a file path, or inline piecewise text");
}

SignPattern resolve_signs(const std::string& signs_str, std::size_t m) {
  if (!signs_str.empty()) {
    std::vector<int> e;
    for (char c : signs_str) {
      if (c == '+')
        e.push_back(1);
      else if (c == '-')
        e.push_back(-1);
      else
        throw std::invalid_argument("--signs must use only '+' and '-'");
    }
    if (m != 0 && m != e.size())
      throw std::invalid_argument("--m disagrees with --signs length");
    return SignPattern(std::move(e));
  }
  if (m == 0) throw std::invalid_argument("need --m or --signs");
  return SignPattern::alternating(m);
}

std::vector<Vec2> resolve_center(const std::vector<double>& flat,
                                 std::size_t m) {
  if (flat.empty()) return std::vector<Vec2>(m, Vec2{0.0, 0.0});
  if (flat.size() != 2 * m)
    throw std::invalid_argument("--center needs 2*m values (x1,y1,x2,y2,...)");
  std::vector<Vec2> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = Vec2{flat[2 * i], flat[2 * i + 1]};
  return c;
}

int fail_bound(const std::string& what, double lhs, double rhs) {
  std::fprintf(stderr, "BOUND VIOLATION %s: lhs=%.17g > rhs=%.17g\n",
               what.c_str(), lhs, rhs);
  return 1;
}

std::string file_stem(const std::string& sub_name) {
  std::string s = sub_name;
  for (char& c : s)
    if (c == '-') c = '_';
  return s;
}

void write_manifest(const std::string& out_dir, CLI::App* sub,
                    double wall_seconds) {
  std::string m;
  m += "subcommand = " + sub->get_name() + "\n";
  m += "version = " CIRCLENET_VERSION "\n";
  m += "wall_seconds = " + format_full(wall_seconds) + "\n";
  m += "[" + sub->get_name() + "]\n";
  m += sub->config_to_str(/*default_also=*/true, /*write_description=*/false);
  write_file(out_dir, file_stem(sub->get_name()) + "_manifest.txt", m);
}

const char* regime_name(PoincareCertificate::Regime r) {
  switch (r) {
    case PoincareCertificate::Regime::kHighNode:
      return "high-node";
    case PoincareCertificate::Regime::kGeneric:
      return "generic";
    default:
      return "unmet";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circle-network experiment runner"};
  app.set_version_flag("--version", CIRCLENET_VERSION);
  app.set_config("--config", "", "INI config file with [subcommand] sections");
  app.require_subcommand(1);
  std::string out_dir = ".";
  app.add_option("--out", out_dir, "output directory for CSV and manifests")
      ->capture_default_str();

  // ---- smooth ----
  auto* sc_smooth = app.add_subcommand("smooth", "heat-smoothing sweep");
  std::string sm_target;
  std::vector<int> sm_r = {1, 2, 4, 8};
  int sm_cutoff = 0;
  sc_smooth->add_option("--target", sm_target, "corpus name, .pwt file, or inline text")->required();
  sc_smooth->add_option("--r", sm_r, "smoothing levels")->delimiter(',')->capture_default_str();
  sc_smooth->add_option("--cutoff", sm_cutoff, "mode cutoff (0 = auto)")->capture_default_str();

  // ---- approx ----
  auto* sc_approx = app.add_subcommand("approx", "universal-approximation sweep over minority counts");
  std::string ap_target;
  std::vector<int> ap_minority = {1, 2, 4, 8, 16, 32, 64};
  sc_approx->add_option("--target", ap_target, "corpus name, .pwt file, or inline text")->required();
  sc_approx->add_option("--minority", ap_minority, "minority counts")->delimiter(',')->capture_default_str();

  // ---- fit ----
  auto* sc_fit = app.add_subcommand("fit", "fixed-direction least squares with stationarity report");
  std::string ft_target, ft_signs;
  std::vector<double> ft_dirs;
  std::size_t ft_m = 16;
  bool ft_no_linear = false;
  sc_fit->add_option("--target", ft_target, "corpus name, .pwt file, or inline text")->required();
  sc_fit->add_option("--dirs", ft_dirs, "direction angles in radians")->delimiter(',')->required();
  sc_fit->add_option("--m", ft_m, "network width")->capture_default_str();
  sc_fit->add_option("--signs", ft_signs, "sign string like ++-+ (default alternating)");
  sc_fit->add_flag("--no-linear", ft_no_linear, "drop the global linear term");

  // ---- localize ----
  auto* sc_loc = app.add_subcommand("localize", "weight-localization pipeline over an R list");
  std::string lc_target, lc_signs;
  std::size_t lc_m = 8;
  std::vector<double> lc_R = {1e2, 1e3, 1e4};
  int lc_polish = 400;
  sc_loc->add_option("--target", lc_target, "corpus name, .pwt file, or inline text")->required();
  sc_loc->add_option("--m", lc_m, "network width")->capture_default_str();
  sc_loc->add_option("--signs", lc_signs, "sign string (default alternating)");
  sc_loc->add_option("--R", lc_R, "radii, ascending recommended")->delimiter(',')->capture_default_str();
  sc_loc->add_option("--polish", lc_polish, "projected-descent polish steps")->capture_default_str();

  // ---- flow ----
  auto* sc_flow = app.add_subcommand("flow", "gradient flow from a given or random start");
  std::string fl_target, fl_signs, fl_net;
  std::size_t fl_m = 4;
  std::vector<double> fl_center;
  double fl_sigma = 0.5, fl_dt = 1e-3, fl_T = 1.0;
  int fl_record = 1;
  std::uint64_t fl_seed = 1;
  bool fl_rk4 = false;
  sc_flow->add_option("--target", fl_target, "corpus name, .pwt file, or inline text")->required();
  sc_flow->add_option("--m", fl_m, "network width")->capture_default_str();
  sc_flow->add_option("--signs", fl_signs, "sign string (default alternating)");
  sc_flow->add_option("--net", fl_net, "start network file (overrides --m/--signs/--center)");
  sc_flow->add_option("--center", fl_center, "init mean, 2*m values")->delimiter(',');
  sc_flow->add_option("--sigma", fl_sigma, "init std dev")->capture_default_str();
  sc_flow->add_option("--seed", fl_seed, "init seed")->capture_default_str();
  sc_flow->add_option("--dt", fl_dt, "step size")->capture_default_str();
  sc_flow->add_option("--T", fl_T, "horizon")->capture_default_str();
  sc_flow->add_option("--record-every", fl_record, "record period in steps")->capture_default_str();
  sc_flow->add_flag("--rk4", fl_rk4, "kink-guarded RK4 instead of Euler");

  // ---- diverge ----
  auto* sc_div = app.add_subcommand("diverge", "two-node norm-divergence experiment");
  double dv_b0 = 1.0, dv_dt = 1e-3, dv_T = 50.0, dv_stop = 2e3;
  int dv_record = 1;
  sc_div->add_option("--b0", dv_b0, "initial offset, must be >= 1")->capture_default_str();
  sc_div->add_option("--dt", dv_dt, "initial step size")->capture_default_str();
  sc_div->add_option("--T", dv_T, "horizon")->capture_default_str();
  sc_div->add_option("--record-every", dv_record, "record period in steps")->capture_default_str();
  sc_div->add_option("--stop-norm", dv_stop, "stop once |W| exceeds this")->capture_default_str();

  // ---- langevin ----
  auto* sc_lan = app.add_subcommand("langevin", "penalized Langevin ensemble");
  std::string ln_target, ln_signs;
  std::size_t ln_m = 1;
  std::vector<double> ln_center;
  double ln_sigma = 0.5;
  LangevinConfig ln_cfg;
  ln_cfg.n_traj = 64;
  sc_lan->add_option("--target", ln_target, "corpus name, .pwt file, or inline text")->required();
  sc_lan->add_option("--m", ln_m, "network width")->capture_default_str();
  sc_lan->add_option("--signs", ln_signs, "sign string (default alternating)");
  sc_lan->add_option("--center", ln_center, "init mean, 2*m values")->delimiter(',');
  sc_lan->add_option("--sigma", ln_sigma, "init std dev")->capture_default_str();
  sc_lan->add_option("--eps", ln_cfg.eps, "noise scale in (0, 1]")->capture_default_str();
  sc_lan->add_option("--R", ln_cfg.R, "penalty radius")->capture_default_str();
  sc_lan->add_option("--dt", ln_cfg.dt, "step size")->capture_default_str();
  sc_lan->add_option("--T", ln_cfg.T, "horizon")->capture_default_str();
  sc_lan->add_option("--n-traj", ln_cfg.n_traj, "trajectories")->capture_default_str();
  sc_lan->add_option("--seed", ln_cfg.seed, "noise/init seed")->capture_default_str();
  sc_lan->add_option("--record-every", ln_cfg.record_every, "snapshot period in steps")->capture_default_str();
  sc_lan->add_option("--threads", ln_cfg.n_threads, "worker threads (0 = auto)")->capture_default_str();
  sc_lan->add_option("--hist-max", ln_cfg.hist_max, "radial histogram upper edge (0 = off)")->capture_default_str();
  sc_lan->add_option("--hist-bins", ln_cfg.hist_bins, "radial histogram bins")->capture_default_str();
  sc_lan->add_option("--burn-in", ln_cfg.burn_in, "time discarded before sampling")->capture_default_str();
  sc_lan->add_option("--sample-every", ln_cfg.sample_every, "histogram sampling period in steps")->capture_default_str();

  // ---- fokker-planck ----
  auto* sc_fp = app.add_subcommand("fokker-planck", "one-node density relaxation");
  std::string fp_target;
  double fp_eps = 0.5, fp_R = 2.0;
  FpConfig fp_cfg;
  sc_fp->add_option("--target", fp_target, "corpus name, .pwt file, or inline text")->required();
  sc_fp->add_option("--eps", fp_eps, "noise scale")->capture_default_str();
  sc_fp->add_option("--R", fp_R, "penalty radius")->capture_default_str();
  sc_fp->add_option("--n", fp_cfg.n, "grid cells per axis")->capture_default_str();
  sc_fp->add_option("--T", fp_cfg.T, "horizon")->capture_default_str();
  sc_fp->add_option("--record-every", fp_cfg.record_every, "record period in steps")->capture_default_str();
  sc_fp->add_option("--stop-ratio", fp_cfg.stop_ratio, "stop once D(t) <= ratio * D(0)")->capture_default_str();

  // ---- certify ----
  auto* sc_cert = app.add_subcommand("certify", "spectral-gap certificate table");
  std::size_t ct_m = 0;
  double ct_R = 0.0, ct_eps = 0.0;
  sc_cert->add_option("--m", ct_m, "node count")->required();
  sc_cert->add_option("--R", ct_R, "penalty radius")->required();
  sc_cert->add_option("--eps", ct_eps, "noise scale")->required();

  // ---- verify ----
  auto* sc_ver = app.add_subcommand("verify", "full acceptance-criteria suite");
  int vf_criterion = 0;
  sc_ver->add_option("--criterion", vf_criterion, "run a single criterion (0 = all)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    if (sub == sc_smooth) {
      const PiecewiseTrig y = resolve_target(sm_target);
      std::string csv = "r,modes,sq_error,error_bound,sup_ok,c1_ok,l2_ok\n";
      for (int r : sm_r) {
        const SmoothReport rep = heat_smooth(y, r, sm_cutoff);
        csv += std::to_string(r) + ',' + std::to_string(rep.modes) + ',' +
               format_full(rep.sq_error) + ',' + format_full(rep.l2_check.rhs) +
               ',' + (rep.sup_check.pass ? "1" : "0") + ',' +
               (rep.c1_check.pass ? "1" : "0") + ',' +
               (rep.l2_check.pass ? "1" : "0") + '\n';
        if (!rep.l2_check.pass)
          rc = fail_bound("smooth l2 (r=" + std::to_string(r) + ")",
                          rep.l2_check.lhs, rep.l2_check.rhs);
        if (!rep.sup_check.pass)
          rc = fail_bound("smooth sup (r=" + std::to_string(r) + ")",
                          rep.sup_check.lhs, rep.sup_check.rhs);
        if (!rep.c1_check.pass)
          rc = fail_bound("smooth c1 (r=" + std::to_string(r) + ")",
                          rep.c1_check.lhs, rep.c1_check.rhs);
      }
      write_file(out_dir, "smooth.csv", csv);
    } else if (sub == sc_approx) {
      const PiecewiseTrig y = resolve_target(ap_target);
      std::string csv =
          "minority,sq_error,bound,bv,cells,simple_sq_error,simple_bound\n";
      for (int mb : ap_minority) {
        if (mb < 1) throw std::invalid_argument("minority counts must be >= 1");
        const SignPattern signs = SignPattern::alternating(2 * std::size_t(mb));
        const UniversalApproxResult u = universal_approx(y, signs);
        csv += std::to_string(u.minority) + ',' + format_full(u.sq_error) +
               ',' + format_full(u.bound) + ',' + format_full(u.bv) + ',' +
               std::to_string(u.cells) + ',' + format_full(u.simple_sq_error) +
               ',' + format_full(u.simple_bound) + '\n';
        if (u.sq_error > u.bound)
          rc = fail_bound("approx (minority=" + std::to_string(mb) + ")",
                          u.sq_error, u.bound);
      }
      write_file(out_dir, "approx.csv", csv);
    } else if (sub == sc_fit) {
      const PiecewiseTrig y = resolve_target(ft_target);
      std::vector<Vec2> dirs;
      for (double a : ft_dirs) dirs.push_back(circle_point(a));
      const SignPattern signs = resolve_signs(ft_signs, ft_m);
      const FitResult fit =
          best_fixed_direction_fit(dirs, signs, y, !ft_no_linear);
      std::string csv = "index,angle,v_x,v_y,el_res_x,el_res_y\n";
      for (std::size_t i = 0; i < dirs.size(); ++i) {
        const Vec2 r = i < fit.el_residuals.size() ? fit.el_residuals[i]
                                                   : Vec2{0.0, 0.0};
        csv += std::to_string(i) + ',' + format_full(ft_dirs[i]) + ',' +
               format_full(fit.v[i].x) + ',' + format_full(fit.v[i].y) + ',' +
               format_full(r.x) + ',' + format_full(r.y) + '\n';
      }
      write_file(out_dir, "fit.csv", csv);
      write_file(out_dir, "fit.pwt", to_text(fit.fit));
      std::printf("sq_residual=%.17g rank=%d/%d linear=(%.17g, %.17g)\n",
                  fit.sq_residual, fit.rank, fit.unknowns, fit.linear.x,
                  fit.linear.y);
      if (!ft_no_linear) {
        for (std::size_t i = 0; i < fit.el_residuals.size(); ++i)
          if (fit.el_residuals[i].norm() > 1e-10)
            rc = fail_bound("fit stationarity (dir " + std::to_string(i) + ")",
                            fit.el_residuals[i].norm(), 1e-10);
      }
    } else if (sub == sc_loc) {
      const PiecewiseTrig y = resolve_target(lc_target);
      const SignPattern signs = resolve_signs(lc_signs, lc_m);
      std::vector<LocalizationReport> rows;
      const ReluNetwork* warm = nullptr;
      for (double R : lc_R) {
        rows.push_back(localization_pipeline(y, signs, R, lc_polish, warm));
        if (rows.back().best_net) warm = &*rows.back().best_net;
        const LocalizationReport& rep = rows.back();
        if (!rep.feasible)
          rc = fail_bound("localize norm budget (R=" + format_full(R) + ")",
                          rep.w_norm, rep.w_budget);
        if (rep.gap > rep.paper_bound)
          rc = fail_bound("localize gap (R=" + format_full(R) + ")", rep.gap,
                          rep.paper_bound);
      }
      write_file(out_dir, "localize.csv", localize_csv(rows));
    } else if (sub == sc_flow) {
      const PiecewiseTrig y = resolve_target(fl_target);
      FlowConfig cfg;
      cfg.dt = fl_dt;
      cfg.T = fl_T;
      cfg.record_every = fl_record;
      cfg.integrator = fl_rk4 ? Integrator::kRk4KinkGuard : Integrator::kEuler;
      ReluNetwork net0 = [&] {
        if (!fl_net.empty()) return network_from_text(read_file(fl_net));
        const SignPattern signs = resolve_signs(fl_signs, fl_m);
        const auto init = gaussian_init(resolve_center(fl_center, signs.size()),
                                        fl_sigma, fl_seed);
        return ReluNetwork(signs, init(0));
      }();
      const FlowResult res = gradient_flow(net0, y, DataMeasure::uniform(), cfg);
      write_file(out_dir, "flow.csv", flow_csv(res));
      write_file(out_dir, "flow_net.pwt", to_text(res.points.back().net));
      std::printf("points=%zu kink_halvings=%d final_phi=%.17g\n",
                  res.points.size(), res.kink_halvings,
                  res.points.back().phi);
      if (res.aborted) {
        std::fprintf(stderr, "flow aborted on a non-finite state at t=%.17g\n",
                     res.points.back().t);
        rc = 1;
      }
    } else if (sub == sc_div) {
      FlowConfig cfg;
      cfg.dt = dv_dt;
      cfg.T = dv_T;
      cfg.record_every = dv_record;
      const DivergenceReport rep = divergence_experiment(dv_b0, cfg, dv_stop);
      write_file(out_dir, "diverge.csv", divergence_csv(rep));
      std::printf(
          "records=%zu final_b=%.17g final_norm=%.17g max_rate_err=%.3g\n",
          rep.steps.size(), rep.steps.back().b, rep.final_w_norm,
          rep.max_rate_err);
      if (!rep.structural_ok) {
        rc = fail_bound("diverge structural identities", rep.max_rate_err,
                        1e-10);
      }
    } else if (sub == sc_lan) {
      const PiecewiseTrig y = resolve_target(ln_target);
      const SignPattern signs = resolve_signs(ln_signs, ln_m);
      const auto init = gaussian_init(resolve_center(ln_center, signs.size()),
                                      ln_sigma, ln_cfg.seed);
      const LangevinResult res =
          langevin_ensemble(signs, init, y, DataMeasure::uniform(), ln_cfg);
      write_file(out_dir, "langevin.csv", langevin_csv(res));
      if (ln_cfg.hist_max > 0.0)
        write_file(out_dir, "langevin_hist.csv", langevin_hist_csv(res, ln_cfg));
      std::printf("snapshots=%zu dropped=%llu/%llu hist_samples=%llu\n",
                  res.snapshots.size(),
                  static_cast<unsigned long long>(res.dropped),
                  static_cast<unsigned long long>(ln_cfg.n_traj),
                  static_cast<unsigned long long>(res.hist_samples));
      if (!res.ok) {
        rc = fail_bound("langevin dropped-trajectory rate",
                        double(res.dropped), 0.01 * double(ln_cfg.n_traj));
      }
    } else if (sub == sc_fp) {
      const PiecewiseTrig y = resolve_target(fp_target);
      const FpResult res = fokker_planck_1node(y, fp_eps, fp_R, fp_cfg);
      write_file(out_dir, "fokker_planck.csv", fokker_csv(res));
      std::printf(
          "steps=%d rate=%.17g fit_r2=%.6f mass_drift=%.3g half_width=%.17g\n",
          res.steps, res.rate, res.fit_r2, res.mass_drift,
          res.domain_half_width);
      if (!res.strictly_decreasing) {
        std::fprintf(stderr, "BOUND VIOLATION fokker-planck: D(t) failed to "
                             "decrease strictly\n");
        rc = 1;
      }
      if (!res.mass_ok)
        rc = fail_bound("fokker-planck mass conservation", res.mass_drift,
                        1e-8);
    } else if (sub == sc_cert) {
      const PoincareCertificate cert = poincare_certificate(ct_m, ct_R, ct_eps);
      std::string csv =
          "m,R,eps,regime,c_ls,log_c_p,log_rate,c_p,rate,valid\n";
      csv += std::to_string(cert.m) + ',' + format_full(cert.R) + ',' +
             format_full(cert.eps) + ',' + regime_name(cert.regime) + ',' +
             format_full(cert.c_ls) + ',' + format_full(cert.log_c_p) + ',' +
             format_full(cert.log_rate) + ',' + format_full(cert.c_p) + ',' +
             format_full(cert.rate) + ',' + (cert.valid ? "1" : "0") + '\n';
      write_file(out_dir, "certify.csv", csv);
      write_file(out_dir, "certify_checks.csv", certificate_csv(cert));
      std::printf("regime=%s C_P=%.17g rate=%.17g\n", regime_name(cert.regime),
                  cert.c_p, cert.rate);
      if (!cert.hypotheses_met) {
        std::fprintf(stderr,
                     "certificate hypotheses unmet: need eps in (0,1] and "
                     "R >= 10 (got eps=%.17g, R=%.17g)\n",
                     cert.eps, cert.R);
        rc = 1;
      } else {
        for (const NamedCheck& c : cert.checks)
          if (!c.pass) rc = fail_bound("certify " + c.name, c.lhs, c.rhs);
      }
    } else if (sub == sc_ver) {
      if (vf_criterion < 0 || vf_criterion > criterion_count())
        throw std::invalid_argument("criterion index must be in 0..12");
      std::vector<CriterionResult> results;
      if (vf_criterion > 0)
        results.push_back(run_criterion(vf_criterion));
      else
        results = run_all_criteria();
      std::string csv = "criterion,name,pass,notes\n";
      for (const CriterionResult& r : results) {
        std::string notes;
        for (const std::string& n : r.notes) {
          if (!notes.empty()) notes += "; ";
          notes += n;
        }
        for (char& c : notes)
          if (c == ',') c = ';';
        csv += std::to_string(r.index) + ',' + r.name + ',' +
               (r.pass ? "1" : "0") + ',' + notes + '\n';
        std::printf("[%s] criterion %02d %-40s (%6.2f s)  %s\n",
                    r.pass ? "PASS" : "FAIL", r.index, r.name.c_str(),
                    r.seconds, notes.c_str());
        if (!r.pass) rc = 1;
      }
      write_file(out_dir, "verify.csv", csv);
      if (rc != 0)
        std::fprintf(stderr, "BOUND VIOLATION verify: see failing criteria\n");
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(out_dir, sub, wall);
  return rc;
}
