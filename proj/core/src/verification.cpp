#include "circlenet/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <utility>

#include "circlenet/cost.hpp"
#include "circlenet/serialize.hpp"
#include "circlenet/targets.hpp"

namespace circlenet {

namespace {

std::string note(const char* fmt, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}
std::string note2(const char* fmt, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

double circ_dist(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

double weight_norm(const std::vector<Vec2>& w) {
  double acc = 0.0;
  for (const Vec2& v : w) acc += v.x * v.x + v.y * v.y;
  return std::sqrt(acc);
}

// Random piecewise target built from the library's primitives: a constant,
// a windowed linear, an indicator, and a global linear part.
PiecewiseTrig random_target(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  PiecewiseTrig y = PiecewiseTrig::constant(0.5 * sym(rng));
  y = y + PiecewiseTrig::windowed_linear(
              Arc(2.0 * kPi * u01(rng), 0.3 + 5.5 * u01(rng)),
              Vec2{sym(rng), sym(rng)});
  y = y + PiecewiseTrig::indicator(Arc(2.0 * kPi * u01(rng), 0.3 + 5.5 * u01(rng)),
                                   0.7 * sym(rng));
  y = y + PiecewiseTrig::linear(Vec2{0.5 * sym(rng), 0.5 * sym(rng)});
  return y;
}

std::vector<Vec2> random_weights(std::mt19937_64& rng, std::size_t m,
                                 double rad_lo, double rad_hi) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<Vec2> w(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double ang = 2.0 * kPi * u01(rng);
    const double rad = rad_lo + (rad_hi - rad_lo) * u01(rng);
    w[i] = Vec2{rad * std::cos(ang), rad * std::sin(ang)};
  }
  return w;
}

SignPattern random_signs(std::mt19937_64& rng, std::size_t m) {
  std::vector<int> a(m);
  std::uniform_int_distribution<int> coin(0, 1);
  for (std::size_t i = 0; i < m; ++i) a[i] = coin(rng) ? 1 : -1;
  return SignPattern(std::move(a));
}

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// The escape experiment configuration shared by criteria 3 and 12.
DivergenceReport run_escape() {
  FlowConfig cfg;
  cfg.dt = 1e-3;
  cfg.T = 1e12;
  cfg.record_every = 1;
  return divergence_experiment(1.0, cfg, 2e3);
}

// ---------------------------------------------------------------------------
// 1. Analytic gradient vs central finite differences
// ---------------------------------------------------------------------------

CriterionResult c1_gradient_fd() {
  constexpr double kRelTol = 1e-5;  // criterion tolerance
  constexpr double kFdStep = 1e-6;
  constexpr double kKinkGap = 1e-4;  // configs stay this far from activations
  constexpr int kConfigs = 100;

  CriterionResult out;
  std::mt19937_64 rng(91001);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // One fixed 128-atom measure for the whole criterion.
  std::vector<DataMeasure::Atom> atoms(128);
  double wsum = 0.0;
  for (auto& a : atoms) {
    a.angle = 2.0 * kPi * u01(rng);
    a.weight = 0.5 + u01(rng);
    wsum += a.weight;
  }
  for (auto& a : atoms) a.weight /= wsum;
  const DataMeasure discrete = DataMeasure::discrete(atoms);
  const DataMeasure uniform = DataMeasure::uniform();

  double max_rel = 0.0;
  int tested = 0;
  for (int cfg_i = 0; cfg_i < kConfigs; ++cfg_i) {
    const std::size_t m = 1 + std::size_t(cfg_i % 8);
    const PiecewiseTrig y = random_target(rng);
    const SignPattern signs = random_signs(rng, m);

    std::vector<Vec2> w;
    bool valid = false;
    for (int attempt = 0; attempt < 500 && !valid; ++attempt) {
      w = random_weights(rng, m, 0.4, 2.0);
      valid = true;
      for (const Vec2& wi : w) {
        const Vec2 wh = wi.normalized();
        for (const auto& a : atoms)
          if (std::abs(wh.dot(circle_point(a.angle))) < kKinkGap) valid = false;
      }
      // Keep activation boundaries away from target kinks and each other.
      std::vector<double> bnds;
      for (const Vec2& wi : w) {
        bnds.push_back(std::fmod(wi.angle() + kPi / 2, 2.0 * kPi));
        bnds.push_back(std::fmod(wi.angle() + 3 * kPi / 2, 2.0 * kPi));
      }
      for (double tb : y.boundaries())
        for (double nb : bnds)
          if (circ_dist(tb, nb) < kKinkGap) valid = false;
      for (std::size_t i = 0; i < bnds.size() && valid; ++i)
        for (std::size_t j = i + 1; j < bnds.size(); ++j)
          if (circ_dist(bnds[i], bnds[j]) < kKinkGap) valid = false;
    }
    if (!valid) continue;

    for (const DataMeasure* mu : {&uniform, &discrete}) {
      const CostEvaluator ev(signs, y, *mu);
      std::vector<Vec2> g;
      ev.phi_and_grad(w, g);
      const double gnorm = weight_norm(g);
      if (gnorm < 1e-3) continue;  // not in general position

      double err_sq = 0.0;
      std::vector<Vec2> wp = w;
      for (std::size_t i = 0; i < m; ++i) {
        for (int c = 0; c < 2; ++c) {
          double* coord = c == 0 ? &wp[i].x : &wp[i].y;
          const double saved = *coord;
          *coord = saved + kFdStep;
          const double up = ev.phi(wp);
          *coord = saved - kFdStep;
          const double dn = ev.phi(wp);
          *coord = saved;
          const double fd = (up - dn) / (2.0 * kFdStep);
          const double an = c == 0 ? g[i].x : g[i].y;
          err_sq += (fd - an) * (fd - an);
        }
      }
      max_rel = std::max(max_rel, std::sqrt(err_sq) / gnorm);
      ++tested;
    }
  }

  out.pass = tested >= 2 * kConfigs - 10 && max_rel <= kRelTol;
  out.notes.push_back(note("max_rel=%.3g", max_rel));
  out.notes.push_back(note("checked=%g gradient evaluations", double(tested)));
  return out;
}

// ---------------------------------------------------------------------------
// 2. Growth and alignment identities
// ---------------------------------------------------------------------------

CriterionResult c2_growth() {
  constexpr double kSlack = 1e-10;
  constexpr int kSamples = 10000;

  CriterionResult out;
  std::mt19937_64 rng(91002);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  int violations = 0;
  double worst_excess = -1e300;  // max over the three lhs-rhs margins
  for (int k = 0; k < kSamples; ++k) {
    const std::size_t m = 1 + std::size_t(k % 8);
    const SignPattern signs = random_signs(rng, m);

    DataMeasure mu = DataMeasure::uniform();
    if (k % 3 == 0) {
      std::vector<DataMeasure::Atom> atoms(8 + k % 57);
      double wsum = 0.0;
      for (auto& a : atoms) {
        a.angle = 2.0 * kPi * u01(rng);
        a.weight = 0.1 + u01(rng);
        wsum += a.weight;
      }
      for (auto& a : atoms) a.weight /= wsum;
      mu = DataMeasure::discrete(std::move(atoms));
    }

    PiecewiseTrig y = random_target(rng);
    const double nrm = l2_norm(y, mu);
    const double want = 0.1 + 0.9 * u01(rng);
    y = y * (want / std::max(want, nrm));  // now ||y|| <= want <= 1

    // Weight magnitudes across four orders to stress the growth bounds.
    const double rad = std::pow(10.0, -2.0 + 4.0 * u01(rng));
    const std::vector<Vec2> w = random_weights(rng, m, 0.2 * rad, rad);

    const CostEvaluator ev(signs, y, mu);
    std::vector<Vec2> g;
    const double phi = ev.phi_and_grad(w, g);
    const double wn = weight_norm(w);
    double gsq = 0.0, gw = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      gsq += g[i].x * g[i].x + g[i].y * g[i].y;
      gw += g[i].dot(w[i]);
    }

    const double e1 = phi - (wn + 1.0) * (wn + 1.0);
    const double e2 = gsq - 4.0 * phi;
    const double e3 = (phi - 1.0) - gw;
    worst_excess = std::max({worst_excess, e1, e2, e3});
    if (e1 > kSlack || e2 > kSlack || e3 > kSlack) ++violations;
  }

  out.pass = violations == 0;
  out.notes.push_back(note("violations=%g", double(violations)));
  out.notes.push_back(note("worst_excess=%.3g", worst_excess));
  return out;
}

// ---------------------------------------------------------------------------
// 3. Two-node escape run
// ---------------------------------------------------------------------------

CriterionResult c3_escape() {
  constexpr double kIdentityTol = 1e-10;

  CriterionResult out;
  const DivergenceReport rep = run_escape();
  out.pass = rep.structural_ok && rep.reached_stop_norm &&
             rep.final_w_norm > 1e3 && rep.max_grad_e1 <= kIdentityTol &&
             rep.max_grad_e2_diff <= kIdentityTol &&
             rep.max_rate_err <= kIdentityTol;
  out.notes.push_back(note("final_norm=%.4g", rep.final_w_norm));
  out.notes.push_back(note("records=%g", double(rep.steps.size())));
  out.notes.push_back(note2("max_e1=%.2g max_rate_err=%.2g", rep.max_grad_e1,
                            rep.max_rate_err));
  return out;
}

// ---------------------------------------------------------------------------
// 4. Fourier coefficient decay
// ---------------------------------------------------------------------------

CriterionResult c4_fourier_decay() {
  constexpr int kMaxK = 256;
  constexpr double kSlack = 1e-12;

  CriterionResult out;
  out.pass = true;
  double worst_ratio = 0.0;
  for (const NamedTarget& t : target_corpus()) {
    const double bv = bv_norm(t.fn).bv;
    const FourierCoeffs fc = fourier_coeffs(t.fn, kMaxK);
    for (int k = 1; k <= kMaxK; ++k) {
      const double cap = 2.0 * bv / double(k);
      const double mag = std::max(std::abs(fc.a[std::size_t(k)]),
                                  std::abs(fc.b[std::size_t(k)]));
      worst_ratio = std::max(worst_ratio, mag / cap);
      if (mag > cap + kSlack) out.pass = false;
    }
  }
  out.notes.push_back(note("worst |coef| / (2 bv / k) = %.4g", worst_ratio));
  return out;
}

// ---------------------------------------------------------------------------
// 5. Heat smoothing bounds
// ---------------------------------------------------------------------------

CriterionResult c5_heat() {
  CriterionResult out;
  out.pass = true;
  int runs = 0;
  for (const NamedTarget& t : target_corpus()) {
    for (int r = 1; r <= 64; ++r) {
      const SmoothReport rep = heat_smooth(t.fn, r);
      if (!rep.sup_check.pass || !rep.c1_check.pass || !rep.l2_check.pass)
        out.pass = false;
      ++runs;
    }
  }
  out.notes.push_back(note("runs=%g (12 targets x r in 1..64)", double(runs)));
  return out;
}

// ---------------------------------------------------------------------------
// 6. Step-pair error grid
// ---------------------------------------------------------------------------

CriterionResult c6_step_pair() {
  constexpr double kRelSlack = 1e-12;

  CriterionResult out;
  out.pass = true;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double c = -2.0 + 4.0 * double(i) / 9.0;
    for (int j = 0; j < 10; ++j) {
      const double width = 1e-3 * std::pow(3000.0, double(j) / 9.0);
      const double t1 = 0.37 * double(i + j);
      const StepPairResult sp = step_pair(t1, t1 + width, c);
      if (sp.sq_error > sp.sq_error_bound * (1.0 + kRelSlack) + 1e-300)
        out.pass = false;
      if (sp.sq_error_bound > 0.0)
        worst = std::max(worst, sp.sq_error / sp.sq_error_bound);
    }
  }
  out.notes.push_back(note("pairs=100 worst error/bound=%.6g", worst));
  return out;
}

// ---------------------------------------------------------------------------
// 7. Minority-rate universal approximation
// ---------------------------------------------------------------------------

CriterionResult c7_universal() {
  constexpr double kBoundSlack = 1e-12;
  constexpr double kSlopeCap = -1.0 + 0.15;
  constexpr double kZeroError = 1e-18;  // exactly-realized targets

  CriterionResult out;
  out.pass = true;
  double worst_slope = -1e300;
  for (const NamedTarget& t : lal_corpus()) {
    std::vector<double> lx, ly;
    for (int minority : {1, 2, 4, 8, 16, 32, 64}) {
      const SignPattern signs = SignPattern::alternating(2 * std::size_t(minority));
      const UniversalApproxResult u = universal_approx(t.fn, signs);
      if (u.sq_error > u.bound + kBoundSlack) out.pass = false;
      if (minority >= 4 && u.sq_error > kZeroError) {
        lx.push_back(std::log(double(minority)));
        ly.push_back(std::log(u.sq_error));
      }
    }
    if (lx.size() >= 2) {
      const double slope = ls_slope(lx, ly);
      worst_slope = std::max(worst_slope, slope);
      if (slope > kSlopeCap) out.pass = false;
    }
  }
  out.notes.push_back(note("worst log-log slope=%.3f (cap -0.85)", worst_slope));
  return out;
}

// ---------------------------------------------------------------------------
// 8. Least-squares sector stationarity
// ---------------------------------------------------------------------------

CriterionResult c8_sector_stationarity() {
  constexpr double kResidualTol = 1e-10;
  constexpr double kMinSep = 0.05;  // radians between directions, mod pi

  CriterionResult out;
  std::mt19937_64 rng(91008);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::vector<const PiecewiseTrig*> smooth;
  for (const NamedTarget& t : target_corpus())
    if (bv_norm(t.fn).continuous) smooth.push_back(&t.fn);

  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int n_dirs = 1 + k % 8;
    std::vector<Vec2> dirs;
    while (int(dirs.size()) < n_dirs) {
      const double ang = 2.0 * kPi * u01(rng);
      bool ok = true;
      for (const Vec2& d : dirs) {
        const double dd = circ_dist(ang, d.angle());
        if (dd < kMinSep || std::abs(dd - kPi) < kMinSep ||
            std::abs(dd - 2.0 * kPi) < kMinSep)
          ok = false;
      }
      if (ok) dirs.push_back(circle_point(ang));
    }
    const PiecewiseTrig& y = *smooth[std::size_t(k) % smooth.size()];
    const SignPattern signs = SignPattern::alternating(16);
    // The sector-stationarity identity is a property of the least-squares
    // minimizer with the global linear part included.
    const FitResult fit = best_fixed_direction_fit(dirs, signs, y, true);
    for (const Vec2& r : fit.el_residuals) worst = std::max(worst, r.norm());
  }
  out.pass = worst <= kResidualTol;
  out.notes.push_back(note("max sector residual=%.3g", worst));
  return out;
}

// ---------------------------------------------------------------------------
// 9. Closure realization error
// ---------------------------------------------------------------------------

CriterionResult c9_realization() {
  constexpr double kRelSlack = 1e-12;
  constexpr double kAbsSlack = 1e-13;
  constexpr double kMinSep = 0.05;

  CriterionResult out;
  out.pass = true;
  std::mt19937_64 rng(91009);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-2.0, 2.0);

  double worst_ratio = 0.0;
  for (int k = 0; k < 10; ++k) {
    const std::size_t m = 2 * (1 + std::size_t(k % 5));
    const SignPattern signs = SignPattern::alternating(m);
    const int minority = signs.minority_count();
    const int n_j = 1 + (k / 2) % minority;

    std::vector<JTerm> jt;
    while (int(jt.size()) < n_j) {
      const double ang = 2.0 * kPi * u01(rng);
      bool ok = true;
      for (const JTerm& t : jt) {
        const double dd = circ_dist(ang, t.w_hat.angle());
        if (dd < kMinSep || std::abs(dd - kPi) < kMinSep ||
            std::abs(dd - 2.0 * kPi) < kMinSep)
          ok = false;
      }
      if (ok) jt.push_back(JTerm{circle_point(ang), Vec2{sym(rng), sym(rng)}});
    }
    std::vector<KTerm> kt;
    if (k % 2 == 1 && n_j < minority) {
      kt.push_back(KTerm{1, Vec2{sym(rng) / 2, sym(rng) / 2}});
      kt.push_back(KTerm{-1, Vec2{sym(rng) / 2, sym(rng) / 2}});
    }
    const ClosureElement elem(signs, jt, kt);
    const PiecewiseTrig g = elem.to_piecewise();

    for (double h : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const ReluNetwork net = realize_closure(elem, h);
      const double dist =
          std::sqrt(sq_norm(net.to_piecewise() - g, DataMeasure::uniform()));
      const double bound = realize_error_bound(elem, h);
      if (dist > bound * (1.0 + kRelSlack) + kAbsSlack) out.pass = false;
      if (bound > 0.0) worst_ratio = std::max(worst_ratio, dist / bound);
    }
  }
  out.notes.push_back(note("elements=10 worst dist/bound=%.4g", worst_ratio));
  return out;
}

// ---------------------------------------------------------------------------
// 10. Localization gap pipeline
// ---------------------------------------------------------------------------

CriterionResult c10_localization() {
  constexpr double kGapGrowth = 1.10;  // non-increasing within 10%
  constexpr int kPolishSteps = 400;

  CriterionResult out;
  out.pass = true;
  PiecewiseTrig y = target_by_name("sym_step");
  y = y * (1.0 / l2_norm(y, DataMeasure::uniform()));  // normalized

  for (std::size_t m : {4, 8, 16}) {
    const SignPattern signs = SignPattern::alternating(m);
    const ReluNetwork* warm = nullptr;
    ReluNetwork warm_store(signs, std::vector<Vec2>(m));
    double prev_gap = -1.0;
    for (double R : {1e2, 1e3, 1e4}) {
      const LocalizationReport rep =
          localization_pipeline(y, signs, R, kPolishSteps, warm);
      if (!rep.feasible) out.pass = false;
      if (rep.gap > rep.paper_bound + 1e-12) out.pass = false;
      if (prev_gap >= 0.0 && rep.gap > kGapGrowth * prev_gap + 1e-12)
        out.pass = false;
      prev_gap = rep.gap;
      if (rep.best_net) {
        warm_store = *rep.best_net;
        warm = &warm_store;
      }
      out.notes.push_back(note2(
          ("m=" + std::to_string(m) + " R=%.0e gap=%.3g").c_str(), R, rep.gap));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// 11. Relaxation and certificates
// ---------------------------------------------------------------------------

CriterionResult c11_relaxation() {
  CriterionResult out;
  out.pass = true;

  // (a) Certificates at the two pinned parameter points.
  const PoincareCertificate high = poincare_certificate(2400, 10.0, 1.0);
  if (!(high.valid && high.regime == PoincareCertificate::Regime::kHighNode &&
        high.c_p == 140.0 && high.rate == 1.0 / 70.0))
    out.pass = false;
  const PoincareCertificate gen = poincare_certificate(100, 10.0, 1.0);
  const double a = (4.0 * 10.0 * 10.0 + 2.0) / 1.0;
  if (!(gen.valid && gen.regime == PoincareCertificate::Regime::kGeneric &&
        std::abs(gen.log_c_p - (-std::log(8.0) + a)) <= 1e-12 &&
        std::abs(gen.log_rate - (std::log(16.0) - a)) <= 1e-12))
    out.pass = false;
  out.notes.push_back(note2("cert: c_p=%.0f rate=1/%.0f", high.c_p,
                            1.0 / high.rate));

  // (b) Relaxation of the one-node density: strict decay, exponential tail.
  const PiecewiseTrig target = target_by_name("relu_lobe");
  FpConfig fcfg;
  fcfg.n = 96;
  fcfg.T = 40.0;
  fcfg.record_every = 10;
  const FpResult fp = fokker_planck_1node(target, 0.5, 2.0, fcfg);
  if (!(fp.strictly_decreasing && fp.mass_ok && fp.rate > 0.0 &&
        fp.fit_r2 >= 0.999))
    out.pass = false;
  out.notes.push_back(note2("fp: rate=%.4f r2=%.6f", fp.rate, fp.fit_r2));

  // (c) Langevin stationary law vs quadrature-normalized density, in TV.
  constexpr double kTvTol = 0.05;
  const double eps = 0.5, R = 2.0;
  LangevinConfig lcfg;
  lcfg.eps = eps;
  lcfg.R = R;
  lcfg.dt = 2.5e-3;
  lcfg.T = 600.0;
  lcfg.n_traj = 64;
  lcfg.seed = 2024;
  lcfg.record_every = 40000;
  lcfg.hist_max = 3.0;
  lcfg.hist_bins = 40;
  lcfg.burn_in = 200.0;
  lcfg.sample_every = 20;
  const SignPattern one({1});
  const LangevinResult lv =
      langevin_ensemble(one, gaussian_init({Vec2{1.0, 0.0}}, 0.5, 11), target,
                        DataMeasure::uniform(), lcfg);
  if (!lv.ok) out.pass = false;

  const CostEvaluator ev(one, target, DataMeasure::uniform());
  std::vector<Vec2> wvec(1);
  auto density = [&](double r, double psi) {
    wvec[0] = Vec2{r * std::cos(psi), r * std::sin(psi)};
    const double pen = 4.0 * (r * r - R * R);
    return std::exp(-std::max(ev.phi(wvec), pen) / (eps * eps));
  };
  auto ring = [&](double r) {
    const int npsi = 2048;
    double acc = 0.0;
    for (int k = 0; k < npsi; ++k)
      acc += density(r, 2.0 * kPi * double(k) / npsi);
    return r * acc * (2.0 * kPi / npsi);
  };
  std::vector<double> ref(std::size_t(lcfg.hist_bins), 0.0);
  const double bw = lcfg.hist_max / lcfg.hist_bins;
  double total = 0.0;
  for (int b = 0; b < lcfg.hist_bins; ++b) {
    const double lo = b * bw, h = bw / 8.0;  // Simpson, 8 subintervals
    double acc = ring(lo) + ring(lo + 8 * h);
    for (int s = 1; s < 8; ++s) acc += (s % 2 ? 4.0 : 2.0) * ring(lo + s * h);
    ref[std::size_t(b)] = acc * h / 3.0;
    total += ref[std::size_t(b)];
  }
  double tv = 0.0;
  for (int b = 0; b < lcfg.hist_bins; ++b) {
    const double emp =
        double(lv.hist_counts[std::size_t(b)]) / double(lv.hist_samples);
    tv += std::abs(emp - ref[std::size_t(b)] / total);
  }
  tv += double(lv.hist_overflow) / double(lv.hist_samples);
  tv *= 0.5;
  if (tv > kTvTol) out.pass = false;
  out.notes.push_back(note2("langevin: tv=%.4f (tol %.2f)", tv, kTvTol));
  return out;
}

// ---------------------------------------------------------------------------
// 12. Deterministic replay
// ---------------------------------------------------------------------------

CriterionResult c12_determinism() {
  CriterionResult out;
  out.pass = true;

  // Two full reruns of the escape experiment must render identical bytes.
  const std::string csv_a = divergence_csv(run_escape());
  const std::string csv_b = divergence_csv(run_escape());
  if (csv_a.empty() || csv_a != csv_b) out.pass = false;
  out.notes.push_back(note("escape csv bytes=%g", double(csv_a.size())));

  // A stochastic experiment rerun across thread counts must also match.
  const SignPattern signs = SignPattern::alternating(2);
  const PiecewiseTrig y = target_by_name("relu_lobe");
  const LangevinInit init =
      gaussian_init({Vec2{0.5, 0.0}, Vec2{-0.5, 0.0}}, 0.3, 21);
  LangevinConfig cfg;
  cfg.eps = 0.5;
  cfg.R = 2.0;
  cfg.dt = 1e-3;
  cfg.T = 0.05;
  cfg.n_traj = 32;
  cfg.seed = 100;
  cfg.record_every = 10;
  cfg.hist_max = 2.5;
  cfg.hist_bins = 12;
  cfg.burn_in = 0.01;
  cfg.sample_every = 5;

  cfg.n_threads = 1;
  const LangevinResult la = langevin_ensemble(signs, init, y,
                                              DataMeasure::uniform(), cfg);
  cfg.n_threads = 4;
  const LangevinResult lb = langevin_ensemble(signs, init, y,
                                              DataMeasure::uniform(), cfg);
  if (langevin_csv(la) != langevin_csv(lb)) out.pass = false;
  if (langevin_hist_csv(la, cfg) != langevin_hist_csv(lb, cfg))
    out.pass = false;
  out.notes.push_back(note("langevin csv bytes=%g (1 vs 4 threads)",
                           double(langevin_csv(la).size())));
  return out;
}

using CriterionFn = CriterionResult (*)();

struct Entry {
  const char* name;
  CriterionFn fn;
};

const Entry kCriteria[] = {
    {"gradient-matches-finite-differences", c1_gradient_fd},
    {"growth-and-alignment-identities", c2_growth},
    {"two-node-escape-run", c3_escape},
    {"fourier-coefficient-decay", c4_fourier_decay},
    {"heat-smoothing-bounds", c5_heat},
    {"step-pair-error-grid", c6_step_pair},
    {"minority-rate-universal-approximation", c7_universal},
    {"least-squares-sector-stationarity", c8_sector_stationarity},
    {"closure-realization-error", c9_realization},
    {"localization-gap-pipeline", c10_localization},
    {"relaxation-and-certificates", c11_relaxation},
    {"deterministic-replay", c12_determinism},
};

}  // namespace

int criterion_count() { return int(sizeof(kCriteria) / sizeof(kCriteria[0])); }

std::string criterion_name(int k) {
  if (k < 1 || k > criterion_count())
    throw std::out_of_range("criterion index out of range");
  return kCriteria[k - 1].name;
}

CriterionResult run_criterion(int k) {
  if (k < 1 || k > criterion_count())
    throw std::out_of_range("criterion index out of range");
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult res = kCriteria[k - 1].fn();
  const auto t1 = std::chrono::steady_clock::now();
  res.index = k;
  res.name = kCriteria[k - 1].name;
  res.seconds = std::chrono::duration<double>(t1 - t0).count();
  return res;
}

std::vector<CriterionResult> run_all_criteria() {
  std::vector<CriterionResult> all;
  for (int k = 1; k <= criterion_count(); ++k) all.push_back(run_criterion(k));
  return all;
}

// ---------------------------------------------------------------------------
// CSV renderings
// ---------------------------------------------------------------------------

std::string divergence_csv(const DivergenceReport& rep) {
  std::string out = "t,b,w_norm,phi,grad_e1_max,grad_e2_diff,rate_err\n";
  for (const DivergenceStep& st : rep.steps) {
    out += format_full(st.t) + ',' + format_full(st.b) + ',' +
           format_full(st.w_norm) + ',' + format_full(st.phi) + ',' +
           format_full(st.grad_e1_max) + ',' + format_full(st.grad_e2_diff) +
           ',' + format_full(st.rate_err) + '\n';
  }
  return out;
}

std::string flow_csv(const FlowResult& res) {
  std::string out = "t,phi,grad_sq,w_norm\n";
  for (const FlowPoint& p : res.points) {
    out += format_full(p.t) + ',' + format_full(p.phi) + ',' +
           format_full(p.grad_sq) + ',' +
           format_full(std::sqrt(p.net.weight_sq_norm())) + '\n';
  }
  return out;
}

std::string langevin_csv(const LangevinResult& res) {
  std::string out =
      "t,phi_mean,phi_p10,phi_p90,wnorm_mean,wnorm_p10,wnorm_p50,wnorm_p90,"
      "alive\n";
  for (const LangevinSnapshot& s : res.snapshots) {
    out += format_full(s.t) + ',' + format_full(s.phi_mean) + ',' +
           format_full(s.phi_p10) + ',' + format_full(s.phi_p90) + ',' +
           format_full(s.wnorm_mean) + ',' + format_full(s.wnorm_p10) + ',' +
           format_full(s.wnorm_p50) + ',' + format_full(s.wnorm_p90) + ',' +
           std::to_string(s.alive) + '\n';
  }
  return out;
}

std::string langevin_hist_csv(const LangevinResult& res,
                              const LangevinConfig& cfg) {
  std::string out = "bin_left,bin_right,count\n";
  const double bw = cfg.hist_bins > 0 ? cfg.hist_max / cfg.hist_bins : 0.0;
  for (std::size_t b = 0; b < res.hist_counts.size(); ++b) {
    out += format_full(double(b) * bw) + ',' +
           format_full(double(b + 1) * bw) + ',' +
           std::to_string(res.hist_counts[b]) + '\n';
  }
  return out;
}

std::string fokker_csv(const FpResult& res) {
  std::string out = "t,d\n";
  for (const FpPoint& p : res.decay)
    out += format_full(p.t) + ',' + format_full(p.d) + '\n';
  return out;
}

std::string localize_csv(const std::vector<LocalizationReport>& rows) {
  std::string out =
      "R,h0,Wnorm,C(m)R,feasible,constrained,unconstrained_est,gap,"
      "paper_bound\n";
  for (const LocalizationReport& r : rows) {
    out += format_full(r.R) + ',' + format_full(r.h0) + ',' +
           format_full(r.w_norm) + ',' + format_full(r.w_budget) + ',' +
           (r.feasible ? "1" : "0") + ',' + format_full(r.constrained_value) +
           ',' + format_full(r.unconstrained_estimate) + ',' +
           format_full(r.gap) + ',' + format_full(r.paper_bound) + '\n';
  }
  return out;
}

std::string certificate_csv(const PoincareCertificate& cert) {
  std::string out = "name,lhs,rhs,pass\n";
  for (const NamedCheck& c : cert.checks) {
    out += c.name + ',' + format_full(c.lhs) + ',' + format_full(c.rhs) + ',' +
           (c.pass ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace circlenet
