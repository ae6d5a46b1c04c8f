#include "circlenet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include "circlenet/rng.hpp"

namespace circlenet {

namespace {

bool all_finite(const std::vector<Vec2>& w) {
  for (const Vec2& v : w)
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) return false;
  return true;
}

double weight_sq(const std::vector<Vec2>& w) {
  double acc = 0.0;
  for (const Vec2& v : w) acc += v.x * v.x + v.y * v.y;
  return acc;
}

// Penalized gradient in place: returns Phi_R and overwrites grad with
// grad Phi_R (the max of the cost and the radial penalty 4(|W|^2 - R^2)).
double penalize(const std::vector<Vec2>& w, double phi,
                std::vector<Vec2>& grad, double R) {
  const double pen = 4.0 * (weight_sq(w) - R * R);
  if (pen <= phi) return phi;
  for (std::size_t i = 0; i < w.size(); ++i) grad[i] = w[i] * 8.0;
  return pen;
}

}  // namespace

// ---------------------------------------------------------------------------
// Gradient flow
// ---------------------------------------------------------------------------

FlowResult gradient_flow(const ReluNetwork& net0, const PiecewiseTrig& target,
                         const DataMeasure& mu, const FlowConfig& cfg) {
  if (!(cfg.dt > 0.0) || !(cfg.T > 0.0) || cfg.record_every < 1)
    throw std::invalid_argument("flow config requires dt > 0, T > 0, "
                                "record_every >= 1");
  const CostEvaluator ev(net0.signs(), target, mu);
  const std::size_t m = net0.size();

  // Probe points whose activation signs the kink guard watches.
  std::vector<Vec2> probes;
  if (mu.is_uniform()) {
    for (double b : target.boundaries()) probes.push_back(circle_point(b));
  } else {
    for (const DataMeasure::Atom& a : mu.atoms())
      probes.push_back(circle_point(a.angle));
  }
  auto signs_at = [&](const std::vector<Vec2>& w) {
    std::vector<char> s;
    s.reserve(m * probes.size());
    for (std::size_t i = 0; i < m; ++i)
      for (const Vec2& p : probes) s.push_back(w[i].dot(p) >= 0.0 ? 1 : 0);
    return s;
  };

  std::vector<Vec2> w = net0.weights();
  std::vector<Vec2> g, k1, k2, k3, k4, tmp;
  FlowResult out;

  double t = 0.0;
  long step = 0;
  double last_recorded_t = -1.0;
  auto record = [&](double phi_val, double grad_sq) {
    out.points.push_back(
        FlowPoint{t, ReluNetwork(net0.signs(), w), phi_val, grad_sq});
    last_recorded_t = t;
  };

  const double t_end = cfg.T * (1.0 - 1e-15);
  for (;;) {
    const double phi_val = ev.phi_and_grad(w, g);
    double grad_sq = 0.0;
    for (const Vec2& gi : g) grad_sq += gi.x * gi.x + gi.y * gi.y;

    if (step % cfg.record_every == 0 || t >= t_end) record(phi_val, grad_sq);
    if (t >= t_end) break;

    double dt = std::min(cfg.dt, cfg.T - t);
    bool stepped = false;
    std::vector<char> base_signs;
    if (cfg.integrator == Integrator::kRk4KinkGuard) base_signs = signs_at(w);

    for (int attempt = 0; attempt < 11 && !stepped; ++attempt) {
      if (cfg.integrator == Integrator::kEuler) {
        tmp = w;
        for (std::size_t i = 0; i < m; ++i) tmp[i] -= g[i] * dt;
        stepped = true;
      } else {
        k1 = g;
        tmp = w;
        for (std::size_t i = 0; i < m; ++i) tmp[i] -= k1[i] * (dt / 2);
        ev.phi_and_grad(tmp, k2);
        tmp = w;
        for (std::size_t i = 0; i < m; ++i) tmp[i] -= k2[i] * (dt / 2);
        ev.phi_and_grad(tmp, k3);
        tmp = w;
        for (std::size_t i = 0; i < m; ++i) tmp[i] -= k3[i] * dt;
        ev.phi_and_grad(tmp, k4);
        tmp = w;
        for (std::size_t i = 0; i < m; ++i)
          tmp[i] -= (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6);
        if (all_finite(tmp) && attempt < 10 && signs_at(tmp) != base_signs) {
          dt /= 2;  // an activation kink falls inside this step
          ++out.kink_halvings;
        } else {
          stepped = true;
        }
      }
    }
    if (!all_finite(tmp)) {
      out.aborted = true;
      break;
    }
    w = std::move(tmp);
    t += dt;
    ++step;
  }

  if (last_recorded_t != t) {
    const double phi_val = ev.phi_and_grad(w, g);
    double grad_sq = 0.0;
    for (const Vec2& gi : g) grad_sq += gi.x * gi.x + gi.y * gi.y;
    record(phi_val, grad_sq);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Divergence experiment
// ---------------------------------------------------------------------------

double divergence_rate(double b) {
  const double delta = std::atan2(1.0, std::sqrt(2.0) * b);
  const double s = std::sin(delta);
  return std::sqrt(2.0) / (4.0 * kPi) * (s - delta * std::cos(delta)) / s;
}

double divergence_phi(double b) {
  const double delta = std::atan2(1.0, std::sqrt(2.0) * b);
  const double s = std::sin(delta);
  return (delta - s * std::cos(delta)) / (4.0 * kPi * s * s);
}

DivergenceReport divergence_experiment(double b0, const FlowConfig& cfg,
                                       double stop_norm) {
  if (!(b0 >= 1.0)) throw std::invalid_argument("divergence needs b0 >= 1");
  if (!(cfg.T > 0.0) || cfg.record_every < 1)
    throw std::invalid_argument("flow config requires T > 0, record_every >= 1");

  const double s2 = std::sqrt(0.5);
  const PiecewiseTrig target =
      PiecewiseTrig::windowed_linear(Arc(0.0, kPi), Vec2{1.0, 0.0});
  const SignPattern signs({1, -1});
  const CostEvaluator ev(signs, target, DataMeasure::uniform());

  DivergenceReport out;
  std::vector<Vec2> w(2), g;
  double prev_b = -1.0, prev_phi = std::numeric_limits<double>::infinity();
  bool ok = true;

  auto inspect = [&](double t, double b) {
    w[0] = Vec2{s2, b};
    w[1] = Vec2{-s2, b};
    const double phi_val = ev.phi_and_grad(w, g);
    DivergenceStep st;
    st.t = t;
    st.b = b;
    st.w_norm = std::sqrt(1.0 + 2.0 * b * b);
    st.phi = phi_val;
    st.grad_e1_max = std::max(std::abs(g[0].x), std::abs(g[1].x));
    st.grad_e2_diff = std::abs(g[0].y - g[1].y);
    st.rate_err = std::abs(-g[0].y - divergence_rate(b));
    out.max_grad_e1 = std::max(out.max_grad_e1, st.grad_e1_max);
    out.max_grad_e2_diff = std::max(out.max_grad_e2_diff, st.grad_e2_diff);
    out.max_rate_err = std::max(out.max_rate_err, st.rate_err);
    if (st.grad_e1_max > 1e-10 || st.grad_e2_diff > 1e-10 ||
        st.rate_err > 1e-10)
      ok = false;
    if (prev_b >= 0.0 && !(b > prev_b)) ok = false;
    if (!(phi_val < prev_phi)) ok = false;
    prev_b = b;
    prev_phi = phi_val;
    out.steps.push_back(st);
    return st.w_norm;
  };

  double b = b0, t = 0.0;
  long step = 0;
  double norm = inspect(t, b);
  while (norm < stop_norm && t < cfg.T) {
    double dt = 0.005 * b / divergence_rate(b);
    if (step == 0 && cfg.dt > 0.0) dt = std::min(dt, cfg.dt);
    dt = std::min(dt, cfg.T - t);
    const double kk1 = divergence_rate(b);
    const double kk2 = divergence_rate(b + 0.5 * dt * kk1);
    const double kk3 = divergence_rate(b + 0.5 * dt * kk2);
    const double kk4 = divergence_rate(b + dt * kk3);
    b += dt / 6.0 * (kk1 + 2.0 * kk2 + 2.0 * kk3 + kk4);
    t += dt;
    ++step;
    if (step % cfg.record_every == 0)
      norm = inspect(t, b);
    else
      norm = std::sqrt(1.0 + 2.0 * b * b);
  }
  if (out.steps.empty() || out.steps.back().t != t) norm = inspect(t, b);

  out.structural_ok = ok;
  out.final_time = t;
  out.final_w_norm = norm;
  out.reached_stop_norm = norm >= stop_norm;
  return out;
}

// ---------------------------------------------------------------------------
// Langevin ensemble
// ---------------------------------------------------------------------------

namespace {

double quantile_sorted(const std::vector<double>& v, double q) {
  if (v.empty()) return 0.0;
  const double pos = q * double(v.size() - 1);
  const std::size_t lo = std::size_t(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - double(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace

LangevinResult langevin_ensemble(const SignPattern& signs,
                                 const LangevinInit& init,
                                 const PiecewiseTrig& target,
                                 const DataMeasure& mu,
                                 const LangevinConfig& cfg) {
  if (!(cfg.eps > 0.0) || cfg.eps > 1.0)
    throw std::invalid_argument("noise scale must lie in (0, 1]");
  if (!(cfg.R > 0.0) || !(cfg.dt > 0.0) || !(cfg.T > 0.0) ||
      cfg.n_traj < 1 || cfg.record_every < 1 || cfg.sample_every < 1 ||
      cfg.hist_bins < 1)
    throw std::invalid_argument("invalid langevin config");

  const std::size_t m = signs.size();
  const CostEvaluator ev(signs, target, mu);
  const std::uint64_t n_steps =
      std::uint64_t(std::llround(cfg.T / cfg.dt));

  std::vector<std::uint64_t> snap_steps;
  for (std::uint64_t s = 0; s <= n_steps; s += std::uint64_t(cfg.record_every))
    snap_steps.push_back(s);
  if (snap_steps.back() != n_steps) snap_steps.push_back(n_steps);
  const std::size_t n_snaps = snap_steps.size();

  // Deterministic initial states, validated up front.  Non-finite starts are
  // dropped immediately; the evaluator cannot be called on them.
  std::vector<std::vector<Vec2>> states(cfg.n_traj);
  std::vector<char> dropped_flag(cfg.n_traj, 0);
  for (std::uint64_t tr = 0; tr < cfg.n_traj; ++tr) {
    states[tr] = init(tr);
    if (states[tr].size() != m)
      throw std::invalid_argument("init sampler returned wrong width");
    if (!all_finite(states[tr])) dropped_flag[tr] = 1;
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> phi_vals(n_snaps * cfg.n_traj, nan);
  std::vector<double> norm_vals(n_snaps * cfg.n_traj, nan);

  const bool do_hist = cfg.hist_max > 0.0;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const unsigned n_threads =
      cfg.n_threads > 0
          ? unsigned(cfg.n_threads)
          : std::min<unsigned>(hw, 16);
  std::vector<std::vector<std::uint64_t>> thread_hist(
      n_threads, std::vector<std::uint64_t>(std::size_t(cfg.hist_bins), 0));
  std::vector<std::uint64_t> thread_overflow(n_threads, 0);
  std::vector<std::uint64_t> thread_samples(n_threads, 0);

  std::exception_ptr worker_error = nullptr;
  std::mutex error_mutex;

  auto run_block = [&](unsigned tid, std::uint64_t lo, std::uint64_t hi) {
    try {
      std::vector<Vec2> grad;
      const double step_noise = std::sqrt(2.0 * cfg.dt) * cfg.eps;
      for (std::uint64_t tr = lo; tr < hi; ++tr) {
        if (dropped_flag[tr]) continue;
        std::vector<Vec2>& w = states[tr];
        std::size_t next_snap = 0;
        for (std::uint64_t s = 0;; ++s) {
          if (next_snap < n_snaps && snap_steps[next_snap] == s) {
            const double phi_val = ev.phi(w);
            const double wsq = weight_sq(w);
            const double pen = 4.0 * (wsq - cfg.R * cfg.R);
            phi_vals[next_snap * cfg.n_traj + tr] = std::max(phi_val, pen);
            norm_vals[next_snap * cfg.n_traj + tr] = std::sqrt(wsq);
            ++next_snap;
          }
          if (s == n_steps) break;
          if (do_hist && double(s) * cfg.dt >= cfg.burn_in &&
              s % std::uint64_t(cfg.sample_every) == 0) {
            const double r = std::sqrt(weight_sq(w));
            const double rel = r / cfg.hist_max * double(cfg.hist_bins);
            if (rel >= double(cfg.hist_bins)) {
              ++thread_overflow[tid];
            } else {
              ++thread_hist[tid][std::size_t(rel)];
            }
            ++thread_samples[tid];
          }
          const double phi_val = ev.phi_and_grad(w, grad);
          penalize(w, phi_val, grad, cfg.R);
          const std::uint64_t key = stream_key(cfg.seed, tr, s);
          for (std::size_t i = 0; i < m; ++i) {
            double z0, z1;
            stream_normal_pair(key, i, &z0, &z1);
            w[i] -= grad[i] * cfg.dt;
            w[i] += Vec2{z0, z1} * step_noise;
          }
          if (!all_finite(w)) {
            dropped_flag[tr] = 1;
            break;
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!worker_error) worker_error = std::current_exception();
    }
  };

  if (n_threads <= 1 || cfg.n_traj < 2) {
    run_block(0, 0, cfg.n_traj);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (cfg.n_traj + n_threads - 1) / n_threads;
    for (unsigned tth = 0; tth < n_threads; ++tth) {
      const std::uint64_t lo = tth * chunk;
      const std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, cfg.n_traj);
      if (lo >= hi) break;
      pool.emplace_back(run_block, tth, lo, hi);
    }
    for (std::thread& th : pool) th.join();
  }
  if (worker_error) std::rethrow_exception(worker_error);

  LangevinResult out;
  out.hist_counts.assign(std::size_t(cfg.hist_bins), 0);
  for (unsigned tth = 0; tth < n_threads; ++tth) {
    for (std::size_t b = 0; b < out.hist_counts.size(); ++b)
      out.hist_counts[b] += thread_hist[tth][b];
    out.hist_overflow += thread_overflow[tth];
    out.hist_samples += thread_samples[tth];
  }

  std::vector<double> alive_phi, alive_norm, sorted;
  for (std::size_t sidx = 0; sidx < n_snaps; ++sidx) {
    alive_phi.clear();
    alive_norm.clear();
    for (std::uint64_t tr = 0; tr < cfg.n_traj; ++tr) {
      const double p = phi_vals[sidx * cfg.n_traj + tr];
      if (std::isnan(p)) continue;
      alive_phi.push_back(p);
      alive_norm.push_back(norm_vals[sidx * cfg.n_traj + tr]);
    }
    LangevinSnapshot snap;
    snap.t = double(snap_steps[sidx]) * cfg.dt;
    snap.alive = alive_phi.size();
    if (!alive_phi.empty()) {
      snap.phi_mean = pairwise_sum(alive_phi) / double(alive_phi.size());
      snap.wnorm_mean = pairwise_sum(alive_norm) / double(alive_norm.size());
      sorted = alive_phi;
      std::sort(sorted.begin(), sorted.end());
      snap.phi_p10 = quantile_sorted(sorted, 0.10);
      snap.phi_p90 = quantile_sorted(sorted, 0.90);
      sorted = alive_norm;
      std::sort(sorted.begin(), sorted.end());
      snap.wnorm_p10 = quantile_sorted(sorted, 0.10);
      snap.wnorm_p50 = quantile_sorted(sorted, 0.50);
      snap.wnorm_p90 = quantile_sorted(sorted, 0.90);
    }
    out.snapshots.push_back(snap);
  }

  out.final_weights.resize(cfg.n_traj);
  for (std::uint64_t tr = 0; tr < cfg.n_traj; ++tr) {
    if (dropped_flag[tr]) {
      ++out.dropped;
    } else {
      out.final_weights[tr] = std::move(states[tr]);
    }
  }
  out.ok = double(out.dropped) <= 0.01 * double(cfg.n_traj);
  return out;
}

LangevinInit gaussian_init(std::vector<Vec2> center, double sigma,
                           std::uint64_t seed) {
  return [center = std::move(center), sigma, seed](std::uint64_t tr) {
    const std::uint64_t key =
        stream_key(seed, tr, 0xFFFFFFFFFFFFFFFFULL);
    std::vector<Vec2> w(center.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      double z0, z1;
      stream_normal_pair(key, i, &z0, &z1);
      w[i] = center[i] + Vec2{z0, z1} * sigma;
    }
    return w;
  };
}

// ---------------------------------------------------------------------------
// Fokker-Planck, one node
// ---------------------------------------------------------------------------

FpResult fokker_planck_1node(const PiecewiseTrig& target, double eps, double R,
                             const FpConfig& cfg,
                             const std::function<double(Vec2)>* u0) {
  if (!(eps > 0.0) || !(R > 0.0) || cfg.n < 4 || !(cfg.T > 0.0) ||
      cfg.record_every < 1)
    throw std::invalid_argument("invalid fokker-planck config");

  const CostEvaluator ev(SignPattern({1}), target, DataMeasure::uniform());
  std::vector<Vec2> one(1);
  auto phi_r = [&](Vec2 p) {
    one[0] = p;
    const double pen = 4.0 * (p.x * p.x + p.y * p.y - R * R);
    return std::max(ev.phi(one), pen);
  };
  auto rho = [&](Vec2 p) { return std::exp(-phi_r(p) / (eps * eps)); };

  // Square truncated where the stationary density falls below 1e-16: the
  // penalty branch gives Phi_R >= 4(|w|^2 - R^2), so |w|^2 >= R^2 +
  // (eps^2/4) ln 1e16 suffices.
  const double L = std::sqrt(R * R + eps * eps * std::log(1e16) / 4.0);
  const int n = cfg.n;
  const double h = 2.0 * L / n;
  const double V = h * h;
  auto center = [&](int i) { return -L + (double(i) + 0.5) * h; };

  std::vector<double> rho_c(std::size_t(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      rho_c[std::size_t(j) * n + i] = rho(Vec2{center(i), center(j)});
  // Interior face conductances eps^2 rho(face midpoint).
  std::vector<double> fx(std::size_t(n - 1) * n);  // between (i,j),(i+1,j)
  std::vector<double> fy(std::size_t(n) * (n - 1));  // between (i,j),(i,j+1)
  for (int j = 0; j < n; ++j)
    for (int i = 0; i + 1 < n; ++i)
      fx[std::size_t(j) * (n - 1) + i] =
          eps * eps * rho(Vec2{-L + double(i + 1) * h, center(j)});
  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i < n; ++i)
      fy[std::size_t(j) * n + i] =
          eps * eps * rho(Vec2{center(i), -L + double(j + 1) * h});

  // CFL bound from the diagonal of the generator.
  double dt = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double csum = 0.0;
      if (i > 0) csum += fx[std::size_t(j) * (n - 1) + i - 1];
      if (i + 1 < n) csum += fx[std::size_t(j) * (n - 1) + i];
      if (j > 0) csum += fy[std::size_t(j - 1) * n + i];
      if (j + 1 < n) csum += fy[std::size_t(j) * n + i];
      if (csum > 0.0)
        dt = std::min(dt, rho_c[std::size_t(j) * n + i] * V / csum);
    }
  dt *= 0.9;

  // Initial profile: recentered so the rho-weighted mass is exactly the
  // stationary one.
  std::vector<double> u(std::size_t(n) * n);
  {
    std::vector<double> raw(u.size());
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec2 p{center(i), center(j)};
        if (u0) {
          raw[std::size_t(j) * n + i] = (*u0)(p);
        } else {
          const Vec2 d = p - Vec2{R / 2, 0.0};
          raw[std::size_t(j) * n + i] = std::exp(-2.0 * d.dot(d));
        }
      }
    std::vector<double> weighted(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) weighted[k] = raw[k] * rho_c[k];
    const double mean = pairwise_sum(weighted) / pairwise_sum(rho_c);
    for (std::size_t k = 0; k < raw.size(); ++k) u[k] = 1.0 + raw[k] - mean;
  }

  auto mass = [&]() {
    std::vector<double> prod(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) prod[k] = u[k] * rho_c[k];
    return pairwise_sum(prod) * V;
  };
  auto dval = [&]() {
    std::vector<double> prod(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double d = u[k] - 1.0;
      prod[k] = d * d * rho_c[k];
    }
    return pairwise_sum(prod) * V;
  };

  FpResult out;
  out.dt = dt;
  out.domain_half_width = L;
  const double m0 = mass();
  const double d0 = dval();
  out.decay.push_back(FpPoint{0.0, d0});
  out.strictly_decreasing = true;

  std::vector<double> unew(u.size());
  double t = 0.0;
  double prev_d = d0;
  int step = 0;
  const long max_steps = long(std::ceil(cfg.T / dt)) + 1;
  while (t < cfg.T && step < max_steps) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t k = std::size_t(j) * n + i;
        double acc = 0.0;
        if (i > 0)
          acc += fx[std::size_t(j) * (n - 1) + i - 1] * (u[k - 1] - u[k]);
        if (i + 1 < n)
          acc += fx[std::size_t(j) * (n - 1) + i] * (u[k + 1] - u[k]);
        if (j > 0) acc += fy[std::size_t(j - 1) * n + i] * (u[k - n] - u[k]);
        if (j + 1 < n) acc += fy[std::size_t(j) * n + i] * (u[k + n] - u[k]);
        unew[k] = u[k] + dt * acc / (rho_c[k] * V);
      }
    u.swap(unew);
    t += dt;
    ++step;

    const double d = dval();
    if (d > prev_d + 1e-12 * std::max(d0, 1e-300))
      out.strictly_decreasing = false;
    prev_d = d;
    if (step % cfg.record_every == 0) out.decay.push_back(FpPoint{t, d});
    out.mass_drift = std::max(
        out.mass_drift, std::abs(mass() - m0) / std::max(std::abs(m0), 1e-300));
    if (d <= cfg.stop_ratio * d0) {
      if (out.decay.back().t != t) out.decay.push_back(FpPoint{t, d});
      break;
    }
  }
  if (out.decay.back().t != t) out.decay.push_back(FpPoint{t, prev_d});
  out.steps = step;
  out.mass_ok = out.mass_drift <= 1e-8;

  // Affine fit of log D on the last half of the recorded decay.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = out.decay.size() / 2; k < out.decay.size(); ++k)
    if (out.decay[k].d > 0.0)
      pts.push_back({out.decay[k].t, std::log(out.decay[k].d)});
  if (pts.size() >= 3) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& p : pts) {
      sx += p.first;
      sy += p.second;
      sxx += p.first * p.first;
      sxy += p.first * p.second;
    }
    const double nn = double(pts.size());
    const double denom = nn * sxx - sx * sx;
    if (denom > 0.0) {
      const double slope = (nn * sxy - sx * sy) / denom;
      const double intercept = (sy - slope * sx) / nn;
      double ss_res = 0.0, ss_tot = 0.0;
      const double mean_y = sy / nn;
      for (auto& p : pts) {
        const double fit = intercept + slope * p.first;
        ss_res += (p.second - fit) * (p.second - fit);
        ss_tot += (p.second - mean_y) * (p.second - mean_y);
      }
      out.rate = -slope;
      out.fit_r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    }
  } else if (d0 <= 1e-30) {
    out.rate = 0.0;
    out.fit_r2 = 1.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Poincare certificate
// ---------------------------------------------------------------------------

PoincareCertificate poincare_certificate(std::size_t m, double R, double eps) {
  PoincareCertificate cert;
  cert.m = m;
  cert.R = R;
  cert.eps = eps;
  cert.c_ls = eps * eps / 8.0;
  cert.hypotheses_met = m >= 1 && eps > 0.0 && eps <= 1.0 && R >= 10.0;
  if (!cert.hypotheses_met) {
    cert.regime = PoincareCertificate::Regime::kUnmet;
    cert.log_c_p = cert.log_rate = std::numeric_limits<double>::quiet_NaN();
    cert.c_p = cert.rate = std::numeric_limits<double>::quiet_NaN();
    cert.valid = false;
    return cert;
  }

  const double e2 = eps * eps;
  const double dm = double(m);
  const bool high = dm >= 24.0 * R * R / e2;
  auto add = [&](const std::string& name, double lhs, double rhs, bool pass) {
    cert.checks.push_back(NamedCheck{name, lhs, rhs, pass});
  };

  if (high) {
    cert.regime = PoincareCertificate::Regime::kHighNode;
    cert.log_c_p = std::log(140.0);
    cert.log_rate = -std::log(70.0);
    cert.c_p = 140.0;
    cert.rate = 1.0 / 70.0;

    add("node_count_in_regime", 24.0 * R * R / e2, dm,
        24.0 * R * R / e2 <= dm);
    {
      const double lhs = (std::sqrt(2.0) * R + 1.0) * (std::sqrt(2.0) * R + 1.0);
      add("penalty_dominates", lhs, 4.0 * R * R, lhs <= 4.0 * R * R);
    }
    {
      const double lhs = 0.5 * std::log(2.0 * kPi * dm) + dm * (std::log(dm) - 1.0);
      const double rhs = std::lgamma(dm + 1.0);
      add("stirling_lower_bound", lhs, rhs, lhs <= rhs);
    }
    const double log_tail =
        dm * std::log(8.0 * std::exp(1.0) * R * R / (e2 * dm)) -
        0.5 * std::log(2.0 * kPi * dm);
    add("log_tail_mass_small", log_tail, -std::log(10.0),
        log_tail <= -std::log(10.0));
    {
      const double lhs = (1.25 + 2.0 * R * R) / e2 + log_tail;
      const double rhs = -std::log(8.0);
      add("log_interaction_chain", lhs, rhs, lhs <= rhs);
    }
  } else {
    cert.regime = PoincareCertificate::Regime::kGeneric;
    const double a = (4.0 * R * R + 2.0) / e2;
    cert.log_c_p = -std::log(8.0) + a;
    cert.log_rate = std::log(16.0) - a;
    cert.c_p = std::exp(cert.log_c_p);  // +inf when it overflows
    cert.rate = std::exp(cert.log_rate);

    const double lhs = (std::sqrt(2.0) * R + 1.0) * (std::sqrt(2.0) * R + 1.0);
    add("phi_oscillation_bound", lhs, 4.0 * R * R + 2.0,
        lhs <= 4.0 * R * R + 2.0);
  }
  {
    const double lhs = cert.log_rate;
    const double rhs = std::log(2.0) - cert.log_c_p;
    add("rate_is_two_over_cp", lhs, rhs, std::abs(lhs - rhs) <= 1e-12);
  }

  cert.valid = true;
  for (const NamedCheck& c : cert.checks) cert.valid = cert.valid && c.pass;
  return cert;
}

}  // namespace circlenet
