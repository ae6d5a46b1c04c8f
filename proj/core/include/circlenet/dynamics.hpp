// Training dynamics and their certificates: deterministic gradient flow, the
// two-node divergence experiment, the penalized Langevin ensemble, a one-node
// Fokker-Planck solver, and the Poincare-constant certificate.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "circlenet/cost.hpp"
#include "circlenet/geometry.hpp"
#include "circlenet/network.hpp"

namespace circlenet {

// ---------------------------------------------------------------------------
// Deterministic gradient flow
// ---------------------------------------------------------------------------

enum class Integrator { kEuler, kRk4KinkGuard };

struct FlowConfig {
  double dt = 1e-3;
  double T = 1.0;
  Integrator integrator = Integrator::kEuler;
  int record_every = 1;
};

struct FlowPoint {
  double t = 0.0;
  ReluNetwork net;
  double phi = 0.0;
  double grad_sq = 0.0;  // |grad Phi|^2 at this state
};

struct FlowResult {
  std::vector<FlowPoint> points;
  bool aborted = false;    // hit a non-finite state; last point is the final
                           // finite snapshot
  int kink_halvings = 0;   // times the guard halved a step
};

// Integrates dW/dt = -grad Phi(W).  The kink-guarded RK4 recomputes a step at
// half the size whenever the activation signs of the probe set (atoms of a
// discrete measure, or the target's boundary points under the uniform one)
// change within the step.
FlowResult gradient_flow(const ReluNetwork& net0, const PiecewiseTrig& target,
                         const DataMeasure& mu, const FlowConfig& cfg);

// ---------------------------------------------------------------------------
// Two-node divergence experiment
// ---------------------------------------------------------------------------

// The flow started on the invariant line w1 = (s, b), w2 = (-s, b) with
// s = 1/sqrt(2) against the half-plane-gated linear target.  On this line the
// residual is confined to two shrinking arcs, the gradient has the exact form
// (0, c, 0, c), and b grows without bound while the cost decays to its
// unattained infimum 0.
struct DivergenceStep {
  double t = 0.0;
  double b = 0.0;
  double w_norm = 0.0;
  double phi = 0.0;
  double grad_e1_max = 0.0;   // max |e1-component| of the exact gradient
  double grad_e2_diff = 0.0;  // |e2(w1) - e2(w2)| of the exact gradient
  double rate_err = 0.0;      // |exact e2-gradient - closed-form c(b)|
};

struct DivergenceReport {
  std::vector<DivergenceStep> steps;
  bool structural_ok = false;  // all identities within 1e-10, b strictly
                               // increasing, phi strictly decreasing
  double max_grad_e1 = 0.0;
  double max_grad_e2_diff = 0.0;
  double max_rate_err = 0.0;
  double final_time = 0.0;
  double final_w_norm = 0.0;
  bool reached_stop_norm = false;
};

// b0 >= 1.  cfg.dt seeds the adaptive step (each step grows b by about 0.5%);
// integration stops at |W| >= stop_norm or t >= cfg.T.  Records every
// cfg.record_every steps and verifies the structural identities against the
// exact full-dimensional gradient at every record.
DivergenceReport divergence_experiment(double b0, const FlowConfig& cfg,
                                       double stop_norm = 2e3);

// Closed-form scalars of the invariant line, exposed for cross-checks.
double divergence_rate(double b);  // db/dt > 0
double divergence_phi(double b);   // cost on the line

// ---------------------------------------------------------------------------
// Penalized Langevin ensemble
// ---------------------------------------------------------------------------

struct LangevinConfig {
  double eps = 0.5;  // noise scale in (0, 1]
  double R = 2.0;    // penalization radius
  double dt = 1e-3;
  double T = 1.0;
  std::uint64_t n_traj = 1;
  std::uint64_t seed = 0;
  int record_every = 100;  // steps between ensemble snapshots
  int n_threads = 0;       // 0 = hardware concurrency
  // Histogram of |W| collected after burn-in (disabled when hist_max == 0).
  double hist_max = 0.0;
  int hist_bins = 40;
  double burn_in = 0.0;
  int sample_every = 10;
};

struct LangevinSnapshot {
  double t = 0.0;
  double phi_mean = 0.0;  // mean of Phi_R over alive trajectories
  double phi_p10 = 0.0;
  double phi_p90 = 0.0;
  double wnorm_mean = 0.0;
  double wnorm_p10 = 0.0;
  double wnorm_p50 = 0.0;
  double wnorm_p90 = 0.0;
  std::uint64_t alive = 0;
};

struct LangevinResult {
  std::vector<LangevinSnapshot> snapshots;
  std::vector<std::uint64_t> hist_counts;  // |W| histogram, hist_bins bins
  std::uint64_t hist_overflow = 0;
  std::uint64_t hist_samples = 0;
  std::uint64_t dropped = 0;  // trajectories that went non-finite
  bool ok = false;            // dropped <= 1% of n_traj
  // Final weights per trajectory (empty vector for dropped ones).
  std::vector<std::vector<Vec2>> final_weights;
};

using LangevinInit = std::function<std::vector<Vec2>(std::uint64_t)>;

// Euler-Maruyama on dW = -grad Phi_R dt + sqrt(2) eps dB with counter-based
// noise: every draw depends only on (seed, trajectory, step), and aggregation
// uses index order with pairwise summation, so results are bitwise identical
// for any thread count.
LangevinResult langevin_ensemble(const SignPattern& signs,
                                 const LangevinInit& init,
                                 const PiecewiseTrig& target,
                                 const DataMeasure& mu,
                                 const LangevinConfig& cfg);

// Deterministic Gaussian cloud around `center` (per-trajectory draws come
// from the same counter-based generator).
LangevinInit gaussian_init(std::vector<Vec2> center, double sigma,
                           std::uint64_t seed);

// ---------------------------------------------------------------------------
// One-node Fokker-Planck solver
// ---------------------------------------------------------------------------

struct FpConfig {
  int n = 96;              // grid cells per axis
  double T = 40.0;         // time horizon
  int record_every = 10;   // steps between decay samples
  double stop_ratio = 1e-10;  // stop once D(t) <= stop_ratio * D(0)
};

struct FpPoint {
  double t = 0.0;
  double d = 0.0;  // D(t) = sum (u-1)^2 rho V
};

struct FpResult {
  std::vector<FpPoint> decay;
  double mass_drift = 0.0;  // max relative drift of sum u rho V
  bool mass_ok = false;     // <= 1e-8
  bool strictly_decreasing = false;
  double rate = 0.0;    // -d log D / dt fitted on the last half of the run
  double fit_r2 = 0.0;  // R^2 of that affine fit
  double dt = 0.0;      // CFL step actually used
  double domain_half_width = 0.0;
  int steps = 0;
};

// Finite-volume solver for du/dt = (1/rho) div(eps^2 rho grad u) with
// rho = e^{-Phi_R/eps^2}, m = 1, on the square where rho is above 1e-16,
// no-flux boundaries.  u0 is evaluated at cell centers, recentered so the
// rho-weighted mass matches the stationary state exactly (u0 == nullptr
// selects a default off-center bump).
FpResult fokker_planck_1node(const PiecewiseTrig& target, double eps, double R,
                             const FpConfig& cfg,
                             const std::function<double(Vec2)>* u0 = nullptr);

// ---------------------------------------------------------------------------
// Poincare-constant certificate
// ---------------------------------------------------------------------------

struct NamedCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct PoincareCertificate {
  std::size_t m = 0;
  double R = 0.0;
  double eps = 0.0;
  bool hypotheses_met = false;  // eps in (0, 1] and R >= 10
  enum class Regime { kHighNode, kGeneric, kUnmet } regime = Regime::kUnmet;
  double c_ls = 0.0;     // eps^2 / 8
  double log_c_p = 0.0;  // natural log of the Poincare-constant bound
  double log_rate = 0.0;  // natural log of the relaxation-rate bound
  double c_p = 0.0;       // exp(log_c_p); +inf when it overflows
  double rate = 0.0;      // exp(log_rate)
  std::vector<NamedCheck> checks;
  bool valid = false;  // hypotheses met and every check passes
};

// Evaluates the scalar inequalities behind the spectral-gap bound in log
// domain.  Regime high-node iff m >= 24 R^2 / eps^2, giving C_P <= 140 and
// rate >= 1/70; otherwise C_P <= (1/8) e^{(4R^2+2)/eps^2} with the matching
// rate 2/C_P.  Outside eps in (0,1], R >= 10 the certificate reports
// hypotheses unmet and no constants.
PoincareCertificate poincare_certificate(std::size_t m, double R, double eps);

}  // namespace circlenet
