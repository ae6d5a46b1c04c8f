// Constructive approximation procedures: heat smoothing with certified
// bounds, the symmetric-plus-linear decomposition, difference-quotient step
// pairs, the universal-approximation construction, fixed-direction least
// squares with stationarity residuals, and the weight-localization pipeline.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "circlenet/geometry.hpp"
#include "circlenet/network.hpp"
#include "circlenet/trigpoly.hpp"

namespace circlenet {

// One certified inequality: lhs <= rhs (+ documented grace where noted).
struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// ---------------------------------------------------------------------------
// Heat smoothing
// ---------------------------------------------------------------------------

// y_r(theta) = sum_{k<=K} e^{-k^2/r^2} (a_k sin k theta + b_k cos k theta).
struct SmoothReport {
  TrigPoly smooth;        // y_r
  int r = 1;
  int modes = 0;          // cutoff K actually used
  double tail_bound = 0;  // certified energy bound for the discarded modes
  double sq_error = 0;    // ||y - y_r||_2^2, exact by Parseval
  double sup_target = 0;  // ||y||_inf
  double bv = 0;          // ||y||_BV
  SupEnclosure sup_smooth;  // certified enclosure of ||y_r||_inf
  SupEnclosure sup_deriv;   // certified enclosure of ||y_r'||_inf
  // sup_check: lower enclosure of ||y_r||_inf <= ||y||_inf + 1e-9.  The
  // inequality is an equality for constant targets, so the certified *upper*
  // end (which carries a safety margin) cannot be used without false alarms.
  BoundCheck sup_check;
  // c1_check: upper(||y_r||_inf) + upper(||y_r'||_inf) <= 5 r ||y||_BV.
  BoundCheck c1_check;
  // l2_check: ||y - y_r||_2^2 <= 16 ||y||_BV^2 / r.
  BoundCheck l2_check;
};

// r >= 1.  cutoff = 0 selects max(64, 8r), doubled until the damped tail
// energy bound drops below 1e-14 (throws if 2^20 modes do not suffice).
SmoothReport heat_smooth(const PiecewiseTrig& y, int r, int cutoff = 0);

// ---------------------------------------------------------------------------
// Symmetric-plus-linear decomposition
// ---------------------------------------------------------------------------

// y = y1 + y2 with y1 = y_sym + (b . x) and y2 orthogonal to every
// symmetric-plus-linear function; b is the first-harmonic part of the
// antisymmetric component.
struct LalDecomposition {
  PiecewiseTrig y1;
  PiecewiseTrig y2;
  PiecewiseTrig y_sym;
  Vec2 linear_coeffs{0.0, 0.0};
  double bv_y = 0.0;
  double bv_y1 = 0.0;
  BoundCheck bv_check;  // ||y1||_BV <= 4 ||y||_BV
};
LalDecomposition lal_decompose(const PiecewiseTrig& y);

// ---------------------------------------------------------------------------
// Step pair
// ---------------------------------------------------------------------------

// Four-node element whose function is c*cos(theta - mid) on [theta1, theta2),
// its antipodal mirror on [theta1+pi, theta2+pi), and zero elsewhere; the
// L2-closest realizable stand-in for the symmetric double step of height c.
struct StepPairResult {
  ClosureElement element;
  double sq_error = 0.0;        // exact closed form
  double sq_error_bound = 0.0;  // (c^2/1000) * width^5
};
// Requires 0 < theta2 - theta1 < pi.
StepPairResult step_pair(double theta1, double theta2, double c);

// ---------------------------------------------------------------------------
// Universal approximation
// ---------------------------------------------------------------------------

// Piecewise-constant symmetric sampler: `cells` equal intervals of [0, pi)
// with right-continuous samples at the left endpoints, extended antipodally.
PiecewiseTrig simple_symmetric_approx(const PiecewiseTrig& y_sym, int cells);

struct UniversalApproxResult {
  ClosureElement element;
  double sq_error = 0.0;  // exact ||g - y||_2^2
  double bound = 0.0;     // 62 ||y||_BV^2 / minority
  double bv = 0.0;
  int minority = 0;
  int cells = 0;              // N = floor((minority-1)/2); 0 => linear only
  double simple_sq_error = 0;  // ||y_sym - v_N||^2 (cells > 0)
  double simple_bound = 0;     // pi^2 ||y||_BV^2 / N (cells > 0)
};
// Requires the antisymmetric part of y to be linear (||y2|| <= 1e-10) and
// minority(signs) >= 1; throws std::invalid_argument otherwise.
UniversalApproxResult universal_approx(const PiecewiseTrig& y,
                                       const SignPattern& signs);

// ---------------------------------------------------------------------------
// Fixed-direction least squares
// ---------------------------------------------------------------------------

struct SlopeEntry {
  double alpha = 0.0;   // component of v along its direction
  double u_norm = 0.0;  // perpendicular component magnitude
  bool u_flag = false;      // |u|/sqrt(m)     <= 6 pi^2 ||y||_inf
  bool alpha_flag = false;  // |alpha|/sqrt(m) <= 6 pi^2 ||y||_C1
};

struct SectorSlope {
  Arc sector{0.0, kTwoPi};
  Vec2 vtilde{0.0, 0.0};  // symmetric part is (vtilde . x)/sqrt(m) here
  double bound = 0.0;     // 3 pi^2 min(||y||_C1, ||y||_inf / width)
  bool pass = false;
};

struct FitResult {
  // Present when the direction count fits the closure budget (|J| <= minority).
  std::optional<ClosureElement> element;
  std::vector<Vec2> v;         // fitted per-direction slopes
  Vec2 linear{0.0, 0.0};       // fitted b (zero when include_linear = false)
  double sq_residual = 0.0;    // exact ||g - y||_2^2
  PiecewiseTrig fit;           // g as an exact piecewise function
  // fint over each sector of (g_sym - y_sym)(theta) x dtheta; all entries
  // vanish for the include_linear least-squares minimizer.
  std::vector<Vec2> el_residuals;
  std::vector<SectorSlope> sector_slopes;
  std::vector<SlopeEntry> slope_report;
  bool rank_deficient = false;
  int rank = 0;
  int unknowns = 0;
  double sup_y = 0.0;  // norms the flags were computed against
  double c1_y = 0.0;
  bool flags_from_surrogate = false;  // discontinuous y: norms of its r=8 smoothing
};

// Minimizes ||(1/sqrt m) sum_i I{w_i.x>=0}(v_i.x) [+ b.x] - y||_2^2 exactly
// via arc-moment normal equations.  Duplicate directions (equal angles within
// 1e-12) are rejected; rank-deficient systems get the minimal-norm solution
// and are flagged.
FitResult best_fixed_direction_fit(const std::vector<Vec2>& directions,
                                   const SignPattern& signs,
                                   const PiecewiseTrig& y, bool include_linear);

// ---------------------------------------------------------------------------
// Ball-constrained polish
// ---------------------------------------------------------------------------

struct MinimizeResult {
  ReluNetwork net;
  double value = 0.0;  // best cost seen
  int iterations = 0;
};
// Projected gradient descent with Armijo backtracking on the ball
// |W| <= ball_radius; deterministic; always returns the best iterate.
MinimizeResult constrained_minimize(const ReluNetwork& start,
                                    const PiecewiseTrig& target,
                                    const DataMeasure& mu, double ball_radius,
                                    int max_steps);

// ---------------------------------------------------------------------------
// Localization pipeline
// ---------------------------------------------------------------------------

struct LocalizationReport {
  double R = 0.0;
  std::size_t m = 0;
  int minority = 0;
  double c_m = 0.0;  // sqrt(m / minority)
  int r = 0;         // smoothing level, r <= R^(1/3) <= 2r
  bool big_branch = false;
  std::size_t m_small = 0;  // reduced width m' used by the big branch
  double h0 = 0.0;          // R^(-1/2) (minority * m)^(-1/2), original m
  double w_norm = 0.0;      // |W_{h0}| of the constructed network
  double w_budget = 0.0;    // C(m) R
  bool feasible = false;    // w_norm <= w_budget + 1e-12
  double fit_sq_error = 0.0;    // ||g - y||^2 for the realized element
  double realize_bound = 0.0;   // certified ||f_{W_h0} - g||_2 bound
  double constrained_value = 0.0;
  double unconstrained_estimate = 0.0;  // best fit value seen; an upper bound
                                        // for the true infimum, never above
                                        // constrained_value
  double gap = 0.0;          // constrained_value - unconstrained_estimate >= 0
  double paper_bound = 0.0;  // 5e4 (||y||_BV^2 + 1) R^(-1/9)
  double bv = 0.0;
  double r0 = 0.0;  // max((10 ||y||_BV)^6, 4e7)
  bool meets_r0 = false;
  // Network achieving constrained_value; feed back as `warm` at larger R so
  // the constrained values (hence the gaps) chain monotonically.
  std::optional<ReluNetwork> best_net;
};

// Runs the localization argument as an algorithm: smooth y at r ~ R^(1/3),
// fit a closure element on a direction budget within the sign pattern's
// minority (reducing to a replicated small network when minority^9 > R),
// realize it at h0, certify the weight norm against C(m) R, then polish with
// the ball-constrained descent.  `warm` optionally seeds the polish with an
// additional start (best of both is kept).
LocalizationReport localization_pipeline(const PiecewiseTrig& y,
                                 const SignPattern& signs, double R,
                                 int polish_steps = 400,
                                 const ReluNetwork* warm = nullptr);

}  // namespace circlenet
