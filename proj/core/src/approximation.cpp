#include "circlenet/approximation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "circlenet/cost.hpp"

namespace circlenet {

namespace {

double sq(double v) { return v * v; }

// ---------------------------------------------------------------------------
// Least-squares machinery shared by the public fit and the pipeline
// ---------------------------------------------------------------------------

struct LsProblem {
  std::vector<Vec2> dirs;  // unit directions
  std::size_t m = 0;
  bool linear = false;
  std::vector<PiecewiseTrig> basis;  // 2 per direction (+2 linear)
  Eigen::MatrixXd gram;
};

LsProblem build_ls(const std::vector<Vec2>& directions, std::size_t m,
                   bool include_linear) {
  LsProblem p;
  p.m = m;
  p.linear = include_linear;
  for (const Vec2& d : directions) {
    if (d.norm() == 0.0)
      throw std::invalid_argument("zero direction in fit");
    p.dirs.push_back(d.normalized());
  }
  // Equal directions make the Gram exactly singular in a way that carries no
  // information; reject them (antipodal pairs are legitimate and handled by
  // the minimal-norm solve).
  for (std::size_t i = 0; i < p.dirs.size(); ++i)
    for (std::size_t j = i + 1; j < p.dirs.size(); ++j) {
      double diff = wrap_angle(p.dirs[i].angle() - p.dirs[j].angle());
      diff = std::min(diff, kTwoPi - diff);
      if (diff < 1e-12) throw std::invalid_argument("duplicate directions");
    }

  const double s = 1.0 / std::sqrt(double(m));
  for (const Vec2& d : p.dirs) {
    const Arc window(wrap_angle(d.angle() - kPi / 2), kPi);
    p.basis.push_back(PiecewiseTrig::windowed_linear(window, Vec2{s, 0.0}));
    p.basis.push_back(PiecewiseTrig::windowed_linear(window, Vec2{0.0, s}));
  }
  if (include_linear) {
    p.basis.push_back(PiecewiseTrig::linear(Vec2{1.0, 0.0}));
    p.basis.push_back(PiecewiseTrig::linear(Vec2{0.0, 1.0}));
  }
  const int n = int(p.basis.size());
  p.gram.resize(n, n);
  const DataMeasure mu = DataMeasure::uniform();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double g = inner_product(p.basis[i], p.basis[j], mu);
      p.gram(i, j) = g;
      p.gram(j, i) = g;
    }
  return p;
}

struct LsSolution {
  std::vector<Vec2> v;
  Vec2 b{0.0, 0.0};
  int rank = 0;
  bool rank_deficient = false;
};

LsSolution solve_ls(const LsProblem& p, const Eigen::VectorXd& rhs) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-10);
  cod.compute(p.gram);
  const Eigen::VectorXd sol = cod.solve(rhs);
  LsSolution out;
  out.rank = int(cod.rank());
  out.rank_deficient = out.rank < p.gram.rows();
  for (std::size_t i = 0; i < p.dirs.size(); ++i)
    out.v.push_back(Vec2{sol(2 * i), sol(2 * i + 1)});
  if (p.linear)
    out.b = Vec2{sol(2 * p.dirs.size()), sol(2 * p.dirs.size() + 1)};
  return out;
}

Eigen::VectorXd rhs_for(const LsProblem& p, const PiecewiseTrig& y) {
  Eigen::VectorXd r(p.basis.size());
  const DataMeasure mu = DataMeasure::uniform();
  for (std::size_t i = 0; i < p.basis.size(); ++i)
    r(i) = inner_product(p.basis[i], y, mu);
  return r;
}

Eigen::VectorXd rhs_for(const LsProblem& p, const TrigPoly& y) {
  Eigen::VectorXd r(p.basis.size());
  for (std::size_t i = 0; i < p.basis.size(); ++i)
    r(i) = inner_product(y, p.basis[i]);
  return r;
}

PiecewiseTrig assemble_fit(const LsProblem& p, const LsSolution& s) {
  const double scale = 1.0 / std::sqrt(double(p.m));
  PiecewiseTrig g = PiecewiseTrig::linear(s.b);
  for (std::size_t i = 0; i < p.dirs.size(); ++i) {
    const Arc window(wrap_angle(p.dirs[i].angle() - kPi / 2), kPi);
    g = g + PiecewiseTrig::windowed_linear(window, s.v[i] * scale);
  }
  return g;
}

// Fit value against a band-limited target; used by the pipeline where the
// construction minimizes against the smoothed surrogate.
double fit_value_to_poly(const std::vector<Vec2>& dirs, std::size_t m,
                         const TrigPoly& target, LsSolution* sol_out) {
  const LsProblem p = build_ls(dirs, m, true);
  const LsSolution s = solve_ls(p, rhs_for(p, target));
  if (sol_out) *sol_out = s;
  return sq_l2_error(target, assemble_fit(p, s));
}

double fit_value_to_target(const std::vector<Vec2>& dirs, std::size_t m,
                           const PiecewiseTrig& target) {
  const LsProblem p = build_ls(dirs, m, true);
  const LsSolution s = solve_ls(p, rhs_for(p, target));
  const PiecewiseTrig g = assemble_fit(p, s);
  return sq_norm(g - target, DataMeasure::uniform());
}

// Deterministic golden-section minimization.
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  int iters, double* argmin) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  if (f1 <= f2) {
    if (argmin) *argmin = x1;
    return f1;
  }
  if (argmin) *argmin = x2;
  return f2;
}

// One sweep of coordinate descent on direction angles.
void refine_directions(std::vector<Vec2>& dirs,
                       const std::function<double(const std::vector<Vec2>&)>& value) {
  if (dirs.empty()) return;
  const double window = kPi / (2.0 * double(dirs.size()));
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const double center = dirs[i].angle();
    auto objective = [&](double ang) {
      std::vector<Vec2> cand = dirs;
      cand[i] = circle_point(ang);
      try {
        return value(cand);
      } catch (const std::invalid_argument&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    double best_ang = center;
    const double best =
        golden_min(objective, center - window, center + window, 16, &best_ang);
    if (best < objective(center)) dirs[i] = circle_point(best_ang);
  }
}

std::vector<Vec2> direction_grid(int n) {
  std::vector<Vec2> dirs;
  for (int k = 0; k < n; ++k)
    dirs.push_back(circle_point(kPi / 2 + double(k) * kPi / double(n)));
  return dirs;
}

}  // namespace

// ---------------------------------------------------------------------------
// Heat smoothing
// ---------------------------------------------------------------------------

SmoothReport heat_smooth(const PiecewiseTrig& y, int r, int cutoff) {
  if (r < 1) throw std::invalid_argument("smoothing level must be >= 1");
  const BvReport bvr = bv_norm(y);
  const double bv = bvr.bv;

  int K = cutoff > 0 ? cutoff : std::max(64, 8 * r);
  // Coefficient decay |a_k|,|b_k| <= 2 bv / k makes the damped tail energy at
  // most 8 bv^2 e^{-2K^2/r^2} / K; grow K until that certificate is met.
  auto tail_budget = [&](int k) {
    return 8.0 * bv * bv * std::exp(-2.0 * double(k) * k / (double(r) * r)) /
           double(k);
  };
  while (tail_budget(K) >= 1e-14 && K < (1 << 20)) K *= 2;
  if (tail_budget(K) >= 1e-14)
    throw std::runtime_error("heat smoothing: mode cap exceeded");

  const FourierCoeffs fc = fourier_coeffs(y, K);
  std::vector<double> a(K + 1, 0.0), b(K + 1, 0.0);
  b[0] = fc.b[0];
  double captured = 0.0;  // sum over k>=1 of (2d - d^2)(a_k^2 + b_k^2)/2
  for (int k = 1; k <= K; ++k) {
    const double d = std::exp(-double(k) * k / (double(r) * r));
    a[k] = d * fc.a[k];
    b[k] = d * fc.b[k];
    captured += (2.0 * d - d * d) * (sq(fc.a[k]) + sq(fc.b[k])) / 2.0;
  }

  SmoothReport rep;
  rep.smooth = TrigPoly::from_coeffs(std::move(a), std::move(b));
  rep.r = r;
  rep.modes = K;
  rep.tail_bound = tail_budget(K);
  rep.bv = bv;
  rep.sup_target = bvr.sup;
  const double target_sq = sq_norm(y, DataMeasure::uniform());
  rep.sq_error = std::max(0.0, target_sq - sq(fc.b[0]) - captured);

  rep.sup_smooth = sup_enclosure(rep.smooth);
  rep.sup_deriv = sup_enclosure(rep.smooth.derivative());

  rep.sup_check = {rep.sup_smooth.lower, rep.sup_target,
                   rep.sup_smooth.lower <= rep.sup_target + 1e-9};
  const double c1 = rep.sup_smooth.upper + rep.sup_deriv.upper;
  rep.c1_check = {c1, 5.0 * r * bv, c1 <= 5.0 * r * bv + 1e-9};
  rep.l2_check = {rep.sq_error, 16.0 * bv * bv / r,
                  rep.sq_error <= 16.0 * bv * bv / r + 1e-12};
  return rep;
}

// ---------------------------------------------------------------------------
// Symmetric-plus-linear decomposition
// ---------------------------------------------------------------------------

LalDecomposition lal_decompose(const PiecewiseTrig& y) {
  const SymDecomposition sd = sym_decompose(y);
  const FourierCoeffs fc = fourier_coeffs(sd.anti, 1);
  const Vec2 b{fc.b[1], fc.a[1]};
  const PiecewiseTrig l = PiecewiseTrig::linear(b);

  LalDecomposition out;
  out.y_sym = sd.sym;
  out.y1 = sd.sym + l;
  out.y2 = sd.anti - l;
  out.linear_coeffs = b;
  out.bv_y = bv_norm(y).bv;
  out.bv_y1 = bv_norm(out.y1).bv;
  out.bv_check = {out.bv_y1, 4.0 * out.bv_y, out.bv_y1 <= 4.0 * out.bv_y + 1e-9};
  return out;
}

// ---------------------------------------------------------------------------
// Step pair
// ---------------------------------------------------------------------------

namespace {

// Two J terms whose sum is c*cos(theta - mid) on [t1, t2) and its antipodal
// mirror; `scale` is sqrt(m) of the element they will live in.
std::pair<JTerm, JTerm> step_pair_terms(double t1, double t2, double c,
                                        double scale) {
  const double mid = 0.5 * (t1 + t2);
  const Vec2 v = circle_point(mid) * (scale * c);
  return {JTerm{circle_point(t1 + kPi / 2), v},
          JTerm{circle_point(t2 + kPi / 2), v * -1.0}};
}

// Exact averaged energy of (c cos(u) - c) over u in [-h, h], both arcs:
// (2/pi) c^2 integral_0^h (1 - cos u)^2 du.  The closed form cancels
// catastrophically for small h, where the Taylor series is exact to machine
// precision instead.
double step_pair_sq_error(double half_width, double c) {
  const double h = half_width;
  double integral;
  if (h < 0.1) {
    const double h2 = h * h;
    integral = h2 * h2 * h * (1.0 / 20.0 - h2 / 168.0 + h2 * h2 / 2880.0);
  } else {
    integral = 1.5 * h - 2.0 * std::sin(h) + 0.25 * std::sin(2 * h);
  }
  return (2.0 / kPi) * c * c * integral;
}

}  // namespace

StepPairResult step_pair(double theta1, double theta2, double c) {
  const double width = theta2 - theta1;
  if (!(width > 0.0) || !(width < kPi))
    throw std::invalid_argument("step width must lie in (0, pi)");
  const auto terms = step_pair_terms(theta1, theta2, c, 2.0);
  ClosureElement elem(SignPattern({1, -1, 1, -1}),
                      {terms.first, terms.second}, {});
  const double err = step_pair_sq_error(width / 2, c);
  const double bound = c * c / 1000.0 * std::pow(width, 5);
  if (err > bound * (1 + 1e-12) + 1e-300)
    throw std::logic_error("step pair error exceeded its certificate");
  return StepPairResult{std::move(elem), err, bound};
}

// ---------------------------------------------------------------------------
// Universal approximation
// ---------------------------------------------------------------------------

PiecewiseTrig simple_symmetric_approx(const PiecewiseTrig& y_sym, int cells) {
  if (cells < 1) throw std::invalid_argument("cells must be >= 1");
  std::vector<TrigPiece> pieces;
  for (int k = 0; k < cells; ++k) {
    const double t0 = double(k) * kPi / cells;
    const double t1 = double(k + 1) * kPi / cells;
    const double v = y_sym.eval(t0);  // right-continuous representative
    pieces.push_back(TrigPiece{Arc(t0, t1 - t0), v, 0.0, 0.0});
    pieces.push_back(TrigPiece{Arc(t0 + kPi, t1 - t0), v, 0.0, 0.0});
  }
  return PiecewiseTrig::from_pieces(std::move(pieces));
}

UniversalApproxResult universal_approx(const PiecewiseTrig& y,
                                       const SignPattern& signs) {
  const LalDecomposition lal = lal_decompose(y);
  if (sq_norm(lal.y2, DataMeasure::uniform()) > 1e-20)
    throw std::invalid_argument(
        "target has a nonlinear antisymmetric part; decompose it first");
  const int minority = signs.minority_count();
  if (minority < 1)
    throw std::invalid_argument("sign pattern has no cancellation pair");

  const std::size_t m = signs.size();
  const double sqm = std::sqrt(double(m));
  const double bv = lal.bv_y;

  std::vector<KTerm> k_terms;
  const Vec2 b = lal.linear_coeffs;
  if (b.x != 0.0 || b.y != 0.0) {
    k_terms.push_back(KTerm{1, b * sqm});
    k_terms.push_back(KTerm{-1, b * -sqm});
  }

  UniversalApproxResult out{ClosureElement(signs, {}, k_terms), 0, 0, bv,
                            minority, 0, 0, 0};
  if (minority >= 3) {
    const int cells = (minority - 1) / 2;
    std::vector<double> bnd(cells + 1);
    for (int k = 0; k <= cells; ++k) bnd[k] = double(k) * kPi / cells;
    std::vector<Vec2> v(cells + 1, Vec2{0.0, 0.0});
    for (int k = 0; k < cells; ++k) {
      const double sample = lal.y_sym.eval(bnd[k]);
      const Vec2 axis = circle_point(0.5 * (bnd[k] + bnd[k + 1]));
      v[k] += axis * (sqm * sample);
      v[k + 1] -= axis * (sqm * sample);
    }
    std::vector<JTerm> j_terms;
    for (int k = 0; k <= cells; ++k)
      j_terms.push_back(JTerm{circle_point(bnd[k] + kPi / 2), v[k]});
    out.element = ClosureElement(signs, std::move(j_terms), k_terms);
    out.cells = cells;
    const PiecewiseTrig vN = simple_symmetric_approx(lal.y_sym, cells);
    out.simple_sq_error = sq_norm(lal.y_sym - vN, DataMeasure::uniform());
    out.simple_bound = kPi * kPi * bv * bv / cells;
  } else {
    out.simple_sq_error = sq_norm(lal.y_sym, DataMeasure::uniform());
  }

  out.sq_error = sq_norm(out.element.to_piecewise() - y, DataMeasure::uniform());
  out.bound = 62.0 * bv * bv / minority;
  return out;
}

// ---------------------------------------------------------------------------
// Fixed-direction least squares
// ---------------------------------------------------------------------------

FitResult best_fixed_direction_fit(const std::vector<Vec2>& directions,
                                   const SignPattern& signs,
                                   const PiecewiseTrig& y,
                                   bool include_linear) {
  const std::size_t m = signs.size();
  const LsProblem p = build_ls(directions, m, include_linear);
  const LsSolution s = solve_ls(p, rhs_for(p, y));

  FitResult out;
  out.v = s.v;
  out.linear = s.b;
  out.rank = s.rank;
  out.unknowns = int(p.basis.size());
  out.rank_deficient = s.rank_deficient;
  out.fit = assemble_fit(p, s);
  out.sq_residual = sq_norm(out.fit - y, DataMeasure::uniform());

  // Norms used by the slope inequalities; discontinuous targets fall back to
  // the norms of their smoothed surrogate (informational flags only).
  const BvReport bvr = bv_norm(y);
  if (bvr.continuous) {
    out.sup_y = bvr.sup;
    out.c1_y = bvr.sup + bvr.max_abs_derivative;
    out.flags_from_surrogate = false;
  } else {
    const SmoothReport s8 = heat_smooth(y, 8);
    out.sup_y = s8.sup_smooth.upper;
    out.c1_y = s8.sup_smooth.upper + s8.sup_deriv.upper;
    out.flags_from_surrogate = true;
  }

  const double sqm = std::sqrt(double(m));
  for (std::size_t i = 0; i < p.dirs.size(); ++i) {
    const SlopeSplit split = split_slope(JTerm{p.dirs[i], s.v[i]});
    SlopeEntry e;
    e.alpha = split.alpha;
    e.u_norm = split.u.norm();
    e.u_flag = e.u_norm / sqm <= 6.0 * kPi * kPi * out.sup_y + 1e-9;
    e.alpha_flag = std::abs(e.alpha) / sqm <= 6.0 * kPi * kPi * out.c1_y + 1e-9;
    out.slope_report.push_back(e);
  }

  // Sector diagnostics on the symmetric parts.
  const SectorDecomposition sec = sectors(p.dirs);
  const PiecewiseTrig diff_sym =
      sym_decompose(out.fit).sym - sym_decompose(y).sym;
  for (const Arc& arc : sec.sectors) {
    out.el_residuals.push_back(
        weighted_x_integral(diff_sym, arc.start, arc.start + arc.width));
    Vec2 vt{0.0, 0.0};
    const Vec2 xmid = circle_point(arc.start + arc.width / 2);
    for (std::size_t i = 0; i < p.dirs.size(); ++i)
      vt += s.v[i] * (p.dirs[i].dot(xmid) >= 0 ? 0.5 : -0.5);
    SectorSlope slope;
    slope.sector = arc;
    slope.vtilde = vt;
    slope.bound =
        3.0 * kPi * kPi * std::min(out.c1_y, out.sup_y / arc.width);
    slope.pass = vt.norm() / sqm <= slope.bound + 1e-9;
    out.sector_slopes.push_back(slope);
  }

  if (p.dirs.size() <= std::size_t(signs.minority_count())) {
    std::vector<JTerm> j_terms;
    for (std::size_t i = 0; i < p.dirs.size(); ++i)
      j_terms.push_back(JTerm{p.dirs[i], s.v[i]});
    std::vector<KTerm> k_terms;
    if (include_linear && (s.b.x != 0.0 || s.b.y != 0.0)) {
      k_terms.push_back(KTerm{1, s.b * sqm});
      k_terms.push_back(KTerm{-1, s.b * -sqm});
    }
    out.element.emplace(signs, std::move(j_terms), std::move(k_terms));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ball-constrained polish
// ---------------------------------------------------------------------------

MinimizeResult constrained_minimize(const ReluNetwork& start,
                                    const PiecewiseTrig& target,
                                    const DataMeasure& mu, double ball_radius,
                                    int max_steps) {
  if (!(ball_radius > 0)) throw std::invalid_argument("ball radius must be > 0");
  const std::size_t m = start.size();
  const CostEvaluator ev(start.signs(), target, mu);

  auto project = [&](std::vector<Vec2> w) {
    double nsq = 0.0;
    for (const Vec2& wi : w) nsq += wi.x * wi.x + wi.y * wi.y;
    if (nsq > ball_radius * ball_radius) {
      const double scale = ball_radius / std::sqrt(nsq);
      for (Vec2& wi : w) wi = wi * scale;
    }
    return w;
  };

  std::vector<Vec2> w = project(start.weights());
  std::vector<Vec2> grad;
  double value = ev.phi(w);
  std::vector<Vec2> best_w = w;
  double best_value = value;
  double eta = 1.0;
  int it = 0;
  for (; it < max_steps; ++it) {
    value = ev.phi_and_grad(w, grad);
    if (value < best_value) {
      best_value = value;
      best_w = w;
    }
    double gsq = 0.0;
    for (const Vec2& g : grad) gsq += g.x * g.x + g.y * g.y;
    if (gsq < 1e-24) break;

    bool moved = false;
    for (int bt = 0; bt < 40 && !moved; ++bt) {
      std::vector<Vec2> cand = w;
      for (std::size_t i = 0; i < m; ++i) cand[i] -= grad[i] * eta;
      cand = project(std::move(cand));
      double decrease = 0.0;  // <grad, w - cand>
      for (std::size_t i = 0; i < m; ++i)
        decrease += grad[i].dot(w[i] - cand[i]);
      const double cand_value = ev.phi(cand);
      if (cand_value <= value - 1e-4 * decrease && decrease > 0) {
        w = std::move(cand);
        eta = std::min(eta * 1.5, 1e6);
        moved = true;
        if (cand_value < best_value) {
          best_value = cand_value;
          best_w = w;
        }
      } else {
        eta *= 0.5;
      }
    }
    if (!moved) break;
  }
  return MinimizeResult{ReluNetwork(start.signs(), std::move(best_w)),
                        best_value, it};
}

// ---------------------------------------------------------------------------
// Localization pipeline
// ---------------------------------------------------------------------------

namespace {

int smoothing_level(double R) {
  int r = std::max(1, int(std::floor(std::cbrt(R) + 1e-12)));
  while (double(r + 1) * (r + 1) * (r + 1) <= R) ++r;
  while (r > 1 && double(r) * r * r > R) --r;
  return r;
}

std::vector<Vec2> jump_directions(const PiecewiseTrig& y, std::size_t cap) {
  std::vector<Vec2> dirs;
  const std::vector<double> bounds = y.boundaries();
  const std::vector<double> jumps = y.boundary_jumps();  // empty if one piece
  std::vector<double> angles;
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    if (std::abs(jumps[i]) < 1e-9) continue;
    const double a = wrap_angle(bounds[i] + kPi / 2);
    bool dup = false;
    for (double e : angles)
      if (std::abs(e - a) < 1e-6 || std::abs(std::abs(e - a) - kTwoPi) < 1e-6)
        dup = true;
    if (!dup) angles.push_back(a);
  }
  for (double a : angles) {
    if (dirs.size() >= cap) break;
    dirs.push_back(circle_point(a));
  }
  return dirs;
}

struct SmallBuild {
  ClosureElement elem;
  ReluNetwork realized;
  double fit_sq_error = 0.0;
  double realize_bound = 0.0;
};

// Fit against the smoothed surrogate on a direction budget that leaves one
// alternating pair free for the linear term, then realize at the scale h0
// belonging to this sign pattern.
SmallBuild small_construct(const PiecewiseTrig& y, const SignPattern& signs,
                           double R, const TrigPoly& surrogate) {
  const std::size_t m = signs.size();
  const int minority = signs.minority_count();
  const double sqm = std::sqrt(double(m));
  const double h0 = 1.0 / (std::sqrt(R) * std::sqrt(double(minority) * m));

  std::vector<Vec2> dirs =
      minority >= 2 ? direction_grid(minority - 1) : std::vector<Vec2>{};
  if (!dirs.empty())
    refine_directions(dirs, [&](const std::vector<Vec2>& cand) {
      return fit_value_to_poly(cand, m, surrogate, nullptr);
    });

  LsSolution sol;
  if (dirs.empty()) {
    const LsProblem p = build_ls(dirs, m, true);
    sol = solve_ls(p, rhs_for(p, surrogate));
  } else {
    fit_value_to_poly(dirs, m, surrogate, &sol);
  }

  std::vector<JTerm> j_terms;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    j_terms.push_back(JTerm{dirs[i], sol.v[i]});
  std::vector<KTerm> k_terms;
  if (sol.b.x != 0.0 || sol.b.y != 0.0) {
    k_terms.push_back(KTerm{1, sol.b * sqm});
    k_terms.push_back(KTerm{-1, sol.b * -sqm});
  }
  ClosureElement elem(signs, std::move(j_terms), std::move(k_terms));
  ReluNetwork realized = realize_closure(elem, h0);
  const double fit_err =
      sq_norm(elem.to_piecewise() - y, DataMeasure::uniform());
  const double rbound = realize_error_bound(elem, h0);
  return SmallBuild{std::move(elem), std::move(realized), fit_err, rbound};
}

}  // namespace

LocalizationReport localization_pipeline(const PiecewiseTrig& y,
                                 const SignPattern& signs, double R,
                                 int polish_steps, const ReluNetwork* warm) {
  if (!(R >= 1.0)) throw std::invalid_argument("R must be >= 1");
  const DataMeasure mu = DataMeasure::uniform();
  if (sq_norm(y, mu) > 1.0 + 1e-9)
    throw std::invalid_argument("target must satisfy ||y|| <= 1");
  const int minority = signs.minority_count();
  if (minority < 1)
    throw std::invalid_argument("sign pattern has no cancellation pair");

  LocalizationReport rep;
  rep.R = R;
  rep.m = signs.size();
  rep.minority = minority;
  rep.c_m = signs.imbalance();
  rep.bv = bv_norm(y).bv;
  rep.r = smoothing_level(R);
  rep.h0 = 1.0 / (std::sqrt(R) * std::sqrt(double(minority) * rep.m));
  rep.w_budget = rep.c_m * R;
  rep.paper_bound = 5e4 * (rep.bv * rep.bv + 1.0) * std::pow(R, -1.0 / 9.0);
  rep.r0 = std::max(std::pow(10.0 * rep.bv, 6.0), 4e7);
  rep.meets_r0 = R >= rep.r0;
  rep.big_branch = std::pow(double(minority), 9.0) > R;

  const SmoothReport sm = heat_smooth(y, rep.r);

  std::vector<ReluNetwork> starts;
  if (!rep.big_branch) {
    rep.m_small = rep.m;
    SmallBuild sb = small_construct(y, signs, R, sm.smooth);
    rep.fit_sq_error = sb.fit_sq_error;
    rep.realize_bound = sb.realize_bound;
    rep.w_norm = std::sqrt(sb.realized.weight_sq_norm());
    starts.push_back(std::move(sb.realized));
  } else {
    const std::size_t m_small =
        2 * std::size_t(std::max(1, int(std::floor(std::pow(R, 1.0 / 9.0) +
                                                   1e-12))));
    rep.m_small = m_small;
    const SignPattern small_signs = SignPattern::alternating(m_small);
    SmallBuild sb = small_construct(y, small_signs, R, sm.smooth);
    rep.fit_sq_error = sb.fit_sq_error;
    rep.realize_bound = sb.realize_bound;
    // The certificate network: replicate the h0 realization verbatim.
    ReluNetwork cert = replicate(sb.realized, signs);
    rep.w_norm = std::sqrt(cert.weight_sq_norm());
    // Pre-polish the small network in its own ball, then replicate that too.
    const double small_ball = small_signs.imbalance() * R;
    MinimizeResult polished_small = constrained_minimize(
        sb.realized, y, mu, small_ball, polish_steps);
    starts.push_back(std::move(cert));
    starts.push_back(replicate(polished_small.net, signs));
  }
  rep.feasible = rep.w_norm <= rep.w_budget + 1e-12;

  if (warm && warm->size() == rep.m) starts.push_back(*warm);

  double constrained = std::numeric_limits<double>::infinity();
  for (const ReluNetwork& s : starts) {
    MinimizeResult res =
        constrained_minimize(s, y, mu, rep.w_budget, polish_steps);
    if (res.value < constrained) {
      constrained = res.value;
      rep.best_net = std::move(res.net);
    }
  }
  rep.constrained_value = constrained;

  // Direction-restricted fits as the stand-in for the unreachable infimum;
  // clamped by the constrained value so the reported gap is never negative.
  double estimate = constrained;
  const std::vector<Vec2> jumps = jump_directions(y, 4 * std::size_t(minority));
  std::vector<std::vector<Vec2>> candidate_sets;
  for (int scale : {1, 2, 4})
    candidate_sets.push_back(direction_grid(std::max(1, scale * minority)));
  if (!jumps.empty()) {
    std::vector<Vec2> withjumps = direction_grid(std::max(1, minority));
    for (const Vec2& d : jumps) withjumps.push_back(d);
    candidate_sets.push_back(std::move(withjumps));
  }
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<Vec2> best_set;
  for (const auto& set : candidate_sets) {
    double v;
    try {
      v = fit_value_to_target(set, rep.m, y);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (v < best_value) {
      best_value = v;
      best_set = set;
    }
  }
  if (!best_set.empty()) {
    refine_directions(best_set, [&](const std::vector<Vec2>& cand) {
      return fit_value_to_target(cand, rep.m, y);
    });
    best_value = std::min(best_value, fit_value_to_target(best_set, rep.m, y));
    estimate = std::min(estimate, best_value);
  }
  rep.unconstrained_estimate = estimate;
  rep.gap = rep.constrained_value - rep.unconstrained_estimate;
  return rep;
}

}  // namespace circlenet
