// Independent numeric oracles used across the test suite: quadrature,
// dense-grid variation, finite differences, and random test-function
// generators. These deliberately avoid the closed forms under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "circlenet/geometry.hpp"

namespace oracles {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

namespace detail {
template <class F>
double simpson(F&& f, double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adapt(F&& f, double a, double b, double fa, double fm, double fb,
             double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive Simpson on [a, b]; intended for integrands smooth on the interval.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-13) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = detail::simpson(f, a, b, fa, fm, fb);
  return detail::adapt(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Averaged circle integral (1/2pi) int_0^2pi f, splitting at the given cut
// angles so each sub-interval is smooth.
template <class F>
double circle_average(F&& f, std::vector<double> cuts, double tol = 1e-13) {
  for (double& c : cuts) c = circlenet::wrap_angle(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.empty()) cuts.push_back(0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + kTwoPi;
    if (b > a) acc += integrate(f, a, b, tol);
  }
  return acc / kTwoPi;
}

// Total variation over the circle estimated from a dense grid (converges to
// the raw, un-averaged variation from below).
template <class F>
double grid_variation(F&& f, int n = (1 << 21)) {
  double acc = 0.0;
  double prev = f(0.0);
  for (int i = 1; i <= n; ++i) {
    const double cur = f(kTwoPi * i / n);
    acc += std::abs(cur - prev);
    prev = cur;
  }
  return acc;
}

template <class F>
double grid_sup(F&& f, int n = (1 << 21)) {
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, std::abs(f(kTwoPi * i / n)));
  return m;
}

// Central finite difference of a scalar function of several variables.
template <class F>
std::vector<double> fd_gradient(F&& f, std::vector<double> x,
                                double h = 1e-6) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fmn = f(x);
    x[i] = xi;
    g[i] = (fp - fmn) / (2.0 * h);
  }
  return g;
}

// Random piecewise-trig function with n pieces and coefficients in [-2, 2].
inline circlenet::PiecewiseTrig random_piecewise(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::vector<double> starts;
  for (int i = 0; i < n; ++i) starts.push_back(ang(rng));
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end(),
                           [](double a, double b) { return b - a < 1e-6; }),
               starts.end());
  std::vector<circlenet::TrigPiece> pieces;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const double s = starts[i];
    const double e =
        (i + 1 < starts.size()) ? starts[i + 1] : starts[0] + kTwoPi;
    pieces.push_back(circlenet::TrigPiece{circlenet::Arc(s, e - s), coef(rng),
                                          coef(rng), coef(rng)});
  }
  return circlenet::PiecewiseTrig::from_pieces(std::move(pieces));
}

}  // namespace oracles
