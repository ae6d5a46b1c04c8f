// Band-limited functions on the circle (finite sin/cos expansions) with
// exact Parseval arithmetic, fast uniform sampling, and certified sup-norm
// enclosures.
#pragma once

#include <cstddef>
#include <vector>

#include "circlenet/geometry.hpp"

namespace circlenet {

// sum_k a[k] sin(k theta) + b[k] cos(k theta); b[0] is the constant term and
// a[0] is unused (kept zero).
class TrigPoly {
 public:
  TrigPoly();  // zero function

  explicit TrigPoly(FourierCoeffs c);
  static TrigPoly from_coeffs(std::vector<double> a, std::vector<double> b);

  int max_k() const { return static_cast<int>(b_.size()) - 1; }
  const std::vector<double>& sin_coeffs() const { return a_; }
  const std::vector<double>& cos_coeffs() const { return b_; }

  double eval(double theta) const;
  double operator()(double theta) const { return eval(theta); }

  TrigPoly derivative() const;

  TrigPoly operator+(const TrigPoly& o) const;
  TrigPoly operator-(const TrigPoly& o) const;
  TrigPoly operator*(double s) const;

  // Parseval: b0^2 + (1/2) sum_k (a_k^2 + b_k^2).
  double sq_norm() const;

  // |b0| + sum_k amplitude_k: a cheap always-valid sup bound.
  double coeff_sup_bound() const;

 private:
  std::vector<double> a_, b_;
};

// Values at theta_j = 2pi j / n for j = 0..n-1 via an FFT; requires
// n >= 2 max_k + 2.
std::vector<double> sample_uniform(const TrigPoly& p, int n);

// Two-sided sup-norm enclosure: `lower` is attained at `argmax` (a true
// lower bound from refined sampling); `upper` comes from the dense grid
// maximum inflated by a Bernstein derivative margin.
struct SupEnclosure {
  double lower = 0.0;
  double upper = 0.0;
  double argmax = 0.0;
};
SupEnclosure sup_enclosure(const TrigPoly& p, int oversample = 64);

double inner_product(const TrigPoly& p, const TrigPoly& q);

// Averaged integral of p * f; exact because p has finitely many modes.
double inner_product(const TrigPoly& p, const PiecewiseTrig& f);

// || f - p ||^2 over the uniform measure, assembled exactly from Parseval
// pieces and the cross term.
double sq_l2_error(const TrigPoly& p, const PiecewiseTrig& f);

}  // namespace circlenet
