#pragma once

// Exact piecewise-trigonometric arithmetic on the unit circle.
//
// Functions are represented per arc as theta -> c0 + c1*cos(theta) + c2*sin(theta),
// which is closed under the operations the rest of the library needs (sums,
// ReLU-network slices, indicator windows).  All integrals are *averaged*:
// fint g = (1/2pi) \int_0^{2pi} g(theta) dtheta, so the uniform probability
// measure on the circle is built in.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace circlenet {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Angular values closer than this collapse to a single piece boundary.
inline constexpr double kBoundaryTol = 1e-14;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const;
  double angle() const;  // atan2(y, x) wrapped to [0, 2pi)
  Vec2 normalized() const;
  Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Point on the circle at a given angle.
Vec2 circle_point(double theta);

// Wrap an angle into [0, 2pi).
double wrap_angle(double theta);

// Oriented arc starting at `start` (in [0, 2pi)) of angular width `width`
// (in (0, 2pi]).  Arcs may wrap past 2pi.
struct Arc {
  double start = 0.0;
  double width = kTwoPi;

  Arc() = default;
  Arc(double start_, double width_);

  double end() const { return start + width; }  // may exceed 2pi
  bool contains(double theta) const;            // right-open: [start, start+width)
};

// Averaged moments of an arc:
//   m1  = fint_A 1,    mc  = fint_A cos,      ms  = fint_A sin,
//   mcc = fint_A cos^2, mcs = fint_A cos*sin, mss = fint_A sin^2.
struct ArcMoments {
  double m1 = 0, mc = 0, ms = 0, mcc = 0, mcs = 0, mss = 0;
};

ArcMoments arc_moments(const Arc& arc);

// One piece of a piecewise-trigonometric function.
struct TrigPiece {
  Arc arc;
  double c0 = 0, c1 = 0, c2 = 0;

  double eval(double theta) const;
  // Averaged integrals over this piece.
  double integral() const;              // fint_A p
  Vec2 first_moment() const;            // (fint_A p*cos, fint_A p*sin)
  double product_integral(const TrigPiece& other) const;  // fint_A p*q (same arc assumed)
};

// A function on the circle given by trig pieces that partition [0, 2pi).
// Pieces are sorted by start angle and right-closed at their start: the value
// at a boundary angle is the value of the piece that begins there.
class PiecewiseTrig {
 public:
  PiecewiseTrig();  // zero function

  static PiecewiseTrig constant(double c);
  static PiecewiseTrig linear(Vec2 b);  // theta -> b . x(theta)
  // Build from pieces; validates that the arcs tile the circle and merges
  // boundaries closer than kBoundaryTol as well as adjacent pieces with
  // exactly equal coefficients.
  static PiecewiseTrig from_pieces(std::vector<TrigPiece> pieces);
  // c * x(theta) on the (wrapped) arc, zero elsewhere.
  static PiecewiseTrig windowed_linear(const Arc& arc, Vec2 b, double c0 = 0.0);
  static PiecewiseTrig indicator(const Arc& arc, double height = 1.0);

  const std::vector<TrigPiece>& pieces() const { return pieces_; }
  std::size_t piece_count() const { return pieces_.size(); }

  double eval(double theta) const;
  double operator()(double theta) const { return eval(theta); }

  // Index of the piece containing theta (right-closed at piece starts).
  std::size_t piece_index(double theta) const;

  // Visit the overlap of every piece with the window [from, to], where
  // 0 < to - from <= 2pi and the window may cross the 2pi seam. fn receives
  // each overlap as a TrigPiece clipped to it, in angular order.
  template <class Fn>
  void for_each_overlap(double from, double to, Fn&& fn) const {
    double remaining = to - from;
    if (remaining <= 0) return;
    if (pieces_.size() == 1) {
      const TrigPiece& p = pieces_[0];
      fn(TrigPiece{Arc(wrap_angle(from), remaining), p.c0, p.c1, p.c2});
      return;
    }
    double cur = wrap_angle(from);
    std::size_t idx = piece_index(cur);
    while (remaining > 1e-15) {
      const TrigPiece& p = pieces_[idx];
      double d = p.arc.start + p.arc.width - cur;
      if (d > kTwoPi) d -= kTwoPi;
      if (d < 0) d += kTwoPi;
      const double take = std::min(d, remaining);
      if (take > 0)
        fn(TrigPiece{Arc(cur, take), p.c0, p.c1, p.c2});
      remaining -= take;
      cur = wrap_angle(cur + take);
      idx = (idx + 1) % pieces_.size();
    }
  }

  PiecewiseTrig operator+(const PiecewiseTrig& o) const;
  PiecewiseTrig operator-(const PiecewiseTrig& o) const;
  PiecewiseTrig operator*(double s) const;

  // f(theta + pi); used for the symmetric/anti-symmetric split.
  PiecewiseTrig antipode() const;

  // Jump f(b) - f(b^-) at every piece boundary, in piece order.
  std::vector<double> boundary_jumps() const;

  // Boundary angles (piece starts), sorted.
  std::vector<double> boundaries() const;

 private:
  explicit PiecewiseTrig(std::vector<TrigPiece> pieces, bool already_canonical);
  void canonicalize();

  friend PiecewiseTrig combine(const PiecewiseTrig&, const PiecewiseTrig&,
                               double, double);
  // Text parser keeps validated widths verbatim so serialized functions
  // round-trip bit-exactly.
  friend PiecewiseTrig piecewise_from_text(const std::string&);
  std::vector<TrigPiece> pieces_;
};

// a*f + b*g on the refined common partition.
PiecewiseTrig combine(const PiecewiseTrig& f, const PiecewiseTrig& g,
                      double a, double b);

// Probability measure on the circle: either the uniform measure or a finite
// atomic measure with non-negative weights summing to one.
struct DataMeasure {
  struct Atom {
    double angle = 0.0;
    double weight = 0.0;
  };

  static DataMeasure uniform();
  static DataMeasure discrete(std::vector<Atom> atoms);

  bool is_uniform() const { return atoms_.empty(); }
  const std::vector<Atom>& atoms() const { return atoms_; }

 private:
  std::vector<Atom> atoms_;  // empty <=> uniform
};

double inner_product(const PiecewiseTrig& f, const PiecewiseTrig& g,
                     const DataMeasure& mu);
double sq_norm(const PiecewiseTrig& f, const DataMeasure& mu);
double l2_norm(const PiecewiseTrig& f, const DataMeasure& mu);

// fint over [from, to] of f(theta) * (cos theta, sin theta) dtheta.  `to` may
// exceed 2pi to describe a wrapping window; requires to >= from.
Vec2 weighted_x_integral(const PiecewiseTrig& f, double from, double to);
// fint over [from, to] of f.
double window_integral(const PiecewiseTrig& f, double from, double to);

struct SymDecomposition {
  PiecewiseTrig sym;   // (f(theta) + f(theta+pi)) / 2
  PiecewiseTrig anti;  // (f(theta) - f(theta+pi)) / 2
};

SymDecomposition sym_decompose(const PiecewiseTrig& f);

// Fourier coefficients in the convention
//   f(theta) = sum_k a_k sin(k theta) + b_k cos(k theta),
// so b_0 = fint f, a_0 = 0, and for k >= 1 the reconstruction identity
// fint f sin(k theta) = a_k / 2 holds.
struct FourierCoeffs {
  std::vector<double> a;  // size K+1, a[0] == 0
  std::vector<double> b;  // size K+1
  int max_k() const { return static_cast<int>(a.size()) - 1; }
};

FourierCoeffs fourier_coeffs(const PiecewiseTrig& f, int K);

// Sup norm, averaged total variation (including jumps), and their sum.
struct BvReport {
  double sup = 0.0;
  double variation = 0.0;  // (1/2pi) * (int |f'| + sum |jumps|)
  double bv = 0.0;         // sup + variation
  bool continuous = false; // all jumps below 1e-12
  double max_abs_derivative = 0.0;  // ess-sup |f'| over smooth pieces
};

BvReport bv_norm(const PiecewiseTrig& f);

// Connected components of constant activation count for a set of directions.
struct SectorDecomposition {
  std::vector<double> boundaries;   // sorted angles in [0, 2pi)
  std::vector<Arc> sectors;         // sectors[i] runs from boundaries[i] to the next
  std::vector<int> active_counts;   // #{i : w_i . x >= 0} on each sector
  bool had_duplicate_directions = false;
};

SectorDecomposition sectors(const std::vector<Vec2>& directions);

// Validated constant c with fint_S (v.x)^2 >= c |v|^2 |S|^3 for every arc S of
// width |S| <= pi (width measured in radians) and every v.  The infimum is
// attained at |S| = pi, where the left side is |v|^2/4 for any arc position.
struct CoercivityReport {
  double c = 0.0;                // returned validated constant
  double min_sampled_ratio = 0.0;
  double argmin_width = 0.0;
  double argmin_center = 0.0;
};

CoercivityReport sector_coercivity_constant(int grid = 64);

// Deterministic pairwise summation (used wherever aggregation order must not
// depend on threading or chunk sizes).
double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

}  // namespace circlenet
