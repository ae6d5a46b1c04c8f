#include "circlenet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace circlenet {

namespace {

constexpr double kPartitionTol = 1e-9;

// Antiderivative of |sin| with F(0) = 0.
double abs_sin_antiderivative(double t) {
  if (t < 0) return -abs_sin_antiderivative(-t);
  const double k = std::floor(t / kPi);
  return 2.0 * k + 1.0 - std::cos(t - k * kPi);
}

}  // namespace

double Vec2::norm() const { return std::hypot(x, y); }

double Vec2::angle() const { return wrap_angle(std::atan2(y, x)); }

Vec2 Vec2::normalized() const {
  const double n = norm();
  if (n < 1e-300) throw std::invalid_argument("cannot normalize zero vector");
  return {x / n, y / n};
}

Vec2 circle_point(double theta) { return {std::cos(theta), std::sin(theta)}; }

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

Arc::Arc(double start_, double width_) {
  if (!(width_ > 0.0) || width_ > kTwoPi + kPartitionTol)
    throw std::invalid_argument("arc width must lie in (0, 2pi]");
  start = wrap_angle(start_);
  width = std::min(width_, kTwoPi);
}

bool Arc::contains(double theta) const {
  double d = wrap_angle(theta - start);
  return d < width;
}

ArcMoments arc_moments(const Arc& arc) {
  const double a = arc.start;
  const double b = arc.start + arc.width;
  const double w = arc.width;
  ArcMoments m;
  const double inv = 1.0 / kTwoPi;
  m.m1 = w * inv;
  m.mc = (std::sin(b) - std::sin(a)) * inv;
  m.ms = (std::cos(a) - std::cos(b)) * inv;
  const double s2 = std::sin(2 * b) - std::sin(2 * a);
  m.mcc = (0.5 * w + 0.25 * s2) * inv;
  m.mcs = 0.25 * (std::cos(2 * a) - std::cos(2 * b)) * inv;
  m.mss = (0.5 * w - 0.25 * s2) * inv;
  return m;
}

double TrigPiece::eval(double theta) const {
  return c0 + c1 * std::cos(theta) + c2 * std::sin(theta);
}

double TrigPiece::integral() const {
  const ArcMoments m = arc_moments(arc);
  return c0 * m.m1 + c1 * m.mc + c2 * m.ms;
}

Vec2 TrigPiece::first_moment() const {
  const ArcMoments m = arc_moments(arc);
  return {c0 * m.mc + c1 * m.mcc + c2 * m.mcs,
          c0 * m.ms + c1 * m.mcs + c2 * m.mss};
}

double TrigPiece::product_integral(const TrigPiece& o) const {
  const ArcMoments m = arc_moments(arc);
  return c0 * o.c0 * m.m1 + (c0 * o.c1 + c1 * o.c0) * m.mc +
         (c0 * o.c2 + c2 * o.c0) * m.ms + c1 * o.c1 * m.mcc +
         (c1 * o.c2 + c2 * o.c1) * m.mcs + c2 * o.c2 * m.mss;
}

PiecewiseTrig::PiecewiseTrig() {
  pieces_.push_back(TrigPiece{Arc(0.0, kTwoPi), 0.0, 0.0, 0.0});
}

PiecewiseTrig::PiecewiseTrig(std::vector<TrigPiece> pieces, bool)
    : pieces_(std::move(pieces)) {}

PiecewiseTrig PiecewiseTrig::constant(double c) {
  PiecewiseTrig f;
  f.pieces_[0].c0 = c;
  return f;
}

PiecewiseTrig PiecewiseTrig::linear(Vec2 b) {
  PiecewiseTrig f;
  f.pieces_[0].c1 = b.x;
  f.pieces_[0].c2 = b.y;
  return f;
}

PiecewiseTrig PiecewiseTrig::windowed_linear(const Arc& arc, Vec2 b, double c0) {
  if (arc.width >= kTwoPi - kBoundaryTol) {
    PiecewiseTrig f;
    f.pieces_[0] = TrigPiece{Arc(0.0, kTwoPi), c0, b.x, b.y};
    return f;
  }
  std::vector<TrigPiece> pieces;
  const double s = arc.start;
  const double e = wrap_angle(arc.start + arc.width);
  if (s < e) {
    pieces.push_back(TrigPiece{Arc(s, e - s), c0, b.x, b.y});
    pieces.push_back(TrigPiece{Arc(e, s + kTwoPi - e), 0, 0, 0});
  } else {
    pieces.push_back(TrigPiece{Arc(e, s - e), 0, 0, 0});
    pieces.push_back(TrigPiece{Arc(s, e + kTwoPi - s), c0, b.x, b.y});
  }
  return from_pieces(std::move(pieces));
}

PiecewiseTrig PiecewiseTrig::indicator(const Arc& arc, double height) {
  return windowed_linear(arc, Vec2{0, 0}, height);
}

PiecewiseTrig PiecewiseTrig::from_pieces(std::vector<TrigPiece> pieces) {
  if (pieces.empty()) throw std::invalid_argument("empty piece list");
  for (auto& p : pieces) p.arc.start = wrap_angle(p.arc.start);
  std::sort(pieces.begin(), pieces.end(),
            [](const TrigPiece& a, const TrigPiece& b) {
              return a.arc.start < b.arc.start;
            });
  // Drop degenerate slivers, then check the arcs tile the circle.
  std::vector<TrigPiece> kept;
  kept.reserve(pieces.size());
  for (const auto& p : pieces) {
    if (p.arc.width < kBoundaryTol && pieces.size() > 1) continue;
    if (!kept.empty() && p.arc.start - kept.back().arc.start < kBoundaryTol) {
      if (kept.back().arc.width < kPartitionTol) kept.back() = p;
      continue;
    }
    kept.push_back(p);
  }
  const std::size_t n = kept.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double next =
        (i + 1 < n) ? kept[i + 1].arc.start : kept[0].arc.start + kTwoPi;
    const double implied = next - kept[i].arc.start;
    if (std::abs(implied - kept[i].arc.width) > kPartitionTol)
      throw std::invalid_argument("pieces do not tile the circle");
    kept[i].arc.width = implied;
  }
  PiecewiseTrig f(std::move(kept), true);
  f.canonicalize();
  return f;
}

void PiecewiseTrig::canonicalize() {
  auto same = [](const TrigPiece& a, const TrigPiece& b) {
    return a.c0 == b.c0 && a.c1 == b.c1 && a.c2 == b.c2;
  };
  std::vector<TrigPiece> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) {
    if (!out.empty() && same(out.back(), p)) {
      out.back().arc.width += p.arc.width;
    } else {
      out.push_back(p);
    }
  }
  // Wrap-around merge: last piece continues into the first one.
  if (out.size() > 1 && same(out.back(), out.front())) {
    out.back().arc.width += out.front().arc.width;
    out.erase(out.begin());
  }
  if (out.size() == 1) {
    out[0].arc = Arc(0.0, kTwoPi);
  }
  pieces_ = std::move(out);
}

std::size_t PiecewiseTrig::piece_index(double theta) const {
  const double t = wrap_angle(theta);
  // Last piece with start <= t; wraps to the final piece when t precedes
  // the first boundary.
  auto it = std::upper_bound(
      pieces_.begin(), pieces_.end(), t,
      [](double v, const TrigPiece& p) { return v < p.arc.start; });
  if (it == pieces_.begin()) return pieces_.size() - 1;
  return static_cast<std::size_t>((it - pieces_.begin()) - 1);
}

double PiecewiseTrig::eval(double theta) const {
  const double t = wrap_angle(theta);
  return pieces_[piece_index(t)].eval(t);
}

PiecewiseTrig combine(const PiecewiseTrig& f, const PiecewiseTrig& g,
                      double a, double b) {
  std::vector<double> cuts;
  cuts.reserve(f.pieces_.size() + g.pieces_.size());
  for (const auto& p : f.pieces_) cuts.push_back(p.arc.start);
  for (const auto& p : g.pieces_) cuts.push_back(p.arc.start);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) { return y - x < kBoundaryTol; }),
             cuts.end());
  if (cuts.size() > 1 && cuts.front() + kTwoPi - cuts.back() < kBoundaryTol)
    cuts.pop_back();

  std::vector<TrigPiece> pieces;
  pieces.reserve(cuts.size());
  const std::size_t n = cuts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = cuts[i];
    const double e = (i + 1 < n) ? cuts[i + 1] : cuts[0] + kTwoPi;
    const double mid = 0.5 * (s + e);
    const TrigPiece pf = f.pieces_[f.piece_index(mid)];
    const TrigPiece pg = g.pieces_[g.piece_index(mid)];
    pieces.push_back(TrigPiece{Arc(s, e - s), a * pf.c0 + b * pg.c0,
                               a * pf.c1 + b * pg.c1, a * pf.c2 + b * pg.c2});
  }
  PiecewiseTrig out(std::move(pieces), true);
  out.canonicalize();
  return out;
}

PiecewiseTrig PiecewiseTrig::operator+(const PiecewiseTrig& o) const {
  return combine(*this, o, 1.0, 1.0);
}

PiecewiseTrig PiecewiseTrig::operator-(const PiecewiseTrig& o) const {
  return combine(*this, o, 1.0, -1.0);
}

PiecewiseTrig PiecewiseTrig::operator*(double s) const {
  PiecewiseTrig out = *this;
  for (auto& p : out.pieces_) {
    p.c0 *= s;
    p.c1 *= s;
    p.c2 *= s;
  }
  out.canonicalize();
  return out;
}

PiecewiseTrig PiecewiseTrig::antipode() const {
  std::vector<TrigPiece> pieces;
  pieces.reserve(pieces_.size());
  for (const auto& p : pieces_) {
    pieces.push_back(TrigPiece{Arc(wrap_angle(p.arc.start + kPi), p.arc.width),
                               p.c0, -p.c1, -p.c2});
  }
  return from_pieces(std::move(pieces));
}

std::vector<double> PiecewiseTrig::boundary_jumps() const {
  std::vector<double> jumps;
  if (pieces_.size() < 2) return jumps;
  jumps.reserve(pieces_.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const TrigPiece& cur = pieces_[i];
    const TrigPiece& prev = pieces_[(i + pieces_.size() - 1) % pieces_.size()];
    const double t = cur.arc.start;
    jumps.push_back(cur.eval(t) - prev.eval(t));
  }
  return jumps;
}

std::vector<double> PiecewiseTrig::boundaries() const {
  std::vector<double> b;
  b.reserve(pieces_.size());
  for (const auto& p : pieces_) b.push_back(p.arc.start);
  return b;
}

DataMeasure DataMeasure::uniform() { return DataMeasure{}; }

DataMeasure DataMeasure::discrete(std::vector<Atom> atoms) {
  if (atoms.empty())
    throw std::invalid_argument("discrete measure needs at least one atom");
  double total = 0.0;
  for (auto& at : atoms) {
    if (at.weight < 0.0)
      throw std::invalid_argument("discrete measure has a negative weight");
    at.angle = wrap_angle(at.angle);
    total += at.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("discrete measure weights must sum to one");
  DataMeasure mu;
  mu.atoms_ = std::move(atoms);
  return mu;
}

double inner_product(const PiecewiseTrig& f, const PiecewiseTrig& g,
                     const DataMeasure& mu) {
  if (!mu.is_uniform()) {
    double acc = 0.0;
    for (const auto& at : mu.atoms())
      acc += at.weight * f.eval(at.angle) * g.eval(at.angle);
    return acc;
  }
  std::vector<double> cuts;
  cuts.reserve(f.piece_count() + g.piece_count());
  for (const auto& p : f.pieces()) cuts.push_back(p.arc.start);
  for (const auto& p : g.pieces()) cuts.push_back(p.arc.start);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) { return y - x < kBoundaryTol; }),
             cuts.end());
  double acc = 0.0;
  const std::size_t n = cuts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = cuts[i];
    const double e = (i + 1 < n) ? cuts[i + 1] : cuts[0] + kTwoPi;
    const double mid = 0.5 * (s + e);
    TrigPiece pf = f.pieces()[f.piece_index(mid)];
    TrigPiece pg = g.pieces()[g.piece_index(mid)];
    pf.arc = Arc(s, e - s);
    pg.arc = pf.arc;
    acc += pf.product_integral(pg);
  }
  return acc;
}

double sq_norm(const PiecewiseTrig& f, const DataMeasure& mu) {
  return inner_product(f, f, mu);
}

double l2_norm(const PiecewiseTrig& f, const DataMeasure& mu) {
  return std::sqrt(std::max(0.0, sq_norm(f, mu)));
}

Vec2 weighted_x_integral(const PiecewiseTrig& f, double from, double to) {
  if (!(to >= from) || to - from > kTwoPi + kPartitionTol)
    throw std::invalid_argument("window must satisfy from <= to <= from + 2pi");
  Vec2 acc{0, 0};
  f.for_each_overlap(from, to, [&acc](const TrigPiece& p) {
    acc += p.first_moment();
  });
  return acc;
}

double window_integral(const PiecewiseTrig& f, double from, double to) {
  if (!(to >= from) || to - from > kTwoPi + kPartitionTol)
    throw std::invalid_argument("window must satisfy from <= to <= from + 2pi");
  double acc = 0.0;
  f.for_each_overlap(from, to, [&acc](const TrigPiece& p) {
    acc += p.integral();
  });
  return acc;
}

SymDecomposition sym_decompose(const PiecewiseTrig& f) {
  SymDecomposition d;
  d.sym = combine(f, f.antipode(), 0.5, 0.5);
  d.anti = combine(f, d.sym, 1.0, -1.0);
  return d;
}

namespace {

// Raw (not averaged) integrals over [a, b] of cos(k t) and sin(k t) against
// {1, cos t, sin t}; k >= 1.
struct CrossIntegrals {
  double c_1, s_1;    // int cos(kt), int sin(kt)
  double c_c, s_c;    // int cos t cos(kt), int cos t sin(kt)
  double c_s, s_s;    // int sin t cos(kt), int sin t sin(kt)
};

CrossIntegrals cross_integrals(int k, double a, double b) {
  CrossIntegrals r{};
  const double dk = static_cast<double>(k);
  r.c_1 = (std::sin(dk * b) - std::sin(dk * a)) / dk;
  r.s_1 = (std::cos(dk * a) - std::cos(dk * b)) / dk;
  if (k == 1) {
    auto f_cc = [](double t) { return 0.5 * t + 0.25 * std::sin(2 * t); };
    auto f_cs = [](double t) { return -0.25 * std::cos(2 * t); };
    auto f_ss = [](double t) { return 0.5 * t - 0.25 * std::sin(2 * t); };
    r.c_c = f_cc(b) - f_cc(a);
    r.s_c = f_cs(b) - f_cs(a);
    r.c_s = f_cs(b) - f_cs(a);
    r.s_s = f_ss(b) - f_ss(a);
    return r;
  }
  const double kp = dk + 1.0, km = dk - 1.0;
  auto scc = [&](double t) {
    return 0.5 * (std::sin(kp * t) / kp + std::sin(km * t) / km);
  };
  auto scs = [&](double t) {
    return 0.5 * (-std::cos(kp * t) / kp - std::cos(km * t) / km);
  };
  auto ssc = [&](double t) {
    return 0.5 * (-std::cos(kp * t) / kp + std::cos(km * t) / km);
  };
  auto sss = [&](double t) {
    return 0.5 * (std::sin(km * t) / km - std::sin(kp * t) / kp);
  };
  r.c_c = scc(b) - scc(a);
  r.s_c = scs(b) - scs(a);
  r.c_s = ssc(b) - ssc(a);
  r.s_s = sss(b) - sss(a);
  return r;
}

}  // namespace

FourierCoeffs fourier_coeffs(const PiecewiseTrig& f, int K) {
  if (K < 0) throw std::invalid_argument("K must be non-negative");
  FourierCoeffs fc;
  fc.a.assign(static_cast<std::size_t>(K) + 1, 0.0);
  fc.b.assign(static_cast<std::size_t>(K) + 1, 0.0);
  for (const auto& p : f.pieces()) fc.b[0] += p.integral();
  for (int k = 1; k <= K; ++k) {
    double ic = 0.0, is = 0.0;
    for (const auto& p : f.pieces()) {
      const double a = p.arc.start;
      const double b = p.arc.start + p.arc.width;
      const CrossIntegrals ci = cross_integrals(k, a, b);
      ic += p.c0 * ci.c_1 + p.c1 * ci.c_c + p.c2 * ci.c_s;
      is += p.c0 * ci.s_1 + p.c1 * ci.s_c + p.c2 * ci.s_s;
    }
    fc.b[static_cast<std::size_t>(k)] = ic / kPi;
    fc.a[static_cast<std::size_t>(k)] = is / kPi;
  }
  return fc;
}

BvReport bv_norm(const PiecewiseTrig& f) {
  BvReport r;
  double raw_variation = 0.0;
  for (const auto& p : f.pieces()) {
    const double a = p.arc.start;
    const double b = p.arc.start + p.arc.width;
    const double amp = std::hypot(p.c1, p.c2);
    const double phase = std::atan2(p.c2, p.c1);
    // Sup of |p| over the closed arc: endpoints plus interior critical angles.
    double m = std::max(std::abs(p.eval(a)), std::abs(p.eval(b)));
    if (amp > 0.0) {
      for (int j = -2; j <= 2; ++j) {
        const double crit = phase + j * kPi;
        if (crit > a && crit < b)
          m = std::max(m, std::abs(p.eval(crit)));
      }
      // Derivative is -amp * sin(t - phase); extrema at phase +- pi/2.
      double dm = std::max(std::abs(amp * std::sin(a - phase)),
                           std::abs(amp * std::sin(b - phase)));
      for (int j = -2; j <= 3; ++j) {
        const double crit = phase + kPi / 2 + j * kPi;
        if (crit > a && crit < b) dm = amp;
      }
      r.max_abs_derivative = std::max(r.max_abs_derivative, dm);
      raw_variation += amp * (abs_sin_antiderivative(b - phase) -
                              abs_sin_antiderivative(a - phase));
    }
    r.sup = std::max(r.sup, m);
  }
  r.continuous = true;
  for (double j : f.boundary_jumps()) {
    raw_variation += std::abs(j);
    if (std::abs(j) > 1e-12) r.continuous = false;
  }
  r.variation = raw_variation / kTwoPi;
  r.bv = r.sup + r.variation;
  return r;
}

SectorDecomposition sectors(const std::vector<Vec2>& directions) {
  SectorDecomposition d;
  std::vector<double> angles;
  angles.reserve(directions.size());
  for (const auto& w : directions) angles.push_back(w.normalized().angle());
  {
    std::vector<double> sorted = angles;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i] - sorted[i - 1] < kBoundaryTol)
        d.had_duplicate_directions = true;
  }
  std::vector<double> cuts;
  cuts.reserve(2 * angles.size());
  for (double phi : angles) {
    cuts.push_back(wrap_angle(phi + kPi / 2));
    cuts.push_back(wrap_angle(phi - kPi / 2));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) { return y - x < kBoundaryTol; }),
             cuts.end());
  if (cuts.size() > 1 && cuts.front() + kTwoPi - cuts.back() < kBoundaryTol)
    cuts.pop_back();
  d.boundaries = cuts;
  const std::size_t n = cuts.size();
  if (n == 0) {
    d.sectors.push_back(Arc(0.0, kTwoPi));
    d.active_counts.push_back(0);
    return d;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double s = cuts[i];
    const double e = (i + 1 < n) ? cuts[i + 1] : cuts[0] + kTwoPi;
    d.sectors.push_back(Arc(s, e - s));
    const Vec2 mid = circle_point(0.5 * (s + e));
    int count = 0;
    for (const auto& w : directions)
      if (w.dot(mid) >= 0.0) ++count;
    d.active_counts.push_back(count);
  }
  return d;
}

CoercivityReport sector_coercivity_constant(int grid) {
  if (grid < 4) throw std::invalid_argument("grid too small");
  CoercivityReport rep;
  rep.c = 1.0 / (4.0 * kPi * kPi * kPi);
  rep.min_sampled_ratio = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= grid; ++j) {
    const double s = kPi * j / grid;
    for (int l = 0; l < grid; ++l) {
      const double center = kTwoPi * l / grid;
      const ArcMoments m = arc_moments(Arc(wrap_angle(center - 0.5 * s), s));
      // Smallest eigenvalue of [[mcc, mcs], [mcs, mss]] gives the minimum of
      // fint_S (v.x)^2 over unit v in closed form.
      const double half_tr = 0.5 * (m.mcc + m.mss);
      const double disc = std::hypot(0.5 * (m.mcc - m.mss), m.mcs);
      const double ratio = (half_tr - disc) / (s * s * s);
      if (ratio < rep.min_sampled_ratio) {
        rep.min_sampled_ratio = ratio;
        rep.argmin_width = s;
        rep.argmin_center = center;
      }
    }
  }
  // The sampled minimum must never undercut the analytic constant; fall back
  // defensively if it somehow does.
  rep.c = std::min(rep.c, rep.min_sampled_ratio);
  return rep;
}

double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace circlenet
