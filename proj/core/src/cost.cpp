#include "circlenet/cost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace circlenet {

namespace {

// Activation window of a node: the half circle {w.x >= 0}, or the whole
// circle for w = 0 (the indicator convention includes the boundary).
struct Window {
  double start;
  double width;  // pi or 2pi
};

Window node_window(const Vec2& w) {
  if (w.norm() == 0.0) return Window{0.0, kTwoPi};
  return Window{wrap_angle(w.angle() - kPi / 2), kPi};
}

bool intersect(const Window& a, const Window& b, Arc* out) {
  if (a.width >= kTwoPi) {
    *out = Arc(b.start, b.width);
    return true;
  }
  if (b.width >= kTwoPi) {
    *out = Arc(a.start, a.width);
    return true;
  }
  // Two half circles: overlap width pi - (angular distance of centers).
  const double ca = wrap_angle(a.start + kPi / 2);
  const double cb = wrap_angle(b.start + kPi / 2);
  double diff = wrap_angle(cb - ca);
  if (diff > kPi) diff -= kTwoPi;  // signed difference in (-pi, pi]
  const double width = kPi - std::abs(diff);
  if (width <= 0.0) return false;
  const double center = ca + 0.5 * diff;
  *out = Arc(wrap_angle(center - 0.5 * width), width);
  return true;
}

// fint_arc (v.x)(w.x) for linear forms v, w.
double pair_integral(const ArcMoments& m, const Vec2& v, const Vec2& w) {
  return v.x * w.x * m.mcc + (v.x * w.y + v.y * w.x) * m.mcs +
         v.y * w.y * m.mss;
}

// fint_arc (w.x) x as a vector.
Vec2 moment_apply(const ArcMoments& m, const Vec2& w) {
  return {w.x * m.mcc + w.y * m.mcs, w.x * m.mcs + w.y * m.mss};
}

}  // namespace

CostEvaluator::CostEvaluator(SignPattern signs, PiecewiseTrig target,
                             DataMeasure mu)
    : signs_(std::move(signs)),
      target_(std::move(target)),
      mu_(std::move(mu)),
      target_sq_(sq_norm(target_, mu_)) {
  if (!mu_.is_uniform()) {
    for (const auto& at : mu_.atoms()) {
      atom_x_.push_back(circle_point(at.angle));
      atom_w_.push_back(at.weight);
      atom_y_.push_back(target_.eval(at.angle));
    }
  }
}

double CostEvaluator::phi_uniform(const std::vector<Vec2>& w) const {
  const double inv_m = 1.0 / static_cast<double>(m());
  const double inv_sqrt_m = std::sqrt(inv_m);
  double ff = 0.0;
  Arc overlap(0.0, kTwoPi);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].norm() == 0.0) continue;
    const Window wi = node_window(w[i]);
    for (std::size_t j = i; j < w.size(); ++j) {
      if (w[j].norm() == 0.0) continue;
      if (!intersect(wi, node_window(w[j]), &overlap)) continue;
      const double term = signs_[i] * signs_[j] * inv_m *
                          pair_integral(arc_moments(overlap), w[i], w[j]);
      ff += (i == j) ? term : 2.0 * term;
    }
  }
  double fy = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].norm() == 0.0) continue;
    const Window wi = node_window(w[i]);
    Vec2 t{0.0, 0.0};
    target_.for_each_overlap(wi.start, wi.start + wi.width,
                             [&t](const TrigPiece& p) { t += p.first_moment(); });
    fy += signs_[i] * inv_sqrt_m * w[i].dot(t);
  }
  return std::max(0.0, ff - 2.0 * fy + target_sq_);
}

double CostEvaluator::phi_discrete(const std::vector<Vec2>& w) const {
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m()));
  double acc = 0.0;
  for (std::size_t k = 0; k < atom_x_.size(); ++k) {
    double f = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double t = w[i].dot(atom_x_[k]);
      if (t >= 0.0) f += signs_[i] * t;
    }
    const double d = f * inv_sqrt_m - atom_y_[k];
    acc += atom_w_[k] * d * d;
  }
  return acc;
}

double CostEvaluator::phi(const std::vector<Vec2>& w) const {
  if (w.size() != m()) throw std::invalid_argument("weight count mismatch");
  return mu_.is_uniform() ? phi_uniform(w) : phi_discrete(w);
}

double CostEvaluator::phi_and_grad(const std::vector<Vec2>& w,
                                   std::vector<Vec2>& grad) const {
  if (w.size() != m()) throw std::invalid_argument("weight count mismatch");
  grad.assign(m(), Vec2{0.0, 0.0});
  const double inv_m = 1.0 / static_cast<double>(m());
  const double inv_sqrt_m = std::sqrt(inv_m);
  if (mu_.is_uniform()) {
    double ff = 0.0, fy = 0.0;
    Arc overlap(0.0, kTwoPi);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Window wi = node_window(w[i]);
      // f_W part of the window integral: sum over all nodes j.
      Vec2 fpart{0.0, 0.0};
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j].norm() == 0.0) continue;
        if (!intersect(wi, node_window(w[j]), &overlap)) continue;
        const ArcMoments mm = arc_moments(overlap);
        fpart += moment_apply(mm, w[j]) * (signs_[j] * inv_sqrt_m);
        if (w[i].norm() != 0.0 && j >= i) {
          const double term =
              signs_[i] * signs_[j] * inv_m * pair_integral(mm, w[i], w[j]);
          ff += (i == j) ? term : 2.0 * term;
        }
      }
      Vec2 t{0.0, 0.0};
      target_.for_each_overlap(wi.start, wi.start + wi.width,
                               [&t](const TrigPiece& p) { t += p.first_moment(); });
      if (w[i].norm() != 0.0) fy += signs_[i] * inv_sqrt_m * w[i].dot(t);
      grad[i] = (fpart - t) * (2.0 * signs_[i] * inv_sqrt_m);
    }
    return std::max(0.0, ff - 2.0 * fy + target_sq_);
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < atom_x_.size(); ++k) {
    double f = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double t = w[i].dot(atom_x_[k]);
      if (t >= 0.0) f += signs_[i] * t;
    }
    const double d = f * inv_sqrt_m - atom_y_[k];
    acc += atom_w_[k] * d * d;
    const double common = 2.0 * atom_w_[k] * d * inv_sqrt_m;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i].dot(atom_x_[k]) >= 0.0)
        grad[i] += atom_x_[k] * (common * signs_[i]);
    }
  }
  return acc;
}

CostReport CostEvaluator::report(const std::vector<Vec2>& w, double R) const {
  if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
  CostReport rep;
  rep.phi = phi_and_grad(w, rep.grad);
  double wsq = 0.0;
  for (const Vec2& v : w) wsq += v.dot(v);
  const double penalty = 4.0 * (wsq - R * R);
  if (penalty >= rep.phi) {
    // Tie selects the penalty branch (subgradient choice keeping the flow
    // confined).
    rep.phi_R = penalty;
    rep.active_branch = CostReport::Branch::penalty;
    rep.grad_R.reserve(w.size());
    for (const Vec2& v : w) rep.grad_R.push_back(v * 8.0);
  } else {
    rep.phi_R = rep.phi;
    rep.active_branch = CostReport::Branch::cost;
    rep.grad_R = rep.grad;
  }
  return rep;
}

double phi(const ReluNetwork& net, const PiecewiseTrig& target,
           const DataMeasure& mu) {
  return CostEvaluator(net.signs(), target, mu).phi(net.weights());
}

std::vector<Vec2> grad_phi(const ReluNetwork& net, const PiecewiseTrig& target,
                           const DataMeasure& mu) {
  std::vector<Vec2> grad;
  CostEvaluator(net.signs(), target, mu).phi_and_grad(net.weights(), grad);
  return grad;
}

CostReport phi_R_and_grad(const ReluNetwork& net, const PiecewiseTrig& target,
                          const DataMeasure& mu, double R) {
  return CostEvaluator(net.signs(), target, mu).report(net.weights(), R);
}

}  // namespace circlenet
