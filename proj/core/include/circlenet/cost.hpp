// The L2(mu) cost Phi, its penalized form Phi_R = max(Phi, 4(|W|^2 - R^2)),
// and exact analytic gradients. CostEvaluator is the reusable fast path
// (no allocation per call) used by the dynamics integrators.
#pragma once

#include <vector>

#include "circlenet/geometry.hpp"
#include "circlenet/network.hpp"

namespace circlenet {

struct CostReport {
  double phi = 0.0;
  std::vector<Vec2> grad;
  double phi_R = 0.0;
  std::vector<Vec2> grad_R;
  enum class Branch { cost, penalty } active_branch = Branch::cost;
};

// Precomputes target data for repeated cost/gradient evaluation at fixed
// signs, target, and measure.
class CostEvaluator {
 public:
  CostEvaluator(SignPattern signs, PiecewiseTrig target, DataMeasure mu);

  std::size_t m() const { return signs_.size(); }
  const SignPattern& signs() const { return signs_; }
  const PiecewiseTrig& target() const { return target_; }
  const DataMeasure& measure() const { return mu_; }
  double target_sq_norm() const { return target_sq_; }

  double phi(const std::vector<Vec2>& w) const;
  // Writes the gradient into grad (resized to m) and returns phi.
  double phi_and_grad(const std::vector<Vec2>& w, std::vector<Vec2>& grad) const;
  CostReport report(const std::vector<Vec2>& w, double R) const;

 private:
  double phi_uniform(const std::vector<Vec2>& w) const;
  double phi_discrete(const std::vector<Vec2>& w) const;

  SignPattern signs_;
  PiecewiseTrig target_;
  DataMeasure mu_;
  double target_sq_;
  std::vector<double> atom_y_;  // target values at atoms (discrete case)
  std::vector<Vec2> atom_x_;
  std::vector<double> atom_w_;
};

double phi(const ReluNetwork& net, const PiecewiseTrig& target,
           const DataMeasure& mu);
std::vector<Vec2> grad_phi(const ReluNetwork& net, const PiecewiseTrig& target,
                           const DataMeasure& mu);
CostReport phi_R_and_grad(const ReluNetwork& net, const PiecewiseTrig& target,
                          const DataMeasure& mu, double R);

}  // namespace circlenet
