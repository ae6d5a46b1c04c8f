#include "circlenet/cost.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace circlenet;

namespace {

const DataMeasure kUniform = DataMeasure::uniform();

PiecewiseTrig half_plane_linear() {
  // I{x2 >= 0} x1
  return PiecewiseTrig::windowed_linear(Arc(0.0, kPi), Vec2{1.0, 0.0});
}

ReluNetwork random_network(std::mt19937_64& rng, const SignPattern& signs,
                           double scale = 2.0) {
  std::uniform_real_distribution<double> coord(-scale, scale);
  std::vector<Vec2> w;
  for (std::size_t i = 0; i < signs.size(); ++i)
    w.push_back(Vec2{coord(rng), coord(rng)});
  return ReluNetwork(signs, std::move(w));
}

SignPattern random_signs(std::mt19937_64& rng, std::size_t m) {
  std::bernoulli_distribution coin(0.5);
  std::vector<int> a(m);
  for (auto& s : a) s = coin(rng) ? 1 : -1;
  return SignPattern(std::move(a));
}

DataMeasure random_discrete(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  std::uniform_real_distribution<double> wt(0.1, 1.0);
  std::vector<DataMeasure::Atom> atoms;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    atoms.push_back({ang(rng), wt(rng)});
    total += atoms.back().weight;
  }
  for (auto& a : atoms) a.weight /= total;
  return DataMeasure::discrete(std::move(atoms));
}

// True when the configuration is away from every kink of Phi: nonzero
// weights, window edges clear of target jumps, and (discrete) atoms clear of
// activation boundaries.
bool smooth_config(const ReluNetwork& net, const PiecewiseTrig& y,
                   const DataMeasure& mu, double clearance) {
  for (const Vec2& w : net.weights())
    if (w.norm() < 0.1) return false;
  if (mu.is_uniform()) {
    for (const Vec2& w : net.weights()) {
      const double phi_w = w.angle();
      for (double edge : {phi_w + kPi / 2, phi_w - kPi / 2})
        for (double b : y.boundaries()) {
          const double d = wrap_angle(edge - b);
          if (std::min(d, kTwoPi - d) < clearance) return false;
        }
    }
    for (std::size_t i = 0; i < net.size(); ++i)
      for (std::size_t j = i + 1; j < net.size(); ++j) {
        const double d =
            wrap_angle(net.weights()[i].angle() - net.weights()[j].angle());
        if (std::abs(std::min(d, kTwoPi - d) - kPi) < clearance) return false;
      }
    return true;
  }
  for (const auto& at : mu.atoms()) {
    const Vec2 x = circle_point(at.angle);
    for (const Vec2& w : net.weights())
      if (std::abs(w.dot(x)) < clearance) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("cost values") {
  const PiecewiseTrig y = half_plane_linear();
  SUBCASE("zero network pays the target energy") {
    const ReluNetwork zero(SignPattern({1, -1}), {Vec2{0, 0}, Vec2{0, 0}});
    CHECK(phi(zero, y, kUniform) == doctest::Approx(0.25));
  }
  SUBCASE("in-class target costs nothing") {
    std::mt19937_64 rng(10001);
    const ReluNetwork net = random_network(rng, random_signs(rng, 4));
    CHECK(phi(net, net.to_piecewise(), kUniform) <= 1e-13);
  }
  SUBCASE("agrees with the piecewise route for both measures") {
    std::mt19937_64 rng(10002);
    for (int trial = 0; trial < 10; ++trial) {
      const ReluNetwork net = random_network(rng, random_signs(rng, 5));
      const PiecewiseTrig target = oracles::random_piecewise(rng, 5);
      const DataMeasure mu =
          (trial % 2 == 0) ? kUniform : random_discrete(rng, 64);
      const double direct = phi(net, target, mu);
      const double via_pieces = sq_norm(net.to_piecewise() - target, mu);
      CHECK(direct == doctest::Approx(via_pieces).epsilon(1e-10));
    }
  }
}

TEST_CASE("analytic gradient matches finite differences") {
  std::mt19937_64 rng(10003);
  const PiecewiseTrig y = half_plane_linear();
  int accepted = 0;
  int attempts = 0;
  while (accepted < 40 && attempts < 4000) {
    ++attempts;
    const std::size_t m = 1 + accepted % 6;
    const SignPattern signs = random_signs(rng, m);
    const ReluNetwork net = random_network(rng, signs);
    const DataMeasure mu =
        (accepted % 2 == 0) ? kUniform : random_discrete(rng, 128);
    if (!smooth_config(net, y, mu, 5e-3)) continue;
    ++accepted;
    const CostEvaluator ev(signs, y, mu);
    std::vector<Vec2> grad;
    ev.phi_and_grad(net.weights(), grad);
    const double h = 1e-6;
    for (std::size_t i = 0; i < m; ++i) {
      for (int axis = 0; axis < 2; ++axis) {
        std::vector<Vec2> wp = net.weights(), wm = net.weights();
        if (axis == 0) {
          wp[i].x += h;
          wm[i].x -= h;
        } else {
          wp[i].y += h;
          wm[i].y -= h;
        }
        const double fd = (ev.phi(wp) - ev.phi(wm)) / (2 * h);
        const double an = (axis == 0) ? grad[i].x : grad[i].y;
        CHECK(std::abs(an - fd) <= 1e-5 * (1.0 + std::abs(an)));
      }
    }
  }
  REQUIRE(accepted == 40);
}

TEST_CASE("growth and coercivity inequalities") {
  std::mt19937_64 rng(10004);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t m = 1 + trial % 8;
    const SignPattern signs = random_signs(rng, m);
    const DataMeasure mu = (trial % 3 == 0) ? random_discrete(rng, 32)
                                            : kUniform;
    PiecewiseTrig target = oracles::random_piecewise(rng, 4);
    const double norm = l2_norm(target, mu);
    if (norm > 1.0) target = target * (1.0 / norm);  // enforce ||y|| <= 1
    const CostEvaluator ev(signs, target, mu);
    const ReluNetwork net = random_network(rng, signs, 3.0);
    std::vector<Vec2> grad;
    const double f = ev.phi_and_grad(net.weights(), grad);
    const double wn = std::sqrt(net.weight_sq_norm());
    double gsq = 0.0, gw = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      gsq += grad[i].dot(grad[i]);
      gw += grad[i].dot(net.weights()[i]);
    }
    CHECK(f <= (wn + 1.0) * (wn + 1.0) + 1e-10);
    CHECK(gsq <= 4.0 * f + 1e-10);
    CHECK(gw >= f - 1.0 - 1e-10);
  }
}

TEST_CASE("penalized cost") {
  const PiecewiseTrig y = half_plane_linear();
  std::mt19937_64 rng(10005);
  const SignPattern signs({1, -1});
  const CostEvaluator ev(signs, y, kUniform);
  SUBCASE("penalty branch far outside the ball") {
    const std::vector<Vec2> w = {Vec2{30.0, 0.0}, Vec2{0.0, -40.0}};
    const CostReport rep = ev.report(w, 1.0);
    CHECK(rep.active_branch == CostReport::Branch::penalty);
    CHECK(rep.phi_R == doctest::Approx(4.0 * (2500.0 - 1.0)));
    CHECK(rep.grad_R[0].x == doctest::Approx(240.0));
    CHECK(rep.grad_R[1].y == doctest::Approx(-320.0));
  }
  SUBCASE("cost branch inside the ball") {
    const std::vector<Vec2> w = {Vec2{0.5, 0.1}, Vec2{-0.2, 0.4}};
    const CostReport rep = ev.report(w, 10.0);
    CHECK(rep.active_branch == CostReport::Branch::cost);
    CHECK(rep.phi_R == rep.phi);
    CHECK(rep.grad_R[0].x == rep.grad[0].x);
  }
  SUBCASE("max semantics on random samples") {
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
      const std::vector<Vec2> w = {Vec2{coord(rng), coord(rng)},
                                   Vec2{coord(rng), coord(rng)}};
      const double R = 0.5 + std::abs(coord(rng));
      const CostReport rep = ev.report(w, R);
      double wsq = 0.0;
      for (const Vec2& v : w) wsq += v.dot(v);
      CHECK(rep.phi_R ==
            doctest::Approx(std::max(rep.phi, 4.0 * (wsq - R * R))));
      CHECK(rep.phi_R >= rep.phi);
      if (4.0 * (wsq - R * R) <= rep.phi) {
        CHECK(rep.phi_R == rep.phi);
      }
    }
  }
  SUBCASE("tie picks the penalty branch") {
    // Target zero => phi(w) = ||f_w||^2; tune R so the branches tie.
    const CostEvaluator ez(signs, PiecewiseTrig(), kUniform);
    const std::vector<Vec2> w = {Vec2{1.0, 0.0}, Vec2{0.0, 0.0}};
    const double f = ez.phi(w);  // 1/8
    const double R = std::sqrt(1.0 - f / 4.0);
    const CostReport rep = ez.report(w, R);
    CHECK(rep.phi_R == doctest::Approx(f));
    CHECK(rep.active_branch == CostReport::Branch::penalty);
    CHECK(rep.grad_R[0].x == doctest::Approx(8.0));
  }
}

TEST_CASE("free functions mirror the evaluator") {
  std::mt19937_64 rng(10006);
  const PiecewiseTrig y = oracles::random_piecewise(rng, 4);
  const SignPattern signs = random_signs(rng, 3);
  const ReluNetwork net = random_network(rng, signs);
  const CostEvaluator ev(signs, y, kUniform);
  CHECK(phi(net, y, kUniform) == ev.phi(net.weights()));
  std::vector<Vec2> grad;
  ev.phi_and_grad(net.weights(), grad);
  const std::vector<Vec2> g2 = grad_phi(net, y, kUniform);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    CHECK(grad[i].x == g2[i].x);
    CHECK(grad[i].y == g2[i].y);
  }
}
