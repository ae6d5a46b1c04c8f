#include "circlenet/targets.hpp"

#include <stdexcept>

namespace circlenet {

namespace {

PiecewiseTrig make_half_step() {
  return PiecewiseTrig::indicator(Arc(0.0, kPi));
}

PiecewiseTrig make_narrow_step() {
  return PiecewiseTrig::indicator(Arc(2.0, kPi / 10.0));
}

PiecewiseTrig make_sym_step() {
  // Equal steps on an arc and its antipode: antipodally symmetric.
  const double a = 0.4, b = 1.7;
  return PiecewiseTrig::indicator(Arc(a, b - a)) +
         PiecewiseTrig::indicator(Arc(a + kPi, b - a));
}

PiecewiseTrig make_gated_linear() {
  // First coordinate gated by the upper half plane: I{x2 >= 0} x1.
  return PiecewiseTrig::windowed_linear(Arc(0.0, kPi), Vec2{1.0, 0.0});
}

PiecewiseTrig make_gated_linear_sym() {
  // Symmetric part of the gated linear: (1/2) sign(x2) x1.
  return PiecewiseTrig::from_pieces(
      {TrigPiece{Arc(0.0, kPi), 0.0, 0.5, 0.0},
       TrigPiece{Arc(kPi, kPi), 0.0, -0.5, 0.0}});
}

PiecewiseTrig make_linear() {
  return PiecewiseTrig::linear(Vec2{0.8, -0.6});
}

PiecewiseTrig make_relu_lobe() {
  // relu(e1 . x): cosine on its positive half circle.
  return PiecewiseTrig::windowed_linear(Arc(-kPi / 2, kPi), Vec2{1.0, 0.0});
}

PiecewiseTrig make_cosine_hat() {
  // (2 cos - 1) clipped at zero: a continuous bump on |theta| < pi/3.
  return PiecewiseTrig::from_pieces(
      {TrigPiece{Arc(0.0, kPi / 3), -1.0, 2.0, 0.0},
       TrigPiece{Arc(kPi / 3, 4 * kPi / 3), 0.0, 0.0, 0.0},
       TrigPiece{Arc(5 * kPi / 3, kPi / 3), -1.0, 2.0, 0.0}});
}

PiecewiseTrig make_clipped_sine() {
  // sin clamped to [-1/2, 1/2]: continuous, piecewise linear/trig.
  const double s = kPi / 6;
  return PiecewiseTrig::from_pieces(
      {TrigPiece{Arc(0.0, s), 0.0, 0.0, 1.0},
       TrigPiece{Arc(s, 4 * s), 0.5, 0.0, 0.0},
       TrigPiece{Arc(5 * s, 2 * s), 0.0, 0.0, 1.0},
       TrigPiece{Arc(7 * s, 4 * s), -0.5, 0.0, 0.0},
       TrigPiece{Arc(11 * s, s), 0.0, 0.0, 1.0}});
}

PiecewiseTrig make_fold_wave() {
  // |cos| - |sin|: continuous with period pi (antipodally symmetric).
  return PiecewiseTrig::from_pieces(
      {TrigPiece{Arc(0.0, kPi / 2), 0.0, 1.0, -1.0},
       TrigPiece{Arc(kPi / 2, kPi / 2), 0.0, -1.0, -1.0},
       TrigPiece{Arc(kPi, kPi / 2), 0.0, -1.0, 1.0},
       TrigPiece{Arc(3 * kPi / 2, kPi / 2), 0.0, 1.0, 1.0}});
}

PiecewiseTrig make_square_wave3() {
  // Odd square wave with three cycles: sign(sin 3 theta).
  std::vector<TrigPiece> ps;
  for (int k = 0; k < 6; ++k)
    ps.push_back(TrigPiece{Arc(k * kPi / 3, kPi / 3),
                           (k % 2 == 0) ? 1.0 : -1.0, 0.0, 0.0});
  return PiecewiseTrig::from_pieces(std::move(ps));
}

PiecewiseTrig make_mixture() {
  return make_fold_wave() * 0.6 + make_gated_linear() * 0.3 +
         make_linear() * -0.25 + make_sym_step() * 0.5;
}

std::vector<NamedTarget> build_corpus() {
  return {
      {"half_step", make_half_step()},
      {"narrow_step", make_narrow_step()},
      {"sym_step", make_sym_step()},
      {"gated_linear", make_gated_linear()},
      {"gated_linear_sym", make_gated_linear_sym()},
      {"linear", make_linear()},
      {"relu_lobe", make_relu_lobe()},
      {"cosine_hat", make_cosine_hat()},
      {"clipped_sine", make_clipped_sine()},
      {"fold_wave", make_fold_wave()},
      {"square_wave3", make_square_wave3()},
      {"mixture", make_mixture()},
  };
}

}  // namespace

const std::vector<NamedTarget>& target_corpus() {
  static const std::vector<NamedTarget>* corpus =
      new std::vector<NamedTarget>(build_corpus());
  return *corpus;
}

const std::vector<NamedTarget>& lal_corpus() {
  static const std::vector<NamedTarget>* subset = [] {
    auto* out = new std::vector<NamedTarget>();
    for (const char* name :
         {"sym_step", "gated_linear", "gated_linear_sym", "linear",
          "relu_lobe", "fold_wave", "mixture"})
      out->push_back({name, target_by_name(name)});
    return out;
  }();
  return *subset;
}

std::vector<std::string> target_names() {
  std::vector<std::string> names;
  for (const auto& t : target_corpus()) names.push_back(t.name);
  return names;
}

const PiecewiseTrig& target_by_name(const std::string& name) {
  for (const auto& t : target_corpus())
    if (t.name == name) return t.fn;
  throw std::invalid_argument("unknown target: " + name);
}

}  // namespace circlenet
