#include "circlenet/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace circlenet {

SignPattern::SignPattern(std::vector<int> a) : a_(std::move(a)) {
  if (a_.empty()) throw std::invalid_argument("sign pattern must be non-empty");
  for (int s : a_)
    if (s != 1 && s != -1)
      throw std::invalid_argument("sign entries must be +1 or -1");
}

SignPattern SignPattern::alternating(std::size_t m) {
  std::vector<int> a(m);
  for (std::size_t i = 0; i < m; ++i) a[i] = (i % 2 == 0) ? 1 : -1;
  return SignPattern(std::move(a));
}

SignPattern SignPattern::all_positive(std::size_t m) {
  return SignPattern(std::vector<int>(m, 1));
}

int SignPattern::positive_count() const {
  return static_cast<int>(std::count(a_.begin(), a_.end(), 1));
}

int SignPattern::negative_count() const {
  return static_cast<int>(a_.size()) - positive_count();
}

int SignPattern::minority_count() const {
  return std::min(positive_count(), negative_count());
}

double SignPattern::imbalance() const {
  const int lo = minority_count();
  if (lo == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(static_cast<double>(a_.size()) / lo);
}

ReorderResult reorder_alternating(const SignPattern& signs) {
  const bool flipped = signs.negative_count() > signs.positive_count();
  std::vector<std::size_t> plus, minus;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    const int s = flipped ? -signs[i] : signs[i];
    (s == 1 ? plus : minus).push_back(i);
  }
  std::vector<std::size_t> perm;
  perm.reserve(signs.size());
  for (std::size_t j = 0; j < minus.size(); ++j) {
    perm.push_back(plus[j]);
    perm.push_back(minus[j]);
  }
  for (std::size_t j = minus.size(); j < plus.size(); ++j)
    perm.push_back(plus[j]);
  std::vector<int> out;
  out.reserve(signs.size());
  for (std::size_t idx : perm) out.push_back(flipped ? -signs[idx] : signs[idx]);
  return ReorderResult{std::move(perm), SignPattern(std::move(out)),
                       static_cast<int>(minus.size()), signs.imbalance(),
                       flipped};
}

ReluNetwork::ReluNetwork(SignPattern signs, std::vector<Vec2> weights)
    : signs_(std::move(signs)), weights_(std::move(weights)) {
  if (signs_.size() != weights_.size())
    throw std::invalid_argument("sign and weight counts differ");
}

double ReluNetwork::weight_sq_norm() const {
  double acc = 0.0;
  for (const Vec2& w : weights_) acc += w.dot(w);
  return acc;
}

double ReluNetwork::eval(Vec2 x) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double t = weights_[i].dot(x);
    if (t >= 0.0) acc += signs_[i] * t;
  }
  return acc / std::sqrt(static_cast<double>(size()));
}

namespace {

// A term coeff.x(theta) supported on the half-circle where the unit vector
// at angle phi has nonnegative dot product with x(theta).
struct HalfTerm {
  double phi;
  Vec2 coeff;
};

PiecewiseTrig assemble_half_terms(const std::vector<HalfTerm>& terms) {
  if (terms.empty()) return PiecewiseTrig();
  std::vector<double> cuts;
  cuts.reserve(2 * terms.size());
  for (const HalfTerm& t : terms) {
    cuts.push_back(wrap_angle(t.phi + kPi / 2));
    cuts.push_back(wrap_angle(t.phi - kPi / 2));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) { return y - x < kBoundaryTol; }),
             cuts.end());
  if (cuts.size() > 1 && cuts.front() + kTwoPi - cuts.back() < kBoundaryTol)
    cuts.pop_back();
  std::vector<TrigPiece> pieces;
  pieces.reserve(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double s = cuts[i];
    const double e = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + kTwoPi;
    const Vec2 mid = circle_point(0.5 * (s + e));
    Vec2 c{0.0, 0.0};
    for (const HalfTerm& t : terms)
      if (circle_point(t.phi).dot(mid) >= 0.0) c += t.coeff;
    pieces.push_back(TrigPiece{Arc(s, e - s), 0.0, c.x, c.y});
  }
  return PiecewiseTrig::from_pieces(std::move(pieces));
}

}  // namespace

PiecewiseTrig ReluNetwork::to_piecewise() const {
  const double scale = 1.0 / std::sqrt(static_cast<double>(size()));
  std::vector<HalfTerm> terms;
  terms.reserve(size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const Vec2& w = weights_[i];
    if (w.norm() == 0.0) continue;  // zero node: no boundary inserted
    terms.push_back(HalfTerm{w.angle(), w * (signs_[i] * scale)});
  }
  return assemble_half_terms(terms);
}

ClosureElement::ClosureElement(SignPattern signs, std::vector<JTerm> j_terms,
                               std::vector<KTerm> k_terms)
    : signs_(std::move(signs)),
      j_terms_(std::move(j_terms)),
      k_terms_(std::move(k_terms)) {
  if (static_cast<int>(j_terms_.size()) > signs_.minority_count())
    throw std::invalid_argument(
        "more indicator terms than sign cancellation pairs");
  for (const JTerm& t : j_terms_) {
    if (std::abs(t.w_hat.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("indicator directions must be unit vectors");
  }
  for (std::size_t i = 0; i < j_terms_.size(); ++i)
    for (std::size_t j = i + 1; j < j_terms_.size(); ++j) {
      const double d =
          wrap_angle(j_terms_[i].w_hat.angle() - j_terms_[j].w_hat.angle());
      if (d < 1e-12 || kTwoPi - d < 1e-12)
        throw std::invalid_argument("duplicate indicator directions");
    }
  for (const KTerm& t : k_terms_)
    if (t.sign != 1 && t.sign != -1)
      throw std::invalid_argument("relu-term signs must be +1 or -1");
}

double ClosureElement::eval(Vec2 x) const {
  double acc = 0.0;
  for (const JTerm& t : j_terms_)
    if (t.w_hat.dot(x) >= 0.0) acc += t.v.dot(x);
  for (const KTerm& t : k_terms_) {
    const double u = t.w.dot(x);
    if (u >= 0.0) acc += t.sign * u;
  }
  return acc / std::sqrt(static_cast<double>(m()));
}

PiecewiseTrig ClosureElement::to_piecewise() const {
  const double scale = 1.0 / std::sqrt(static_cast<double>(m()));
  std::vector<HalfTerm> terms;
  terms.reserve(j_terms_.size() + k_terms_.size());
  for (const JTerm& t : j_terms_)
    terms.push_back(HalfTerm{t.w_hat.angle(), t.v * scale});
  for (const KTerm& t : k_terms_) {
    if (t.w.norm() == 0.0) continue;
    terms.push_back(HalfTerm{t.w.angle(), t.w * (t.sign * scale)});
  }
  return assemble_half_terms(terms);
}

ClosureElement ClosureElement::operator+(const ClosureElement& o) const {
  if (signs_.entries() != o.signs_.entries())
    throw std::invalid_argument("cannot add elements with different signs");
  std::vector<JTerm> j = j_terms_;
  for (const JTerm& t : o.j_terms_) {
    bool merged = false;
    for (JTerm& mine : j) {
      const double d = wrap_angle(mine.w_hat.angle() - t.w_hat.angle());
      if (d < 1e-12 || kTwoPi - d < 1e-12) {
        mine.v += t.v;
        merged = true;
        break;
      }
    }
    if (!merged) j.push_back(t);
  }
  std::vector<KTerm> k = k_terms_;
  k.insert(k.end(), o.k_terms_.begin(), o.k_terms_.end());
  return ClosureElement(signs_, std::move(j), std::move(k));
}

SlopeSplit split_slope(const JTerm& term) {
  SlopeSplit s;
  s.alpha = term.v.dot(term.w_hat);
  s.u = term.v - term.w_hat * s.alpha;
  return s;
}

ReluNetwork realize_closure(const ClosureElement& elem, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  std::vector<std::size_t> plus, minus;
  for (std::size_t i = 0; i < elem.m(); ++i)
    (elem.signs()[i] == 1 ? plus : minus).push_back(i);
  std::size_t need_plus = elem.j_terms().size();
  std::size_t need_minus = elem.j_terms().size();
  for (const KTerm& t : elem.k_terms()) (t.sign == 1 ? need_plus : need_minus)++;
  if (need_plus > plus.size() || need_minus > minus.size())
    throw std::invalid_argument(
        "closure realization needs " + std::to_string(need_plus) +
        " positive and " + std::to_string(need_minus) +
        " negative slots, pattern has " + std::to_string(plus.size()) +
        " and " + std::to_string(minus.size()));
  std::vector<Vec2> weights(elem.m(), Vec2{0.0, 0.0});
  std::size_t pi = 0, ni = 0;
  for (const JTerm& t : elem.j_terms()) {
    const SlopeSplit s = split_slope(t);
    weights[plus[pi++]] = t.w_hat * (1.0 / h) + s.u;
    weights[minus[ni++]] = t.w_hat * (1.0 / h - s.alpha);
  }
  for (const KTerm& t : elem.k_terms()) {
    const std::size_t slot = (t.sign == 1) ? plus[pi++] : minus[ni++];
    weights[slot] = t.w;
  }
  return ReluNetwork(elem.signs(), std::move(weights));
}

double realize_error_bound(const ClosureElement& elem, double h) {
  double acc = 0.0;
  for (const JTerm& t : elem.j_terms())
    acc += std::pow(split_slope(t).u.norm(), 1.5);
  return 2.0 / std::sqrt(static_cast<double>(elem.m())) * acc * std::sqrt(h);
}

ReluNetwork replicate(const ReluNetwork& small, const SignPattern& signs) {
  const std::size_t mp = small.size();
  const std::size_t m = signs.size();
  if (mp % 2 != 0) throw std::invalid_argument("small network must be even");
  for (std::size_t i = 0; i < mp; ++i)
    if (small.signs()[i] != ((i % 2 == 0) ? 1 : -1))
      throw std::invalid_argument("small network signs must alternate +,-");
  const int lo = signs.minority_count();
  if (static_cast<int>(mp / 2) > lo)
    throw std::invalid_argument("not enough cancellation pairs to replicate");
  for (std::size_t i = 0; i < signs.size(); ++i) {
    const int expect = (i < 2 * static_cast<std::size_t>(lo))
                           ? ((i % 2 == 0) ? 1 : -1)
                           : 1;
    if (signs[i] != expect)
      throw std::invalid_argument("target signs must be alternating-reordered");
  }
  const std::size_t k = (2 * static_cast<std::size_t>(lo)) / mp;
  const double lambda =
      (1.0 / static_cast<double>(k)) *
      std::sqrt(static_cast<double>(m) / static_cast<double>(mp));
  std::vector<Vec2> weights(m, Vec2{0.0, 0.0});
  for (std::size_t j = 0; j < k * mp; ++j)
    weights[j] = small.weights()[j % mp] * lambda;
  return ReluNetwork(signs, std::move(weights));
}

}  // namespace circlenet
