// The hypothesis class of sign-fixed shallow ReLU networks on the circle,
// its closure (indicator-linear plus ReLU terms), exact conversions to
// piecewise-trig form, and the constructive realizations (difference-quotient
// pairs, block replication).
#pragma once

#include <cstddef>
#include <vector>

#include "circlenet/geometry.hpp"

namespace circlenet {

// Fixed outer signs a_i in {-1, +1}.
class SignPattern {
 public:
  explicit SignPattern(std::vector<int> a);
  static SignPattern alternating(std::size_t m);  // +, -, +, -, ...
  static SignPattern all_positive(std::size_t m);

  std::size_t size() const { return a_.size(); }
  int operator[](std::size_t i) const { return a_[i]; }
  const std::vector<int>& entries() const { return a_; }

  int positive_count() const;
  int negative_count() const;
  // Number of cancellation pairs available: min(#+, #-).
  int minority_count() const;
  // sqrt(m / minority); +inf when the minority count is zero.
  double imbalance() const;

 private:
  std::vector<int> a_;
};

struct ReorderResult {
  std::vector<std::size_t> permutation;  // new position -> original index
  SignPattern reordered;                 // pattern after flip + permutation
  int minority;                          // cancellation-pair count
  double imbalance;                      // sqrt(m / minority)
  bool flipped;  // global sign flip applied so minuses are the minority
};

// Permutation putting the first 2*minority entries in strict +,-,+,- order
// (after a global flip if minuses outnumber pluses), remaining entries +.
ReorderResult reorder_alternating(const SignPattern& signs);

// f(x) = (1/sqrt m) sum_i a_i relu(w_i . x).
class ReluNetwork {
 public:
  ReluNetwork(SignPattern signs, std::vector<Vec2> weights);

  std::size_t size() const { return weights_.size(); }
  const SignPattern& signs() const { return signs_; }
  const std::vector<Vec2>& weights() const { return weights_; }
  void set_weight(std::size_t i, Vec2 w) { weights_[i] = w; }

  double weight_sq_norm() const;  // |W|^2
  double eval(Vec2 x) const;
  double eval(double theta) const { return eval(circle_point(theta)); }

  PiecewiseTrig to_piecewise() const;

 private:
  SignPattern signs_;
  std::vector<Vec2> weights_;
};

// g(x) = (1/sqrt m) [ sum_J I{w_hat.x >= 0}(v.x) + sum_K a relu(w.x) ].
struct JTerm {
  Vec2 w_hat;  // unit vector
  Vec2 v;
};
struct KTerm {
  int sign;  // +-1
  Vec2 w;
};

class ClosureElement {
 public:
  ClosureElement(SignPattern signs, std::vector<JTerm> j_terms,
                 std::vector<KTerm> k_terms);

  std::size_t m() const { return signs_.size(); }
  const SignPattern& signs() const { return signs_; }
  const std::vector<JTerm>& j_terms() const { return j_terms_; }
  const std::vector<KTerm>& k_terms() const { return k_terms_; }

  double eval(Vec2 x) const;
  double eval(double theta) const { return eval(circle_point(theta)); }
  PiecewiseTrig to_piecewise() const;

  ClosureElement operator+(const ClosureElement& o) const;  // same signs

 private:
  SignPattern signs_;
  std::vector<JTerm> j_terms_;
  std::vector<KTerm> k_terms_;
};

// Slope split v = alpha * w_hat + u with u perpendicular to w_hat.
struct SlopeSplit {
  double alpha = 0.0;
  Vec2 u{0.0, 0.0};
};
SlopeSplit split_slope(const JTerm& term);

// Difference-quotient realization: each J term becomes the node pair
// (+: (1/h) w_hat + u, -: ((1/h) - alpha) w_hat); K terms are copied into
// matching-sign slots; leftover slots get zero weight.
ReluNetwork realize_closure(const ClosureElement& elem, double h);

// (2/sqrt m) sum_J |u_i|^{3/2} sqrt(h): certified L2 distance bound for
// realize_closure.
double realize_error_bound(const ClosureElement& elem, double h);

// Block replication: k = floor(2 minority / m'), lambda = (1/k) sqrt(m/m');
// weights are k copies of lambda * W' followed by zeros. Reproduces the small
// network's function exactly with |W|^2 <= (m/minority) |W'|^2.
ReluNetwork replicate(const ReluNetwork& small, const SignPattern& signs);

}  // namespace circlenet
