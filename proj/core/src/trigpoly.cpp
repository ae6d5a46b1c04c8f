#include "circlenet/trigpoly.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace circlenet {

TrigPoly::TrigPoly() : a_(1, 0.0), b_(1, 0.0) {}

TrigPoly::TrigPoly(FourierCoeffs c) : a_(std::move(c.a)), b_(std::move(c.b)) {
  if (a_.size() != b_.size() || a_.empty())
    throw std::invalid_argument("coefficient arrays must match and be non-empty");
  a_[0] = 0.0;
}

TrigPoly TrigPoly::from_coeffs(std::vector<double> a, std::vector<double> b) {
  FourierCoeffs c;
  c.a = std::move(a);
  c.b = std::move(b);
  return TrigPoly(std::move(c));
}

double TrigPoly::eval(double theta) const {
  double acc = b_[0];
  for (std::size_t k = 1; k < b_.size(); ++k) {
    const double kt = static_cast<double>(k) * theta;
    acc += a_[k] * std::sin(kt) + b_[k] * std::cos(kt);
  }
  return acc;
}

TrigPoly TrigPoly::derivative() const {
  std::vector<double> da(a_.size(), 0.0), db(b_.size(), 0.0);
  for (std::size_t k = 1; k < b_.size(); ++k) {
    da[k] = -static_cast<double>(k) * b_[k];
    db[k] = static_cast<double>(k) * a_[k];
  }
  return from_coeffs(std::move(da), std::move(db));
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
  const std::size_t n = std::max(a_.size(), o.a_.size());
  std::vector<double> a(n, 0.0), b(n, 0.0);
  for (std::size_t k = 0; k < a_.size(); ++k) {
    a[k] += a_[k];
    b[k] += b_[k];
  }
  for (std::size_t k = 0; k < o.a_.size(); ++k) {
    a[k] += o.a_[k];
    b[k] += o.b_[k];
  }
  return from_coeffs(std::move(a), std::move(b));
}

TrigPoly TrigPoly::operator-(const TrigPoly& o) const {
  return *this + o * -1.0;
}

TrigPoly TrigPoly::operator*(double s) const {
  std::vector<double> a = a_, b = b_;
  for (double& v : a) v *= s;
  for (double& v : b) v *= s;
  return from_coeffs(std::move(a), std::move(b));
}

double TrigPoly::sq_norm() const {
  double acc = b_[0] * b_[0];
  for (std::size_t k = 1; k < b_.size(); ++k)
    acc += 0.5 * (a_[k] * a_[k] + b_[k] * b_[k]);
  return acc;
}

double TrigPoly::coeff_sup_bound() const {
  double acc = std::abs(b_[0]);
  for (std::size_t k = 1; k < b_.size(); ++k)
    acc += std::hypot(a_[k], b_[k]);
  return acc;
}

namespace {

struct FftSlot {
  fftw_complex* in = nullptr;
  double* out = nullptr;
  fftw_plan plan = nullptr;
};

std::mutex g_fft_mutex;

FftSlot& fft_slot(int n) {
  static std::map<int, FftSlot>* cache = new std::map<int, FftSlot>();
  auto it = cache->find(n);
  if (it != cache->end()) return it->second;
  FftSlot slot;
  slot.in = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
  slot.out = fftw_alloc_real(static_cast<std::size_t>(n));
  slot.plan = fftw_plan_dft_c2r_1d(n, slot.in, slot.out, FFTW_ESTIMATE);
  if (!slot.plan) throw std::runtime_error("fft plan creation failed");
  return cache->emplace(n, slot).first->second;
}

}  // namespace

std::vector<double> sample_uniform(const TrigPoly& p, int n) {
  const int K = p.max_k();
  if (n < 2 * K + 2)
    throw std::invalid_argument("sample count too small for the bandwidth");
  std::lock_guard<std::mutex> lock(g_fft_mutex);
  FftSlot& slot = fft_slot(n);
  const int half = n / 2;
  for (int k = 0; k <= half; ++k) {
    slot.in[k][0] = 0.0;
    slot.in[k][1] = 0.0;
  }
  slot.in[0][0] = p.cos_coeffs()[0];
  for (int k = 1; k <= K; ++k) {
    slot.in[k][0] = 0.5 * p.cos_coeffs()[static_cast<std::size_t>(k)];
    slot.in[k][1] = -0.5 * p.sin_coeffs()[static_cast<std::size_t>(k)];
  }
  fftw_execute(slot.plan);
  return std::vector<double>(slot.out, slot.out + n);
}

SupEnclosure sup_enclosure(const TrigPoly& p, int oversample) {
  SupEnclosure enc;
  const int K = p.max_k();
  if (K == 0) {
    enc.lower = enc.upper = std::abs(p.cos_coeffs()[0]);
    return enc;
  }
  if (oversample < 8) throw std::invalid_argument("oversample too small");
  const int n = oversample * K;
  const std::vector<double> vals = sample_uniform(p, n);
  double grid_max = 0.0;
  for (double v : vals) grid_max = std::max(grid_max, std::abs(v));
  // Bernstein: sup|p'| <= K sup|p|, so the grid (spacing 2pi/n) misses at
  // most a factor 1/(1 - pi K / n).
  const double margin = 1.0 - kPi * K / n;
  enc.upper = grid_max / margin;

  // Refine around the strongest local maxima of |p| on the grid.
  std::vector<int> candidates;
  for (int i = 0; i < n; ++i) {
    const double v = std::abs(vals[static_cast<std::size_t>(i)]);
    const double prev = std::abs(vals[static_cast<std::size_t>((i + n - 1) % n)]);
    const double next = std::abs(vals[static_cast<std::size_t>((i + 1) % n)]);
    if (v >= prev && v >= next && v >= 0.98 * grid_max) candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(), [&](int i, int j) {
    return std::abs(vals[static_cast<std::size_t>(i)]) >
           std::abs(vals[static_cast<std::size_t>(j)]);
  });
  if (candidates.size() > 8) candidates.resize(8);
  const double h = kTwoPi / n;
  enc.lower = grid_max;
  enc.argmax = 0.0;
  for (int i = 0; i < n; ++i)
    if (std::abs(vals[static_cast<std::size_t>(i)]) == grid_max)
      enc.argmax = i * h;
  for (int idx : candidates) {
    double lo = (idx - 1) * h, hi = (idx + 1) * h;
    for (int iter = 0; iter < 80; ++iter) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (std::abs(p.eval(m1)) < std::abs(p.eval(m2)))
        lo = m1;
      else
        hi = m2;
    }
    const double t = 0.5 * (lo + hi);
    const double v = std::abs(p.eval(t));
    if (v > enc.lower) {
      enc.lower = v;
      enc.argmax = wrap_angle(t);
    }
  }
  enc.upper = std::max(enc.upper, enc.lower);
  return enc;
}

double inner_product(const TrigPoly& p, const TrigPoly& q) {
  const std::size_t n = std::min(p.cos_coeffs().size(), q.cos_coeffs().size());
  double acc = p.cos_coeffs()[0] * q.cos_coeffs()[0];
  for (std::size_t k = 1; k < n; ++k)
    acc += 0.5 * (p.sin_coeffs()[k] * q.sin_coeffs()[k] +
                  p.cos_coeffs()[k] * q.cos_coeffs()[k]);
  return acc;
}

double inner_product(const TrigPoly& p, const PiecewiseTrig& f) {
  const FourierCoeffs fc = fourier_coeffs(f, p.max_k());
  double acc = p.cos_coeffs()[0] * fc.b[0];
  for (std::size_t k = 1; k < p.cos_coeffs().size(); ++k)
    acc += 0.5 * (p.sin_coeffs()[k] * fc.a[k] + p.cos_coeffs()[k] * fc.b[k]);
  return acc;
}

double sq_l2_error(const TrigPoly& p, const PiecewiseTrig& f) {
  return sq_norm(f, DataMeasure::uniform()) + p.sq_norm() -
         2.0 * inner_product(p, f);
}

}  // namespace circlenet
