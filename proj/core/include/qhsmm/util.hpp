#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>

namespace qhsmm {

/// Kahan-Neumaier compensated accumulator. Sums of long, strongly graded
/// series (exponential tails, bin masses) must stay accurate to ~1 ulp of
/// the total for the 1e-12 level contracts downstream.
class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
  NeumaierSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

/// Shannon entropy in bits of a nonnegative weight vector; entries <= 0
/// contribute nothing (0 log 0 := 0). Weights are not renormalized.
inline double shannon_entropy_bits(std::span<const double> p) noexcept {
  NeumaierSum s;
  for (double w : p) {
    if (w > 0.0) s.add(-w * std::log2(w));
  }
  return s.value();
}

/// Sum_{n>=k} 1/n^2 (trigamma psi_1(k)) via Euler-Maclaurin; machine
/// precision for k >= 8, recursed below that.
inline double inverse_square_tail(double k) noexcept {
  double acc = 0.0;
  while (k < 8.0) {
    acc += 1.0 / (k * k);
    k += 1.0;
  }
  const double inv = 1.0 / k;
  const double inv2 = inv * inv;
  // psi_1(k) = 1/k + 1/(2k^2) + 1/(6k^3) - 1/(30k^5) + 1/(42k^7) - ...
  return acc + inv + 0.5 * inv2 + inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 / 42.0));
}

/// FNV-1a 64-bit hash; used for the model fingerprint in trajectory headers.
inline std::uint64_t fnv1a64(std::string_view data) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Text form that round-trips a double exactly (%.17g, C locale).
inline std::string format_double(double x) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf, buf + n);
}

}  // namespace qhsmm
