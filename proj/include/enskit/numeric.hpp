#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

namespace enskit {

/// Compensated (Kahan-Neumaier) accumulator; keeps the 1e-12 tolerances
/// honest even when averaging over ~10^6 examples.
class KahanAccumulator {
public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  double sum() const { return sum_ + compensation_; }

private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double kahan_sum(std::span<const double> values) {
  KahanAccumulator acc;
  for (double v : values) acc.add(v);
  return acc.sum();
}

/// Shortest round-trip decimal form of a double. All report/CSV emission goes
/// through this so repeated runs are byte-identical and re-ingestion is exact.
inline std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace enskit
