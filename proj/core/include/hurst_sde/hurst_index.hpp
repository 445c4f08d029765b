#pragma once

#include <hurst_sde/errors.hpp>

#include <cmath>
#include <string>

namespace hurst_sde {

/// Hurst index H of a fractional Brownian motion.
///
/// Any H in (0, 1) can be used to generate paths. The estimators are only
/// consistent for long-range dependent drivers, H in (1/2, 1); use
/// `for_estimation` where that restriction matters.
class HurstIndex {
 public:
  explicit HurstIndex(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0)) {
      throw ArgumentError("Hurst index must lie in (0, 1), got " + std::to_string(value));
    }
  }

  static HurstIndex for_estimation(double value) {
    if (!(value > 0.5 && value < 1.0)) {
      throw ArgumentError("estimation requires a Hurst index in (1/2, 1), got " +
                          std::to_string(value));
    }
    return HurstIndex(value);
  }

  double value() const noexcept { return value_; }
  bool in_estimation_range() const noexcept { return value_ > 0.5 && value_ < 1.0; }

  /// 2H, the exponent that appears in every variance formula.
  double twice() const noexcept { return 2.0 * value_; }

 private:
  double value_;
};

}  // namespace hurst_sde
