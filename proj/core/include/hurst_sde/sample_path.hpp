#pragma once

#include <hurst_sde/errors.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace hurst_sde {

/// Values of a process on the uniform grid t_k = kT/n, k = 0..n.
class SamplePath {
 public:
  SamplePath(double horizon, std::vector<double> values)
      : horizon_(horizon), values_(std::move(values)) {
    if (!(horizon_ > 0.0)) throw ArgumentError("path horizon must be positive");
    if (values_.size() < 2) throw ArgumentError("path needs at least two grid points");
  }

  double horizon() const noexcept { return horizon_; }
  std::size_t n() const noexcept { return values_.size() - 1; }
  double step() const noexcept { return horizon_ / static_cast<double>(n()); }
  double time(std::size_t k) const noexcept {
    return horizon_ * static_cast<double>(k) / static_cast<double>(n());
  }

  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  /// X_{t_k} - 2 X_{t_{k-1}} + X_{t_{k-2}}, defined for k = 2..n.
  double second_difference(std::size_t k) const noexcept {
    return values_[k] - 2.0 * values_[k - 1] + values_[k - 2];
  }

  /// Restriction to every `stride`-th grid point; n must be divisible by stride.
  SamplePath restrict_to(std::size_t stride) const;

  /// Pointwise c * X.
  SamplePath scaled(double c) const;

  friend bool operator==(const SamplePath&, const SamplePath&) = default;

 private:
  double horizon_;
  std::vector<double> values_;
};

}  // namespace hurst_sde
