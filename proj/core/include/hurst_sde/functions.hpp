#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>

namespace hurst_sde {

/// A real function of one variable, optionally tagged with the builtin spec
/// it was parsed from so that it can be written back to a sidecar file.
///
/// Builtin grammar, `name[:p1[,p2]]`:
///   zero            0
///   const:c         c
///   linear:a        a*x
///   affine:a,b      a + b*x
///   logistic:l      l*x - x^2
///   sine:a,b        a + b*sin(x)
class ScalarFunction {
 public:
  ScalarFunction() = default;
  ScalarFunction(std::function<double(double)> fn, std::string spec = {})
      : fn_(std::move(fn)), spec_(std::move(spec)) {}

  /// Throws ArgumentError for unknown names or wrong parameter counts.
  static ScalarFunction parse(std::string_view spec);

  static ScalarFunction constant(double c);
  static ScalarFunction linear(double a);
  static ScalarFunction logistic(double lambda);

  double operator()(double x) const { return fn_(x); }
  explicit operator bool() const noexcept { return static_cast<bool>(fn_); }

  /// Empty for user-supplied lambdas.
  const std::string& spec() const noexcept { return spec_; }

 private:
  std::function<double(double)> fn_;
  std::string spec_;
};

}  // namespace hurst_sde
