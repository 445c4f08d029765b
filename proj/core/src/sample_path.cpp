#include <hurst_sde/sample_path.hpp>

namespace hurst_sde {

SamplePath SamplePath::restrict_to(std::size_t stride) const {
  if (stride == 0 || n() % stride != 0) {
    throw ArgumentError("stride must divide the number of grid intervals");
  }
  std::vector<double> out;
  out.reserve(n() / stride + 1);
  for (std::size_t k = 0; k <= n(); k += stride) out.push_back(values_[k]);
  return SamplePath(horizon_, std::move(out));
}

SamplePath SamplePath::scaled(double c) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= c;
  return SamplePath(horizon_, std::move(out));
}

}  // namespace hurst_sde
