#include <hurst_sde/errors.hpp>
#include <hurst_sde/functions.hpp>

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

namespace hurst_sde {

namespace {

std::vector<double> parse_parameters(std::string_view text, std::string_view spec) {
  std::vector<double> params;
  if (text.empty()) return params;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view token =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      throw ArgumentError("bad numeric parameter '" + std::string(token) + "' in function spec '" +
                          std::string(spec) + "'");
    }
    params.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return params;
}

void expect_count(const std::vector<double>& params, std::size_t count, std::string_view spec) {
  if (params.size() != count) {
    throw ArgumentError("function spec '" + std::string(spec) + "' expects " +
                        std::to_string(count) + " parameter(s)");
  }
}

std::string shortest(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

}  // namespace

ScalarFunction ScalarFunction::parse(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  const std::vector<double> p = parse_parameters(rest, spec);
  const std::string canonical(spec);

  if (name == "zero") {
    expect_count(p, 0, spec);
    return {[](double) { return 0.0; }, canonical};
  }
  if (name == "const") {
    expect_count(p, 1, spec);
    return {[c = p[0]](double) { return c; }, canonical};
  }
  if (name == "linear") {
    expect_count(p, 1, spec);
    return {[a = p[0]](double x) { return a * x; }, canonical};
  }
  if (name == "affine") {
    expect_count(p, 2, spec);
    return {[a = p[0], b = p[1]](double x) { return a + b * x; }, canonical};
  }
  if (name == "logistic") {
    expect_count(p, 1, spec);
    return {[l = p[0]](double x) { return l * x - x * x; }, canonical};
  }
  if (name == "sine") {
    expect_count(p, 2, spec);
    return {[a = p[0], b = p[1]](double x) { return a + b * std::sin(x); }, canonical};
  }
  throw ArgumentError("unknown function spec '" + canonical +
                      "' (expected zero, const, linear, affine, logistic or sine)");
}

ScalarFunction ScalarFunction::constant(double c) {
  return {[c](double) { return c; }, "const:" + shortest(c)};
}

ScalarFunction ScalarFunction::linear(double a) {
  return {[a](double x) { return a * x; }, "linear:" + shortest(a)};
}

ScalarFunction ScalarFunction::logistic(double lambda) {
  return {[lambda](double x) { return lambda * x - x * x; }, "logistic:" + shortest(lambda)};
}

}  // namespace hurst_sde
