#include <hurst_sde/io.hpp>

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hurst_sde::io {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot open " + file.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + file.string());
  return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw DataError("line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
  }
  return value;
}

json model_json(const models::ModelSpec& model) {
  if (model.kind() == models::ModelKind::verhulst) {
    const auto& p = model.verhulst_params();
    return {{"kind", "verhulst"}, {"lambda", p.lambda}, {"sigma", p.sigma}, {"xi", p.xi}};
  }
  if (model.drift().spec().empty() || model.diffusion().spec().empty()) {
    throw ArgumentError("only models built from builtin function specs can be serialized");
  }
  return {{"kind", "generic"},
          {"drift", model.drift().spec()},
          {"diffusion", model.diffusion().spec()},
          {"xi", model.initial_value()}};
}

models::ModelSpec model_from(const json& j) {
  if (!j.is_object()) throw DataError("model must be a JSON object");
  const std::string kind = j.value("kind", "");
  if (kind == "verhulst") {
    return models::ModelSpec::verhulst(j.at("lambda").get<double>(), j.at("sigma").get<double>(),
                                       j.at("xi").get<double>());
  }
  if (kind == "generic") {
    return models::ModelSpec::generic(ScalarFunction::parse(j.at("drift").get<std::string>()),
                                      ScalarFunction::parse(j.at("diffusion").get<std::string>()),
                                      j.value("xi", 0.0));
  }
  throw DataError("unknown model kind '" + kind + "' (expected verhulst or generic)");
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_path_csv(std::ostream& out, const SamplePath& path) {
  out << "t,value\n";
  for (std::size_t k = 0; k <= path.n(); ++k) {
    out << format_double(path.time(k)) << ',' << format_double(path[k]) << '\n';
  }
}

void write_path_csv(const std::filesystem::path& file, const SamplePath& path) {
  auto out = open_output(file);
  write_path_csv(out, path);
}

void write_nested_csv(std::ostream& out, const models::NestedObservations& obs) {
  out << "i,t,value\n";
  const std::span<const double> v = obs.values();
  const double m = static_cast<double>(obs.m_n());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out << i << ',' << format_double(obs.horizon() * static_cast<double>(i) / m) << ','
        << format_double(v[i]) << '\n';
  }
}

void write_nested_csv(const std::filesystem::path& file, const models::NestedObservations& obs) {
  auto out = open_output(file);
  write_nested_csv(out, obs);
}

ObservedSeries read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::size_t t_col = 0;
  std::size_t v_col = 0;
  std::size_t width = 0;
  if (line == "t,value") {
    t_col = 0, v_col = 1, width = 2;
  } else if (line == "i,t,value") {
    t_col = 1, v_col = 2, width = 3;
  } else {
    throw DataError("unrecognized CSV header '" + line + "' (expected t,value or i,t,value)");
  }

  std::vector<double> times;
  ObservedSeries series;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != width) {
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                      " fields");
    }
    times.push_back(parse_number(fields[t_col], line_no));
    series.values.push_back(parse_number(fields[v_col], line_no));
  }
  if (series.values.size() < 2) throw DataError("CSV needs at least two rows");
  if (times.front() != 0.0) throw DataError("first time point must be 0");

  series.horizon = times.back();
  if (!(series.horizon > 0.0)) throw DataError("time points must increase");
  const double n = static_cast<double>(times.size() - 1);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double expected = series.horizon * static_cast<double>(k) / n;
    if (std::abs(times[k] - expected) > 1e-9 * series.horizon) {
      throw DataError("time grid is not uniform at row " + std::to_string(k + 1));
    }
  }
  return series;
}

ObservedSeries read_series_csv(const std::filesystem::path& file) {
  auto in = open_input(file);
  return read_series_csv(in);
}

std::string model_to_json(const models::ModelSpec& model) { return model_json(model).dump(); }

models::ModelSpec model_from_json(std::string_view text) {
  try {
    return model_from(parse_json(text));
  } catch (const json::exception& e) {
    throw DataError(std::string("bad model JSON: ") + e.what());
  }
}

std::string sidecar_to_json(const Sidecar& s) {
  json j = {{"n", s.n}, {"k_n", s.k_n}, {"T", s.horizon}, {"seed", s.seed}};
  if (s.hurst) j["H"] = *s.hurst;
  j["model"] = s.model ? model_json(*s.model) : json(nullptr);
  return j.dump(2) + "\n";
}

Sidecar sidecar_from_json(std::string_view text) {
  const json j = parse_json(text);
  try {
    Sidecar s;
    s.n = j.at("n").get<std::size_t>();
    s.k_n = j.value("k_n", std::size_t{1});
    s.horizon = j.at("T").get<double>();
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("H") && !j["H"].is_null()) s.hurst = j["H"].get<double>();
    if (j.contains("model") && !j["model"].is_null()) s.model = model_from(j["model"]);
    if (s.n < 1 || s.k_n < 1) throw DataError("sidecar needs n >= 1 and k_n >= 1");
    return s;
  } catch (const json::exception& e) {
    throw DataError(std::string("bad sidecar: ") + e.what());
  }
}

Sidecar read_sidecar(const std::filesystem::path& file) { return sidecar_from_json(read_text(file)); }

std::string estimation_report_json(const estimators::EstimationResult& r) {
  json j = {{"estimator", std::string(estimators::to_string(r.estimator))},
            {"h_hat", r.h_hat},
            {"ci", {r.ci.low, r.ci.high}},
            {"level", r.level},
            {"raw_statistic", r.raw_statistic},
            {"clamped", r.clamped},
            {"n", r.n},
            {"k_n", r.k_n ? json(*r.k_n) : json(nullptr)},
            {"T", r.horizon}};
  return j.dump(2) + "\n";
}

std::string read_text(const std::filesystem::path& file) {
  auto in = open_input(file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& file, std::string_view text) {
  auto out = open_output(file);
  out << text;
}

}  // namespace hurst_sde::io
