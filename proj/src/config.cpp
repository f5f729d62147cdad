#include "cavity/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace cavity {
namespace {

using nlohmann::json;

double as_double(const std::string& key, const json& v) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("config key '" + key + "' must be finite");
  return d;
}

std::int64_t as_integer(const std::string& key, const json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15)
      return static_cast<std::int64_t>(d);
  }
  throw ConfigError("config key '" + key + "' must be an integer");
}

std::uint64_t as_unsigned(const std::string& key, const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const auto i = as_integer(key, v);
  if (i < 0) throw ConfigError("config key '" + key + "' must be non-negative");
  return static_cast<std::uint64_t>(i);
}

int as_int(const std::string& key, const json& v) {
  const auto i = as_integer(key, v);
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max())
    throw ConfigError("config key '" + key + "' is out of range");
  return static_cast<int>(i);
}

using Setter = std::function<void(SimConfig&, const std::string&, const json&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"mass", [](SimConfig& c, const std::string& k, const json& v) { c.mass = as_double(k, v); }},
      {"L0", [](SimConfig& c, const std::string& k, const json& v) { c.L0 = as_double(k, v); }},
      {"q1", [](SimConfig& c, const std::string& k, const json& v) { c.q1 = as_double(k, v); }},
      {"q2", [](SimConfig& c, const std::string& k, const json& v) { c.q2 = as_double(k, v); }},
      {"omega", [](SimConfig& c, const std::string& k, const json& v) { c.omega = as_double(k, v); }},
      {"n", [](SimConfig& c, const std::string& k, const json& v) { c.n = as_int(k, v); }},
      {"k_max", [](SimConfig& c, const std::string& k, const json& v) { c.k_max = as_int(k, v); }},
      {"rel_tol", [](SimConfig& c, const std::string& k, const json& v) { c.rel_tol = as_double(k, v); }},
      {"abs_tol", [](SimConfig& c, const std::string& k, const json& v) { c.abs_tol = as_double(k, v); }},
      {"t_samples", [](SimConfig& c, const std::string& k, const json& v) { c.t_samples = as_int(k, v); }},
      {"truncation_tol",
       [](SimConfig& c, const std::string& k, const json& v) { c.truncation_tol = as_double(k, v); }},
      {"window_min",
       [](SimConfig& c, const std::string& k, const json& v) { c.window_min = as_double(k, v); }},
      {"window_max",
       [](SimConfig& c, const std::string& k, const json& v) { c.window_max = as_double(k, v); }},
      {"window_points",
       [](SimConfig& c, const std::string& k, const json& v) { c.window_points = as_int(k, v); }},
      {"reference_x",
       [](SimConfig& c, const std::string& k, const json& v) { c.reference_x = as_double(k, v); }},
      {"converge_k_min",
       [](SimConfig& c, const std::string& k, const json& v) { c.converge_k_min = as_int(k, v); }},
      {"converge_k_max",
       [](SimConfig& c, const std::string& k, const json& v) { c.converge_k_max = as_int(k, v); }},
      {"epsilon", [](SimConfig& c, const std::string& k, const json& v) { c.epsilon = as_double(k, v); }},
      {"ensemble_size",
       [](SimConfig& c, const std::string& k, const json& v) { c.ensemble_size = as_unsigned(k, v); }},
      {"seed", [](SimConfig& c, const std::string& k, const json& v) { c.seed = as_unsigned(k, v); }},
      {"delta_mu",
       [](SimConfig& c, const std::string& k, const json& v) { c.delta_mu = as_double(k, v); }},
      {"message", [](SimConfig& c, const std::string& k, const json& v) { c.message = as_int(k, v); }},
      {"shards",
       [](SimConfig& c, const std::string& k, const json& v) {
         c.shards = static_cast<unsigned>(as_int(k, v));
       }},
      {"sigma", [](SimConfig& c, const std::string& k, const json& v) { c.sigma = as_double(k, v); }},
  };
  return table;
}

}  // namespace

CoupledSystemConfig SimConfig::coupled() const {
  CoupledSystemConfig cfg{motion_potential(), motion_boundary(), constants()};
  cfg.n_init = BasisMode(n);
  cfg.k_max = k_max;
  cfg.rel_tol = rel_tol;
  cfg.abs_tol = abs_tol;
  cfg.t_samples = t_samples;
  return cfg;
}

Window SimConfig::window() const {
  return {window_min.value_or(0.0), window_max.value_or(L0 / 10.0)};
}

ProtocolConfig SimConfig::protocol(double delta_mu_value) const {
  ProtocolConfig p;
  p.mode = BasisMode(n);
  p.epsilon = epsilon;
  p.L0 = L0;
  p.delta_mu = delta_mu_value;
  p.ensemble_size = ensemble_size;
  p.seed = seed;
  p.message = message;
  return p;
}

void SimConfig::validate() const {
  try {
    coupled().validate();
    protocol(delta_mu.value_or(0.0)).validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  const Window w = window();
  if (!(w.x_min >= 0.0 && w.x_max > w.x_min && w.x_max <= L0))
    throw ConfigError("window must satisfy 0 <= window_min < window_max <= L0");
  if (window_points < 1) throw ConfigError("window_points must be >= 1");
  if (reference_x && !(*reference_x > 0.0 && *reference_x < L0))
    throw ConfigError("reference_x must lie inside (0, L0)");
  if (converge_k_min < n || converge_k_max < converge_k_min)
    throw ConfigError("converge range must satisfy n <= converge_k_min <= converge_k_max");
  if (!(truncation_tol > 0.0)) throw ConfigError("truncation_tol must be positive");
  if (shards < 1) throw ConfigError("shards must be >= 1");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
}

nlohmann::json SimConfig::to_json() const {
  json j = {
      {"mass", mass},
      {"L0", L0},
      {"q1", q1},
      {"q2", q2},
      {"omega", omega},
      {"n", n},
      {"k_max", k_max},
      {"rel_tol", rel_tol},
      {"abs_tol", abs_tol},
      {"t_samples", t_samples},
      {"truncation_tol", truncation_tol},
      {"window_min", window().x_min},
      {"window_max", window().x_max},
      {"window_points", window_points},
      {"converge_k_min", converge_k_min},
      {"converge_k_max", converge_k_max},
      {"epsilon", epsilon},
      {"ensemble_size", ensemble_size},
      {"seed", seed},
      {"message", message},
      {"shards", shards},
      {"sigma", sigma},
  };
  if (reference_x) j["reference_x"] = *reference_x;
  if (delta_mu) j["delta_mu"] = *delta_mu;
  return j;
}

SimConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  SimConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    if (value.is_structured()) throw ConfigError("config key '" + key + "' must be a scalar");
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

SimConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace cavity
