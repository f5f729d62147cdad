#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "cavity/analysis.hpp"
#include "cavity/protocol.hpp"

namespace cavity {

/// Run configuration. Defaults reproduce the adiabatic example cavity
/// (m = 1/75, L0 = 37, q1 = 7, q2 = 7.04, omega = 25, n = 2).
struct SimConfig {
  double mass = 1.0 / 75.0;
  double L0 = 37.0;
  double q1 = 7.0;
  double q2 = 7.04;
  double omega = 25.0;
  int n = 2;

  int k_max = 16;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int t_samples = 401;
  double truncation_tol = 1e-4;  // accepted max_t |a_kmax|

  std::optional<double> window_min;  // default 0
  std::optional<double> window_max;  // default L0 / 10
  int window_points = 256;
  std::optional<double> reference_x;  // default L0 / (2n)
  int converge_k_min = 2;
  int converge_k_max = 40;

  double epsilon = 0.37;
  std::uint64_t ensemble_size = 1000000000000ULL;
  std::uint64_t seed = 20180501;
  std::optional<double> delta_mu;  // default: read from the case-III evolution
  int message = 1;
  unsigned shards = 4;
  double sigma = 3.0;

  /// Checks ranges and builds every derived object once; throws ConfigError.
  void validate() const;

  WallMotion motion_potential() const { return {L0, q1, omega}; }
  WallMotion motion_boundary() const { return {L0, q2, omega}; }
  PhysicalConstants constants() const { return PhysicalConstants(mass); }
  CoupledSystemConfig coupled() const;
  Window window() const;
  ProtocolConfig protocol(double delta_mu_value) const;

  nlohmann::json to_json() const;
};

/// Parses a flat JSON object of scalars; unknown keys, wrong types and
/// non-finite numbers are ConfigError.
SimConfig parse_config(const nlohmann::json& doc);
SimConfig parse_config_text(const std::string& text);
SimConfig load_config(const std::filesystem::path& path);

}  // namespace cavity
