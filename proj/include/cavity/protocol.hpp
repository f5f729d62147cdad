#pragma once

#include <cstdint>
#include <string_view>

#include "cavity/basis.hpp"

namespace cavity {

struct ProtocolConfig {
  BasisMode mode{2};
  double epsilon = 0.37;  // detector width along x
  double L0 = 37.0;
  double delta_mu = 0.0;  // phase difference produced when message 1 is sent
  std::uint64_t ensemble_size = 1;
  std::uint64_t seed = 0;
  int message = 1;  // 0: wall follows L1 (no phase difference), 1: wall follows L2

  /// 0 < epsilon, epsilon / L0 <= 0.05, ensemble_size >= 1, message in {0, 1}.
  void validate() const;
};

struct DetectionProbability {
  double approx;  // (2 n^2 pi^2 / 3) (epsilon / L0)^3
  double exact;   // (2 / L0) * integral_0^epsilon sin^2(n pi x / L0) dx
};

DetectionProbability detection_probability(BasisMode mode, double epsilon, double L0);

struct ClickRatio {
  double value;    // tan^2(delta_mu / 2); +inf when divergent
  bool divergent;  // delta_mu is (numerically) an odd multiple of pi
};

ClickRatio click_ratio(double delta_mu);

enum class Message { zero, one, inconclusive };
std::string_view to_string(Message m);

struct ProtocolOutcome {
  std::uint64_t clicks_D1 = 0;
  std::uint64_t clicks_D2 = 0;
  std::uint64_t undetected = 0;
  double ratio = 0.0;  // D1 / D2; NaN when both are zero, +inf when only D2 is zero
  double expected_ratio = 0.0;  // tan^2(delta_mu / 2) for message 1
  Message inferred_message = Message::inconclusive;
  std::uint64_t seed = 0;
  unsigned shards = 1;
};

/// Monte Carlo realisation of the ensemble: each cavity fires D1 with
/// probability p sin^2(phase/2), D2 with p cos^2(phase/2), otherwise nothing,
/// where p is the exact detection probability and phase is delta_mu for
/// message 1, zero for message 0.
///
/// The ensemble is split into `shards` blocks, each drawn from its own
/// mt19937_64 stream seeded with (seed, shard index); totals are
/// deterministic for a fixed seed and shard count.
///
/// Inference: message 0 is consistent when D1 <= 3 (3 sigma with a one-count
/// floor); message 1 is consistent when |D1 - r D2| <= 3 sqrt(max(r D2, 1)),
/// r = tan^2(delta_mu/2). Exactly one consistent hypothesis decides the
/// message; otherwise the outcome is inconclusive.
ProtocolOutcome simulate_ensemble(const ProtocolConfig& config, unsigned shards = 1);

/// Smallest N with N p sin^2(delta_mu/2) >= sigma^2. DomainError when the
/// phase difference produces no D1 clicks.
std::uint64_t required_ensemble_size(double delta_mu, double detection_prob, double sigma);
std::uint64_t required_ensemble_size(double delta_mu, BasisMode mode, double epsilon, double L0,
                                     double sigma);

}  // namespace cavity
