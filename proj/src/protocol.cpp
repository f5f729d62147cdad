#include "cavity/protocol.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace cavity {
namespace {

constexpr double pi = std::numbers::pi;

struct Counts {
  std::uint64_t d1 = 0;
  std::uint64_t d2 = 0;
};

Counts draw_shard(std::uint64_t cavities, double p1, double p2, std::uint64_t seed,
                  unsigned shard) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shard)};
  std::mt19937_64 rng(seq);
  Counts c;
  if (p1 > 0.0) c.d1 = std::binomial_distribution<std::uint64_t>(cavities, p1)(rng);
  const double p2_cond = std::min(1.0, p2 / (1.0 - p1));
  if (p2_cond > 0.0 && cavities > c.d1)
    c.d2 = std::binomial_distribution<std::uint64_t>(cavities - c.d1, p2_cond)(rng);
  return c;
}

}  // namespace

void ProtocolConfig::validate() const {
  if (!(epsilon > 0.0) || !(L0 > 0.0)) throw DomainError("protocol: epsilon and L0 must be > 0");
  if (epsilon / L0 > 0.05) throw DomainError("protocol: requires epsilon / L0 <= 0.05");
  if (ensemble_size < 1) throw DomainError("protocol: ensemble_size must be >= 1");
  if (message != 0 && message != 1) throw DomainError("protocol: message must be 0 or 1");
  if (!std::isfinite(delta_mu)) throw DomainError("protocol: delta_mu must be finite");
}

DetectionProbability detection_probability(BasisMode mode, double epsilon, double L0) {
  if (!(epsilon >= 0.0) || !(L0 > 0.0))
    throw DomainError("detection_probability: epsilon >= 0 and L0 > 0 required");
  const double r = epsilon / L0;
  if (r > 0.05) throw DomainError("detection_probability: requires epsilon / L0 <= 0.05");
  const double n = mode.n();
  const double approx = 2.0 * n * n * pi * pi / 3.0 * r * r * r;
  const double exact = r - std::sin(2.0 * n * pi * r) / (2.0 * n * pi);
  return {approx, exact};
}

ClickRatio click_ratio(double delta_mu) {
  const double s = std::sin(0.5 * delta_mu);
  const double c = std::cos(0.5 * delta_mu);
  if (c * c < 1e-15) return {std::numeric_limits<double>::infinity(), true};
  return {(s * s) / (c * c), false};
}

std::string_view to_string(Message m) {
  switch (m) {
    case Message::zero:
      return "0";
    case Message::one:
      return "1";
    case Message::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

ProtocolOutcome simulate_ensemble(const ProtocolConfig& config, unsigned shards) {
  config.validate();
  if (shards == 0) throw DomainError("simulate_ensemble: shards must be >= 1");

  const double p = detection_probability(config.mode, config.epsilon, config.L0).exact;
  const double phase = config.message == 1 ? config.delta_mu : 0.0;
  const double s = std::sin(0.5 * phase);
  const double p1 = p * s * s;
  const double p2 = p - p1;

  std::vector<std::future<Counts>> parts;
  const std::uint64_t base = config.ensemble_size / shards;
  const std::uint64_t extra = config.ensemble_size % shards;
  for (unsigned i = 0; i < shards; ++i) {
    const std::uint64_t n = base + (i < extra ? 1 : 0);
    parts.push_back(std::async(shards > 1 ? std::launch::async : std::launch::deferred,
                               draw_shard, n, p1, p2, config.seed, i));
  }

  ProtocolOutcome out;
  out.seed = config.seed;
  out.shards = shards;
  for (auto& f : parts) {
    const Counts c = f.get();
    out.clicks_D1 += c.d1;
    out.clicks_D2 += c.d2;
  }
  out.undetected = config.ensemble_size - out.clicks_D1 - out.clicks_D2;

  const auto d1 = static_cast<double>(out.clicks_D1);
  const auto d2 = static_cast<double>(out.clicks_D2);
  if (out.clicks_D2 == 0)
    out.ratio = out.clicks_D1 == 0 ? std::numeric_limits<double>::quiet_NaN()
                                   : std::numeric_limits<double>::infinity();
  else
    out.ratio = d1 / d2;

  const ClickRatio expected = click_ratio(config.delta_mu);
  out.expected_ratio = expected.value;
  if (out.clicks_D2 == 0 || expected.divergent) {
    out.inferred_message = Message::inconclusive;
  } else {
    const bool zero_ok = d1 <= 3.0;
    const double mean_one = expected.value * d2;
    const bool one_ok = std::abs(d1 - mean_one) <= 3.0 * std::sqrt(std::max(mean_one, 1.0));
    if (zero_ok && !one_ok)
      out.inferred_message = Message::zero;
    else if (one_ok && !zero_ok)
      out.inferred_message = Message::one;
    else
      out.inferred_message = Message::inconclusive;
  }
  return out;
}

std::uint64_t required_ensemble_size(double delta_mu, double detection_prob, double sigma) {
  if (!(detection_prob > 0.0) || !(sigma > 0.0))
    throw DomainError("required_ensemble_size: detection probability and sigma must be > 0");
  const double s = std::sin(0.5 * delta_mu);
  const double rate = detection_prob * s * s;
  if (!(rate > 0.0))
    throw DomainError("required_ensemble_size: delta_mu = 0 makes the messages indistinguishable");
  const double n = sigma * sigma / rate;
  // strip rounding noise before taking the ceiling (e.g. 9 / (1e-5 * 0.5))
  return static_cast<std::uint64_t>(std::ceil(n * (1.0 - 1e-12)));
}

std::uint64_t required_ensemble_size(double delta_mu, BasisMode mode, double epsilon, double L0,
                                     double sigma) {
  return required_ensemble_size(delta_mu, detection_probability(mode, epsilon, L0).exact, sigma);
}

}  // namespace cavity
