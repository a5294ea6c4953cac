#include "hesnet/stochastic.hpp"

#include <cmath>
#include <stdexcept>

namespace hesnet {

void ScenarioConfig::validate() const {
  if (!(channel_mean_b1 > 0.0) || !(channel_mean_b2 > 0.0))
    throw std::invalid_argument("channel_mean: must be strictly positive");
  if (eh_max_b1 < 0.0 || eh_max_b2 < 0.0)
    throw std::invalid_argument("eh_max: must be >= 0");
  if (num_slots < 1)
    throw std::invalid_argument("num_slots: must be >= 1");
}

double eh_power_to_max(double avg_power, double slot_len) {
  if (avg_power < 0.0)
    throw std::invalid_argument("eh_power_to_max: avg_power must be >= 0");
  return 2.0 * avg_power * slot_len;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 output for state base + (index+1)*gamma
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double exponential_draw(std::mt19937_64& rng, double mean) {
  return -mean * std::log1p(-uniform01(rng));
}

ScenarioGenerator::ScenarioGenerator(const ScenarioConfig& cfg, int num_users)
    : rng_(cfg.seed),
      num_users_(num_users),
      mean_b1_(cfg.channel_mean_b1),
      mean_b2_(cfg.channel_mean_b2),
      eh_max_b1_(cfg.eh_max_b1),
      eh_max_b2_(cfg.eh_max_b2) {
  cfg.validate();
  if (num_users < 1)
    throw std::invalid_argument("ScenarioGenerator: num_users must be >= 1");
}

SlotObservation ScenarioGenerator::next() {
  SlotObservation obs;
  obs.gains_b1.reserve(static_cast<std::size_t>(num_users_));
  obs.gains_b2.reserve(static_cast<std::size_t>(num_users_));
  for (int k = 0; k < num_users_; ++k)
    obs.gains_b1.push_back(exponential_draw(rng_, mean_b1_));
  for (int k = 0; k < num_users_; ++k)
    obs.gains_b2.push_back(exponential_draw(rng_, mean_b2_));
  obs.harvestable_b1 = uniform01(rng_) * eh_max_b1_;
  obs.harvestable_b2 = uniform01(rng_) * eh_max_b2_;
  return obs;
}

}  // namespace hesnet
