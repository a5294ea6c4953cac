#include "hesnet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace hesnet {

namespace {

// user indices by descending gain, ties by ascending index
std::vector<int> by_descending_gain(const std::vector<double>& gains) {
  std::vector<int> order(gains.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ga = gains[static_cast<std::size_t>(a)];
    const double gb = gains[static_cast<std::size_t>(b)];
    if (ga != gb) return ga > gb;
    return a < b;
  });
  return order;
}

}  // namespace

GreedyStepResult greedy_step(const NetworkState& state,
                             const SlotObservation& obs,
                             const SystemParams& params, double cap_b1,
                             double cap_b2) {
  params.validate();
  obs.validate(params);
  const double tau = params.slot_len;
  const int k = params.num_users;
  Decision d = Decision::all_dropped(k);

  // pass 1: EH-BS battery, best h_B1 first
  double b1_left = state.battery_b1;
  double power1_left = params.p_max_b1;
  int ch1_left = params.n_channels_b1;
  for (int u : by_descending_gain(obs.gains_b1)) {
    if (ch1_left == 0) break;
    const auto i = static_cast<std::size_t>(u);
    const double rho = channel_inversion_power(obs.gains_b1[i], params);
    if (!std::isfinite(rho)) continue;
    if (!feasible_le(rho, power1_left) || !feasible_le(rho * tau, b1_left))
      continue;
    d.assign[i] = Assign::EhBs;
    d.p_h1[i] = rho;
    b1_left -= rho * tau;
    power1_left -= rho;
    --ch1_left;
  }

  // pass 2: HES-BS battery; pass 3: HES-BS grid when serving beats dropping
  double b2_left = state.battery_b2;
  double power2_left = params.p_max_b2;
  int ch2_left = params.n_channels_b2;
  const std::vector<int> order2 = by_descending_gain(obs.gains_b2);
  for (int u : order2) {
    if (ch2_left == 0) break;
    const auto i = static_cast<std::size_t>(u);
    if (d.assign[i] != Assign::Dropped) continue;
    const double rho = channel_inversion_power(obs.gains_b2[i], params);
    if (!std::isfinite(rho)) continue;
    if (!feasible_le(rho, power2_left) || !feasible_le(rho * tau, b2_left))
      continue;
    d.assign[i] = Assign::HesBs;
    d.p_h2[i] = rho;
    b2_left -= rho * tau;
    power2_left -= rho;
    --ch2_left;
  }
  for (int u : order2) {
    if (ch2_left == 0) break;
    const auto i = static_cast<std::size_t>(u);
    if (d.assign[i] != Assign::Dropped) continue;
    const double rho = channel_inversion_power(obs.gains_b2[i], params);
    if (!std::isfinite(rho)) continue;
    if (!feasible_le(rho, power2_left)) continue;
    if (!(params.grid_cost() * rho * tau < params.drop_cost())) continue;
    d.assign[i] = Assign::HesBs;
    d.p_g[i] = rho;
    power2_left -= rho;
    --ch2_left;
  }

  // harvest everything; there is no queue logic to hold back for
  d.e1 = obs.harvestable_b1;
  d.e2 = obs.harvestable_b2;

  GreedyStepResult res;
  res.state.battery_b1 = std::min(
      std::max(0.0, state.battery_b1 - d.total_p_h1() * tau) + d.e1, cap_b1);
  res.state.battery_b2 = std::min(
      std::max(0.0, state.battery_b2 - d.total_p_h2() * tau) + d.e2, cap_b2);
  res.state.slot_index = state.slot_index + 1;
  res.cost = slot_cost(d, params);
  res.decision = std::move(d);
  return res;
}

}  // namespace hesnet
