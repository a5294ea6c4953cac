#include "hesnet/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hesnet {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << field << ": must be strictly positive and finite, got " << v;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

void SystemParams::validate() const {
  require(num_users >= 1, "num_users: must be >= 1");
  require_positive(slot_len, "slot_len");
  require_positive(packet_bits, "packet_bits");
  require_positive(bandwidth, "bandwidth");
  require_positive(noise_power, "noise_power");
  require_positive(p_max_b1, "p_max_b1");
  require_positive(p_max_b2, "p_max_b2");
  require(n_channels_b1 >= 1, "n_channels_b1: must be >= 1");
  require(n_channels_b2 >= 1, "n_channels_b2: must be >= 1");
  require_positive(grid_cost_per_joule, "grid_cost_per_joule");
  require_positive(drop_cost_per_packet, "drop_cost_per_packet");
  require_positive(weight_grid, "weight_grid");
  require_positive(weight_drop, "weight_drop");
  require(eh_max_b1 >= 0.0 && std::isfinite(eh_max_b1),
          "eh_max_b1: must be >= 0 and finite");
  require(eh_max_b2 >= 0.0 && std::isfinite(eh_max_b2),
          "eh_max_b2: must be >= 0 and finite");
  require_positive(mean_channel_gain_b1, "mean_channel_gain_b1");
  require_positive(mean_channel_gain_b2, "mean_channel_gain_b2");
}

void ControlParams::validate(const SystemParams& params) const {
  require(eps_h1 > 0.0 && eps_h1 <= params.p_max_b1,
          "eps_h1: must satisfy 0 < eps_h1 <= p_max_b1");
  require(eps_h2 > 0.0 && eps_h2 <= params.p_max_b2,
          "eps_h2: must satisfy 0 < eps_h2 <= p_max_b2");
  require(v_param > 0.0 && std::isfinite(v_param),
          "v_param: must satisfy 0 < V < +inf");
  require(theta1 >= 0.0 && std::isfinite(theta1), "theta1: must be >= 0");
  require(theta2 >= 0.0 && std::isfinite(theta2), "theta2: must be >= 0");
}

void SlotObservation::validate(const SystemParams& params) const {
  const auto k = static_cast<std::size_t>(params.num_users);
  require(gains_b1.size() == k && gains_b2.size() == k,
          "SlotObservation: gain vectors must have length num_users");
  for (double g : gains_b1)
    require(g >= 0.0 && std::isfinite(g), "gains_b1: must be >= 0 and finite");
  for (double g : gains_b2)
    require(g >= 0.0 && std::isfinite(g), "gains_b2: must be >= 0 and finite");
  require(harvestable_b1 >= 0.0 && feasible_le(harvestable_b1, params.eh_max_b1),
          "harvestable_b1: must lie in [0, eh_max_b1]");
  require(harvestable_b2 >= 0.0 && feasible_le(harvestable_b2, params.eh_max_b2),
          "harvestable_b2: must lie in [0, eh_max_b2]");
}

Decision Decision::all_dropped(int num_users) {
  Decision d;
  d.assign.assign(static_cast<std::size_t>(num_users), Assign::Dropped);
  d.p_h1.assign(static_cast<std::size_t>(num_users), 0.0);
  d.p_h2.assign(static_cast<std::size_t>(num_users), 0.0);
  d.p_g.assign(static_cast<std::size_t>(num_users), 0.0);
  return d;
}

double Decision::total_p_h1() const {
  double s = 0.0;
  for (double p : p_h1) s += p;
  return s;
}

double Decision::total_p_h2() const {
  double s = 0.0;
  for (double p : p_h2) s += p;
  return s;
}

double Decision::total_p_g() const {
  double s = 0.0;
  for (double p : p_g) s += p;
  return s;
}

int Decision::num_dropped() const {
  int n = 0;
  for (Assign a : assign) n += (a == Assign::Dropped) ? 1 : 0;
  return n;
}

double throughput(double gain, double power, const SystemParams& params) {
  return params.bandwidth * params.slot_len *
         std::log2(1.0 + gain * power / params.noise_power);
}

double required_snr(const SystemParams& params) {
  return std::exp2(params.packet_bits /
                   (params.bandwidth * params.slot_len)) - 1.0;
}

double channel_inversion_power(double gain, const SystemParams& params) {
  if (gain <= 0.0) return kInfinity;
  return required_snr(params) * params.noise_power / gain;
}

SlotCost slot_cost(const Decision& d, const SystemParams& params) {
  SlotCost c;
  c.grid_energy = d.total_p_g() * params.slot_len;
  c.drops = d.num_dropped();
  c.nsc = params.grid_cost() * c.grid_energy + params.drop_cost() * c.drops;
  return c;
}

double bapc_objective(const Decision& d, double vq1, double vq2,
                      double v_param, const SystemParams& params) {
  const double tau = params.slot_len;
  return -vq1 * d.total_p_h1() * tau - vq2 * d.total_p_h2() * tau +
         v_param * (params.grid_cost() * d.total_p_g() * tau +
                    params.drop_cost() * d.num_dropped());
}

bool in_omega(double total, double eps, double p_max) {
  if (std::abs(total) <= kAbsTol) return true;
  return total >= eps - cmp_tol(total, eps) && feasible_le(total, p_max);
}

namespace {

void violation(const char* what, int user = -1) {
  std::ostringstream os;
  os << "decision violates " << what;
  if (user >= 0) os << " (user " << user << ")";
  throw std::logic_error(os.str());
}

}  // namespace

void check_decision(const Decision& d, const SlotObservation& obs,
                    const SystemParams& params) {
  const int k = params.num_users;
  const auto n = static_cast<std::size_t>(k);
  if (d.assign.size() != n || d.p_h1.size() != n || d.p_h2.size() != n ||
      d.p_g.size() != n)
    violation("vector sizing");

  int count_b1 = 0, count_b2 = 0;
  for (int u = 0; u < k; ++u) {
    const auto i = static_cast<std::size_t>(u);
    if (d.p_h1[i] < 0.0 || d.p_h2[i] < 0.0 || d.p_g[i] < 0.0)
      violation("power non-negativity", u);
    switch (d.assign[i]) {
      case Assign::EhBs: {
        ++count_b1;
        if (d.p_h2[i] != 0.0 || d.p_g[i] != 0.0)
          violation("power only where served", u);
        if (!feasible_le(params.packet_bits,
                         throughput(obs.gains_b1[i], d.p_h1[i], params)))
          violation("throughput >= packet size", u);
        if (!feasible_le(d.p_h1[i], params.p_max_b1))
          violation("per-user peak power", u);
        break;
      }
      case Assign::HesBs: {
        ++count_b2;
        if (d.p_h1[i] != 0.0) violation("power only where served", u);
        const double p = d.p_h2[i] + d.p_g[i];
        if (!feasible_le(params.packet_bits,
                         throughput(obs.gains_b2[i], p, params)))
          violation("throughput >= packet size", u);
        if (!feasible_le(p, params.p_max_b2))
          violation("per-user peak power", u);
        break;
      }
      case Assign::Dropped: {
        if (d.p_h1[i] != 0.0 || d.p_h2[i] != 0.0 || d.p_g[i] != 0.0)
          violation("power only where served", u);
        break;
      }
    }
  }
  if (count_b1 > params.n_channels_b1) violation("EH-BS channel count");
  if (count_b2 > params.n_channels_b2) violation("HES-BS channel count");
  if (!feasible_le(d.total_p_h1(), params.p_max_b1))
    violation("EH-BS peak power sum");
  if (!feasible_le(d.total_p_h2() + d.total_p_g(), params.p_max_b2))
    violation("HES-BS peak power sum");
  if (d.e1 < 0.0 || !feasible_le(d.e1, obs.harvestable_b1))
    violation("harvest bound, EH-BS");
  if (d.e2 < 0.0 || !feasible_le(d.e2, obs.harvestable_b2))
    violation("harvest bound, HES-BS");
}

void check_omega_sums(const Decision& d, const ControlParams& ctrl,
                      const SystemParams& params) {
  if (!in_omega(d.total_p_h1(), ctrl.eps_h1, params.p_max_b1))
    violation("Omega_1 membership of battery output");
  if (!in_omega(d.total_p_h2(), ctrl.eps_h2, params.p_max_b2))
    violation("Omega_2 membership of battery output");
}

}  // namespace hesnet
