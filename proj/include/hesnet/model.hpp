// Core domain types and unit conventions for the two-BS hybrid-energy-supply
// network simulator. All quantities are SI (W, J, s, Hz, bits); costs are
// dimensionless "cost" units.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace hesnet {

// Floating-point feasibility checks use relative tolerance with an absolute
// floor: quantities span ~1e-13 W (noise power) to ~1e0 W (peak power), so a
// pure relative test misbehaves near zero.
constexpr double kRelTol = 1e-9;
constexpr double kAbsTol = 1e-15;

inline double cmp_tol(double a, double b) {
  double scale = std::abs(a) > std::abs(b) ? std::abs(a) : std::abs(b);
  double rel = kRelTol * scale;
  return rel > kAbsTol ? rel : kAbsTol;
}

// a <= b up to tolerance; infinities compare exactly
inline bool feasible_le(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return a <= b;
  return a <= b + cmp_tol(a, b);
}

inline bool approx_eq(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
  return std::abs(a - b) <= cmp_tol(a, b);
}

inline bool essentially_zero(double x) { return std::abs(x) <= kAbsTol; }

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Static network description. Defaults give the 4-user desk-scale scenario
// used throughout the experiments: 1 ms slots, 2 kbit packets, 1 MHz channels,
// -130 dBm noise, exponential gains with mean g0*d^-4 (g0 = -40 dB, d = 50 m),
// and 30 mW average harvesting power per BS (eh_max = 2 * 0.030 * slot_len).
struct SystemParams {
  int num_users = 4;                  // K
  double slot_len = 1e-3;             // tau [s]
  double packet_bits = 2000.0;        // R
  double bandwidth = 1e6;             // w [Hz], per channel
  double noise_power = 1e-13;         // sigma [W]
  double p_max_b1 = 1.0;              // peak transmit power, EH-BS [W]
  double p_max_b2 = 1.0;              // peak transmit power, HES-BS [W]
  int n_channels_b1 = 1;              // N_B1
  int n_channels_b2 = 4;              // N_B2
  double grid_cost_per_joule = 1.0;   // phi_G
  double drop_cost_per_packet = 1.0;  // phi_D
  double weight_grid = 5.0;           // w_G
  double weight_drop = 0.01;          // w_D
  double eh_max_b1 = 6e-5;            // E_H1^max [J] per slot
  double eh_max_b2 = 6e-5;            // E_H2^max [J] per slot
  double mean_channel_gain_b1 = 1.6e-11;
  double mean_channel_gain_b2 = 1.6e-11;

  double grid_cost() const { return weight_grid * grid_cost_per_joule; }   // phi~_G
  double drop_cost() const { return weight_drop * drop_cost_per_packet; }  // phi~_D

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// LBAPC tuning triplet <eps_h1, eps_h2, V> plus the derived perturbation
// parameters. theta values are produced by controller::compute_theta; their
// lower-bound compliance is checked when an LbapcState is built.
struct ControlParams {
  double eps_h1 = 0.04;  // battery-output lower bound, EH-BS [W]
  double eps_h2 = 0.04;  // battery-output lower bound, HES-BS [W]
  double v_param = 1e-4; // V [J^2 / cost]
  double theta1 = 0.0;   // perturbation level, EH-BS [J]
  double theta2 = 0.0;   // perturbation level, HES-BS [J]

  void validate(const SystemParams& params) const;
};

// Per-slot random inputs.
struct SlotObservation {
  std::vector<double> gains_b1;  // h_B1,k, length K
  std::vector<double> gains_b2;  // h_B2,k, length K
  double harvestable_b1 = 0.0;   // E_1^t [J]
  double harvestable_b2 = 0.0;   // E_2^t [J]

  void validate(const SystemParams& params) const;
};

enum class Assign : std::uint8_t { EhBs, HesBs, Dropped };

// Per-slot outputs: assignment indicators, power split and harvested amounts.
struct Decision {
  std::vector<Assign> assign;
  std::vector<double> p_h1;  // battery power, EH-BS [W]
  std::vector<double> p_h2;  // battery power, HES-BS [W]
  std::vector<double> p_g;   // grid power, HES-BS [W]
  double e1 = 0.0;           // harvested this slot, EH-BS [J]
  double e2 = 0.0;           // harvested this slot, HES-BS [J]

  static Decision all_dropped(int num_users);

  double total_p_h1() const;
  double total_p_h2() const;
  double total_p_g() const;
  int num_dropped() const;
};

struct NetworkState {
  double battery_b1 = 0.0;      // B_1^t [J]
  double battery_b2 = 0.0;      // B_2^t [J]
  std::int64_t slot_index = 0;  // t
};

struct SlotCost {
  double grid_energy = 0.0;  // [J] drawn from the grid this slot
  int drops = 0;             // packets dropped this slot
  double nsc = 0.0;          // phi~_G * grid_energy + phi~_D * drops
};

// Shannon-Hartley throughput over one slot: w * tau * log2(1 + h*p/sigma).
double throughput(double gain, double power, const SystemParams& params);

// Minimum power that makes the slot throughput exactly the packet size:
// rho = (2^(R/(w*tau)) - 1) * sigma / h. Returns +infinity for h = 0 so that
// selection logic can exclude unservable users without special-casing.
double channel_inversion_power(double gain, const SystemParams& params);

// SNR needed to deliver R bits in one slot: 2^(R/(w*tau)) - 1.
double required_snr(const SystemParams& params);

SlotCost slot_cost(const Decision& d, const SystemParams& params);

// Per-slot drift-plus-penalty value of a BS-assignment/power decision,
// excluding the harvest term:
//   -sum_j vq_j * sum_k p_hj,k * tau + V * (phi~_G * grid_energy + phi~_D * drops)
// The drop term is charged as +V*phi~_D per dropped user; this is the single
// bookkeeping convention used by both the per-slot solver and the oracle.
double bapc_objective(const Decision& d, double vq1, double vq2,
                      double v_param, const SystemParams& params);

// Membership in Omega = {0} U [eps, p_max], up to tolerance.
bool in_omega(double total, double eps, double p_max);

// Structural feasibility of a decision against an observation: one assignment
// per user, power only where served, per-BS channel counts, per-BS peak power
// sums, per-served-user throughput >= R, harvest bounds. Throws
// std::logic_error describing the first violation.
void check_decision(const Decision& d, const SlotObservation& obs,
                    const SystemParams& params);

// Battery-output totals in Omega_1/Omega_2 (the tightened-problem constraint;
// applies to solver-produced decisions, not to the greedy baseline).
void check_omega_sums(const Decision& d, const ControlParams& ctrl,
                      const SystemParams& params);

}  // namespace hesnet
