// Online Lyapunov-based controller: maintains batteries and virtual queues,
// solves the per-slot problem, and applies the battery dynamics. Also hosts
// the tuning-parameter calculators (perturbation levels, V from battery
// capacity, the drift constant and the eps-tightening penalty bound).
#pragma once

#include <functional>
#include <stdexcept>

#include "hesnet/model.hpp"
#include "hesnet/per_slot_solver.hpp"

namespace hesnet {

struct ThetaPair {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

// Minimal compliant perturbation levels:
//   theta_j = p_max_bj*tau
//           + (V*K*phi~_D + 1{K!=1} * eh_max_other * p_max_other * tau)
//             / (eps_hj * tau)
// Any larger value also keeps the controller feasible; this equality choice
// minimizes the required battery capacity for a given V.
ThetaPair compute_theta(const SystemParams& params, double eps_h1,
                        double eps_h2, double v_param);

// Largest V whose required capacity theta_j + eh_max_bj fits both batteries:
//   V_j = ((C_j - eh_max_j - p_max_j*tau) * eps_hj * tau
//          - 1{K!=1} * eh_max_other * p_max_other * tau) / (K*phi~_D)
// returning min(V_1, V_2). Throws std::domain_error when a capacity is too
// small to admit any positive V.
double v_from_capacity(const SystemParams& params, double eps_h1,
                       double eps_h2, double cap_b1, double cap_b2);

// Drift bound constant: 0.5*sum_j (eh_max_j^2 + (p_max_j*tau)^2). The
// controller's long-run cost exceeds the per-slot-relaxation optimum by at
// most nu + C/V.
double drift_constant(const SystemParams& params);

// Penalty for tightening the battery outputs away from zero:
//   nu = (1 - F^K(eta)) * K * phi~_D + eps_h2 * tau * phi~_G,
// with eta = required_snr * sigma / eps_h1 and F the EH-BS channel gain CDF.
double nu_bound(const SystemParams& params, double eps_h1, double eps_h2,
                const std::function<double(double)>& channel_cdf_b1);

// Convenience: control params with theta set to the compute_theta bounds.
ControlParams make_control_params(const SystemParams& params, double eps_h1,
                                  double eps_h2, double v_param);

class CausalityViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct LbapcState {
  NetworkState net;
  ControlParams ctrl;
  SystemParams params;

  double vq1() const { return net.battery_b1 - ctrl.theta1; }
  double vq2() const { return net.battery_b2 - ctrl.theta2; }
};

// Validates params/ctrl and that theta meets its lower bound (batteries start
// empty). Throws std::invalid_argument otherwise.
LbapcState make_lbapc_state(const SystemParams& params,
                            const ControlParams& ctrl);

struct StepResult {
  Decision decision;
  SlotCost cost;
  LbapcState state;  // state at the beginning of the next slot
};

// One slot of the online loop: build the slot problem from the virtual
// queues, solve it, verify energy causality and the low-battery shutoff
// (both hold by construction under compliant theta; a violation indicates a
// solver bug and throws CausalityViolation, also in release builds), then
// apply the battery dynamics.
StepResult step(const LbapcState& state, const SlotObservation& obs);

// Same loop with a caller-supplied per-slot solver (used to run the
// brute-force oracle as a policy on tiny instances).
using SlotSolver = std::function<Decision(const SlotProblem&)>;
StepResult step_with(const LbapcState& state, const SlotObservation& obs,
                     const SlotSolver& solver);

}  // namespace hesnet
