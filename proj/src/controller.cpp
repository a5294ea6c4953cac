#include "hesnet/controller.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hesnet {

ThetaPair compute_theta(const SystemParams& params, double eps_h1,
                        double eps_h2, double v_param) {
  params.validate();
  if (!(eps_h1 > 0.0) || eps_h1 > params.p_max_b1 || !(eps_h2 > 0.0) ||
      eps_h2 > params.p_max_b2)
    throw std::invalid_argument("compute_theta: eps out of (0, p_max]");
  if (!(v_param > 0.0))
    throw std::invalid_argument("compute_theta: V must be positive");

  const double tau = params.slot_len;
  const double k_phi_d = params.num_users * params.drop_cost();
  const double cross = params.num_users != 1 ? 1.0 : 0.0;
  ThetaPair t;
  t.theta1 = params.p_max_b1 * tau +
             (v_param * k_phi_d +
              cross * params.eh_max_b2 * params.p_max_b2 * tau) /
                 (eps_h1 * tau);
  t.theta2 = params.p_max_b2 * tau +
             (v_param * k_phi_d +
              cross * params.eh_max_b1 * params.p_max_b1 * tau) /
                 (eps_h2 * tau);
  return t;
}

double v_from_capacity(const SystemParams& params, double eps_h1,
                       double eps_h2, double cap_b1, double cap_b2) {
  params.validate();
  const double tau = params.slot_len;
  const double k_phi_d = params.num_users * params.drop_cost();
  const double cross = params.num_users != 1 ? 1.0 : 0.0;
  const double v1 =
      ((cap_b1 - params.eh_max_b1 - params.p_max_b1 * tau) * eps_h1 * tau -
       cross * params.eh_max_b2 * params.p_max_b2 * tau) /
      k_phi_d;
  const double v2 =
      ((cap_b2 - params.eh_max_b2 - params.p_max_b2 * tau) * eps_h2 * tau -
       cross * params.eh_max_b1 * params.p_max_b1 * tau) /
      k_phi_d;
  const double v = std::min(v1, v2);
  if (!(v > 0.0)) {
    std::ostringstream os;
    os << "v_from_capacity: capacities too small for a positive V (V_1=" << v1
       << ", V_2=" << v2 << ")";
    throw std::domain_error(os.str());
  }
  return v;
}

double drift_constant(const SystemParams& params) {
  const double tau = params.slot_len;
  return 0.5 * (params.eh_max_b1 * params.eh_max_b1 +
                params.eh_max_b2 * params.eh_max_b2) +
         0.5 * (params.p_max_b1 * tau * params.p_max_b1 * tau +
                params.p_max_b2 * tau * params.p_max_b2 * tau);
}

double nu_bound(const SystemParams& params, double eps_h1, double eps_h2,
                const std::function<double(double)>& channel_cdf_b1) {
  const double eta = required_snr(params) * params.noise_power / eps_h1;
  const double f = channel_cdf_b1(eta);
  const double miss_all =
      1.0 - std::pow(f, static_cast<double>(params.num_users));
  return miss_all * params.num_users * params.drop_cost() +
         eps_h2 * params.slot_len * params.grid_cost();
}

ControlParams make_control_params(const SystemParams& params, double eps_h1,
                                  double eps_h2, double v_param) {
  ControlParams ctrl;
  ctrl.eps_h1 = eps_h1;
  ctrl.eps_h2 = eps_h2;
  ctrl.v_param = v_param;
  const ThetaPair t = compute_theta(params, eps_h1, eps_h2, v_param);
  ctrl.theta1 = t.theta1;
  ctrl.theta2 = t.theta2;
  return ctrl;
}

LbapcState make_lbapc_state(const SystemParams& params,
                            const ControlParams& ctrl) {
  params.validate();
  ctrl.validate(params);
  const ThetaPair bound =
      compute_theta(params, ctrl.eps_h1, ctrl.eps_h2, ctrl.v_param);
  if (!feasible_le(bound.theta1, ctrl.theta1) ||
      !feasible_le(bound.theta2, ctrl.theta2))
    throw std::invalid_argument(
        "LbapcState: theta below its feasibility bound");
  LbapcState s;
  s.ctrl = ctrl;
  s.params = params;
  return s;
}

namespace {

double settle_battery(double battery, double spend_energy, double harvested,
                      const char* bs_label) {
  if (!feasible_le(spend_energy, battery)) {
    std::ostringstream os;
    os << "energy causality violated at " << bs_label << ": spend "
       << spend_energy << " J > stored " << battery << " J";
    throw CausalityViolation(os.str());
  }
  // rounding can leave -1e-25-style dust when the battery is fully drained
  return std::max(0.0, battery - spend_energy) + harvested;
}

}  // namespace

StepResult step_with(const LbapcState& state, const SlotObservation& obs,
                     const SlotSolver& solver) {
  const SystemParams& params = state.params;
  SlotProblem prob =
      make_slot_problem(obs, state.vq1(), state.vq2(), params, state.ctrl);
  Decision d = solver(prob);

  const double tau = params.slot_len;
  const double spend1 = d.total_p_h1() * tau;
  const double spend2 = d.total_p_h2() * tau;

  // low-battery shutoff: below one peak-power slot of charge, the optimal
  // per-slot solution uses no battery power at all
  if (state.net.battery_b1 < params.p_max_b1 * tau && spend1 > 0.0)
    throw CausalityViolation("EH-BS battery output despite low charge");
  if (state.net.battery_b2 < params.p_max_b2 * tau && spend2 > 0.0)
    throw CausalityViolation("HES-BS battery output despite low charge");

  StepResult res;
  res.state = state;
  res.state.net.battery_b1 =
      settle_battery(state.net.battery_b1, spend1, d.e1, "EH-BS");
  res.state.net.battery_b2 =
      settle_battery(state.net.battery_b2, spend2, d.e2, "HES-BS");
  res.state.net.slot_index = state.net.slot_index + 1;
  res.cost = slot_cost(d, params);
  res.decision = std::move(d);
  return res;
}

StepResult step(const LbapcState& state, const SlotObservation& obs) {
  return step_with(state, obs, [](const SlotProblem& prob) {
    return solve_outer(prob).decision;
  });
}

}  // namespace hesnet
