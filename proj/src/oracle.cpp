#include "hesnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hesnet {

namespace {

struct AssignmentSums {
  bool feasible = false;
  std::vector<int> b1_users;
  std::vector<int> b2_users;
  double rho1_sum = 0.0;
  double rho2_sum = 0.0;
  int dropped = 0;
};

AssignmentSums decode_assignment(int code, int k, const SystemParams& params,
                                 const std::vector<double>& rho1,
                                 const std::vector<double>& rho2) {
  AssignmentSums a;
  for (int u = 0; u < k; ++u) {
    const int digit = code % 3;
    code /= 3;
    if (digit == 0) {
      ++a.dropped;
    } else if (digit == 1) {
      a.b1_users.push_back(u);
      a.rho1_sum += rho1[static_cast<std::size_t>(u)];
    } else {
      a.b2_users.push_back(u);
      a.rho2_sum += rho2[static_cast<std::size_t>(u)];
    }
  }
  a.feasible = static_cast<int>(a.b1_users.size()) <= params.n_channels_b1 &&
               static_cast<int>(a.b2_users.size()) <= params.n_channels_b2 &&
               feasible_le(a.rho1_sum, params.p_max_b1) &&
               feasible_le(a.rho2_sum, params.p_max_b2);
  return a;
}

// Optimal EH-BS battery output for the given served set: the objective term
// -vq1*S1*tau is linear in S1 over [max(rho1_sum, eps_h1), p_max_b1], so the
// best total is whichever endpoint scores lower.
double best_b1_total(const AssignmentSums& a, const SlotProblem& prob) {
  if (a.b1_users.empty()) return 0.0;
  const double lo = std::max(a.rho1_sum, prob.ctrl.eps_h1);
  const double hi = prob.params.p_max_b1;
  return (-prob.vq1 * lo <= -prob.vq1 * hi) ? lo : hi;
}

double b2_cost(double s2h, double s2g, const SlotProblem& prob) {
  return (-prob.vq2 * s2h +
          prob.ctrl.v_param * prob.params.grid_cost() * s2g) *
         prob.params.slot_len;
}

struct B2Split {
  double s2h = 0.0;
  double s2g = 0.0;
  double cost = 0.0;
};

// Minimize -vq2*S2h + V*phi~_G*S2g (times tau) subject to S2h in Omega_2,
// S2g >= 0, S2h + S2g >= rho2_sum, S2h + S2g <= p_max_b2. For fixed S2h the
// best grid top-up is max(0, rho2_sum - S2h); the remaining function of S2h
// is piecewise linear with breakpoint rho2_sum, so candidates are the domain
// endpoints plus the breakpoint.
B2Split best_b2_split(const AssignmentSums& a, const SlotProblem& prob) {
  B2Split best;
  if (a.b2_users.empty()) return best;
  const double eps = prob.ctrl.eps_h2;
  const double p_max = prob.params.p_max_b2;
  const double candidates[4] = {0.0, eps, std::max(a.rho2_sum, eps), p_max};
  bool first = true;
  for (double s2h : candidates) {
    const double s2g = std::max(0.0, a.rho2_sum - s2h);
    const double cost = b2_cost(s2h, s2g, prob);
    if (first || cost < best.cost) {
      best = {s2h, s2g, cost};
      first = false;
    }
  }
  return best;
}

Decision build_decision(const AssignmentSums& a, double s1, const B2Split& b2,
                        const SlotProblem& prob) {
  Decision d = Decision::all_dropped(prob.params.num_users);
  if (!a.b1_users.empty()) {
    for (int u : a.b1_users) {
      const auto i = static_cast<std::size_t>(u);
      d.assign[i] = Assign::EhBs;
      d.p_h1[i] = prob.rho_b1[i] / a.rho1_sum * s1;
    }
  }
  if (!a.b2_users.empty()) {
    const double scale_h = b2.s2h / a.rho2_sum;
    const double scale_g = b2.s2g / a.rho2_sum;
    for (int u : a.b2_users) {
      const auto i = static_cast<std::size_t>(u);
      d.assign[i] = Assign::HesBs;
      d.p_h2[i] = prob.rho_b2[i] * scale_h;
      d.p_g[i] = prob.rho_b2[i] * scale_g;
    }
  }
  // harvesting decouples from the assignment: min vq_j*e_j over [0, E_j]
  // sits at e_j = E_j iff vq_j <= 0
  d.e1 = prob.vq1 <= 0.0 ? prob.obs.harvestable_b1 : 0.0;
  d.e2 = prob.vq2 <= 0.0 ? prob.obs.harvestable_b2 : 0.0;
  return d;
}

void check_size(const SlotProblem& prob) {
  if (prob.params.num_users > kOracleMaxUsers)
    throw std::invalid_argument(
        "brute_force_slot: instance too large (K > 6)");
}

int pow3(int k) {
  int p = 1;
  for (int i = 0; i < k; ++i) p *= 3;
  return p;
}

}  // namespace

OracleResult brute_force_slot(const SlotProblem& prob) {
  check_size(prob);
  const int k = prob.params.num_users;
  const double tau = prob.params.slot_len;
  const double v_phi_d = prob.ctrl.v_param * prob.params.drop_cost();

  double best_obj = 0.0;
  bool have_best = false;
  AssignmentSums best_a;
  double best_s1 = 0.0;
  B2Split best_b2;

  for (int code = 0; code < pow3(k); ++code) {
    const AssignmentSums a =
        decode_assignment(code, k, prob.params, prob.rho_b1, prob.rho_b2);
    if (!a.feasible) continue;
    const double s1 = best_b1_total(a, prob);
    const B2Split b2 = best_b2_split(a, prob);
    const double obj =
        -prob.vq1 * s1 * tau + b2.cost + v_phi_d * a.dropped;
    if (!have_best || obj < best_obj) {
      best_obj = obj;
      best_a = a;
      best_s1 = s1;
      best_b2 = b2;
      have_best = true;
    }
  }

  Decision d = build_decision(best_a, best_s1, best_b2, prob);
  check_decision(d, prob.obs, prob.params);
  check_omega_sums(d, prob.ctrl, prob.params);
  return {std::move(d), best_obj};
}

double brute_force_grid_min(const SlotProblem& prob) {
  check_size(prob);
  const int k = prob.params.num_users;
  const double tau = prob.params.slot_len;
  const double v_phi_d = prob.ctrl.v_param * prob.params.drop_cost();
  const double eps = prob.ctrl.eps_h2;
  const double p_max = prob.params.p_max_b2;
  const double step = (p_max - eps) / (kOracleGridPoints - 2);

  double best_obj = 0.0;
  bool have_best = false;

  for (int code = 0; code < pow3(k); ++code) {
    const AssignmentSums a =
        decode_assignment(code, k, prob.params, prob.rho_b1, prob.rho_b2);
    if (!a.feasible) continue;
    const double s1 = best_b1_total(a, prob);
    double hes_min = 0.0;
    if (!a.b2_users.empty()) {
      bool first = true;
      for (int i = 0; i < kOracleGridPoints; ++i) {
        const double s2h = i == 0 ? 0.0 : eps + (i - 1) * step;
        const double s2g = std::max(0.0, a.rho2_sum - s2h);
        const double cost = b2_cost(s2h, s2g, prob);
        if (first || cost < hes_min) {
          hes_min = cost;
          first = false;
        }
      }
    }
    const double obj = -prob.vq1 * s1 * tau + hes_min + v_phi_d * a.dropped;
    if (!have_best || obj < best_obj) {
      best_obj = obj;
      have_best = true;
    }
  }
  return best_obj;
}

}  // namespace hesnet
