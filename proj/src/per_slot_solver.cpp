#include "hesnet/per_slot_solver.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <numeric>

namespace hesnet {

SlotProblem make_slot_problem(SlotObservation obs, double vq1, double vq2,
                              const SystemParams& params,
                              const ControlParams& ctrl) {
  params.validate();
  ctrl.validate(params);
  obs.validate(params);
  SlotProblem prob;
  prob.vq1 = vq1;
  prob.vq2 = vq2;
  prob.params = params;
  prob.ctrl = ctrl;
  prob.rho_b1.reserve(obs.gains_b1.size());
  prob.rho_b2.reserve(obs.gains_b2.size());
  for (double g : obs.gains_b1)
    prob.rho_b1.push_back(channel_inversion_power(g, params));
  for (double g : obs.gains_b2)
    prob.rho_b2.push_back(channel_inversion_power(g, params));
  prob.obs = std::move(obs);
  return prob;
}

std::pair<double, double> optimal_harvest(double vq1, double vq2,
                                          const SlotObservation& obs) {
  return {vq1 <= 0.0 ? obs.harvestable_b1 : 0.0,
          vq2 <= 0.0 ? obs.harvestable_b2 : 0.0};
}

void battery_grid_split(double rho_sum, double vq2,
                        const std::vector<double>& rho_b2,
                        const std::vector<int>& served,
                        const ControlParams& ctrl, const SystemParams& params,
                        std::vector<double>& p_h2, std::vector<double>& p_g) {
  assert(vq2 < 0.0 && -vq2 <= ctrl.v_param * params.grid_cost());
  assert(!served.empty());
  assert(feasible_le(rho_sum, params.p_max_b2));

  const double grid_threshold =
      -vq2 * ctrl.eps_h2 / (ctrl.v_param * params.grid_cost());
  if (rho_sum <= grid_threshold) {
    for (int k : served) p_g[static_cast<std::size_t>(k)] =
        rho_b2[static_cast<std::size_t>(k)];
  } else if (rho_sum <= ctrl.eps_h2) {
    for (int k : served) p_h2[static_cast<std::size_t>(k)] =
        rho_b2[static_cast<std::size_t>(k)] / rho_sum * ctrl.eps_h2;
  } else {
    for (int k : served) p_h2[static_cast<std::size_t>(k)] =
        rho_b2[static_cast<std::size_t>(k)];
  }
}

namespace {

// Complement of h_mask ordered by ascending (rho_b2, user index), with the
// feasible prefix sums precomputed. prefix[i] = sum of the i smallest rhos.
struct SortedComplement {
  std::vector<int> order;
  std::vector<double> prefix;  // prefix[0] = 0
};

SortedComplement sort_complement(const SlotProblem& prob,
                                 std::uint32_t h_mask) {
  SortedComplement sc;
  const int k = prob.params.num_users;
  for (int u = 0; u < k; ++u)
    if (!(h_mask >> u & 1u)) sc.order.push_back(u);
  std::sort(sc.order.begin(), sc.order.end(), [&](int a, int b) {
    const double ra = prob.rho_b2[static_cast<std::size_t>(a)];
    const double rb = prob.rho_b2[static_cast<std::size_t>(b)];
    if (ra != rb) return ra < rb;
    return a < b;
  });
  sc.prefix.resize(sc.order.size() + 1, 0.0);
  for (std::size_t i = 0; i < sc.order.size(); ++i)
    sc.prefix[i + 1] =
        sc.prefix[i] + prob.rho_b2[static_cast<std::size_t>(sc.order[i])];
  return sc;
}

double inner_objective(const InnerSolution& sol, const SlotProblem& prob) {
  const double tau = prob.params.slot_len;
  const double v = prob.ctrl.v_param;
  double obj = 0.0;
  for (int k : sol.served) {
    const auto i = static_cast<std::size_t>(k);
    obj += (-prob.vq2 * sol.p_h2[i] +
            v * prob.params.grid_cost() * sol.p_g[i]) * tau;
  }
  obj -= v * prob.params.drop_cost() * static_cast<double>(sol.served.size());
  return obj;
}

}  // namespace

InnerSolution solve_inner(const SlotProblem& prob, std::uint32_t h_mask) {
  const int k = prob.params.num_users;
  InnerSolution sol;
  sol.p_h2.assign(static_cast<std::size_t>(k), 0.0);
  sol.p_g.assign(static_cast<std::size_t>(k), 0.0);

  const SortedComplement sc = sort_complement(prob, h_mask);
  if (sc.order.empty()) return sol;

  const double p_max = prob.params.p_max_b2;
  const double tau = prob.params.slot_len;
  const double v = prob.ctrl.v_param;
  const double phi_g = prob.params.grid_cost();
  const double phi_d = prob.params.drop_cost();
  const std::size_t n_tilde =
      std::min<std::size_t>(static_cast<std::size_t>(prob.params.n_channels_b2),
                            sc.order.size());

  if (prob.vq2 >= 0.0) {
    // case 2: dump full peak power from the battery over the largest
    // feasible prefix
    std::size_t m = 0;
    while (m < n_tilde && feasible_le(sc.prefix[m + 1], p_max)) ++m;
    if (m == 0) return sol;
    const double rho_sum = sc.prefix[m];
    for (std::size_t i = 0; i < m; ++i) {
      const auto u = static_cast<std::size_t>(sc.order[i]);
      sol.p_h2[u] = prob.rho_b2[u] / rho_sum * p_max;
      sol.served.push_back(sc.order[i]);
    }
    sol.objective = inner_objective(sol, prob);
    return sol;
  }

  if (-prob.vq2 > v * phi_g) {
    // case 1: grid power only; admit users while serving one beats dropping it
    std::size_t m = 0;
    while (m < n_tilde && feasible_le(sc.prefix[m + 1], p_max) &&
           phi_g * prob.rho_b2[static_cast<std::size_t>(sc.order[m])] * tau <=
               phi_d)
      ++m;
    for (std::size_t i = 0; i < m; ++i) {
      const auto u = static_cast<std::size_t>(sc.order[i]);
      sol.p_g[u] = prob.rho_b2[u];
      sol.served.push_back(sc.order[i]);
    }
    sol.objective = inner_objective(sol, prob);
    return sol;
  }

  // case 3: scan candidate served counts, power split per the interval rule
  InnerSolution best = sol;  // i = 0: serve nobody, objective 0
  for (std::size_t i = 1; i <= n_tilde; ++i) {
    if (!feasible_le(sc.prefix[i], p_max)) break;
    InnerSolution cand;
    cand.p_h2.assign(static_cast<std::size_t>(k), 0.0);
    cand.p_g.assign(static_cast<std::size_t>(k), 0.0);
    cand.served.assign(sc.order.begin(),
                       sc.order.begin() + static_cast<std::ptrdiff_t>(i));
    battery_grid_split(sc.prefix[i], prob.vq2, prob.rho_b2, cand.served,
                       prob.ctrl, prob.params, cand.p_h2, cand.p_g);
    cand.objective = inner_objective(cand, prob);
    if (cand.objective < best.objective) best = std::move(cand);
  }
  return best;
}

std::vector<double> eh_bs_power(const std::vector<int>& h, double vq1,
                                const std::vector<double>& rho_b1,
                                const ControlParams& ctrl,
                                const SystemParams& params) {
  std::vector<double> p(rho_b1.size(), 0.0);
  if (h.empty()) return p;
  assert(static_cast<int>(h.size()) <= params.n_channels_b1);
  double rho_sum = 0.0;
  for (int k : h) rho_sum += rho_b1[static_cast<std::size_t>(k)];
  assert(feasible_le(rho_sum, params.p_max_b1));

  if (vq1 >= 0.0) {
    for (int k : h) {
      const auto i = static_cast<std::size_t>(k);
      p[i] = rho_b1[i] / rho_sum * params.p_max_b1;
    }
  } else {
    const double denom = std::min(rho_sum, ctrl.eps_h1);
    for (int k : h) {
      const auto i = static_cast<std::size_t>(k);
      p[i] = rho_b1[i] / denom * ctrl.eps_h1;
    }
  }
  return p;
}

OuterResult solve_outer(const SlotProblem& prob) {
  const int k = prob.params.num_users;
  assert(k >= 1 && k <= 30);
  const double tau = prob.params.slot_len;
  const double v = prob.ctrl.v_param;
  const double phi_d = prob.params.drop_cost();
  const auto [e1, e2] = optimal_harvest(prob.vq1, prob.vq2, prob.obs);

  // Running best in the outer bookkeeping convention (served users credited
  // -V*phi~_D); 0 corresponds to dropping everyone.
  double best_total = 0.0;
  Decision best = Decision::all_dropped(k);
  std::uint32_t best_mask = 0;
  bool have_best_inner = false;
  InnerSolution best_inner;

  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    if (std::popcount(mask) > prob.params.n_channels_b1) continue;
    double rho_sum = 0.0;
    for (int u = 0; u < k; ++u)
      if (mask >> u & 1u) rho_sum += prob.rho_b1[static_cast<std::size_t>(u)];
    if (!feasible_le(rho_sum, prob.params.p_max_b1)) continue;

    double phi_h;  // EH-BS side contribution
    if (mask == 0) {
      phi_h = 0.0;
    } else if (prob.vq1 >= 0.0) {
      phi_h = -prob.vq1 * prob.params.p_max_b1 * tau -
              v * phi_d * std::popcount(mask);
    } else {
      phi_h = -prob.vq1 * std::max(rho_sum, prob.ctrl.eps_h1) * tau -
              v * phi_d * std::popcount(mask);
    }

    InnerSolution inner = solve_inner(prob, mask);
    const double total = phi_h + inner.objective;
    if (total < best_total) {
      best_total = total;
      best_mask = mask;
      best_inner = std::move(inner);
      have_best_inner = true;
    }
  }

  if (have_best_inner) {
    std::vector<int> h;
    for (int u = 0; u < k; ++u)
      if (best_mask >> u & 1u) h.push_back(u);
    const std::vector<double> p1 =
        eh_bs_power(h, prob.vq1, prob.rho_b1, prob.ctrl, prob.params);
    for (int u : h) {
      const auto i = static_cast<std::size_t>(u);
      best.assign[i] = Assign::EhBs;
      best.p_h1[i] = p1[i];
    }
    for (int u : best_inner.served) {
      const auto i = static_cast<std::size_t>(u);
      best.assign[i] = Assign::HesBs;
      best.p_h2[i] = best_inner.p_h2[i];
      best.p_g[i] = best_inner.p_g[i];
    }
  }
  best.e1 = e1;
  best.e2 = e2;
  return {std::move(best),
          best_total + v * phi_d * static_cast<double>(k)};
}

}  // namespace hesnet
