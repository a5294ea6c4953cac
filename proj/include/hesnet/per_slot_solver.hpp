// Exact solver for the deterministic per-slot problem of the online
// controller: a closed-form harvesting rule plus an inner-outer optimization
// for the BS-assignment-and-power-control part.
//
// The outer layer enumerates candidate EH-BS user sets; for each set the
// HES-BS side decomposes into three regimes of the virtual queue vq2:
//   case 1 (-vq2 >  V*phi~_G): battery energy is worth more than grid cost;
//           serve with grid power only, users admitted while the per-user
//           grid cost stays below the drop cost.
//   case 2 (vq2 >= 0): dump the full peak power from the battery, split
//           proportionally to channel inversion powers, serving as many
//           users as fit.
//   case 3 (0 < -vq2 <= V*phi~_G): power comes entirely from the battery or
//           entirely from the grid depending on the total inversion power
//           (three-interval rule in battery_grid_split); the served count is
//           chosen by direct minimization.
// In all cases the users served by the HES-BS are the feasible prefix of the
// complement ordered by ascending channel inversion power (ties by index).
#pragma once

#include <utility>
#include <vector>

#include "hesnet/model.hpp"

namespace hesnet {

struct SlotProblem {
  SlotObservation obs;
  double vq1 = 0.0;  // B~_1 = B_1 - theta_1 [J]
  double vq2 = 0.0;  // B~_2 = B_2 - theta_2 [J]
  SystemParams params;
  ControlParams ctrl;
  std::vector<double> rho_b1;  // channel inversion powers, EH-BS [W]
  std::vector<double> rho_b2;  // channel inversion powers, HES-BS [W]
};

SlotProblem make_slot_problem(SlotObservation obs, double vq1, double vq2,
                              const SystemParams& params,
                              const ControlParams& ctrl);

struct InnerSolution {
  std::vector<int> served;   // users served by the HES-BS, ascending rho order
  std::vector<double> p_h2;  // length K
  std::vector<double> p_g;   // length K
  // Inner objective: sum over served of (-vq2*p_h2 + V*phi~_G*p_g)*tau
  // minus V*phi~_D per served user (drop charges appear at the outer level).
  double objective = 0.0;
};

// Closed-form harvesting rule: harvest everything iff the virtual queue is
// non-positive (battery at or below its perturbation level).
std::pair<double, double> optimal_harvest(double vq1, double vq2,
                                          const SlotObservation& obs);

// Battery/grid split for case 3, given the set of served users and their
// total inversion power rho_sum. Three intervals of rho_sum:
//   [0, -vq2*eps_h2/(V*phi~_G)]      -> all grid at channel inversion
//   (that, eps_h2]                   -> all battery, scaled up to eps_h2 total
//   (eps_h2, p_max_b2]               -> all battery at channel inversion
// Boundary equality goes to the closed (left-hand) side. Precondition
// violations are caller bugs (asserted).
void battery_grid_split(double rho_sum, double vq2,
                        const std::vector<double>& rho_b2,
                        const std::vector<int>& served,
                        const ControlParams& ctrl, const SystemParams& params,
                        std::vector<double>& p_h2, std::vector<double>& p_g);

// Optimal HES-BS side for a given EH-BS set (passed as a bitmask over users).
InnerSolution solve_inner(const SlotProblem& prob, std::uint32_t h_mask);

// Optimal EH-BS transmit powers for user set h (must be feasible: |h| within
// the channel budget and total inversion power within peak power). With
// vq1 >= 0 the full peak power is dumped proportionally; with vq1 < 0 users
// get channel inversion power, scaled up so the total reaches eps_h1 when it
// would fall short.
std::vector<double> eh_bs_power(const std::vector<int>& h, double vq1,
                                const std::vector<double>& rho_b1,
                                const ControlParams& ctrl,
                                const SystemParams& params);

struct OuterResult {
  Decision decision;
  // Full per-slot assignment/power objective of `decision` in the
  // +V*phi~_D-per-drop convention; agrees with bapc_objective(decision)
  // up to floating-point rounding.
  double objective = 0.0;
};

// Enumerates EH-BS sets in ascending bitmask order and returns the decision
// minimizing the per-slot objective; ties keep the lowest bitmask. Harvest
// amounts e1/e2 are filled from optimal_harvest.
OuterResult solve_outer(const SlotProblem& prob);

}  // namespace hesnet
