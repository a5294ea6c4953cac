// Independent brute-force solver for the per-slot problem, used to certify
// the inner-outer solver on small instances. It enumerates all 3^K assignment
// vectors and derives the optimal power totals from scratch: for each battery
// the objective is linear in the output total over {0} U [eps, p_max], so the
// optimum sits at an interval vertex. Shares only the model module with the
// production solver.
#pragma once

#include "hesnet/model.hpp"
#include "hesnet/per_slot_solver.hpp"

namespace hesnet {

constexpr int kOracleMaxUsers = 6;
constexpr int kOracleGridPoints = 2000;

struct OracleResult {
  Decision decision;
  double objective = 0.0;  // same +V*phi~_D-per-drop convention as the solver
};

// Vertex-scan layer: exact minimum over all feasible assignments and power
// splits. Throws std::invalid_argument when K > kOracleMaxUsers. The returned
// decision is feasibility-checked before being handed back.
OracleResult brute_force_slot(const SlotProblem& prob);

// Second-layer self-check: same assignment enumeration, but the HES-BS
// battery/grid split is scanned on a kOracleGridPoints grid over the battery
// output total ({0} plus an even grid of [eps_h2, p_max_b2]) instead of the
// vertex set. Its minimum exceeds the vertex-scan minimum by at most
// (|vq2| + V*phi~_G) * tau * (p_max_b2 - eps_h2) / (kOracleGridPoints - 2).
double brute_force_grid_min(const SlotProblem& prob);

}  // namespace hesnet
