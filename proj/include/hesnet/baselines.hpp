// Cost-aware Greedy benchmark: spends harvested energy first (best channel
// first), then serves from the grid whenever one packet's grid cost is below
// the drop cost. Admission is sequential: a user that does not fit the
// remaining battery/power/channel budget is skipped and the scan continues.
// Power per served user is the channel inversion power; battery and grid
// sources are never mixed for one user. All arriving energy is harvested,
// clipped to the battery capacity when one is configured.
#pragma once

#include "hesnet/model.hpp"

namespace hesnet {

struct GreedyStepResult {
  Decision decision;
  SlotCost cost;
  NetworkState state;
};

GreedyStepResult greedy_step(const NetworkState& state,
                             const SlotObservation& obs,
                             const SystemParams& params,
                             double cap_b1 = kInfinity,
                             double cap_b2 = kInfinity);

}  // namespace hesnet
