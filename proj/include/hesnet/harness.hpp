// Experiment runner: seeded runs of one policy, parameter sweeps, and
// machine-readable CSV outputs. Config files are INI-style key-value files
// with [system], [control], [scenario] and [run] sections; every key defaults
// to the 4-user baseline scenario and can be overridden individually (see
// docs/config_schema.md).
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hesnet/model.hpp"
#include "hesnet/stochastic.hpp"

namespace hesnet {

enum class Policy { Lbapc, Greedy, Oracle };

std::string policy_name(Policy p);
Policy parse_policy(const std::string& name);

struct RunConfig {
  SystemParams system;

  // [control]
  double eps_h1 = 0.04;
  double eps_h2 = 0.04;
  double v_param = 1e-4;
  // When set, V is derived from the battery capacities (cap_b1/cap_b2) at
  // run time instead of taken from v_param.
  bool v_from_capacity = false;
  // theta overrides must sit at or above the feasibility bound; unset means
  // the bound itself.
  std::optional<double> theta1_override;
  std::optional<double> theta2_override;
  // Battery capacities: clip the greedy baseline's storage, and feed the
  // v_from_capacity mode. Unlimited by default.
  double cap_b1 = kInfinity;
  double cap_b2 = kInfinity;

  // [scenario] — channel means and per-slot harvest maxima live in `system`
  std::uint64_t seed = 1;
  std::int64_t num_slots = 100000;

  // [run]
  Policy policy = Policy::Lbapc;
  bool record_traces = false;
  double burn_in_fraction = 0.0;  // excluded from time-averaged summaries

  ScenarioConfig scenario() const;
  void validate() const;
};

struct TraceRow {
  std::int64_t t = 0;
  double battery_b1 = 0.0;  // at the beginning of slot t
  double battery_b2 = 0.0;
  double nsc = 0.0;
  double grid_energy = 0.0;
  int drops = 0;
};

struct RunMetrics {
  std::int64_t slots = 0;
  double time_avg_nsc = 0.0;
  double grid_power_avg = 0.0;  // [W], grid energy per unit time
  double drop_ratio = 0.0;      // dropped / offered packets
  // battery envelope over the whole run (slot-start values plus final state)
  double battery_min_b1 = 0.0, battery_max_b1 = 0.0;
  double battery_min_b2 = 0.0, battery_max_b2 = 0.0;
  // time-averaged levels over the final 20% of slots
  double battery_tail_avg_b1 = 0.0, battery_tail_avg_b2 = 0.0;
  // controller-only reporting (NaN for the greedy baseline)
  double required_capacity_b1 = 0.0, required_capacity_b2 = 0.0;
  double nu = 0.0;       // eps-tightening penalty bound
  double c_over_v = 0.0; // drift constant divided by V
  double v_used = 0.0;
  // populated only when record_traces is set
  std::vector<TraceRow> trace;
  std::vector<double> nsc_running_avg;
};

RunMetrics run(const RunConfig& cfg);

// Sweep axes: V, eps_h, P_H1, P_H2, w_D, N_B1, K. P_H axes take average
// harvesting powers in W (converted to per-slot maxima); eps_h sets both
// bounds; the K axis also sets N_B2 = K. All points share the base seed.
struct SweepPoint {
  double value = 0.0;
  RunMetrics metrics;
};

void apply_axis(RunConfig& cfg, const std::string& axis, double value);
std::vector<SweepPoint> sweep(const RunConfig& base, const std::string& axis,
                              const std::vector<double>& values);

// CSV output (schema in docs/output_schema.md). Deterministic per
// (config, seed): full round-trip precision, rows sorted by axis value.
void write_trace_csv(std::ostream& os, const RunMetrics& m);
void write_sweep_csv(std::ostream& os, const std::string& axis,
                     const std::vector<SweepPoint>& points,
                     const RunConfig& base);
void write_trace_csv_file(const std::string& path, const RunMetrics& m);
void write_sweep_csv_file(const std::string& path, const std::string& axis,
                          const std::vector<SweepPoint>& points,
                          const RunConfig& base);

// Throws std::invalid_argument with "<section>.<key>" context on bad input.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& label);

}  // namespace hesnet
