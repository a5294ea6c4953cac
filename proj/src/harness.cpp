#include "hesnet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hesnet/baselines.hpp"
#include "hesnet/controller.hpp"
#include "hesnet/oracle.hpp"
#include "hesnet/per_slot_solver.hpp"

namespace hesnet {

std::string policy_name(Policy p) {
  switch (p) {
    case Policy::Lbapc: return "lbapc";
    case Policy::Greedy: return "greedy";
    case Policy::Oracle: return "oracle";
  }
  return "?";
}

Policy parse_policy(const std::string& name) {
  if (name == "lbapc") return Policy::Lbapc;
  if (name == "greedy") return Policy::Greedy;
  if (name == "oracle") return Policy::Oracle;
  throw std::invalid_argument("policy: expected lbapc|greedy|oracle, got '" +
                              name + "'");
}

ScenarioConfig RunConfig::scenario() const {
  ScenarioConfig sc;
  sc.seed = seed;
  sc.channel_mean_b1 = system.mean_channel_gain_b1;
  sc.channel_mean_b2 = system.mean_channel_gain_b2;
  sc.eh_max_b1 = system.eh_max_b1;
  sc.eh_max_b2 = system.eh_max_b2;
  sc.num_slots = num_slots;
  return sc;
}

void RunConfig::validate() const {
  system.validate();
  scenario().validate();
  if (num_slots < 1) throw std::invalid_argument("num_slots: must be >= 1");
  if (!(eps_h1 > 0.0) || eps_h1 > system.p_max_b1)
    throw std::invalid_argument("eps_h1: must satisfy 0 < eps_h1 <= p_max_b1");
  if (!(eps_h2 > 0.0) || eps_h2 > system.p_max_b2)
    throw std::invalid_argument("eps_h2: must satisfy 0 < eps_h2 <= p_max_b2");
  if (!v_from_capacity && !(v_param > 0.0))
    throw std::invalid_argument("v_param: must be positive");
  if (v_from_capacity && (!std::isfinite(cap_b1) || !std::isfinite(cap_b2)))
    throw std::invalid_argument(
        "v_from_capacity: needs finite cap_b1 and cap_b2");
  if (cap_b1 <= 0.0 || cap_b2 <= 0.0)
    throw std::invalid_argument("cap_b1/cap_b2: must be positive");
  if (burn_in_fraction < 0.0 || burn_in_fraction >= 1.0)
    throw std::invalid_argument("burn_in_fraction: must lie in [0, 1)");
  if (policy == Policy::Oracle && system.num_users > kOracleMaxUsers)
    throw std::invalid_argument("policy oracle: only supported for K <= 6");
}

namespace {

struct Accumulator {
  std::int64_t total_slots;
  std::int64_t first_counted;  // burn-in boundary
  std::int64_t tail_start;     // final-20% boundary
  int num_users;
  double tau;
  bool record;

  std::int64_t t = 0;
  double nsc_sum = 0.0, grid_sum = 0.0;
  std::int64_t drop_sum = 0;
  double full_nsc_sum = 0.0;  // running average over all slots
  double tail_b1 = 0.0, tail_b2 = 0.0;
  double min_b1 = kInfinity, max_b1 = -kInfinity;
  double min_b2 = kInfinity, max_b2 = -kInfinity;
  RunMetrics m;

  Accumulator(const RunConfig& cfg)
      : total_slots(cfg.num_slots),
        first_counted(static_cast<std::int64_t>(
            std::floor(cfg.burn_in_fraction *
                       static_cast<double>(cfg.num_slots)))),
        tail_start(static_cast<std::int64_t>(
            std::floor(0.8 * static_cast<double>(cfg.num_slots)))),
        num_users(cfg.system.num_users),
        tau(cfg.system.slot_len),
        record(cfg.record_traces) {
    if (record) {
      m.trace.reserve(static_cast<std::size_t>(total_slots));
      m.nsc_running_avg.reserve(static_cast<std::size_t>(total_slots));
    }
  }

  void see_battery(double b1, double b2) {
    min_b1 = std::min(min_b1, b1);
    max_b1 = std::max(max_b1, b1);
    min_b2 = std::min(min_b2, b2);
    max_b2 = std::max(max_b2, b2);
  }

  void slot(double b1, double b2, const SlotCost& cost) {
    see_battery(b1, b2);
    if (t >= first_counted) {
      nsc_sum += cost.nsc;
      grid_sum += cost.grid_energy;
      drop_sum += cost.drops;
    }
    if (t >= tail_start) {
      tail_b1 += b1;
      tail_b2 += b2;
    }
    full_nsc_sum += cost.nsc;
    if (record) {
      m.trace.push_back({t, b1, b2, cost.nsc, cost.grid_energy, cost.drops});
      m.nsc_running_avg.push_back(full_nsc_sum /
                                  static_cast<double>(t + 1));
    }
    ++t;
  }

  RunMetrics finish() {
    const auto counted = static_cast<double>(total_slots - first_counted);
    const auto tail = static_cast<double>(total_slots - tail_start);
    m.slots = total_slots;
    m.time_avg_nsc = nsc_sum / counted;
    m.grid_power_avg = grid_sum / (counted * tau);
    m.drop_ratio = static_cast<double>(drop_sum) / (counted * num_users);
    m.battery_min_b1 = min_b1;
    m.battery_max_b1 = max_b1;
    m.battery_min_b2 = min_b2;
    m.battery_max_b2 = max_b2;
    m.battery_tail_avg_b1 = tail_b1 / tail;
    m.battery_tail_avg_b2 = tail_b2 / tail;
    return std::move(m);
  }
};

RunMetrics run_controller(const RunConfig& cfg, const SlotSolver& solver) {
  double v = cfg.v_param;
  if (cfg.v_from_capacity)
    v = v_from_capacity(cfg.system, cfg.eps_h1, cfg.eps_h2, cfg.cap_b1,
                        cfg.cap_b2);
  ControlParams ctrl =
      make_control_params(cfg.system, cfg.eps_h1, cfg.eps_h2, v);
  if (cfg.theta1_override) ctrl.theta1 = *cfg.theta1_override;
  if (cfg.theta2_override) ctrl.theta2 = *cfg.theta2_override;
  LbapcState state = make_lbapc_state(cfg.system, ctrl);

  ScenarioGenerator gen(cfg.scenario(), cfg.system.num_users);
  Accumulator acc(cfg);
  for (std::int64_t t = 0; t < cfg.num_slots; ++t) {
    const SlotObservation obs = gen.next();
    StepResult res = step_with(state, obs, solver);
    acc.slot(state.net.battery_b1, state.net.battery_b2, res.cost);
    state = std::move(res.state);
  }
  acc.see_battery(state.net.battery_b1, state.net.battery_b2);

  RunMetrics m = acc.finish();
  m.required_capacity_b1 = ctrl.theta1 + cfg.system.eh_max_b1;
  m.required_capacity_b2 = ctrl.theta2 + cfg.system.eh_max_b2;
  const double mean = cfg.system.mean_channel_gain_b1;
  m.nu = nu_bound(cfg.system, ctrl.eps_h1, ctrl.eps_h2,
                  [mean](double x) { return 1.0 - std::exp(-x / mean); });
  m.c_over_v = drift_constant(cfg.system) / v;
  m.v_used = v;
  return m;
}

RunMetrics run_greedy(const RunConfig& cfg) {
  ScenarioGenerator gen(cfg.scenario(), cfg.system.num_users);
  NetworkState state;
  Accumulator acc(cfg);
  for (std::int64_t t = 0; t < cfg.num_slots; ++t) {
    const SlotObservation obs = gen.next();
    GreedyStepResult res =
        greedy_step(state, obs, cfg.system, cfg.cap_b1, cfg.cap_b2);
    acc.slot(state.battery_b1, state.battery_b2, res.cost);
    state = res.state;
  }
  acc.see_battery(state.battery_b1, state.battery_b2);
  RunMetrics m = acc.finish();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  m.required_capacity_b1 = nan;
  m.required_capacity_b2 = nan;
  m.nu = nan;
  m.c_over_v = nan;
  m.v_used = nan;
  return m;
}

}  // namespace

RunMetrics run(const RunConfig& cfg) {
  cfg.validate();
  switch (cfg.policy) {
    case Policy::Greedy:
      return run_greedy(cfg);
    case Policy::Oracle:
      return run_controller(cfg, [](const SlotProblem& prob) {
        return brute_force_slot(prob).decision;
      });
    case Policy::Lbapc:
    default:
      return run_controller(cfg, [](const SlotProblem& prob) {
        return solve_outer(prob).decision;
      });
  }
}

void apply_axis(RunConfig& cfg, const std::string& axis, double value) {
  if (axis == "V") {
    cfg.v_param = value;
    cfg.v_from_capacity = false;
  } else if (axis == "eps_h") {
    cfg.eps_h1 = value;
    cfg.eps_h2 = value;
  } else if (axis == "P_H1") {
    cfg.system.eh_max_b1 = eh_power_to_max(value, cfg.system.slot_len);
  } else if (axis == "P_H2") {
    cfg.system.eh_max_b2 = eh_power_to_max(value, cfg.system.slot_len);
  } else if (axis == "w_D") {
    cfg.system.weight_drop = value;
  } else if (axis == "N_B1") {
    const int n = static_cast<int>(std::llround(value));
    if (n < 1 || std::abs(value - n) > 1e-9)
      throw std::invalid_argument("sweep N_B1: values must be integers >= 1");
    cfg.system.n_channels_b1 = n;
  } else if (axis == "K") {
    const int n = static_cast<int>(std::llround(value));
    if (n < 1 || std::abs(value - n) > 1e-9)
      throw std::invalid_argument("sweep K: values must be integers >= 1");
    cfg.system.num_users = n;
    cfg.system.n_channels_b2 = n;  // the K sweep keeps N_B2 = K
  } else {
    throw std::invalid_argument("sweep: unknown axis '" + axis +
                                "' (expected V|eps_h|P_H1|P_H2|w_D|N_B1|K)");
  }
}

std::vector<SweepPoint> sweep(const RunConfig& base, const std::string& axis,
                              const std::vector<double>& values) {
  if (values.empty())
    throw std::invalid_argument("sweep: needs at least one value");
  std::vector<std::future<RunMetrics>> jobs;
  jobs.reserve(values.size());
  for (double v : values) {
    RunConfig cfg = base;
    apply_axis(cfg, axis, v);
    cfg.validate();  // fail fast, before launching the batch
    jobs.push_back(std::async(std::launch::async,
                              [cfg]() { return run(cfg); }));
  }
  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    points.push_back({values[i], jobs[i].get()});
  std::sort(points.begin(), points.end(),
            [](const SweepPoint& a, const SweepPoint& b) {
              return a.value < b.value;
            });
  return points;
}

namespace {

std::ostream& csv_stream(std::ostream& os) {
  os << std::setprecision(17);
  return os;
}

}  // namespace

void write_trace_csv(std::ostream& os, const RunMetrics& m) {
  csv_stream(os);
  os << "t,battery_b1,battery_b2,nsc,grid_energy,drops,nsc_running_avg\n";
  for (std::size_t i = 0; i < m.trace.size(); ++i) {
    const TraceRow& r = m.trace[i];
    os << r.t << ',' << r.battery_b1 << ',' << r.battery_b2 << ',' << r.nsc
       << ',' << r.grid_energy << ',' << r.drops << ','
       << m.nsc_running_avg[i] << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::string& axis,
                     const std::vector<SweepPoint>& points,
                     const RunConfig& base) {
  csv_stream(os);
  os << "axis,value,policy,seed,num_slots,time_avg_nsc,grid_power_avg,"
        "drop_ratio,required_capacity_b1,required_capacity_b2,nu_bound,"
        "c_over_v\n";
  for (const SweepPoint& p : points) {
    const RunMetrics& m = p.metrics;
    os << axis << ',' << p.value << ',' << policy_name(base.policy) << ','
       << base.seed << ',' << m.slots << ',' << m.time_avg_nsc << ','
       << m.grid_power_avg << ',' << m.drop_ratio << ','
       << m.required_capacity_b1 << ',' << m.required_capacity_b2 << ','
       << m.nu << ',' << m.c_over_v << '\n';
  }
}

namespace {

void open_out(std::ofstream& f, const std::string& path) {
  f.open(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
}

}  // namespace

void write_trace_csv_file(const std::string& path, const RunMetrics& m) {
  std::ofstream f;
  open_out(f, path);
  write_trace_csv(f, m);
}

void write_sweep_csv_file(const std::string& path, const std::string& axis,
                          const std::vector<SweepPoint>& points,
                          const RunConfig& base) {
  std::ofstream f;
  open_out(f, path);
  write_sweep_csv(f, axis, points, base);
}

// ---------------------------------------------------------------------------
// config file parsing

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct ConfigMap {
  std::string label;
  std::map<std::string, std::string> values;  // "section.key" -> raw text

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw std::invalid_argument(label + ": " + key + ": " + msg);
  }

  template <typename F>
  void take(const std::string& key, F&& set) {
    auto it = values.find(key);
    if (it == values.end()) return;
    set(it->second);
    values.erase(it);
  }

  double to_double(const std::string& key, const std::string& raw) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      fail(key, "expected a number, got '" + raw + "'");
    }
  }

  std::int64_t to_int(const std::string& key, const std::string& raw) const {
    try {
      std::size_t pos = 0;
      const std::int64_t v = std::stoll(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      fail(key, "expected an integer, got '" + raw + "'");
    }
  }

  bool to_bool(const std::string& key, const std::string& raw) const {
    if (raw == "true" || raw == "1") return true;
    if (raw == "false" || raw == "0") return false;
    fail(key, "expected true|false, got '" + raw + "'");
  }
};

ConfigMap read_config(const std::string& text, const std::string& label) {
  ConfigMap cm;
  cm.label = label;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument(label + ": line " +
                                    std::to_string(lineno) +
                                    ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "system" && section != "control" &&
          section != "scenario" && section != "run")
        throw std::invalid_argument(label + ": unknown section [" + section +
                                    "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw std::invalid_argument(label + ": line " + std::to_string(lineno) +
                                  ": expected 'key = value' inside a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument(label + ": line " + std::to_string(lineno) +
                                  ": empty key or value");
    if (!cm.values.emplace(section + "." + key, value).second)
      throw std::invalid_argument(label + ": duplicate key " + section + "." +
                                  key);
  }
  return cm;
}

}  // namespace

RunConfig parse_config_text(const std::string& text,
                            const std::string& label) {
  ConfigMap cm = read_config(text, label);
  RunConfig cfg;
  SystemParams& sys = cfg.system;

  const auto num = [&](const std::string& key, double& field) {
    cm.take(key, [&](const std::string& raw) {
      field = cm.to_double(key, raw);
    });
  };
  const auto integer = [&](const std::string& key, int& field) {
    cm.take(key, [&](const std::string& raw) {
      field = static_cast<int>(cm.to_int(key, raw));
    });
  };

  integer("system.num_users", sys.num_users);
  num("system.slot_len", sys.slot_len);
  num("system.packet_bits", sys.packet_bits);
  num("system.bandwidth", sys.bandwidth);
  num("system.noise_power", sys.noise_power);
  num("system.p_max_b1", sys.p_max_b1);
  num("system.p_max_b2", sys.p_max_b2);
  integer("system.n_channels_b1", sys.n_channels_b1);
  integer("system.n_channels_b2", sys.n_channels_b2);
  num("system.grid_cost_per_joule", sys.grid_cost_per_joule);
  num("system.drop_cost_per_packet", sys.drop_cost_per_packet);
  num("system.weight_grid", sys.weight_grid);
  num("system.weight_drop", sys.weight_drop);

  num("control.eps_h1", cfg.eps_h1);
  num("control.eps_h2", cfg.eps_h2);
  num("control.v_param", cfg.v_param);
  cm.take("control.v_from_capacity", [&](const std::string& raw) {
    cfg.v_from_capacity = cm.to_bool("control.v_from_capacity", raw);
  });
  cm.take("control.theta1", [&](const std::string& raw) {
    cfg.theta1_override = cm.to_double("control.theta1", raw);
  });
  cm.take("control.theta2", [&](const std::string& raw) {
    cfg.theta2_override = cm.to_double("control.theta2", raw);
  });
  num("control.cap_b1", cfg.cap_b1);
  num("control.cap_b2", cfg.cap_b2);

  cm.take("scenario.seed", [&](const std::string& raw) {
    cfg.seed = static_cast<std::uint64_t>(cm.to_int("scenario.seed", raw));
  });
  num("scenario.channel_mean_b1", sys.mean_channel_gain_b1);
  num("scenario.channel_mean_b2", sys.mean_channel_gain_b2);
  num("scenario.eh_max_b1", sys.eh_max_b1);
  num("scenario.eh_max_b2", sys.eh_max_b2);
  cm.take("scenario.num_slots", [&](const std::string& raw) {
    cfg.num_slots = cm.to_int("scenario.num_slots", raw);
  });

  cm.take("run.policy", [&](const std::string& raw) {
    cfg.policy = parse_policy(raw);
  });
  cm.take("run.trace", [&](const std::string& raw) {
    cfg.record_traces = cm.to_bool("run.trace", raw);
  });
  num("run.burn_in_fraction", cfg.burn_in_fraction);

  if (!cm.values.empty())
    cm.fail(cm.values.begin()->first, "unknown key");
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream text;
  text << f.rdbuf();
  return parse_config_text(text.str(), path);
}

}  // namespace hesnet
