// Acceptance suite: runs each release criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits nonzero if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hesnet/controller.hpp"
#include "hesnet/harness.hpp"
#include "hesnet/oracle.hpp"
#include "hesnet/per_slot_solver.hpp"
#include "hesnet/stochastic.hpp"
#include "test_util.hpp"

using namespace hesnet;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] C%-2d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

// bounded-concurrency runner for batches of independent runs
std::vector<RunMetrics> run_many(const std::vector<RunConfig>& cfgs) {
  std::vector<RunMetrics> out(cfgs.size());
  const std::size_t workers =
      std::max<std::size_t>(2, std::thread::hardware_concurrency());
  std::size_t next = 0;
  while (next < cfgs.size()) {
    const std::size_t batch = std::min(workers, cfgs.size() - next);
    std::vector<std::future<RunMetrics>> fs;
    fs.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) {
      const RunConfig cfg = cfgs[next + i];
      fs.push_back(std::async(std::launch::async,
                              [cfg]() { return run(cfg); }));
    }
    for (std::size_t i = 0; i < batch; ++i) out[next + i] = fs[i].get();
    next += batch;
  }
  return out;
}

RunConfig baseline() {
  RunConfig cfg;  // defaults are the baseline experiment parameters
  cfg.num_slots = 100000;
  cfg.seed = 1;
  return cfg;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// --------------------------------------------------------------------------

void criterion1_oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(123456789);
  const testutil::Vq2Case cases[3] = {testutil::Vq2Case::GridOnly,
                                      testutil::Vq2Case::Dump,
                                      testutil::Vq2Case::Mixed};
  double worst = 0.0;
  int bad = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const SlotProblem prob = testutil::random_problem(rng, 4, cases[i % 3]);
    const double o = brute_force_slot(prob).objective;
    const double s = solve_outer(prob).objective;
    const double rel = std::abs(o - s) /
                       std::max({std::abs(o), std::abs(s), 1e-6});
    worst = std::max(worst, rel);
    if (rel > 1e-9) ++bad;
  }
  const double dt = elapsed_s(t0);
  report(1, "oracle equivalence (K=4, 1000 instances)",
         bad == 0 && dt < 120.0,
         "worst rel diff " + fmt(worst) + ", mismatches " +
             std::to_string(bad) + ", " + fmt(dt) + " s");
}

RunMetrics criterion2_battery_confinement(const RunConfig& base) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = base;
  bool threw = false;
  RunMetrics m;
  std::string err;
  try {
    m = run(cfg);
  } catch (const std::exception& e) {
    threw = true;
    err = e.what();
  }
  const double dt = elapsed_s(t0);
  if (threw) {
    report(2, "battery confinement over 1e5 slots", false, "threw: " + err);
    return m;
  }
  const bool pass = m.battery_min_b1 >= 0.0 && m.battery_min_b2 >= 0.0 &&
                    m.battery_max_b1 <= m.required_capacity_b1 &&
                    m.battery_max_b2 <= m.required_capacity_b2 && dt < 30.0;
  report(2, "battery confinement over 1e5 slots", pass,
         "B1 in [" + fmt(m.battery_min_b1) + ", " + fmt(m.battery_max_b1) +
             "] cap " + fmt(m.required_capacity_b1) + "; B2 max " +
             fmt(m.battery_max_b2) + " cap " + fmt(m.required_capacity_b2) +
             "; no causality trips; " + fmt(dt) + " s");
  return m;
}

void criterion3_battery_stabilization(const RunConfig& base,
                                      const RunMetrics& m) {
  const ThetaPair t =
      compute_theta(base.system, base.eps_h1, base.eps_h2, base.v_param);
  const double lo1 = t.theta1 - base.system.eh_max_b1;
  const double hi1 = t.theta1 + base.system.eh_max_b1;
  const double lo2 = t.theta2 - base.system.eh_max_b2;
  const double hi2 = t.theta2 + base.system.eh_max_b2;
  const bool pass =
      m.battery_tail_avg_b1 >= lo1 && m.battery_tail_avg_b1 <= hi1 &&
      m.battery_tail_avg_b2 >= lo2 && m.battery_tail_avg_b2 <= hi2;
  // Known red at the default parameters: the optimal policy discharges in
  // p_max*tau = 1 mJ granules, so the stationary mean sits about half a dump
  // below theta while this window is one harvest packet (0.06 mJ) wide. See
  // README ("acceptance suite") and the unit test "batteries stabilize near
  // theta when discharge granules are small".
  report(3, "batteries stabilize at the perturbed levels", pass,
         "tail avg B1 " + fmt(m.battery_tail_avg_b1) + " in [" + fmt(lo1) +
             ", " + fmt(hi1) + "], B2 " + fmt(m.battery_tail_avg_b2) +
             (pass ? "" : " (known gap: dump granularity p_max*tau = " +
                              fmt(base.system.p_max_b1 * base.system.slot_len) +
                              " J exceeds the harvest packet)"));
}

void criterion4_v_trend(const RunConfig& base) {
  // The 1/V bound concerns the long-run average: theta(V=1e-3) is ~1 J, so
  // the battery ramp alone covers ~3e4 slots. Run the V comparison in the
  // stationary regime.
  RunConfig trend_base = base;
  trend_base.num_slots = 1000000;
  trend_base.burn_in_fraction = 0.25;
  const std::vector<double> vs = {1e-5, 3e-5, 1e-4, 3e-4, 1e-3};

  const auto points = sweep(trend_base, "V", vs);
  std::vector<double> common_nsc;
  for (const auto& p : points) common_nsc.push_back(p.metrics.time_avg_nsc);

  std::vector<RunConfig> cfgs;
  for (double v : vs) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      RunConfig cfg = trend_base;
      apply_axis(cfg, "V", v);
      cfg.seed = derive_seed(base.seed, s);
      cfgs.push_back(cfg);
    }
  }
  const auto metrics = run_many(cfgs);
  double sigma = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::vector<double> xs;
    for (std::size_t s = 0; s < 10; ++s)
      xs.push_back(metrics[i * 10 + s].time_avg_nsc);
    sigma = std::max(sigma, sample_std(xs));
  }

  bool monotone = true;
  for (std::size_t i = 0; i + 1 < vs.size(); ++i)
    if (common_nsc[i + 1] > common_nsc[i] + 3.0 * sigma) monotone = false;

  std::vector<double> x, y;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    x.push_back(1.0 / vs[i]);
    y.push_back(common_nsc[i] - common_nsc.back());
  }
  const LineFit f = fit_line(x, y);
  const bool pass = monotone && f.slope > 0.0 && f.r2 > 0.9;
  report(4, "cost decreases like 1/V", pass,
         "nsc(V) = {" + fmt(common_nsc[0]) + ", " + fmt(common_nsc[1]) +
             ", " + fmt(common_nsc[2]) + ", " + fmt(common_nsc[3]) + ", " +
             fmt(common_nsc[4]) + "}, monotone(3sigma=" + fmt(3.0 * sigma) +
             ") " + (monotone ? "yes" : "NO") + ", slope " + fmt(f.slope) +
             ", R2 " + fmt(f.r2));
}

void criterion5_capacity_affine(const RunConfig& base) {
  const std::vector<double> vs = {1e-4, 2e-4, 3e-4, 4e-4};
  std::vector<double> cap1, cap2;
  for (double v : vs) {
    const ThetaPair t =
        compute_theta(base.system, base.eps_h1, base.eps_h2, v);
    cap1.push_back(t.theta1 + base.system.eh_max_b1);
    cap2.push_back(t.theta2 + base.system.eh_max_b2);
  }
  // equally spaced V: affine iff the second differences vanish
  double worst = 0.0;
  for (std::size_t i = 0; i + 2 < vs.size(); ++i) {
    worst = std::max(worst, std::abs(cap1[i] - 2 * cap1[i + 1] + cap1[i + 2]) /
                                cap1[i + 1]);
    worst = std::max(worst, std::abs(cap2[i] - 2 * cap2[i + 1] + cap2[i + 2]) /
                                cap2[i + 1]);
  }
  // slope agrees with the analytic K*phi~_D/(eps*tau)
  const double slope = (cap1[1] - cap1[0]) / (vs[1] - vs[0]);
  const double analytic = base.system.num_users * base.system.drop_cost() /
                          (base.eps_h1 * base.system.slot_len);
  const bool pass = worst < 1e-12 &&
                    std::abs(slope - analytic) <= 1e-9 * analytic;
  report(5, "required capacity affine in V", pass,
         "max |second diff|/cap " + fmt(worst) + ", slope " + fmt(slope) +
             " vs analytic " + fmt(analytic));
}

void criterion6_headline_gap(const RunConfig& base) {
  std::vector<RunConfig> cfgs;
  for (std::uint64_t s = 0; s < 10; ++s) {
    RunConfig cfg = base;  // lbapc at V = 1e-4, 1e5 slots
    cfg.seed = derive_seed(base.seed, s);
    cfgs.push_back(cfg);
    cfg.policy = Policy::Greedy;
    cfg.cap_b1 = cfg.cap_b2 = 0.1;  // the capacity that admits V ~ 1e-4
    cfgs.push_back(cfg);
  }
  const auto metrics = run_many(cfgs);
  std::vector<double> lbapc, greedy;
  for (std::size_t i = 0; i < metrics.size(); i += 2) {
    lbapc.push_back(metrics[i].time_avg_nsc);
    greedy.push_back(metrics[i + 1].time_avg_nsc);
  }

  const double gap = (mean(greedy) - mean(lbapc)) / mean(greedy);
  const bool pass = gap > 0.20 && gap >= 0.32 && gap <= 0.62;
  report(6, "headline gap vs greedy at V=1e-4", pass,
         "lbapc " + fmt(mean(lbapc)) + ", greedy " + fmt(mean(greedy)) +
             ", reduction " + fmt(100.0 * gap) + "% (target 47 +/- 15)");
}

void criterion7_wd_tradeoff(const RunConfig& base) {
  const std::vector<double> wds = {0.001, 0.01, 0.1, 1.0};
  const int n_seeds = 8;
  std::vector<RunConfig> cfgs;
  for (Policy pol : {Policy::Lbapc, Policy::Greedy}) {
    for (double wd : wds) {
      for (std::uint64_t s = 0; s < n_seeds; ++s) {
        RunConfig cfg = base;
        cfg.policy = pol;
        apply_axis(cfg, "w_D", wd);
        cfg.cap_b1 = cfg.cap_b2 = 0.15;
        if (pol == Policy::Lbapc) cfg.v_from_capacity = true;
        cfg.seed = derive_seed(7, s);
        cfgs.push_back(cfg);
      }
    }
  }
  const auto metrics = run_many(cfgs);

  bool pass = true;
  std::string detail;
  double last_drop[2] = {0.0, 0.0};
  for (int pi = 0; pi < 2; ++pi) {
    std::vector<double> grid_m, drop_m, grid_s, drop_s;
    for (std::size_t wi = 0; wi < wds.size(); ++wi) {
      std::vector<double> g, d;
      for (int s = 0; s < n_seeds; ++s) {
        const RunMetrics& m =
            metrics[(pi * wds.size() + wi) * n_seeds + s];
        g.push_back(m.grid_power_avg);
        d.push_back(m.drop_ratio);
      }
      grid_m.push_back(mean(g));
      drop_m.push_back(mean(d));
      grid_s.push_back(sample_std(g));
      drop_s.push_back(sample_std(d));
    }
    for (std::size_t i = 0; i + 1 < wds.size(); ++i) {
      const double g3 =
          3.0 * std::sqrt(grid_s[i] * grid_s[i] + grid_s[i + 1] * grid_s[i + 1]);
      const double d3 =
          3.0 * std::sqrt(drop_s[i] * drop_s[i] + drop_s[i + 1] * drop_s[i + 1]);
      if (grid_m[i + 1] < grid_m[i] - g3) pass = false;
      if (drop_m[i + 1] > drop_m[i] + d3) pass = false;
    }
    last_drop[pi] = drop_m.back();
    detail += (pi == 0 ? "lbapc grid " : "; greedy grid ") + fmt(grid_m.front()) +
              "->" + fmt(grid_m.back()) + " W, drop " + fmt(drop_m.front()) +
              "->" + fmt(drop_m.back());
  }
  if (!(last_drop[0] < last_drop[1])) pass = false;
  report(7, "w_D sweep trades grid energy against drops", pass, detail);
}

void criterion8_saturation(const RunConfig& base) {
  const int n_seeds = 10;
  std::vector<RunConfig> cfgs;
  for (Policy pol : {Policy::Lbapc, Policy::Greedy}) {
    int arm = 0;
    for (double ph1 : {0.04, 0.08}) {
      for (std::uint64_t s = 0; s < n_seeds; ++s) {
        RunConfig cfg = base;
        cfg.policy = pol;
        cfg.system.n_channels_b1 = 1;
        apply_axis(cfg, "P_H1", ph1);
        cfg.cap_b1 = cfg.cap_b2 = 0.15;
        if (pol == Policy::Lbapc) cfg.v_from_capacity = true;
        // independent seed pools per arm
        cfg.seed = derive_seed(8, static_cast<std::uint64_t>(arm) * 100 + s);
        cfgs.push_back(cfg);
      }
      ++arm;
    }
  }
  const auto metrics = run_many(cfgs);
  const auto slice = [&](int pi, int arm) {
    std::vector<double> xs;
    for (int s = 0; s < n_seeds; ++s)
      xs.push_back(metrics[(pi * 2 + arm) * n_seeds + s].time_avg_nsc);
    return xs;
  };
  const std::vector<double> l40 = slice(0, 0), l80 = slice(0, 1);
  const std::vector<double> g40 = slice(1, 0), g80 = slice(1, 1);

  const double l_delta = mean(l40) - mean(l80);
  const double g_delta = std::abs(mean(g40) - mean(g80));
  const double g_se = std::sqrt(sample_std(g40) * sample_std(g40) / n_seeds +
                                sample_std(g80) * sample_std(g80) / n_seeds);
  const bool pass = g_delta < 3.0 * g_se && l_delta > 0.0;
  report(8, "N_B1=1: greedy saturates in P_H1, lbapc keeps improving", pass,
         "greedy |delta| " + fmt(g_delta) + " vs 3se " + fmt(3.0 * g_se) +
             "; lbapc drop " + fmt(l_delta) + " (" + fmt(mean(l40)) + " -> " +
             fmt(mean(l80)) + ")");
}

void criterion9_user_scaling(const RunConfig& base) {
  const std::vector<double> ks = {2, 3, 4, 5, 6};
  const int n_seeds = 5;
  std::vector<RunConfig> cfgs;
  for (Policy pol : {Policy::Lbapc, Policy::Greedy}) {
    for (double kv : ks) {
      for (std::uint64_t s = 0; s < n_seeds; ++s) {
        RunConfig cfg = base;
        cfg.policy = pol;
        apply_axis(cfg, "K", kv);
        cfg.cap_b1 = cfg.cap_b2 = 0.15;
        if (pol == Policy::Lbapc) cfg.v_from_capacity = true;
        cfg.seed = derive_seed(9, s);  // paired across policies and K
        cfgs.push_back(cfg);
      }
    }
  }
  const auto metrics = run_many(cfgs);
  const auto nsc_of = [&](int pi, std::size_t ki) {
    std::vector<double> xs;
    for (int s = 0; s < n_seeds; ++s)
      xs.push_back(metrics[(pi * ks.size() + ki) * n_seeds + s].time_avg_nsc);
    return xs;
  };

  bool pass = true;
  std::vector<double> gap_mean, gap_std;
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    const auto l = nsc_of(0, ki), g = nsc_of(1, ki);
    std::vector<double> gap;
    for (int s = 0; s < n_seeds; ++s) gap.push_back(g[s] - l[s]);
    gap_mean.push_back(mean(gap));
    gap_std.push_back(sample_std(gap));
  }
  for (int pi = 0; pi < 2; ++pi) {
    for (std::size_t ki = 0; ki + 1 < ks.size(); ++ki) {
      const auto a = nsc_of(pi, ki), b = nsc_of(pi, ki + 1);
      const double s3 = 3.0 * std::sqrt(sample_std(a) * sample_std(a) +
                                        sample_std(b) * sample_std(b));
      if (mean(b) < mean(a) - s3) pass = false;  // NSC increases with K
    }
  }
  for (std::size_t ki = 0; ki + 1 < ks.size(); ++ki) {
    const double s3 = 3.0 * std::sqrt(gap_std[ki] * gap_std[ki] +
                                      gap_std[ki + 1] * gap_std[ki + 1]);
    if (gap_mean[ki + 1] < gap_mean[ki] - s3) pass = false;
  }
  if (!(gap_mean.back() > gap_mean.front())) pass = false;
  report(9, "cost and policy gap grow with K", pass,
         "gap(K=2) " + fmt(gap_mean.front()) + " -> gap(K=6) " +
             fmt(gap_mean.back()));
}

void criterion10_nu_limit(const RunConfig& base) {
  const double mean_gain = base.system.mean_channel_gain_b1;
  const auto cdf = [mean_gain](double x) {
    return 1.0 - std::exp(-x / mean_gain);
  };
  double eps = 0.04;
  double prev = kInfinity;
  bool monotone = true;
  double last = 0.0;
  for (int n = 0; n < 40; ++n, eps *= 0.5) {
    const double nu = nu_bound(base.system, eps, eps, cdf);
    if (nu > prev + 1e-18) monotone = false;
    prev = nu;
    last = nu;
  }
  const bool pass = monotone && last < 1e-12;
  report(10, "nu bound vanishes as eps -> 0", pass,
         std::string("monotone ") + (monotone ? "yes" : "NO") + ", nu(eps*2^-39) " +
             fmt(last));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig base = baseline();

  criterion1_oracle_equivalence();
  const RunMetrics m2 = criterion2_battery_confinement(base);
  criterion3_battery_stabilization(base, m2);
  criterion4_v_trend(base);
  criterion5_capacity_affine(base);
  criterion6_headline_gap(base);
  criterion7_wd_tradeoff(base);
  criterion8_saturation(base);
  criterion9_user_scaling(base);
  criterion10_nu_limit(base);

  std::printf("%s (%d criteria failed, %.1f s total)\n",
              g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT",
              g_failures, elapsed_s(t0));
  return g_failures == 0 ? 0 : 1;
}
