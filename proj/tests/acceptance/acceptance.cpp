// Acceptance suite. Prints one PASS/FAIL line per criterion followed by the
// measured quantities, and exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fshh/analysis.hpp"
#include "fshh/fbm.hpp"
#include "fshh/gating_kinetics.hpp"
#include "fshh/parallel.hpp"
#include "fshh/random.hpp"
#include "fshh/solver.hpp"
#include "fshh/viability.hpp"

using namespace fshh;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

HHParams table_params(double sigma = 0.0, double current = 10.0) {
  HHParams p;
  p.current = current;
  p.sigma = {sigma, sigma, sigma};
  return p;
}

// Worst Gronwall margin seen so far, shared by criteria 2, 4 and 7.
struct BoundLedger {
  std::size_t runs = 0;
  std::size_t violations = 0;
  double worst_log_ratio = -INFINITY;  // log(max|V|) - log(bound)

  void record(const SimulationResult& r) {
    ++runs;
    if (!(r.max_abs_v <= r.apriori_bound)) ++violations;
    if (r.max_abs_v > 0.0) {
      worst_log_ratio = std::max(worst_log_ratio, std::log(r.max_abs_v) - r.log_apriori_bound);
    }
  }
};

BoundLedger sweep_bounds;
BoundLedger stochastic_bounds;

// ---------------------------------------------------------------------------

Outcome equilibrium_values() {
  const State eq = equilibrium(0.0);
  const double expected[3] = {0.053, 0.596, 0.318};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(eq.gate(i) - expected[i]));
  return {worst <= 1e-3, fmt("(m,h,n) = (%.6f, %.6f, %.6f), max deviation %.2e", eq.m, eq.h,
                             eq.n, worst)};
}

Outcome bifurcation_regimes() {
  SolverConfig config;  // T = 50, dt = 0.01
  const std::vector<double> currents = current_range(0.0, 12.0, 0.5);
  const SweepTable table = bifurcation_sweep(currents, table_params(), config);

  auto count_at = [&](double current) {
    const SimulationResult r = simulate(equilibrium(0.0), table_params(0.0, current), config);
    return detect_spikes(r).count();
  };
  const std::size_t n2 = count_at(2.0), n45 = count_at(4.5), n10 = count_at(10.0);

  for (double current : currents) {
    sweep_bounds.record(simulate(equilibrium(0.0), table_params(0.0, current), config));
  }

  const bool thresholds = table.rest_threshold && table.single_threshold &&
                          *table.rest_threshold >= 2.0 && *table.rest_threshold <= 4.0 &&
                          *table.single_threshold >= 5.0 && *table.single_threshold <= 7.0;
  return {n2 == 0 && n45 == 1 && n10 >= 3 && thresholds,
          fmt("spikes I=2: %zu, I=4.5: %zu, I=10: %zu; I1 = %g, I2 = %g", n2, n45, n10,
              table.rest_threshold.value_or(NAN), table.single_threshold.value_or(NAN))};
}

Outcome viability_condition() {
  const HHParams p = table_params(0.25);
  const ViabilityReport ok = check_viability(p);

  auto drift_fn = [&](const State& x) { return drift(x, p); };
  auto row4 = [&](const State& x) {
    Diffusion s = diffusion(x, p);
    for (int k = 0; k < 3; ++k) s[3][k] += 0.1;
    return s;
  };
  auto offset = [&](const State& x) {
    Diffusion s = diffusion(x, p);
    for (int k = 0; k < 3; ++k) s[k][k] += 1e-3;
    return s;
  };
  const ViabilityReport bad_row = check_viability(drift_fn, row4);
  const ViabilityReport bad_face = check_viability(drift_fn, offset);

  const bool pass = ok.pass && ok.max_drift_violation <= kViabilityTolerance &&
                    ok.max_diffusion_violation <= kViabilityTolerance && !bad_row.pass &&
                    !bad_face.pass;
  return {pass, fmt("%zu points, drift %.3e, diffusion %.3e; adversarial voltage row %s, "
                    "face offset %s",
                    ok.points_checked, ok.max_drift_violation, ok.max_diffusion_violation,
                    bad_row.pass ? "passed" : "failed", bad_face.pass ? "passed" : "failed")};
}

Outcome stochastic_viability() {
  const double hursts[3] = {0.55, 0.75, 0.95};
  constexpr std::size_t runs = 100;
  const HHParams p = table_params(0.25);

  struct Run {
    double min_gate = 0.0, max_gate = 0.0;
    std::size_t clamps_dt = 0, clamps_half = 0;
    SimulationResult coarse, fine;
  };
  std::vector<Run> out(runs);
  parallel_for(runs, [&](std::size_t i) {
    const double h = hursts[i % 3];
    SolverConfig coarse;
    coarse.hurst = h;
    coarse.seed = i;
    SolverConfig fine = coarse;
    fine.dt = coarse.dt / 2.0;
    // One driver on the fine grid; the dt run uses its restriction.
    const MultiFbmPath driver = sample_driver(fine.steps(), fine.horizon, h, i);
    Run& r = out[i];
    r.coarse = simulate_on_driver(equilibrium(0.0), p, coarse, driver, 2);
    r.fine = simulate_on_driver(equilibrium(0.0), p, fine, driver, 1);
    r.min_gate = std::min(r.coarse.min_gate_pre_clamp, r.fine.min_gate_pre_clamp);
    r.max_gate = std::max(r.coarse.max_gate_pre_clamp, r.fine.max_gate_pre_clamp);
    r.clamps_dt = r.coarse.clamp_events.size();
    r.clamps_half = r.fine.clamp_events.size();
  });

  double lo = INFINITY, hi = -INFINITY;
  std::size_t ordered = 0, total_dt = 0, total_half = 0;
  for (const Run& r : out) {
    lo = std::min(lo, r.min_gate);
    hi = std::max(hi, r.max_gate);
    if (r.clamps_half <= r.clamps_dt) ++ordered;
    total_dt += r.clamps_dt;
    total_half += r.clamps_half;
    stochastic_bounds.record(r.coarse);
    stochastic_bounds.record(r.fine);
  }
  const bool in_box = lo >= -kGateExitTolerance && hi <= 1.0 + kGateExitTolerance;
  const double fraction = static_cast<double>(ordered) / runs;

  // Heavy noise so the clamp comparison is not vacuous.
  constexpr std::size_t heavy_runs = 30;
  const HHParams heavy = table_params(8.0);
  std::vector<std::pair<std::size_t, std::size_t>> heavy_clamps(heavy_runs);
  parallel_for(heavy_runs, [&](std::size_t i) {
    const double h = hursts[i % 3];
    SolverConfig coarse;
    coarse.hurst = h;
    coarse.seed = 1000 + i;
    SolverConfig fine = coarse;
    fine.dt = coarse.dt / 2.0;
    const MultiFbmPath driver = sample_driver(fine.steps(), fine.horizon, h, coarse.seed);
    const SimulationResult at_dt = simulate_on_driver(equilibrium(0.0), heavy, coarse, driver, 2);
    const SimulationResult at_half = simulate_on_driver(equilibrium(0.0), heavy, fine, driver, 1);
    heavy_clamps[i] = {at_dt.clamp_events.size(), at_half.clamp_events.size()};
  });
  std::size_t heavy_ordered = 0, heavy_dt = 0, heavy_half = 0;
  for (const auto& [at_dt, at_half] : heavy_clamps) {
    if (at_half <= at_dt) ++heavy_ordered;
    heavy_dt += at_dt;
    heavy_half += at_half;
  }
  const double heavy_fraction = static_cast<double>(heavy_ordered) / heavy_runs;

  const bool heavy_ok = heavy_dt > 0 && heavy_half < heavy_dt && heavy_fraction >= 0.9;
  return {in_box && fraction >= 0.9 && heavy_ok,
          fmt("pre-clamp gates in [%.4f, %.4f]; clamp events dt/2 <= dt in %.0f%% of pairs "
              "(totals %zu at dt, %zu at dt/2); sigma=8: %.0f%% of pairs (totals %zu, %zu)",
              lo, hi, 100.0 * fraction, total_dt, total_half, 100.0 * heavy_fraction, heavy_dt,
              heavy_half)};
}

Outcome fbm_correctness() {
  // (a) Wood-Chan path covariance against the closed form.
  constexpr std::size_t steps = 64, paths_a = 10000;
  const double h = 0.75;
  const std::pair<std::size_t, std::size_t> probes[10] = {
      {1, 1}, {1, 64}, {4, 8}, {8, 56}, {16, 16}, {16, 48}, {20, 21}, {32, 64}, {50, 60}, {64, 64}};
  FbmSampler wc(steps, h, Generator::wood_chan);
  std::vector<double> sum(10, 0.0), sum2(10, 0.0);
  for (std::size_t p = 0; p < paths_a; ++p) {
    const FbmPath path = wc.sample(1.0, derive_seed(100, p));
    for (std::size_t k = 0; k < 10; ++k) {
      const double x = path.values[probes[k].first] * path.values[probes[k].second];
      sum[k] += x;
      sum2[k] += x * x;
    }
  }
  double worst_z = 0.0;
  for (std::size_t k = 0; k < 10; ++k) {
    const double n = static_cast<double>(paths_a);
    const double mean = sum[k] / n;
    const double se = std::sqrt((sum2[k] / n - mean * mean) / (n - 1.0));
    const double exact = fbm_covariance(probes[k].first / 64.0, probes[k].second / 64.0, h);
    worst_z = std::max(worst_z, std::abs(mean - exact) / se);
  }

  // (b) Wood-Chan against the Cholesky reference on unit-step increments.
  constexpr std::size_t n = 256, paths_b = 1000000, paths_snapshot = 100000;
  struct Moments {
    std::vector<double> acc, mean;
    std::vector<double> covariance(std::size_t count) const {
      std::vector<double> c(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          c[i * n + j] = acc[i * n + j] / count - (mean[i] / count) * (mean[j] / count);
        }
      }
      return c;
    }
  };
  auto empirical = [&](Generator g, std::uint64_t master) {
    FbmSampler sampler(n, h, g);
    Moments m{std::vector<double>(n * n, 0.0), std::vector<double>(n, 0.0)};
    Moments snapshot;
    std::vector<double> x(n);
    for (std::size_t p = 0; p < paths_b; ++p) {
      sampler.sample_noise(derive_seed(master, p), x);
      for (std::size_t i = 0; i < n; ++i) {
        m.mean[i] += x[i];
        double* row = &m.acc[i * n];
        const double xi = x[i];
        for (std::size_t j = 0; j <= i; ++j) row[j] += xi * x[j];
      }
      if (p + 1 == paths_snapshot) snapshot = m;
    }
    return std::pair{m.covariance(paths_b), snapshot.covariance(paths_snapshot)};
  };
  const auto [a, a_snapshot] = empirical(Generator::wood_chan, 200);
  const auto [b, b_snapshot] = empirical(Generator::cholesky, 300);
  auto max_abs_gap = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        worst = std::max(worst, std::abs(u[i * n + j] - v[i * n + j]));
      }
    }
    return worst;
  };
  const double max_abs = max_abs_gap(a, b);
  const double max_abs_snapshot = max_abs_gap(a_snapshot, b_snapshot);

  // (c) Brownian increments are uncorrelated at lags 1..5.
  constexpr std::size_t n_bm = 1 << 17;
  FbmSampler bm(n_bm, 0.5, Generator::wood_chan);
  std::vector<double> inc(n_bm);
  bm.sample_noise(400, inc);
  double mean = 0.0;
  for (double v : inc) mean += v;
  mean /= n_bm;
  double c0 = 0.0;
  for (double v : inc) c0 += (v - mean) * (v - mean);
  double worst_rho = 0.0;
  for (std::size_t lag = 1; lag <= 5; ++lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + lag < n_bm; ++i) c += (inc[i] - mean) * (inc[i + lag] - mean);
    worst_rho = std::max(worst_rho, std::abs(c / c0));
  }
  const double rho_bound = 3.0 / std::sqrt(static_cast<double>(n_bm));

  return {worst_z <= 3.0 && max_abs <= 0.02 && worst_rho < rho_bound,
          fmt("closed form: worst |z| = %.2f over 10 pairs; Wood-Chan vs Cholesky max-abs "
              "%.4f (N=256, %zu paths each; %.4f after the first %zu); H=0.5 max |rho_1..5| = %.2e "
              "(bound %.2e)",
              worst_z, max_abs, paths_b, max_abs_snapshot, paths_snapshot, worst_rho, rho_bound)};
}

Outcome regularity_control() {
  const double hursts[3] = {0.55, 0.75, 0.95};

  // (a) Raw fBm at N = 2^14, five independent paths per H.
  double worst_raw = 0.0;
  std::string raw_detail;
  for (double h : hursts) {
    FbmSampler sampler(1 << 14, h, Generator::wood_chan);
    double sum_est = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const FbmPath path = sampler.sample(1.0, derive_seed(500, seed));
      const double e = estimate_holder(path.values, path.dt()).exponent;
      worst_raw = std::max(worst_raw, std::abs(e - h));
      sum_est += e;
    }
    raw_detail += fmt("%s%.3f", raw_detail.empty() ? "" : "/", sum_est / 5.0);
  }

  // (b) Ensemble medians of the gate-path exponent, 20 seeds per H.
  const HHParams p = table_params(0.25);
  std::vector<double> exps(60);
  parallel_for(exps.size(), [&](std::size_t job) {
    SolverConfig c;
    c.hurst = hursts[job / 20];
    c.seed = derive_seed(600, job);
    const SimulationResult r = simulate(equilibrium(0.0), p, c);
    exps[job] = estimate_holder(r, Coordinate::n).exponent;
  });
  double med[3];
  for (int k = 0; k < 3; ++k) {
    med[k] = median(std::vector<double>(exps.begin() + 20 * k, exps.begin() + 20 * (k + 1)));
  }
  const bool increasing = med[0] < med[1] && med[1] < med[2];

  // (c) Recording series with a decreasing Hurst sequence.
  const double seq[3] = {0.9, 0.7, 0.55};
  SolverConfig c;
  c.seed = 700;
  const RecordingSeries series = simulate_recording_series(seq, p, c);
  const auto& recs = series.recordings;
  const bool non_increasing = recs[0].median_exponent >= recs[1].median_exponent &&
                              recs[1].median_exponent >= recs[2].median_exponent;

  return {worst_raw <= 0.1 && increasing && non_increasing,
          fmt("raw fBm mean estimates %s (worst error %.3f); gate medians %.3f < %.3f < %.3f; "
              "series medians %.3f >= %.3f >= %.3f",
              raw_detail.c_str(), worst_raw, med[0], med[1], med[2], recs[0].median_exponent,
              recs[1].median_exponent, recs[2].median_exponent)};
}

Outcome gronwall_bound() {
  const std::size_t runs = sweep_bounds.runs + stochastic_bounds.runs;
  const std::size_t violations = sweep_bounds.violations + stochastic_bounds.violations;
  const double worst = std::max(sweep_bounds.worst_log_ratio, stochastic_bounds.worst_log_ratio);
  return {runs > 0 && violations == 0,
          fmt("%zu runs, %zu violations; largest log(max|V| / bound) = %.4g", runs, violations,
              worst)};
}

Outcome convergence() {
  const double dts[5] = {0.02, 0.01, 0.005, 0.0025, 0.00125};
  const State x0 = equilibrium(0.0);
  const ConvergenceTable det = convergence_probe(x0, table_params(), 50.0, 0.75, 0, dts);
  const ConvergenceTable sto = convergence_probe(x0, table_params(0.25), 50.0, 0.75, 1, dts);
  bool monotone = sto.rows.size() == 4;
  std::string gaps;
  for (std::size_t i = 0; i < sto.rows.size(); ++i) {
    if (i > 0 && !(sto.rows[i].gap_to_next < sto.rows[i - 1].gap_to_next)) monotone = false;
    gaps += fmt("%s%.3g", i ? ", " : "", sto.rows[i].gap_to_next);
  }
  const bool order_ok = det.observed_order >= 0.8 && det.observed_order <= 1.2;
  return {order_ok && monotone,
          fmt("deterministic order %.3f; stochastic (H=0.75) gaps %s", det.observed_order,
              gaps.c_str())};
}

Outcome stage_switching() {
  constexpr std::size_t seeds = 10;
  const HHParams p = table_params(0.25);
  std::vector<std::size_t> distinct(seeds);
  parallel_for(seeds, [&](std::size_t seed) {
    SolverConfig c;
    c.horizon = 1000.0;
    c.hurst = 0.9;
    c.seed = seed;
    distinct[seed] = stage_switch_run(p, c).windows.distinct_labels();
  });
  const auto switched = std::count_if(distinct.begin(), distinct.end(),
                                      [](std::size_t d) { return d >= 2; });
  std::string labels;
  for (std::size_t d : distinct) labels += std::to_string(d);
  return {switched >= 1,
          fmt("%ld of 10 seeds show >= 2 distinct window labels (per seed: %s)",
              static_cast<long>(switched), labels.c_str())};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "equilibrium values", equilibrium_values},
      {2, "bifurcation regimes", bifurcation_regimes},
      {3, "viability condition", viability_condition},
      {4, "stochastic viability", stochastic_viability},
      {5, "fBm generator correctness", fbm_correctness},
      {6, "regularity control", regularity_control},
      {7, "Gronwall bound", gronwall_bound},
      {8, "convergence", convergence},
      {9, "stage switching", stage_switching},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", outcome.pass ? "PASS" : "FAIL", c.id,
                c.name, outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!outcome.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
