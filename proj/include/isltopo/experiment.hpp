#pragma once

// Seeded trials of the heuristic and spectral pipelines, the trial matrix over
// feasibility models and d_max values, and min/max/mean aggregation.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "isltopo/config.hpp"
#include "isltopo/eigensolver.hpp"
#include "isltopo/feasibility.hpp"
#include "isltopo/heuristic.hpp"
#include "isltopo/metrics.hpp"
#include "isltopo/orbit.hpp"
#include "isltopo/rounding.hpp"
#include "isltopo/spectral_opt.hpp"

namespace isltopo {

struct TrialResult {
  int trial_index = 0;
  std::uint64_t seed = 0;
  Method method = Method::heuristic;
  FeasibilityModel model = FeasibilityModel::snapshot;
  double d_max_km = 0.0;
  TopologyMetrics metrics;
  std::optional<double> lambda2_final;  ///< lambda_2 of the continuous optimum (spectral only)
  double wall_time_s = 0.0;
  bool failed = false;
  std::string error;

  Topology topology;  ///< not serialized
  PgaTrace trace;     ///< spectral only; not serialized
};

/// One cell of the trial matrix.
struct TrialPoint {
  FeasibilityModel model = FeasibilityModel::snapshot;
  double d_max_km = 3500.0;
};

/// Everything a trial derives from (config, seed) before any method runs.
struct Scenario {
  std::uint64_t seed = 0;
  TrialPoint point;
  FeasibilityConfig feasibility;
  Constellation constellation;
  CandidateEdgeSetPtr edges;
  std::vector<bool> stable_flags;   ///< per candidate edge
  std::optional<IntraplaneMask> fix;  ///< when fixed_intraplane is on
};

inline std::uint64_t trial_seed(const ExperimentConfig& cfg, int trial_index) {
  return cfg.base_seed + static_cast<std::uint64_t>(trial_index);
}

/// splitmix64 finalizer; decorrelates the search stream from the
/// constellation's phase-offset stream, which uses the raw seed.
inline std::uint64_t search_stream_seed(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Scenario build_scenario(const ExperimentConfig& cfg, std::uint64_t seed, const TrialPoint& point) {
  FeasibilityConfig fc = cfg.feasibility;
  fc.model = point.model;
  fc.d_max_km = point.d_max_km;
  fc.validate();
  auto constellation = build_constellation(cfg.constellation, seed);
  auto edges = std::make_shared<const CandidateEdgeSet>(build_candidates(constellation, cfg.t0_s, fc));
  auto flags = point.model == FeasibilityModel::viability
                   ? std::vector<bool>(static_cast<std::size_t>(edges->n_edges()), true)
                   : edge_stability_flags(*edges, constellation, cfg.t0_s, fc);
  Scenario s{seed, point, fc, std::move(constellation), std::move(edges), std::move(flags), std::nullopt};
  if (cfg.fixed_intraplane) s.fix = fixed_intraplane_mask(*s.edges, cfg.pga.degree_budget);
  return s;
}

namespace detail {

using clock = std::chrono::steady_clock;

inline double seconds_since(clock::time_point t0) {
  return std::chrono::duration<double>(clock::now() - t0).count();
}

inline TrialResult blank_result(const Scenario& s, int trial_index, Method method) {
  TrialResult r;
  r.trial_index = trial_index;
  r.seed = s.seed;
  r.method = method;
  r.model = s.point.model;
  r.d_max_km = s.point.d_max_km;
  return r;
}

inline void finish_metrics(TrialResult& r, const Scenario& s) {
  r.metrics = evaluate_topology(r.topology, &s.stable_flags);
}

}  // namespace detail

/// Runs the configured methods on one scenario. The heuristic always runs
/// (it warm-starts the spectral pipeline); both methods share one search
/// stream seeded from the trial seed. Eigensolver failures mark the spectral
/// result as failed instead of throwing.
inline std::vector<TrialResult> run_trial(const ExperimentConfig& cfg, int trial_index, const TrialPoint& point) {
  cfg.validate();
  const auto seed = trial_seed(cfg, trial_index);
  const Scenario s = build_scenario(cfg, seed, point);
  const FixMask* fix = s.fix ? &s.fix->mask : nullptr;

  Rng rng(search_stream_seed(seed));
  HeuristicConfig hc = cfg.heuristic;
  hc.stability_tiebreak = point.model == FeasibilityModel::snapshot;

  std::vector<TrialResult> out;
  auto t0 = detail::clock::now();
  const Incumbent inc = run_heuristic(s.edges, hc, rng, &s.stable_flags, fix);
  const double heuristic_time = detail::seconds_since(t0);
  if (cfg.runs(Method::heuristic)) {
    auto r = detail::blank_result(s, trial_index, Method::heuristic);
    r.topology = inc.topology;
    r.wall_time_s = heuristic_time;
    detail::finish_metrics(r, s);
    out.push_back(std::move(r));
  }
  if (cfg.runs(Method::spectral)) {
    auto r = detail::blank_result(s, trial_index, Method::spectral);
    t0 = detail::clock::now();
    try {
      const StrengthVector x0 = warm_start(inc.topology, *s.edges, cfg.pga.warm_background);
      auto pga = run_pga(*s.edges, cfg.pga, x0, fix);
      const std::vector<int> fixed_edges = s.fix ? s.fix->fixed_edges : std::vector<int>{};
      r.topology = round_topology(s.edges, pga.x, cfg.pga.degree_budget, fixed_edges, cfg.rounding);
      r.lambda2_final = pga.lambda2;
      r.trace = std::move(pga.trace);
      detail::finish_metrics(r, s);
    } catch (const PgaFailure& e) {
      r.failed = true;
      r.error = e.what();
      r.trace = e.trace();
    } catch (const NumericalError& e) {
      r.failed = true;
      r.error = e.what();
    }
    r.wall_time_s = heuristic_time + detail::seconds_since(t0);
    out.push_back(std::move(r));
  }
  return out;
}

/// First model and the configured d_max.
inline std::vector<TrialResult> run_trial(const ExperimentConfig& cfg, int trial_index) {
  return run_trial(cfg, trial_index, TrialPoint{cfg.models.front(), cfg.feasibility.d_max_km});
}

// ---------------------------------------------------------------------------
// Aggregation

struct Stat {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  int count = 0;
};

inline std::optional<Stat> make_stat(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  Stat s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  // Rounding in the sum must not push the mean outside [min, max].
  s.mean = std::clamp(sum / static_cast<double>(v.size()), s.min, s.max);
  s.count = static_cast<int>(v.size());
  return s;
}

struct SummaryStats {
  Method method = Method::heuristic;
  FeasibilityModel model = FeasibilityModel::snapshot;
  double d_max_km = 0.0;
  int n_trials = 0;
  int n_failed = 0;
  int n_disconnected = 0;  ///< successful trials with infinite diameter
  std::optional<Stat> diameter;  ///< connected trials only
  std::optional<Stat> avg_max_hops;
  std::optional<Stat> n_edges;
  std::optional<Stat> min_degree;
  std::optional<Stat> stability;
  std::optional<Stat> lambda2;
};

namespace detail {

inline SummaryStats aggregate(const std::vector<const TrialResult*>& group) {
  SummaryStats s;
  if (group.empty()) return s;
  s.method = group.front()->method;
  s.model = group.front()->model;
  s.d_max_km = group.front()->d_max_km;
  std::vector<double> diam, avg, edges, mindeg, stab, lam;
  for (const auto* r : group) {
    ++s.n_trials;
    if (r->failed) {
      ++s.n_failed;
      continue;
    }
    edges.push_back(r->metrics.n_edges);
    mindeg.push_back(r->metrics.min_degree);
    if (r->metrics.stability_fraction) stab.push_back(*r->metrics.stability_fraction);
    if (r->lambda2_final) lam.push_back(*r->lambda2_final);
    if (r->metrics.diameter_hops.is_infinite()) {
      ++s.n_disconnected;
      continue;
    }
    diam.push_back(r->metrics.diameter_hops.value());
    if (r->metrics.avg_max_hops) avg.push_back(*r->metrics.avg_max_hops);
  }
  s.diameter = make_stat(diam);
  s.avg_max_hops = make_stat(avg);
  s.n_edges = make_stat(edges);
  s.min_degree = make_stat(mindeg);
  s.stability = make_stat(stab);
  s.lambda2 = make_stat(lam);
  return s;
}

}  // namespace detail

/// Statistics over one group of results (same method, model and d_max).
inline SummaryStats summarize(const std::vector<TrialResult>& results) {
  std::vector<const TrialResult*> group;
  for (const auto& r : results) group.push_back(&r);
  auto s = detail::aggregate(group);
  if (s.n_trials - s.n_failed == 0) throw ArgumentError("no successful trials to summarize");
  return s;
}

/// One SummaryStats per (d_max, model, method), in first-appearance order.
/// Groups with no successful trial carry counts only.
inline std::vector<SummaryStats> summarize_groups(const std::vector<TrialResult>& results) {
  struct Key {
    double d;
    FeasibilityModel model;
    Method method;
    bool operator==(const Key&) const = default;
  };
  std::vector<Key> keys;
  std::vector<std::vector<const TrialResult*>> groups;
  for (const auto& r : results) {
    const Key k{r.d_max_km, r.model, r.method};
    auto it = std::find(keys.begin(), keys.end(), k);
    if (it == keys.end()) {
      keys.push_back(k);
      groups.emplace_back();
      it = keys.end() - 1;
    }
    groups[static_cast<std::size_t>(it - keys.begin())].push_back(&r);
  }
  std::vector<SummaryStats> out;
  for (const auto& g : groups) out.push_back(detail::aggregate(g));
  return out;
}

// ---------------------------------------------------------------------------
// Trial matrix

struct ExperimentResult {
  std::vector<TrialResult> trials;  ///< ordered by (d_max, model, trial index, method)
  std::vector<SummaryStats> summaries;
};

using TrialCallback = std::function<void(const TrialResult&)>;

/// Runs every (d_max, model, trial) cell on `jobs` worker threads (0 = all
/// cores). Output order does not depend on scheduling.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs = 0, const TrialCallback& on_trial = {}) {
  cfg.validate();
  struct Task {
    TrialPoint point;
    int trial_index;
  };
  std::vector<Task> tasks;
  for (double d : cfg.d_max_points())
    for (auto model : cfg.models)
      for (int t = 0; t < cfg.trials; ++t) tasks.push_back({{model, d}, t});

  std::vector<std::vector<TrialResult>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (first_error) return;
      }
      try {
        slots[i] = run_trial(cfg, tasks[i].trial_index, tasks[i].point);
        if (on_trial) {
          std::lock_guard<std::mutex> lock(mu);
          for (const auto& r : slots[i]) on_trial(r);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(1, tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  ExperimentResult out;
  for (auto& slot : slots)
    for (auto& r : slot) out.trials.push_back(std::move(r));
  out.summaries = summarize_groups(out.trials);
  return out;
}

}  // namespace isltopo
