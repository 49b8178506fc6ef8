// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails. `--long` adds the full-scale regression.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "isltopo/isltopo.hpp"

using namespace isltopo;
using Pairs = std::vector<std::pair<int, int>>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  bool skipped = false;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

CandidateEdgeSetPtr plain(int n, const Pairs& pairs) {
  return std::make_shared<const CandidateEdgeSet>(CandidateEdgeSet::from_pairs(n, pairs));
}

Pairs gnp(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Pairs out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) out.emplace_back(i, j);
  return out;
}

Pairs with_cycle(int n, const Pairs& extra) {
  Pairs out;
  for (int i = 0; i < n; ++i) out.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
  for (auto p : extra)
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  return out;
}

Eigen::MatrixXd dense_laplacian(int n, const Pairs& pairs, const Eigen::VectorXd& x) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto [u, v] = pairs[k];
    l(u, u) += x[k];
    l(v, v) += x[k];
    l(u, v) -= x[k];
    l(v, u) -= x[k];
  }
  return l;
}

double dense_lambda2(int n, const Pairs& pairs, const Eigen::VectorXd& x) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense_laplacian(n, pairs, x), Eigen::EigenvaluesOnly)
      .eigenvalues()[1];
}

// Pairs in the order the candidate set stores them.
Pairs stored_pairs(const CandidateEdgeSet& g) {
  Pairs out;
  for (const auto& e : g.edges()) out.emplace_back(e.u, e.v);
  return out;
}

// --- 1 ---------------------------------------------------------------------

Outcome lemma1() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 49);
    const auto g = plain(n, gnp(n, u(rng), rng));
    const int m = g->n_edges();
    Eigen::VectorXd x(m);
    for (auto& v : x) v = u(rng);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, m);
    for (const auto& e : g->edges()) {
      b(e.u, e.index) = 1.0;
      b(e.v, e.index) = -1.0;
    }
    const Eigen::MatrixXd blb = b * x.asDiagonal() * b.transpose();
    worst = std::max(worst, (Eigen::MatrixXd(laplacian(*g, x)) - blb).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-12, fmt("200 graphs, max |L - B diag(x) B^T| = %.3g", worst)};
}

// --- 2 ---------------------------------------------------------------------

Outcome gradients() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const double h = 1e-6;
  double worst_sub = 0.0, worst_pen = 0.0;
  int graphs = 0, pen_checked = 0;
  while (graphs < 50) {
    const int n = 5 + static_cast<int>(rng() % 26);
    const auto g = plain(n, with_cycle(n, gnp(n, 0.2, rng)));
    const auto pairs = stored_pairs(*g);
    Eigen::VectorXd x(g->n_edges());
    for (auto& v : x) v = u(rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_laplacian(n, pairs, x));
    const auto& ev = es.eigenvalues();
    if (ev[2] - ev[1] < 1e-3 * std::max(1.0, ev[1])) continue;  // lambda_2 must be simple
    ++graphs;

    const auto eig = smallest_eigenpairs(laplacian(*g, x), std::min(n, 4));
    const Eigen::VectorXd grad = spectral_subgradient(*g, eig, {1});
    Eigen::VectorXd fd(g->n_edges());
    for (int k = 0; k < g->n_edges(); ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      fd[k] = (dense_lambda2(n, pairs, xp) - dense_lambda2(n, pairs, xm)) / (2 * h);
    }
    worst_sub = std::max(worst_sub, (grad - fd).cwiseAbs().maxCoeff() / grad.cwiseAbs().maxCoeff());

    const double budget = 1.0 + static_cast<int>(rng() % 3);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      s[pairs[k].first] += x[k];
      s[pairs[k].second] += x[k];
    }
    const Eigen::VectorXd pg = penalty_gradient(*g, x, budget);
    for (int k = 0; k < g->n_edges(); ++k) {
      const auto [a, b] = pairs[k];
      if (std::abs(s[a] - budget) < 1e-4 || std::abs(s[b] - budget) < 1e-4) continue;  // kink
      Eigen::VectorXd xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double f = (penalty(*g, xp, budget) - penalty(*g, xm, budget)) / (2 * h);
      worst_pen = std::max(worst_pen, std::abs(f - pg[k]) / std::max(1.0, std::abs(pg[k])));
      ++pen_checked;
    }
  }
  return {worst_sub <= 1e-5 && worst_pen <= 1e-6,
          fmt("50 graphs: subgradient rel err %.3g (<= 1e-5), penalty rel err %.3g over %d entries (<= 1e-6)",
              worst_sub, worst_pen, pen_checked)};
}

// --- 3 ---------------------------------------------------------------------

Pairs circulant(int n, const std::vector<int>& jumps) {
  Pairs out;
  for (int i = 0; i < n; ++i)
    for (int j : jumps) {
      const int a = i, b = (i + j) % n;
      const auto p = std::pair(std::min(a, b), std::max(a, b));
      if (a != b && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
  return out;
}

Outcome cluster_invariance() {
  std::mt19937_64 rng(303);
  std::normal_distribution<double> gauss;
  struct Case {
    int n;
    Pairs pairs;
  };
  std::vector<Case> cases{{4, circulant(4, {1})}};
  while (cases.size() < 21) {
    const int n = 6 + static_cast<int>(rng() % 25);
    std::vector<int> jumps{1};
    const int extra = static_cast<int>(rng() % 3);
    for (int i = 0; i < extra; ++i) jumps.push_back(2 + static_cast<int>(rng() % (n / 2 - 1)));
    cases.push_back({n, circulant(n, jumps)});
  }
  double worst = 0.0;
  int min_cluster = std::numeric_limits<int>::max();
  for (const auto& c : cases) {
    const auto g = plain(c.n, c.pairs);
    const Eigen::VectorXd x = Eigen::VectorXd::Ones(g->n_edges());
    EigenOptions opt;
    opt.method = EigenMethod::dense;
    const auto eig = smallest_eigenpairs(laplacian(*g, x), c.n, opt);
    const auto cluster = active_cluster(eig.values, cluster_epsilon(eig.values[1]));
    min_cluster = std::min(min_cluster, static_cast<int>(cluster.size()));
    const Eigen::VectorXd ref = spectral_subgradient(*g, eig, cluster);
    const int k = static_cast<int>(cluster.size());
    for (int rep = 0; rep < 10; ++rep) {
      Eigen::MatrixXd a(k, k);
      for (auto& v : a.reshaped()) v = gauss(rng);
      const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
      auto mixed = eig;
      Eigen::MatrixXd cols(c.n, k);
      for (int i = 0; i < k; ++i) cols.col(i) = eig.vectors.col(cluster[i]);
      cols = cols * q;
      for (int i = 0; i < k; ++i) mixed.vectors.col(cluster[i]) = cols.col(i);
      worst = std::max(worst, (spectral_subgradient(*g, mixed, cluster) - ref).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-10 && min_cluster >= 2,
          fmt("C4 + 20 circulants, smallest cluster %d, max deviation %.3g", min_cluster, worst)};
}

// --- 4 ---------------------------------------------------------------------

double exhaustive_best(const CandidateEdgeSet& g, const Eigen::VectorXd& x, int budget) {
  const int m = g.n_edges();
  std::vector<int> deg(static_cast<std::size_t>(g.n_nodes()), 0);
  std::vector<char> chosen(static_cast<std::size_t>(m), 0);
  double best = 0.0;
  std::function<void(int)> visit = [&](int k) {
    if (k == m) {
      double obj = 0.0;
      for (int i = 0; i < m; ++i)
        if (chosen[i]) obj += x[i];
      best = std::max(best, obj);
      return;
    }
    const auto& e = g.edge(k);
    if (deg[e.u] < budget && deg[e.v] < budget) {
      ++deg[e.u], ++deg[e.v], chosen[k] = 1;
      visit(k + 1);
      --deg[e.u], --deg[e.v], chosen[k] = 0;
    }
    visit(k + 1);
  };
  visit(0);
  return best;
}

Outcome rounding_exact() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int mismatches = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 9);
    auto pairs = gnp(n, 0.3 + 0.5 * u(rng), rng);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    pairs.resize(std::min<std::size_t>(pairs.size(), 1 + rng() % 18));
    const auto g = plain(n, pairs);
    Eigen::VectorXd x(g->n_edges());
    for (auto& v : x) {
      const double r = u(rng);
      // Dyadic strengths make sums exact; the rest are generic reals.
      v = r < 0.1 ? 0.0 : r < 0.2 ? 1.0 : (trial % 2 ? std::floor(u(rng) * 1024) / 1024 : u(rng));
    }
    const int budget = 1 + static_cast<int>(rng() % 4);
    const auto t = round_topology(g, x, budget);
    if (!verify_degree_feasible(t, budget).feasible) ++infeasible;
    double obj = 0.0;
    for (int k = 0; k < g->n_edges(); ++k)
      if (std::binary_search(t.selected().begin(), t.selected().end(), k)) obj += x[k];
    if (obj != exhaustive_best(*g, x, budget)) ++mismatches;
  }
  return {mismatches == 0 && infeasible == 0,
          fmt("300 instances (M <= 18): %d objective mismatches, %d degree violations", mismatches, infeasible)};
}

// --- 5 ---------------------------------------------------------------------

Outcome metrics_oracle() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0;
  const int inf = std::numeric_limits<int>::max() / 4;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 50);
    const auto pairs = gnp(n, u(rng) * 6.0 / std::max(1, n), rng);
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (int i = 0; i < n; ++i) d[i][i] = 0;
    for (auto [a, b] : pairs) d[a][b] = d[b][a] = 1;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    std::vector<int> all(pairs.size());
    std::iota(all.begin(), all.end(), 0);
    const Topology t(plain(n, pairs), all);
    const auto ecc = eccentricities(t);
    int diameter = 0;
    for (int i = 0; i < n; ++i) {
      const int e = *std::max_element(d[i].begin(), d[i].end());
      diameter = std::max(diameter, e);
      const Hops want = e >= inf ? Hops::infinite() : Hops(e);
      if (ecc[i] != want) ++bad;
    }
    const Hops want_d = diameter >= inf ? Hops::infinite() : Hops(diameter);
    if (evaluate_topology(t).diameter_hops != want_d) ++bad;
  }
  return {bad == 0, fmt("100 graphs (N <= 50): %d disagreements with Floyd-Warshall", bad)};
}

// --- 6 ---------------------------------------------------------------------

double cheeger_oracle(int n, const Pairs& pairs) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int size = std::popcount(mask);
    if (2 * size > n) continue;
    int cut = 0;
    for (auto [a, b] : pairs) cut += ((mask >> a) & 1u) != ((mask >> b) & 1u);
    best = std::min(best, static_cast<double>(cut) / size);
  }
  return best;
}

bool connected(int n, const Pairs& pairs) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (auto [a, b] : pairs) parent[find(a)] = find(b);
  for (int v = 0; v < n; ++v)
    if (find(v) != find(0)) return false;
  return true;
}

// Random graph with every degree at most dmax.
Pairs degree_bounded(int n, int dmax, int attempts, std::mt19937_64& rng) {
  std::vector<int> deg(n, 0);
  Pairs out;
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int i = 0; i < attempts; ++i) {
    int a = pick(rng), b = pick(rng);
    if (a == b || deg[a] >= dmax || deg[b] >= dmax) continue;
    const auto p = std::pair(std::min(a, b), std::max(a, b));
    if (std::find(out.begin(), out.end(), p) != out.end()) continue;
    out.push_back(p);
    ++deg[a];
    ++deg[b];
  }
  return out;
}

Outcome cheeger_sandwich() {
  std::mt19937_64 rng(606);
  int samples = 0, violations = 0;
  double tightest = std::numeric_limits<double>::infinity();
  while (samples < 240) {
    const int n = 3 + static_cast<int>(rng() % 10);
    Pairs pairs;
    switch (samples % 4) {
      case 0: pairs = degree_bounded(n, 4, 4 * n, rng); break;
      case 1: pairs = degree_bounded(n, 3, 8 * n, rng); break;
      case 2:  // random tree with degree <= 4
        for (int v = 1; v < n; ++v) {
          int p = static_cast<int>(rng() % v);
          while (std::count_if(pairs.begin(), pairs.end(), [&](auto e) { return e.first == p || e.second == p; }) >= 4)
            p = static_cast<int>(rng() % v);
          pairs.emplace_back(p, v);
        }
        break;
      default:
        pairs = with_cycle(n, {});
        if (n > 3) pairs = with_cycle(n, degree_bounded(n, 2, n, rng));
        break;
    }
    bool ok = true;
    std::vector<int> deg(n, 0);
    for (auto [a, b] : pairs) ok &= ++deg[a] <= 4 && ++deg[b] <= 4;
    if (!ok || !connected(n, pairs)) continue;
    ++samples;
    const auto g = plain(n, pairs);
    const double l2 = algebraic_connectivity(*g, Eigen::VectorXd::Ones(g->n_edges()));
    const double h = cheeger_oracle(n, pairs);
    const double slack = 1e-9;
    if (l2 / 2 > h + slack || h > std::sqrt(2 * l2) + slack) ++violations;
    tightest = std::min(tightest, std::min(h - l2 / 2, std::sqrt(2 * l2) - h));
  }
  return {violations == 0 && samples >= 200,
          fmt("%d connected graphs (N <= 12, max degree <= 4): %d violations, tightest margin %.3g", samples,
              violations, tightest)};
}

// --- 7 ---------------------------------------------------------------------

bool feasible_oracle(const Vec3& a, const Vec3& b, double dmax, double re) {
  const double d = (a - b).norm();
  return d > 0.0 && d <= dmax && a.cross(b).norm() / d > re;
}

Outcome model_inclusion() {
  std::mt19937_64 rng(707);
  int not_subset = 0, unstable = 0, topologies = 0, links = 0;
  for (int trial = 0; trial < 20; ++trial) {
    ConstellationConfig cc;
    cc.n_planes = 3 + static_cast<int>(rng() % 6);
    cc.sats_per_plane = 6 + static_cast<int>(rng() % 9);
    cc.altitude_km = 500 + static_cast<double>(rng() % 700);
    const auto c = build_constellation(cc, rng());
    FeasibilityConfig fc;
    fc.d_max_km = 2500 + static_cast<double>(rng() % 3000);
    const double t0 = static_cast<double>(rng() % 3000);
    const auto snap = snapshot_candidates(c, t0, fc);
    auto vc = fc;
    vc.model = FeasibilityModel::viability;
    const auto viable = std::make_shared<const CandidateEdgeSet>(viable_candidates(c, t0, vc));
    for (const auto& e : viable->edges())
      if (snap.find(e.u, e.v) < 0) ++not_subset;

    HeuristicConfig hc;
    hc.iterations = 60;
    hc.perturbation_size = std::min(5, c.n_sats());
    Rng hr(rng());
    const auto heur = run_heuristic(viable, hc, hr).topology;
    Eigen::VectorXd x(viable->n_edges());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : x) v = u(rng);
    const auto rounded = round_topology(viable, x, 4);
    for (const auto* t : {&heur, &rounded}) {
      ++topologies;
      for (auto [a, b] : t->edge_pairs()) {
        ++links;
        bool stable = true;
        for (int i = 0; i < 64; ++i) {
          const double t_s = t0 + i * c.period_s() / 63.0;
          stable &= feasible_oracle(c.position_at(a, t_s), c.position_at(b, t_s), fc.d_max_km, cc.earth_radius_km);
        }
        unstable += !stable;
      }
      if (!t->empty() && stability_fraction(*t, c, t0, vc) != 1.0)
        ++unstable;
    }
  }
  return {not_subset == 0 && unstable == 0,
          fmt("20 constellations: %d viable links outside snapshot; %d of %d links in %d viability topologies not "
              "stable",
              not_subset, unstable, links, topologies)};
}

// --- 8 and 10 ----------------------------------------------------------------

ExperimentConfig desk_config() {
  ExperimentConfig cfg;
  cfg.constellation.n_planes = 10;
  cfg.constellation.sats_per_plane = 10;
  cfg.constellation.altitude_km = 550.0;
  cfg.feasibility.d_max_km = 3500.0;
  cfg.trials = 10;
  cfg.base_seed = 1;
  return cfg;
}

struct DeskRun {
  ExperimentResult result;
  double seconds = 0.0;
};

Outcome desk_scale(DeskRun& run) {
  const auto cfg = desk_config();
  const auto t0 = std::chrono::steady_clock::now();
  run.result = run_experiment(cfg, 0, [](const TrialResult& r) {
    std::fprintf(stderr, "  trial %d %s: diameter %s, min degree %d, %.1f s%s\n", r.trial_index, to_string(r.method),
                 r.metrics.diameter_hops.str().c_str(), r.metrics.min_degree, r.wall_time_s, r.failed ? " FAILED" : "");
  });
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  int not_worse = 0, full_degree = 0, failed = 0;
  std::string diam_s, diam_h;
  for (int i = 0; i < cfg.trials; ++i) {
    const TrialResult* h = nullptr;
    const TrialResult* s = nullptr;
    for (const auto& r : run.result.trials)
      if (r.trial_index == i) (r.method == Method::spectral ? s : h) = &r;
    if (s->failed) {
      ++failed;
      diam_s += " X";
    } else {
      not_worse += s->metrics.diameter_hops <= h->metrics.diameter_hops;
      full_degree += s->metrics.min_degree == 4;
      diam_s += " " + s->metrics.diameter_hops.str();
    }
    diam_h += " " + h->metrics.diameter_hops.str();
  }
  const bool pass = not_worse >= 9 && full_degree >= 9 && run.seconds < 900.0;
  return {pass, fmt("N=100, 10 trials: spectral <= heuristic diameter in %d/10, spectral min-degree 4 in %d/10, %d "
                    "failed, %.0f s (< 900 s); spectral [%s ] heuristic [%s ]",
                    not_worse, full_degree, failed, run.seconds, diam_s.c_str(), diam_h.c_str())};
}

Outcome determinism(const DeskRun& desk) {
  int differ = 0, compared = 0;
  auto same = [&](const TrialResult& a, const TrialResult& b) {
    ++compared;
    const bool eq = a.topology.edge_pairs() == b.topology.edge_pairs() &&
                    a.metrics.diameter_hops == b.metrics.diameter_hops &&
                    a.metrics.avg_max_hops == b.metrics.avg_max_hops && a.metrics.n_edges == b.metrics.n_edges &&
                    a.metrics.min_degree == b.metrics.min_degree &&
                    a.metrics.stability_fraction == b.metrics.stability_fraction &&
                    a.lambda2_final == b.lambda2_final && a.failed == b.failed;
    differ += !eq;
  };
  // Repeat one desk-scale trial against the recorded run.
  const auto cfg = desk_config();
  const int idx = 3;
  for (const auto& again : run_trial(cfg, idx))
    for (const auto& r : desk.result.trials)
      if (r.trial_index == idx && r.method == again.method) same(r, again);

  // Both models on a smaller shell, twice each, with different job counts.
  ExperimentConfig small;
  small.constellation.n_planes = 6;
  small.constellation.sats_per_plane = 12;
  small.feasibility.d_max_km = 4000;
  small.models = {FeasibilityModel::snapshot, FeasibilityModel::viability};
  small.pga.t_max = 800;
  small.trials = 2;
  small.base_seed = 77;
  const auto a = run_experiment(small, 1);
  const auto b = run_experiment(small, 2);
  for (std::size_t i = 0; i < a.trials.size() && i < b.trials.size(); ++i) same(a.trials[i], b.trials[i]);
  if (a.trials.size() != b.trials.size()) ++differ;
  return {differ == 0 && compared == 2 + static_cast<int>(a.trials.size()),
          fmt("%d repeated trial results compared, %d differ", compared, differ)};
}

// --- 9 ---------------------------------------------------------------------

Outcome full_scale() {
  ExperimentConfig cfg;
  cfg.constellation.n_planes = 25;
  cfg.constellation.sats_per_plane = 20;
  cfg.feasibility.d_max_km = 3500.0;
  cfg.models = {FeasibilityModel::snapshot, FeasibilityModel::viability};
  cfg.trials = 5;
  const auto result = run_experiment(cfg, 0, [](const TrialResult& r) {
    std::fprintf(stderr, "  trial %d %s %s: diameter %s, %.0f s\n", r.trial_index, to_string(r.method),
                 to_string(r.model), r.metrics.diameter_hops.str().c_str(), r.wall_time_s);
  });
  double snap_spec = 0, snap_heur = 0, via_spec = 0;
  double max_trial = 0.0;
  for (const auto& s : result.summaries) {
    const double mean = s.diameter && s.n_disconnected == 0 && s.n_failed == 0 ? s.diameter->mean
                                                                               : std::numeric_limits<double>::infinity();
    if (s.model == FeasibilityModel::snapshot) (s.method == Method::spectral ? snap_spec : snap_heur) = mean;
    else if (s.method == Method::spectral) via_spec = mean;
  }
  for (const auto& r : result.trials) max_trial = std::max(max_trial, r.wall_time_s);

  ExperimentConfig sweep;
  sweep.constellation.n_planes = 72;
  sweep.constellation.sats_per_plane = 22;
  sweep.feasibility.d_max_km = 2500.0;
  sweep.trials = 1;
  const auto smoke = run_trial(sweep, 0);
  const bool smoke_ok = !smoke[1].failed && smoke[1].metrics.diameter_hops < smoke[0].metrics.diameter_hops;

  const bool pass = snap_spec >= 9 && snap_spec <= 10 && snap_heur >= 10 && snap_heur <= 12 && via_spec >= 11 &&
                    via_spec <= 12 && max_trial < 1800 && smoke_ok;
  return {pass, fmt("N=500: snapshot spectral %.2f in [9,10], heuristic %.2f in [10,12], viability spectral %.2f in "
                    "[11,12], slowest trial %.0f s; N=1584 d_max 2500: spectral %s vs heuristic %s",
                    snap_spec, snap_heur, via_spec, max_trial, smoke[1].metrics.diameter_hops.str().c_str(),
                    smoke[0].metrics.diameter_hops.str().c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  bool long_run = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--long") == 0) long_run = true;

  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = o.skipped ? "SKIP" : (o.pass ? "PASS" : "FAIL");
    if (!o.skipped && !o.pass) ++failures;
    std::printf("%s %2d %s: %s [%.1f s]\n", tag, id, name, o.detail.c_str(), s);
    std::fflush(stdout);
  };

  DeskRun desk;
  report(1, "incidence identity", lemma1);
  report(2, "gradient checks", gradients);
  report(3, "cluster invariance", cluster_invariance);
  report(4, "rounding exactness", rounding_exact);
  report(5, "metrics oracle", metrics_oracle);
  report(6, "cheeger sandwich", cheeger_sandwich);
  report(7, "feasibility inclusion", model_inclusion);
  report(8, "desk-scale end-to-end", [&] { return desk_scale(desk); });
  report(9, "full-scale regression", [&] {
    if (!long_run) return Outcome{false, "optional; run with --long", true};
    return full_scale();
  });
  report(10, "determinism", [&] { return determinism(desk); });
  return failures == 0 ? 0 : 1;
}
