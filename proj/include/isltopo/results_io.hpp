#pragma once

// Files: per-trial results CSV, summary JSON, per-figure CSVs, PGA traces,
// candidate/satellite tables and the plain-text topology format
// "u_plane,u_idx,v_plane,v_idx".

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isltopo/config.hpp"
#include "isltopo/error.hpp"
#include "isltopo/experiment.hpp"
#include "isltopo/graph.hpp"
#include "isltopo/metrics.hpp"
#include "isltopo/orbit.hpp"

namespace isltopo {

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_optional(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); }

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  return out;
}

inline void close_checked(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw IoError(path, "write failed");
}

inline double parse_double(const std::string& s, const std::string& path, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError(path, "line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

inline long long parse_int(const std::string& s, const std::string& path, int line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError(path, "line " + std::to_string(line) + ": bad integer '" + s + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& s, const std::string& path, int line) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size() || s.empty() || s[0] == '-') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError(path, "line " + std::to_string(line) + ": bad seed '" + s + "'");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Results CSV

inline const std::vector<std::string>& results_columns() {
  static const std::vector<std::string> cols{"trial", "seed", "method", "model", "d_max_km", "diameter",
                                             "avg_max_hops", "n_edges", "min_degree", "stability", "lambda2",
                                             "wall_time_s"};
  return cols;
}

/// Upper-bound path delay in ms: every hop at the full d_max.
inline std::optional<double> latency_estimate_ms(const TrialResult& r, double km_per_ms) {
  if (r.failed || r.metrics.diameter_hops.is_infinite()) return std::nullopt;
  return r.metrics.diameter_hops.value() * r.d_max_km / km_per_ms;
}

/// Empty fields mark absent values; "inf" marks a disconnected diameter. The
/// trailing status column is "ok" or "failed".
inline std::string results_csv(const std::vector<TrialResult>& results, bool with_latency = false,
                               double km_per_ms = 300.0) {
  std::ostringstream os;
  for (const auto& c : results_columns()) os << c << ',';
  if (with_latency) os << "latency_ms,";
  os << "status\n";
  for (const auto& r : results) {
    const auto& m = r.metrics;
    os << r.trial_index << ',' << r.seed << ',' << to_string(r.method) << ',' << to_string(r.model) << ','
       << detail::fmt_double(r.d_max_km) << ',';
    if (r.failed) {
      os << ",,,,,";
    } else {
      os << m.diameter_hops.str() << ',' << detail::fmt_optional(m.avg_max_hops) << ',' << m.n_edges << ','
         << m.min_degree << ',' << detail::fmt_optional(m.stability_fraction) << ',';
    }
    os << detail::fmt_optional(r.lambda2_final) << ',' << detail::fmt_double(r.wall_time_s) << ',';
    if (with_latency) os << detail::fmt_optional(latency_estimate_ms(r, km_per_ms)) << ',';
    os << (r.failed ? "failed" : "ok") << '\n';
  }
  return os.str();
}

inline void write_results_csv(const std::string& path, const std::vector<TrialResult>& results,
                              bool with_latency = false, double km_per_ms = 300.0) {
  auto out = detail::open_out(path);
  out << results_csv(results, with_latency, km_per_ms);
  detail::close_checked(out, path);
}

/// Inverse of results_csv for the serialized fields.
inline std::vector<TrialResult> parse_results_csv(std::istream& in, const std::string& path = "<stream>") {
  std::string line;
  if (!std::getline(in, line)) throw IoError(path, "empty results file");
  const auto header = detail::split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const auto& c : results_columns())
    if (!col.count(c)) throw IoError(path, "missing column " + c);
  std::vector<TrialResult> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = detail::split_csv(line);
    if (f.size() != header.size()) throw IoError(path, "line " + std::to_string(lineno) + ": wrong field count");
    auto at = [&](const char* name) -> const std::string& { return f[col.at(name)]; };
    TrialResult r;
    r.trial_index = static_cast<int>(detail::parse_int(at("trial"), path, lineno));
    r.seed = detail::parse_u64(at("seed"), path, lineno);
    try {
      r.method = parse_method(at("method"));
      r.model = parse_model(at("model"));
    } catch (const ConfigError& e) {
      throw IoError(path, "line " + std::to_string(lineno) + ": " + e.what());
    }
    r.d_max_km = detail::parse_double(at("d_max_km"), path, lineno);
    r.failed = col.count("status") && at("status") == "failed";
    if (!r.failed) {
      const auto& d = at("diameter");
      r.metrics.diameter_hops = d == "inf" ? Hops::infinite() : Hops(static_cast<int>(detail::parse_int(d, path, lineno)));
      if (!at("avg_max_hops").empty()) r.metrics.avg_max_hops = detail::parse_double(at("avg_max_hops"), path, lineno);
      r.metrics.n_edges = static_cast<int>(detail::parse_int(at("n_edges"), path, lineno));
      r.metrics.min_degree = static_cast<int>(detail::parse_int(at("min_degree"), path, lineno));
      if (!at("stability").empty()) r.metrics.stability_fraction = detail::parse_double(at("stability"), path, lineno);
    }
    if (!at("lambda2").empty()) r.lambda2_final = detail::parse_double(at("lambda2"), path, lineno);
    r.wall_time_s = detail::parse_double(at("wall_time_s"), path, lineno);
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<TrialResult> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open results file");
  return parse_results_csv(in, path);
}

// ---------------------------------------------------------------------------
// Summary JSON and figure tables

inline nlohmann::json stat_json(const std::optional<Stat>& s) {
  if (!s) return nullptr;
  return {{"min", s->min}, {"max", s->max}, {"mean", s->mean}, {"count", s->count}};
}

inline nlohmann::json summary_json(const std::vector<SummaryStats>& summaries) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& s : summaries)
    groups.push_back({{"method", to_string(s.method)},
                      {"model", to_string(s.model)},
                      {"d_max_km", s.d_max_km},
                      {"n_trials", s.n_trials},
                      {"n_failed", s.n_failed},
                      {"n_disconnected", s.n_disconnected},
                      {"diameter", stat_json(s.diameter)},
                      {"avg_max_hops", stat_json(s.avg_max_hops)},
                      {"n_edges", stat_json(s.n_edges)},
                      {"min_degree", stat_json(s.min_degree)},
                      {"stability", stat_json(s.stability)},
                      {"lambda2", stat_json(s.lambda2)}});
  return groups;
}

/// One table per (metric, model): d_max_km,method,min,mean,max,count.
inline std::map<std::string, std::string> figure_tables(const std::vector<SummaryStats>& summaries) {
  std::map<std::string, std::string> files;
  for (const char* metric : {"diameter", "avg_max_hops"}) {
    for (auto model : {FeasibilityModel::snapshot, FeasibilityModel::viability}) {
      std::ostringstream os;
      bool any = false;
      os << "d_max_km,method,min,mean,max,count\n";
      for (const auto& s : summaries) {
        if (s.model != model) continue;
        const auto& st = std::string(metric) == "diameter" ? s.diameter : s.avg_max_hops;
        os << detail::fmt_double(s.d_max_km) << ',' << to_string(s.method) << ',';
        if (st) os << detail::fmt_double(st->min) << ',' << detail::fmt_double(st->mean) << ',' << detail::fmt_double(st->max) << ',' << st->count;
        else os << ",,,0";
        os << '\n';
        any = true;
      }
      if (any) files[std::string("fig_") + metric + "_" + to_string(model) + ".csv"] = os.str();
    }
  }
  return files;
}

/// results.csv, summary.json and the figure CSVs under `dir`.
inline void write_results(const std::string& dir, const ExperimentResult& result, const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir, "cannot create directory: " + ec.message());
  write_results_csv((fs::path(dir) / "results.csv").string(), result.trials, cfg.report_latency,
                    cfg.latency_report_km_per_ms);
  {
    const auto path = (fs::path(dir) / "summary.json").string();
    auto out = detail::open_out(path);
    out << nlohmann::json{{"config", config_to_json(cfg)}, {"groups", summary_json(result.summaries)}}.dump(2) << '\n';
    detail::close_checked(out, path);
  }
  for (const auto& [name, body] : figure_tables(result.summaries)) {
    const auto path = (fs::path(dir) / name).string();
    auto out = detail::open_out(path);
    out << body;
    detail::close_checked(out, path);
  }
}

// ---------------------------------------------------------------------------
// Metrics, traces, candidates, topologies

inline nlohmann::json metrics_json(const TopologyMetrics& m) {
  nlohmann::json j;
  if (m.diameter_hops.is_finite()) j["diameter"] = m.diameter_hops.value();
  else j["diameter"] = "inf";
  j["avg_max_hops"] = m.avg_max_hops ? nlohmann::json(*m.avg_max_hops) : nlohmann::json(nullptr);
  j["n_edges"] = m.n_edges;
  j["n_nodes"] = m.n_nodes;
  j["min_degree"] = m.min_degree;
  j["max_degree"] = m.max_degree;
  j["degree_histogram"] = m.degree_histogram;
  j["stability"] = m.stability_fraction ? nlohmann::json(*m.stability_fraction) : nlohmann::json(nullptr);
  return j;
}

inline void write_trace_csv(const std::string& path, const PgaTrace& trace) {
  auto out = detail::open_out(path);
  out << "t,lambda2,penalty,objective,max_violation,rho,eta,cluster_size\n";
  for (const auto& r : trace)
    out << r.t << ',' << detail::fmt_double(r.lambda2) << ',' << detail::fmt_double(r.penalty) << ','
        << detail::fmt_double(r.objective) << ',' << detail::fmt_double(r.max_violation) << ','
        << detail::fmt_double(r.rho) << ',' << detail::fmt_double(r.eta) << ',' << r.cluster_size << '\n';
  detail::close_checked(out, path);
}

inline void write_candidates_csv(const std::string& path, const CandidateEdgeSet& edges) {
  auto out = detail::open_out(path);
  out << "u,v,kind,distance_km\n";
  for (const auto& e : edges.edges())
    out << e.u << ',' << e.v << ',' << to_string(e.kind) << ',' << detail::fmt_double(e.distance_km) << '\n';
  detail::close_checked(out, path);
}

inline void write_satellites_csv(const std::string& path, const Constellation& c, double t0_s) {
  auto out = detail::open_out(path);
  out << "node,plane,index,phase_offset_rad,x_km,y_km,z_km\n";
  for (int node = 0; node < c.n_sats(); ++node) {
    const auto id = c.sat_of(node);
    const auto p = c.position_at(id, t0_s);
    out << node << ',' << id.plane << ',' << id.index << ',' << detail::fmt_double(c.phase_offsets()[id.plane]) << ','
        << detail::fmt_double(p.x()) << ',' << detail::fmt_double(p.y()) << ',' << detail::fmt_double(p.z()) << '\n';
  }
  detail::close_checked(out, path);
}

inline std::string topology_text(const Topology& t) {
  const int ns = t.candidates().sats_per_plane();
  std::ostringstream os;
  for (auto [u, v] : t.edge_pairs()) os << u / ns << ',' << u % ns << ',' << v / ns << ',' << v % ns << '\n';
  return os.str();
}

inline void write_topology_file(const std::string& path, const Topology& t) {
  auto out = detail::open_out(path);
  out << topology_text(t);
  detail::close_checked(out, path);
}

/// Every listed link must be a candidate edge. Blank lines and lines starting
/// with '#' are skipped.
inline Topology parse_topology(std::istream& in, const CandidateEdgeSetPtr& edges, const std::string& path = "<stream>") {
  if (!edges) throw ArgumentError("null candidate set");
  const int ns = edges->sats_per_plane();
  const int np = edges->n_nodes() / ns;
  std::vector<int> selected;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    const auto f = detail::split_csv(line);
    if (f.size() != 4) throw IoError(path, "line " + std::to_string(lineno) + ": expected u_plane,u_idx,v_plane,v_idx");
    int v[4];
    for (int i = 0; i < 4; ++i) v[i] = static_cast<int>(detail::parse_int(f[i], path, lineno));
    for (int i = 0; i < 4; i += 2)
      if (v[i] < 0 || v[i] >= np || v[i + 1] < 0 || v[i + 1] >= ns)
        throw IoError(path, "line " + std::to_string(lineno) + ": satellite out of range");
    const int k = edges->find(v[0] * ns + v[1], v[2] * ns + v[3]);
    if (k < 0) throw IoError(path, "line " + std::to_string(lineno) + ": link is not a feasible candidate");
    selected.push_back(k);
  }
  return Topology(edges, std::move(selected));
}

inline Topology read_topology_file(const std::string& path, const CandidateEdgeSetPtr& edges) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open topology file");
  return parse_topology(in, edges, path);
}

}  // namespace isltopo
