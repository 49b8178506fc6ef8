#pragma once

// Experiment configuration and its JSON form. Keys match the struct field
// names; an unknown key anywhere is a ConfigError naming its path.

#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isltopo/eigensolver.hpp"
#include "isltopo/error.hpp"
#include "isltopo/feasibility.hpp"
#include "isltopo/heuristic.hpp"
#include "isltopo/orbit.hpp"
#include "isltopo/rounding.hpp"
#include "isltopo/spectral_opt.hpp"

namespace isltopo {

using json = nlohmann::json;

enum class Method { spectral, heuristic };

inline const char* to_string(Method m) { return m == Method::spectral ? "spectral" : "heuristic"; }

inline Method parse_method(const std::string& s) {
  if (s == "spectral") return Method::spectral;
  if (s == "heuristic") return Method::heuristic;
  throw ConfigError("method", "expected spectral or heuristic, got '" + s + "'");
}

/// "spectral" | "heuristic" | "both"
inline std::vector<Method> parse_methods(const std::string& s) {
  if (s == "both") return {Method::heuristic, Method::spectral};
  return {parse_method(s)};
}

/// "snapshot" | "viability" | "both"
inline std::vector<FeasibilityModel> parse_models(const std::string& s) {
  if (s == "both") return {FeasibilityModel::snapshot, FeasibilityModel::viability};
  return {parse_model(s)};
}

inline const char* to_string(RoundingMethod m) {
  switch (m) {
    case RoundingMethod::exact: return "exact";
    case RoundingMethod::greedy: return "greedy";
    default: return "auto";
  }
}

inline RoundingMethod parse_rounding_method(const std::string& s) {
  if (s == "auto") return RoundingMethod::automatic;
  if (s == "exact") return RoundingMethod::exact;
  if (s == "greedy") return RoundingMethod::greedy;
  throw ConfigError("rounding.method", "expected auto, exact or greedy, got '" + s + "'");
}

inline const char* to_string(EigenMethod m) {
  switch (m) {
    case EigenMethod::lobpcg: return "lobpcg";
    case EigenMethod::dense: return "dense";
    default: return "auto";
  }
}

inline EigenMethod parse_eigen_method(const std::string& s) {
  if (s == "auto") return EigenMethod::automatic;
  if (s == "lobpcg") return EigenMethod::lobpcg;
  if (s == "dense") return EigenMethod::dense;
  throw ConfigError("pga.eigen.method", "expected auto, lobpcg or dense, got '" + s + "'");
}

struct ExperimentConfig {
  ConstellationConfig constellation{25, 20};
  FeasibilityConfig feasibility;
  std::vector<FeasibilityModel> models{FeasibilityModel::snapshot};
  std::vector<Method> methods{Method::heuristic, Method::spectral};
  PgaConfig pga;
  HeuristicConfig heuristic;
  RoundingOptions rounding;
  int trials = 1;
  std::uint64_t base_seed = 1;
  double t0_s = 0.0;
  bool fixed_intraplane = false;
  std::vector<double> d_max_sweep;  ///< empty: single run at feasibility.d_max_km
  double latency_report_km_per_ms = 300.0;
  bool report_latency = false;

  bool runs(Method m) const { return std::find(methods.begin(), methods.end(), m) != methods.end(); }

  std::vector<double> d_max_points() const {
    return d_max_sweep.empty() ? std::vector<double>{feasibility.d_max_km} : d_max_sweep;
  }

  void validate() const {
    constellation.validate();
    feasibility.validate();
    pga.validate();
    heuristic.validate();
    if (trials < 1) throw ConfigError("trials", "must be >= 1");
    if (models.empty()) throw ConfigError("feasibility.model", "no feasibility model selected");
    if (methods.empty()) throw ConfigError("method", "no method selected");
    if (pga.degree_budget != heuristic.degree_budget)
      throw ConfigError("degree_budget", "pga.degree_budget and heuristic.degree_budget differ");
    if (heuristic.perturbation_size > constellation.n_sats())
      throw ConfigError("heuristic.perturbation_size", "exceeds satellite count");
    for (std::size_t i = 0; i < d_max_sweep.size(); ++i) {
      if (!(d_max_sweep[i] > 0.0)) throw ConfigError("d_max_sweep", "values must be > 0");
      if (i > 0 && !(d_max_sweep[i] > d_max_sweep[i - 1])) throw ConfigError("d_max_sweep", "values must ascend");
    }
    if (!(latency_report_km_per_ms > 0.0)) throw ConfigError("latency_report_km_per_ms", "must be > 0");
    if (rounding.exact_limit < 0) throw ConfigError("rounding.exact_limit", "must be >= 0");
  }
};

namespace detail {

// Reads the keys of one JSON object and rejects any it did not consume.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    if (!j_.contains(key)) return;
    used_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(name(key), std::string("wrong type: ") + e.what());
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  Section child(const char* key) {
    used_.insert(key);
    return Section(j_.at(key), name(key));
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& item : j_.items())
      if (!used_.count(item.key())) throw ConfigError(name(item.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

inline std::string models_string(const std::vector<FeasibilityModel>& models) {
  if (models.size() == 2) return "both";
  return to_string(models.front());
}

inline std::string methods_string(const std::vector<Method>& methods) {
  if (methods.size() == 2) return "both";
  return to_string(methods.front());
}

}  // namespace detail

inline ExperimentConfig config_from_json(const json& root) {
  ExperimentConfig cfg;
  detail::Section top(root, "");
  if (top.has("constellation")) {
    auto s = top.child("constellation");
    auto& c = cfg.constellation;
    s.get("n_planes", c.n_planes);
    s.get("sats_per_plane", c.sats_per_plane);
    s.get("altitude_km", c.altitude_km);
    s.get("inclination_rad", c.inclination_rad);
    s.get("max_phase_offset_rad", c.max_phase_offset_rad);
    s.get("earth_radius_km", c.earth_radius_km);
    s.get("gravitational_parameter_km3_s2", c.gravitational_parameter_km3_s2);
    s.finish();
  }
  if (top.has("feasibility")) {
    auto s = top.child("feasibility");
    s.get("d_max_km", cfg.feasibility.d_max_km);
    s.get("viability_samples", cfg.feasibility.viability_samples);
    std::string model;
    s.get("model", model);
    if (!model.empty()) {
      try {
        cfg.models = parse_models(model);
      } catch (const ConfigError& e) {
        throw ConfigError("feasibility.model", e.what());
      }
    }
    s.finish();
  }
  std::string method;
  top.get("method", method);
  if (!method.empty()) cfg.methods = parse_methods(method);
  if (top.has("pga")) {
    auto s = top.child("pga");
    auto& p = cfg.pga;
    s.get("t_max", p.t_max);
    s.get("rho_min", p.rho_min);
    s.get("rho_max", p.rho_max);
    s.get("eta0", p.eta0);
    s.get("alpha", p.alpha);
    s.get("momentum", p.momentum);
    s.get("cluster_rel", p.cluster_rel);
    s.get("cluster_abs", p.cluster_abs);
    s.get("degree_budget", p.degree_budget);
    s.get("trace_stride", p.trace_stride);
    s.get("min_pairs", p.min_pairs);
    s.get("warm_background", p.warm_background);
    s.get("plateau_stop", p.plateau_stop);
    s.get("plateau_window", p.plateau_window);
    s.get("plateau_tol", p.plateau_tol);
    if (s.has("eigen")) {
      auto e = s.child("eigen");
      e.get("tol", p.eigen.tol);
      e.get("max_iterations", p.eigen.max_iterations);
      e.get("guard_vectors", p.eigen.guard_vectors);
      e.get("dense_fallback_max_n", p.eigen.dense_fallback_max_n);
      e.get("seed", p.eigen.seed);
      std::string m;
      e.get("method", m);
      if (!m.empty()) p.eigen.method = parse_eigen_method(m);
      e.finish();
    }
    s.finish();
  }
  if (top.has("heuristic")) {
    auto s = top.child("heuristic");
    auto& h = cfg.heuristic;
    s.get("iterations", h.iterations);
    s.get("repair_interval", h.repair_interval);
    s.get("perturbation_size", h.perturbation_size);
    s.get("degree_budget", h.degree_budget);
    s.get("init_passes", h.init_passes);
    s.finish();
  }
  if (top.has("rounding")) {
    auto s = top.child("rounding");
    std::string m;
    s.get("method", m);
    if (!m.empty()) cfg.rounding.method = parse_rounding_method(m);
    s.get("exact_limit", cfg.rounding.exact_limit);
    s.finish();
  }
  top.get("trials", cfg.trials);
  top.get("base_seed", cfg.base_seed);
  top.get("t0_s", cfg.t0_s);
  top.get("fixed_intraplane", cfg.fixed_intraplane);
  top.get("d_max_sweep", cfg.d_max_sweep);
  top.get("latency_report_km_per_ms", cfg.latency_report_km_per_ms);
  top.get("report_latency", cfg.report_latency);
  top.finish();
  cfg.validate();
  return cfg;
}

inline json config_to_json(const ExperimentConfig& cfg) {
  const auto& c = cfg.constellation;
  const auto& p = cfg.pga;
  const auto& h = cfg.heuristic;
  json j;
  j["constellation"] = {{"n_planes", c.n_planes},
                        {"sats_per_plane", c.sats_per_plane},
                        {"altitude_km", c.altitude_km},
                        {"inclination_rad", c.inclination_rad},
                        {"max_phase_offset_rad", c.max_phase_offset_rad},
                        {"earth_radius_km", c.earth_radius_km},
                        {"gravitational_parameter_km3_s2", c.gravitational_parameter_km3_s2}};
  j["feasibility"] = {{"d_max_km", cfg.feasibility.d_max_km},
                      {"viability_samples", cfg.feasibility.viability_samples},
                      {"model", detail::models_string(cfg.models)}};
  j["method"] = detail::methods_string(cfg.methods);
  j["pga"] = {{"t_max", p.t_max},
              {"rho_min", p.rho_min},
              {"rho_max", p.rho_max},
              {"eta0", p.eta0},
              {"alpha", p.alpha},
              {"momentum", p.momentum},
              {"cluster_rel", p.cluster_rel},
              {"cluster_abs", p.cluster_abs},
              {"degree_budget", p.degree_budget},
              {"trace_stride", p.trace_stride},
              {"min_pairs", p.min_pairs},
              {"warm_background", p.warm_background},
              {"plateau_stop", p.plateau_stop},
              {"plateau_window", p.plateau_window},
              {"plateau_tol", p.plateau_tol},
              {"eigen",
               {{"tol", p.eigen.tol},
                {"max_iterations", p.eigen.max_iterations},
                {"guard_vectors", p.eigen.guard_vectors},
                {"dense_fallback_max_n", p.eigen.dense_fallback_max_n},
                {"seed", p.eigen.seed},
                {"method", to_string(p.eigen.method)}}}};
  j["heuristic"] = {{"iterations", h.iterations},
                    {"repair_interval", h.repair_interval},
                    {"perturbation_size", h.perturbation_size},
                    {"degree_budget", h.degree_budget},
                    {"init_passes", h.init_passes}};
  j["rounding"] = {{"method", to_string(cfg.rounding.method)}, {"exact_limit", cfg.rounding.exact_limit}};
  j["trials"] = cfg.trials;
  j["base_seed"] = cfg.base_seed;
  j["t0_s"] = cfg.t0_s;
  j["fixed_intraplane"] = cfg.fixed_intraplane;
  j["d_max_sweep"] = cfg.d_max_sweep;
  j["latency_report_km_per_ms"] = cfg.latency_report_km_per_ms;
  j["report_latency"] = cfg.report_latency;
  return j;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  json root;
  try {
    root = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw IoError(path, std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(root);
}

}  // namespace isltopo
