#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "doslab/disorder.hpp"
#include "doslab/dos.hpp"
#include "doslab/io.hpp"
#include "doslab/models.hpp"

namespace doslab {

/// Declarative experiment description.  Parsed from JSON; unknown keys are
/// rejected so typos fail fast instead of silently running defaults.
struct ExperimentConfig {
  ModelSpec model;
  std::vector<int> windows;            // half-widths (symmetric) or pair counts (band)
  std::vector<std::uint64_t> seeds;
  std::vector<HoloPoly> functions;
  std::string outputs;                 // output directory (may be overridden by --out)
  std::vector<std::string> checks;     // named validations; empty = model defaults
  double tol = 1e-8;

  void validate() const {
    if (windows.empty()) throw std::invalid_argument("config: at least one window required");
    for (std::size_t i = 1; i < windows.size(); ++i)
      if (windows[i] <= windows[i - 1])
        throw std::invalid_argument("config: windows must be strictly increasing");
    if (seeds.empty()) throw std::invalid_argument("config: at least one seed required");
    if (functions.empty()) throw std::invalid_argument("config: at least one function required");
    if (!(tol > 0.0 && tol <= 1e-2)) throw std::invalid_argument("config: tol must lie in (0, 1e-2]");
  }

  LatticeWindow make_window(int n) const {
    return model.is_band() ? LatticeWindow::paired(n) : LatticeWindow::centered(n);
  }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.contains(it.key()))
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

inline Complex parse_complex(const nlohmann::json& j) {
  if (j.is_number()) return Complex{j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return Complex{j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("config: expected number or [re, im] pair");
}

inline PotentialDist parse_potential_dist(const nlohmann::json& j) {
  const std::string s = j.get<std::string>();
  if (s == "uniform") return PotentialDist::uniform;
  if (s == "bernoulli") return PotentialDist::bernoulli;
  throw std::invalid_argument("config: unknown potential_dist '" + s + "'");
}

inline PhaseDist parse_phase_dist(const nlohmann::json& j) {
  const std::string s = j.get<std::string>();
  if (s == "uniform") return PhaseDist::uniform;
  if (s == "bernoulli") return PhaseDist::bernoulli;
  throw std::invalid_argument("config: unknown phase_dist '" + s + "'");
}

inline ModelSpec parse_model(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("variant"))
    throw std::invalid_argument("config: model must be an object with a 'variant'");
  const std::string variant = j.at("variant").get<std::string>();
  ModelSpec spec;
  if (variant == "nsa") {
    reject_unknown_keys(j, {"variant", "g", "B", "potential_dist"}, "model");
    NsaParams p;
    p.g = j.at("g").get<double>();
    p.B = j.at("B").get<double>();
    if (j.contains("potential_dist")) p.dist = parse_potential_dist(j.at("potential_dist"));
    spec.params = p;
  } else if (variant == "anderson") {
    reject_unknown_keys(j, {"variant", "B", "potential_dist"}, "model");
    AndersonParams p;
    p.B = j.at("B").get<double>();
    if (j.contains("potential_dist")) p.dist = parse_potential_dist(j.at("potential_dist"));
    spec.params = p;
  } else if (variant == "scaled_unitary_band") {
    reject_unknown_keys(j, {"variant", "r", "theta0", "phase_dist"}, "model");
    ScaledUnitaryBandParams p;
    p.r = j.at("r").get<double>();
    if (j.contains("theta0")) p.theta0 = j.at("theta0").get<double>();
    if (j.contains("phase_dist")) p.dist = parse_phase_dist(j.at("phase_dist"));
    spec.params = p;
  } else if (variant == "non_unitary_band") {
    reject_unknown_keys(j, {"variant", "alpha", "beta", "gamma", "delta", "r", "phase_dist"},
                        "model");
    NonUnitaryBandParams p;
    p.alpha = parse_complex(j.at("alpha"));
    p.beta = parse_complex(j.at("beta"));
    p.gamma = parse_complex(j.at("gamma"));
    p.delta = parse_complex(j.at("delta"));
    if (j.contains("r")) p.r = j.at("r").get<double>();
    if (j.contains("phase_dist")) p.dist = parse_phase_dist(j.at("phase_dist"));
    spec.params = p;
  } else {
    throw std::invalid_argument("config: unknown model variant '" + variant + "'");
  }
  return spec;
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  detail::reject_unknown_keys(
      j, {"model", "windows", "seeds", "functions", "outputs", "checks", "tol"}, "config");
  ExperimentConfig cfg;
  cfg.model = detail::parse_model(j.at("model"));
  cfg.windows = j.at("windows").get<std::vector<int>>();

  const nlohmann::json& js = j.at("seeds");
  if (js.is_array()) {
    cfg.seeds = js.get<std::vector<std::uint64_t>>();
  } else if (js.is_object()) {
    detail::reject_unknown_keys(js, {"master_seed", "count"}, "seeds");
    const std::uint64_t master = js.at("master_seed").get<std::uint64_t>();
    const std::size_t count = js.at("count").get<std::size_t>();
    for (std::size_t i = 0; i < count; ++i)
      cfg.seeds.push_back(Disorder::mix(master + i));
  } else {
    throw std::invalid_argument("config: seeds must be a list or {master_seed, count}");
  }

  for (const nlohmann::json& fj : j.at("functions")) {
    std::vector<Complex> coeffs;
    for (const nlohmann::json& c : fj) coeffs.push_back(detail::parse_complex(c));
    cfg.functions.emplace_back(std::move(coeffs));
  }
  if (j.contains("outputs")) cfg.outputs = j.at("outputs").get<std::string>();
  if (j.contains("checks")) cfg.checks = j.at("checks").get<std::vector<std::string>>();
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  nlohmann::json j;
  in >> j;
  return parse_config(j);
}

/// Short human-readable model id used in file names and reports.
inline std::string model_id(const ModelSpec& spec) {
  return std::visit(
      [](const auto& p) -> std::string {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, NsaParams>)
          return "nsa_g" + format_double(p.g) + "_B" + format_double(p.B);
        else if constexpr (std::is_same_v<P, AndersonParams>)
          return "anderson_B" + format_double(p.B);
        else if constexpr (std::is_same_v<P, ScaledUnitaryBandParams>)
          return "suband_r" + format_double(p.r);
        else
          return "nuband_r" + format_double(p.r);
      },
      spec.params);
}

}  // namespace doslab
