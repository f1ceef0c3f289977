#pragma once

// Run configuration: a JSON-backed bag of physical parameters and sweep
// settings shared by all CLI subcommands.  Unknown keys are rejected so a
// typo cannot silently fall back to a default.  The resolved
// configuration serializes canonically (sorted keys) and is fingerprinted
// into every output header.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kerrflux/io.hpp"
#include "kerrflux/langevin.hpp"
#include "kerrflux/params.hpp"

namespace kerrflux {

struct RunConfig {
  SystemParams params;

  // spectrum
  double half_window = 0.0;  // 0: choose from gamma, kappa and the shift
  std::size_t n_points = 401;

  // g2 curve and stochastic-oracle horizon
  double t_max = 5.0;

  // stochastic oracle
  std::size_t n_traj = 200000;
  double dt = 5e-3;
  std::size_t n_samples = 20;
  std::uint64_t seed = 20260815ULL;

  // current / nonlinearity sweeps (units of gamma)
  double j_min = 1e-3;
  double j_max = 1e3;
  std::size_t n_j = 50;
  double eps_min = 0.1;
  double eps_max = 1e3;
  std::size_t n_eps = 50;

  // curve families: one output per value
  std::vector<double> f_occ_values;
  std::vector<double> epsilon_values;

  // execution / output
  unsigned threads = 0;
  io::Format format = io::Format::csv;
  std::string out;

  OracleConfig oracle_config() const {
    OracleConfig oc;
    oc.n_traj = n_traj;
    oc.dt = dt;
    oc.t_max = t_max;
    oc.n_samples = n_samples;
    oc.seed = seed;
    oc.threads = threads;
    return oc;
  }
};

namespace detail {

inline double as_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) {
    throw std::invalid_argument("config: key '" + key + "' must be a number");
  }
  return v.get<double>();
}

inline std::size_t as_count(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw std::invalid_argument("config: key '" + key +
                                "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

inline std::vector<double> as_number_list(const nlohmann::json& v,
                                          const std::string& key) {
  if (!v.is_array()) {
    throw std::invalid_argument("config: key '" + key + "' must be an array");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(as_number(e, key));
  return out;
}

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("config: top level must be a JSON object");
  }
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "omega0") {
      c.params.omega0 = detail::as_number(value, key);
    } else if (key == "epsilon") {
      c.params.epsilon = detail::as_number(value, key);
    } else if (key == "gamma_l") {
      c.params.gamma_l = detail::as_number(value, key);
    } else if (key == "gamma_r") {
      c.params.gamma_r = detail::as_number(value, key);
    } else if (key == "delta") {
      c.params.delta = detail::as_number(value, key);
    } else if (key == "f_occ") {
      c.params.f_occ = detail::as_number(value, key);
    } else if (key == "half_window") {
      c.half_window = detail::as_number(value, key);
    } else if (key == "n_points") {
      c.n_points = detail::as_count(value, key);
    } else if (key == "t_max") {
      c.t_max = detail::as_number(value, key);
    } else if (key == "n_traj") {
      c.n_traj = detail::as_count(value, key);
    } else if (key == "dt") {
      c.dt = detail::as_number(value, key);
    } else if (key == "n_samples") {
      c.n_samples = detail::as_count(value, key);
    } else if (key == "seed") {
      if (!value.is_number_integer()) {
        throw std::invalid_argument("config: key 'seed' must be an integer");
      }
      c.seed = value.get<std::uint64_t>();
    } else if (key == "j_min") {
      c.j_min = detail::as_number(value, key);
    } else if (key == "j_max") {
      c.j_max = detail::as_number(value, key);
    } else if (key == "n_j") {
      c.n_j = detail::as_count(value, key);
    } else if (key == "eps_min") {
      c.eps_min = detail::as_number(value, key);
    } else if (key == "eps_max") {
      c.eps_max = detail::as_number(value, key);
    } else if (key == "n_eps") {
      c.n_eps = detail::as_count(value, key);
    } else if (key == "f_occ_values") {
      c.f_occ_values = detail::as_number_list(value, key);
    } else if (key == "epsilon_values") {
      c.epsilon_values = detail::as_number_list(value, key);
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(detail::as_count(value, key));
    } else if (key == "format") {
      if (!value.is_string()) {
        throw std::invalid_argument("config: key 'format' must be a string");
      }
      c.format = io::parse_format(value.get<std::string>());
    } else if (key == "out") {
      if (!value.is_string()) {
        throw std::invalid_argument("config: key 'out' must be a string");
      }
      c.out = value.get<std::string>();
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return c;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["omega0"] = c.params.omega0;
  j["epsilon"] = c.params.epsilon;
  j["gamma_l"] = c.params.gamma_l;
  j["gamma_r"] = c.params.gamma_r;
  j["delta"] = c.params.delta;
  j["f_occ"] = c.params.f_occ;
  j["half_window"] = c.half_window;
  j["n_points"] = c.n_points;
  j["t_max"] = c.t_max;
  j["n_traj"] = c.n_traj;
  j["dt"] = c.dt;
  j["n_samples"] = c.n_samples;
  j["seed"] = c.seed;
  j["j_min"] = c.j_min;
  j["j_max"] = c.j_max;
  j["n_j"] = c.n_j;
  j["eps_min"] = c.eps_min;
  j["eps_max"] = c.eps_max;
  j["n_eps"] = c.n_eps;
  j["f_occ_values"] = c.f_occ_values;
  j["epsilon_values"] = c.epsilon_values;
  j["threads"] = c.threads;
  j["format"] = c.format == io::Format::csv ? "csv" : "json";
  j["out"] = c.out;
  return j;
}

// Fingerprint of the fully resolved configuration (canonical dump:
// nlohmann objects iterate in sorted key order).
inline std::string config_hash(const RunConfig& c) {
  return io::hex64(io::fnv1a64(config_to_json(c).dump()));
}

}  // namespace kerrflux
