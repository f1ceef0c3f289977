// kerrflux command line: derived quantities, transmission spectra,
// intensity correlations, current noise sweeps and maps, the stochastic
// envelope oracle, and the spectral-weight sum rule.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
// Errors are printed to stderr as "error: config: ..." or
// "error: numeric: ...".

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kerrflux/kerrflux.hpp"

namespace {

constexpr const char* kVersion = "kerrflux 1.0.0";

// --------------------------------------------------------------------------
// Output helpers.

kerrflux::io::Table base_table(const kerrflux::RunConfig& cfg,
                               const std::string& subcommand) {
  kerrflux::io::Table t;
  t.add_meta("generator", std::string(kVersion));
  t.add_meta("subcommand", subcommand);
  t.add_meta("config_hash", kerrflux::config_hash(cfg));
  const auto j = kerrflux::config_to_json(cfg);
  for (const auto& [key, value] : j.items()) {
    if (value.is_string()) {
      t.add_meta(key, value.get<std::string>());
    } else if (value.is_number_float()) {
      t.add_meta(key, value.get<double>());
    } else {
      t.add_meta(key, value.dump());
    }
  }
  return t;
}

void add_derived_meta(kerrflux::io::Table& t, const kerrflux::SystemParams& p) {
  const auto d = kerrflux::derive(p);
  t.add_meta("derived_gamma", d.gamma);
  t.add_meta("derived_kappa", d.kappa);
  t.add_meta("derived_omega_ac", d.omega_ac);
  t.add_meta("derived_phi0", d.phi0);
  t.add_meta("derived_current_j", d.current_j);
  t.add_meta("derived_n_bar", d.n_bar);
  t.add_meta("derived_j_star", d.j_star);
}

// Writes to cfg.out, or to stdout when no path is set.
void emit(const kerrflux::RunConfig& cfg, const kerrflux::io::Table& t,
          const std::string& path_override = "") {
  const std::string path = path_override.empty() ? cfg.out : path_override;
  if (path.empty()) {
    if (cfg.format == kerrflux::io::Format::csv) {
      std::cout << t.to_csv();
    } else {
      std::cout << t.to_json().dump(2) << "\n";
    }
    return;
  }
  kerrflux::io::save_table(path, t, cfg.format);
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const std::filesystem::path p(path);
  std::filesystem::path out = p.parent_path() / p.stem();
  out += suffix;
  out += p.extension();
  return out.string();
}

std::string value_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// --------------------------------------------------------------------------
// Config/flag plumbing: --config is pre-scanned so file values are loaded
// before CLI11 assigns explicit flags over them (flags win).

std::optional<std::string> prescan_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" || a == "-c") {
      if (i + 1 >= argc) {
        throw std::invalid_argument("--config expects a file path");
      }
      return std::string(argv[i + 1]);
    }
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

kerrflux::RunConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::invalid_argument("cannot open config file '" + path + "'");
  }
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config file '" + path +
                                "' is not valid JSON: " + e.what());
  }
  return kerrflux::config_from_json(j);
}

struct SharedFlags {
  std::string config_path;
  std::string format_name;
};

void add_shared_options(CLI::App* sub, kerrflux::RunConfig& cfg,
                        SharedFlags& shared) {
  sub->add_option("-c,--config", shared.config_path,
                  "JSON configuration file (flags override file values)");
  sub->add_option("-o,--out", cfg.out, "output file path");
  sub->add_option("--format", shared.format_name, "output format: csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", cfg.threads,
                  "worker threads (0 = hardware concurrency)");
  sub->add_option("--seed", cfg.seed, "stochastic-oracle seed");
  sub->add_option("--omega0", cfg.params.omega0, "cavity carrier frequency");
  sub->add_option("--epsilon", cfg.params.epsilon, "Kerr shift per photon");
  sub->add_option("--gamma-l,--gamma_l", cfg.params.gamma_l,
                  "left waveguide coupling rate");
  sub->add_option("--gamma-r,--gamma_r", cfg.params.gamma_r,
                  "right waveguide coupling rate");
  sub->add_option("--delta", cfg.params.delta, "incident band halfwidth");
  sub->add_option("--f-occ,--f_occ", cfg.params.f_occ,
                  "flat-band occupation of the left waveguide");
}

// --------------------------------------------------------------------------
// Subcommand bodies.

int run_derive(const kerrflux::RunConfig& cfg) {
  const auto d = kerrflux::derive(cfg.params);
  const auto h = kerrflux::check_hierarchy(cfg.params);
  for (const auto& w : h.warnings) std::cerr << "warning: " << w << "\n";

  auto t = base_table(cfg, "derive");
  t.add_meta("hierarchy_ok", h.ok ? "true" : "false");
  t.add_meta("kappa_over_delta", h.kappa_over_delta);
  for (const auto& w : h.warnings) t.add_meta("warning", w);
  t.add_column("gamma", std::vector<double>{d.gamma});
  t.add_column("kappa", std::vector<double>{d.kappa});
  t.add_column("omega_ac", std::vector<double>{d.omega_ac});
  t.add_column("phi0", std::vector<double>{d.phi0});
  t.add_column("current_j", std::vector<double>{d.current_j});
  t.add_column("n_bar", std::vector<double>{d.n_bar});
  t.add_column("j_star", std::vector<double>{d.j_star});
  t.add_column("regime",
               std::vector<std::string>{kerrflux::to_string(
                   kerrflux::classify_regime(d.gamma, cfg.params.epsilon,
                                             d.current_j))});
  t.add_column("g2_regime", std::vector<std::string>{kerrflux::to_string(
                                kerrflux::g2_regime(cfg.params))});
  emit(cfg, t);
  return 0;
}

void emit_one_spectrum(const kerrflux::RunConfig& cfg,
                       const kerrflux::SystemParams& p,
                       const std::string& path) {
  const double hw = cfg.half_window > 0.0 ? cfg.half_window
                                          : kerrflux::default_half_window(p);
  const auto curve =
      kerrflux::spectrum_curve(p, hw, cfg.n_points, 1e-8, cfg.threads);
  auto t = base_table(cfg, "spectrum");
  add_derived_meta(t, p);
  t.add_meta("f_occ_effective", p.f_occ);
  t.add_meta("half_window_effective", hw);
  t.add_column("omega_minus_omega0", curve.abscissa);
  t.add_column("transmission", curve.values);
  emit(cfg, t, path);
}

int run_spectrum(const kerrflux::RunConfig& cfg) {
  if (cfg.f_occ_values.empty()) {
    emit_one_spectrum(cfg, cfg.params, cfg.out);
    return 0;
  }
  if (cfg.out.empty()) {
    throw std::invalid_argument(
        "spectrum: an f_occ_values family needs --out");
  }
  for (double f : cfg.f_occ_values) {
    auto p = cfg.params;
    p.f_occ = f;
    emit_one_spectrum(cfg, p, with_suffix(cfg.out, "_f" + value_tag(f)));
  }
  return 0;
}

int run_g2(const kerrflux::RunConfig& cfg) {
  const auto curve = kerrflux::g2_curve(cfg.params, cfg.t_max, cfg.n_points);
  auto t = base_table(cfg, "g2");
  add_derived_meta(t, cfg.params);
  t.add_meta("g2_regime", kerrflux::to_string(kerrflux::g2_regime(cfg.params)));
  t.add_column("t", curve.abscissa);
  t.add_column("g2", curve.values);
  emit(cfg, t);
  return 0;
}

void emit_one_noise_curve(const kerrflux::RunConfig& cfg, double epsilon,
                          const std::string& path) {
  const double gamma = cfg.params.gamma();
  const auto currents =
      kerrflux::log_grid(cfg.j_min * gamma, cfg.j_max * gamma, cfg.n_j);
  const auto points = kerrflux::noise_curve(gamma, cfg.params.gamma_r, epsilon,
                                            currents, 1e-9, cfg.threads);
  auto t = base_table(cfg, "noise-curve");
  t.add_meta("epsilon_effective", epsilon);
  t.add_meta("j_star_over_gamma",
             kerrflux::crossover_current(gamma, epsilon) / gamma);
  std::vector<double> jg, eg, s, f, sg;
  std::vector<std::string> regime;
  for (const auto& pt : points) {
    jg.push_back(pt.j_over_gamma);
    eg.push_back(pt.eps_over_gamma);
    s.push_back(pt.s);
    f.push_back(pt.fano);
    sg.push_back(pt.scaling_gamma);
    regime.emplace_back(kerrflux::to_string(pt.regime));
  }
  t.add_column("j_over_gamma", jg);
  t.add_column("eps_over_gamma", eg);
  t.add_column("s", s);
  t.add_column("fano", f);
  t.add_column("gamma", sg);
  t.add_column("regime", std::move(regime));
  emit(cfg, t, path);
}

int run_noise_curve(const kerrflux::RunConfig& cfg) {
  if (cfg.epsilon_values.empty()) {
    emit_one_noise_curve(cfg, cfg.params.epsilon, cfg.out);
    return 0;
  }
  if (cfg.out.empty()) {
    throw std::invalid_argument(
        "noise-curve: an epsilon_values family needs --out");
  }
  const double gamma = cfg.params.gamma();
  for (double e : cfg.epsilon_values) {
    emit_one_noise_curve(
        cfg, e * gamma,
        with_suffix(cfg.out, "_eps" + value_tag(e)));
  }
  return 0;
}

// Shared writer for the two (current, nonlinearity) maps.  CSV output is
// a matrix file plus _j_axis and _eps_axis siblings; JSON nests the axes
// and values in one document.
void emit_map(const kerrflux::RunConfig& cfg, const kerrflux::MapResult& m,
              const std::string& subcommand) {
  if (cfg.format == kerrflux::io::Format::json) {
    auto t = base_table(cfg, subcommand);
    nlohmann::json j = t.to_json();
    const double gamma = cfg.params.gamma();
    nlohmann::json jj = nlohmann::json::array();
    for (double v : m.j_axis) jj.push_back(v / gamma);
    nlohmann::json ee = nlohmann::json::array();
    for (double v : m.eps_axis) ee.push_back(v / gamma);
    nlohmann::json js = nlohmann::json::array();
    for (double v : m.j_star) js.push_back(v / gamma);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.eps_axis.size(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t c = 0; c < m.j_axis.size(); ++c) {
        row.push_back(m.at(r, c));
      }
      rows.push_back(std::move(row));
    }
    j["j_axis_over_gamma"] = std::move(jj);
    j["eps_axis_over_gamma"] = std::move(ee);
    j["j_star_over_gamma"] = std::move(js);
    j["values"] = std::move(rows);
    if (cfg.out.empty()) {
      std::cout << j.dump(2) << "\n";
    } else {
      std::ofstream os(cfg.out);
      if (!os) {
        throw std::runtime_error("cannot open '" + cfg.out + "' for writing");
      }
      os << j.dump(2) << "\n";
    }
    return;
  }

  if (cfg.out.empty()) {
    throw std::invalid_argument(subcommand +
                                ": csv map output needs --out (writes the "
                                "matrix plus _j_axis/_eps_axis siblings)");
  }
  const double gamma = cfg.params.gamma();

  auto matrix = base_table(cfg, subcommand);
  matrix.add_meta("layout", "rows follow eps_axis, columns follow j_axis");
  {
    // Header row carries the j/gamma value of each column.
    std::vector<std::vector<double>> cols(m.j_axis.size());
    for (std::size_t c = 0; c < m.j_axis.size(); ++c) {
      cols[c].reserve(m.eps_axis.size());
      for (std::size_t r = 0; r < m.eps_axis.size(); ++r) {
        cols[c].push_back(m.at(r, c));
      }
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
      matrix.add_column(kerrflux::io::format_double(m.j_axis[c] / gamma),
                        cols[c]);
    }
  }
  emit(cfg, matrix);

  auto jt = base_table(cfg, subcommand + "/j_axis");
  std::vector<double> jg;
  for (double v : m.j_axis) jg.push_back(v / gamma);
  jt.add_column("j_over_gamma", jg);
  emit(cfg, jt, with_suffix(cfg.out, "_j_axis"));

  auto et = base_table(cfg, subcommand + "/eps_axis");
  std::vector<double> eg, js;
  for (double v : m.eps_axis) eg.push_back(v / gamma);
  for (double v : m.j_star) js.push_back(v / gamma);
  et.add_column("eps_over_gamma", eg);
  et.add_column("j_star_over_gamma", js);
  emit(cfg, et, with_suffix(cfg.out, "_eps_axis"));
}

int run_phase_map(const kerrflux::RunConfig& cfg) {
  const double gamma = cfg.params.gamma();
  const auto m = kerrflux::phase_map(
      gamma, kerrflux::log_grid(cfg.j_min * gamma, cfg.j_max * gamma, cfg.n_j),
      kerrflux::log_grid(cfg.eps_min * gamma, cfg.eps_max * gamma, cfg.n_eps));
  emit_map(cfg, m, "phase-map");
  return 0;
}

int run_fano_map(const kerrflux::RunConfig& cfg) {
  const double gamma = cfg.params.gamma();
  const auto m = kerrflux::fano_map(
      gamma, cfg.params.gamma_r,
      kerrflux::log_grid(cfg.j_min * gamma, cfg.j_max * gamma, cfg.n_j),
      kerrflux::log_grid(cfg.eps_min * gamma, cfg.eps_max * gamma, cfg.n_eps),
      1e-7, cfg.threads);
  emit_map(cfg, m, "fano-map");
  return 0;
}

int run_oracle(const kerrflux::RunConfig& cfg, bool check_convergence) {
  const auto oc = cfg.oracle_config();
  auto t = base_table(cfg, "oracle");
  add_derived_meta(t, cfg.params);

  kerrflux::EnsembleStats stats;
  if (check_convergence) {
    const auto rep = kerrflux::convergence_report(cfg.params, oc);
    stats = rep.coarse;
    t.add_meta("convergence_max_pull", rep.max_pull);
    t.add_meta("converged", rep.converged ? "true" : "false");
  } else {
    stats = kerrflux::simulate_envelope(cfg.params, oc);
  }

  std::vector<double> az, a2d;
  az.reserve(stats.grid.size());
  for (double tv : stats.grid) {
    const double d = kerrflux::decoherence_exponent(cfg.params, tv);
    az.push_back(std::exp(-d));
    a2d.push_back(2.0 * d);
  }
  t.add_meta("n_traj_effective", static_cast<double>(stats.n_traj));
  t.add_meta("dt_effective", stats.dt);
  t.add_column("t", stats.grid);
  t.add_column("mean_z", stats.mean_z);
  t.add_column("mean_z_imag", stats.mean_z_imag);
  t.add_column("stderr_z", stats.stderr_z);
  t.add_column("var_phi", stats.var_phi);
  t.add_column("var_phi_stderr", stats.var_phi_stderr);
  t.add_column("analytic_z", az);
  t.add_column("analytic_two_d", a2d);
  emit(cfg, t);
  return 0;
}

int run_sum_rule(const kerrflux::RunConfig& cfg) {
  const auto r = kerrflux::spectral_weight(cfg.params);
  auto t = base_table(cfg, "sum-rule");
  add_derived_meta(t, cfg.params);
  t.add_column("weight", std::vector<double>{r.weight});
  t.add_column("exact", std::vector<double>{r.exact});
  t.add_column("rel_deviation", std::vector<double>{r.rel_deviation});
  t.add_column("imag_residue", std::vector<double>{r.imag_residue});
  emit(cfg, t);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  kerrflux::RunConfig cfg;
  try {
    if (const auto path = prescan_config(argc, argv)) {
      cfg = load_config_file(*path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{
      "Incoherent photon transport through a Kerr cavity: "
      "spectra, coherence functions, current noise, and a stochastic "
      "envelope oracle."};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  SharedFlags shared;
  bool check_convergence = false;

  auto* sc_derive =
      app.add_subcommand("derive", "derived quantities and regime labels");
  auto* sc_spectrum =
      app.add_subcommand("spectrum", "transmission probability spectrum");
  auto* sc_g2 = app.add_subcommand("g2", "intensity correlation g2(t)");
  auto* sc_noise =
      app.add_subcommand("noise-curve", "zero-frequency noise versus current");
  auto* sc_phase =
      app.add_subcommand("phase-map", "noise regime over (current, nonlinearity)");
  auto* sc_fano =
      app.add_subcommand("fano-map", "Fano factor over (current, nonlinearity)");
  auto* sc_oracle =
      app.add_subcommand("oracle", "stochastic check of the dephasing envelope");
  auto* sc_sum =
      app.add_subcommand("sum-rule", "integrated spectral weight check");

  for (auto* sub : {sc_derive, sc_spectrum, sc_g2, sc_noise, sc_phase, sc_fano,
                    sc_oracle, sc_sum}) {
    add_shared_options(sub, cfg, shared);
  }
  sc_spectrum->add_option("--half-window,--half_window", cfg.half_window,
                          "spectrum half-window around omega0 (0 = auto)");
  sc_spectrum->add_option("--n-points,--n_points", cfg.n_points,
                          "samples across the window");
  sc_g2->add_option("--t-max,--t_max", cfg.t_max, "curve horizon");
  sc_g2->add_option("--n-points,--n_points", cfg.n_points, "curve samples");
  for (auto* sub : {sc_noise, sc_phase, sc_fano}) {
    sub->add_option("--j-min,--j_min", cfg.j_min, "lowest current / gamma");
    sub->add_option("--j-max,--j_max", cfg.j_max, "highest current / gamma");
    sub->add_option("--n-j,--n_j", cfg.n_j, "current grid points");
  }
  for (auto* sub : {sc_phase, sc_fano}) {
    sub->add_option("--eps-min,--eps_min", cfg.eps_min,
                    "lowest nonlinearity / gamma");
    sub->add_option("--eps-max,--eps_max", cfg.eps_max,
                    "highest nonlinearity / gamma");
    sub->add_option("--n-eps,--n_eps", cfg.n_eps, "nonlinearity grid points");
  }
  sc_oracle->add_option("--n-traj,--n_traj", cfg.n_traj, "trajectories");
  sc_oracle->add_option("--dt", cfg.dt, "integrator step");
  sc_oracle->add_option("--t-max,--t_max", cfg.t_max, "sampling horizon");
  sc_oracle->add_option("--n-samples,--n_samples", cfg.n_samples,
                        "sample times");
  sc_oracle->add_flag("--check-convergence", check_convergence,
                      "also run a half-step chain and report the pull");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  }

  if (!shared.format_name.empty()) {
    cfg.format = kerrflux::io::parse_format(shared.format_name);
  }

  try {
    if (*sc_derive) return run_derive(cfg);
    if (*sc_spectrum) return run_spectrum(cfg);
    if (*sc_g2) return run_g2(cfg);
    if (*sc_noise) return run_noise_curve(cfg);
    if (*sc_phase) return run_phase_map(cfg);
    if (*sc_fano) return run_fano_map(cfg);
    if (*sc_oracle) return run_oracle(cfg, check_convergence);
    if (*sc_sum) return run_sum_rule(cfg);
    std::cerr << "error: config: no subcommand selected\n";
    return 2;
  } catch (const kerrflux::NumericalError& e) {
    std::cerr << "error: numeric: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}
