// Copyright 2026 The qkcm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qkcm/runner.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Core>

#include "json.hpp"
#include "qkcm/classical_engine.hpp"
#include "qkcm/error.hpp"
#include "qkcm/lindblad.hpp"
#include "qkcm/parallel.hpp"
#include "qkcm/quantum_engine.hpp"
#include "qkcm/reference_solutions.hpp"

namespace qkcm {

namespace fs = std::filesystem;

namespace {

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_file(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) fail(ErrorCode::Io, "write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::string series_csv(const TimeSeries& s) {
  std::string out = "t,value,stderr\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += format_real(s.times[i]);
    out += ',';
    out += format_real(s.values[i]);
    out += ',';
    if (s.stderrs) out += format_real((*s.stderrs)[i]);
    out += '\n';
  }
  return out;
}

std::vector<double> log_edges(double lo, double hi, int per_decade) {
  std::vector<double> edges;
  const double decades = std::log10(hi / lo);
  const int n = std::max(1, static_cast<int>(std::ceil(decades * per_decade - 1e-9)));
  for (int i = 0; i <= n; ++i) edges.push_back(lo * std::pow(10.0, decades * i / n));
  return edges;
}

struct Outputs {
  fs::path dir;
  RunResult* result;

  void series(const std::string& stem, TimeSeries s) {
    s.label = stem;
    write_file(dir / (stem + ".csv"), series_csv(s));
    result->files.push_back(stem + ".csv");
    result->series.push_back(std::move(s));
  }

  void text(const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    result->files.push_back(name);
  }
};

std::string heatmap_csv(const std::vector<double>& grid, const Eigen::MatrixXd& m) {
  std::string out = "t";
  for (Eigen::Index k = 0; k < m.rows(); ++k) out += ",site_" + std::to_string(k);
  out += '\n';
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out += format_real(grid[j]);
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
      out += ',';
      out += format_real(m(k, static_cast<Eigen::Index>(j)));
    }
    out += '\n';
  }
  return out;
}

std::string waiting_csv(const WaitingTimeHistogram& h) {
  std::string out = "window_lo,window_hi,wait_lo,wait_hi,count,normalized\n";
  for (std::size_t w = 0; w + 1 < h.time_edges.size(); ++w) {
    for (std::size_t b = 0; b + 1 < h.wait_edges.size(); ++b) {
      out += format_real(h.time_edges[w]) + ',' + format_real(h.time_edges[w + 1]) + ',' +
             format_real(h.wait_edges[b]) + ',' + format_real(h.wait_edges[b + 1]) + ',' +
             format_real(h.counts[w][b]) + ',' + format_real(h.normalized[w][b]) + '\n';
    }
  }
  return out;
}

TimeSeries exact_series(const std::vector<double>& grid, std::vector<double> values) {
  TimeSeries s;
  s.times = grid;
  s.values = std::move(values);
  return s;
}

SpinConfiguration named_configuration(const std::string& name, int n_sites, int local_dim) {
  if (name == "all_up") return SpinConfiguration::uniform(n_sites, local_dim, local_dim - 1);
  if (name == "all_down") return SpinConfiguration::uniform(n_sites, local_dim, 0);
  return SpinConfiguration::parse(name, local_dim);
}

void run_classical(const ExperimentConfig& cfg, Outputs& out) {
  const ClassicalKCMSpec spec = cfg.classical_spec();
  const auto grid = cfg.grid();
  const std::string init = cfg.resolved_initial_state();
  const InitialSampler sampler =
      init == "product_s"
          ? bernoulli_sampler(spec.n_sites, spec.kappa)
          : [c = named_configuration(init, spec.n_sites, 2)](Rng&) { return c; };

  const auto ens = classical_ensemble(spec, sampler, grid, cfg.n_trajectories, cfg.master_seed);
  out.series("density", ens.density);
  for (int k = 0; k < spec.n_sites; ++k) out.series("site_" + std::to_string(k), ens.site_density[k]);
  if (ens.first) out.text("heatmap.csv", heatmap_csv(grid, site_profile_heatmap(*ens.first, grid)));
  if (ens.halted > 0) {
    out.result->notes.push_back(std::to_string(ens.halted) +
                                " trajectories reached an absorbing configuration");
  }

  if (!cfg.oracle) return;
  const Basis basis = spec.basis();
  if (basis.size() > kDefaultOracleCap) {
    out.result->notes.push_back("oracle skipped: basis exceeds the oracle cap");
    return;
  }
  const auto w = build_master_operator(spec);
  Eigen::VectorXd p0;
  if (init == "product_s") {
    const auto p_eq = classical_equilibrium(spec);
    p0 = Eigen::Map<const Eigen::VectorXd>(p_eq.data(), static_cast<Eigen::Index>(p_eq.size()));
  } else {
    p0 = point_distribution(basis, named_configuration(init, spec.n_sites, 2).ordinal());
  }
  const auto dists = evolve_distribution_spectral(w, p0, grid);
  out.series("density_oracle", distribution_density(basis, dists, grid, "density_oracle"));
}

PureState initial_pure_state(const ExperimentConfig& cfg, const Basis& basis) {
  const std::string init = cfg.resolved_initial_state();
  if (init == "product_s") {
    return cfg.model == ModelKind::QuantumKCM ? stationary_product_state(cfg.quantum_spec())
                                              : stationary_product_state(cfg.rydberg_spec());
  }
  return PureState::basis_state(named_configuration(init, basis.n_sites(), basis.local_dim()));
}

void run_quantum(const ExperimentConfig& cfg, Outputs& out) {
  const bool rydberg = cfg.model == ModelKind::RydbergEffective;
  const auto jumps = rydberg ? rydberg_jump_operators(cfg.rydberg_spec())
                             : quantum_jump_operators(cfg.quantum_spec());
  const Basis basis(cfg.n_sites, 2);
  const auto grid = cfg.grid();
  const PureState init = initial_pure_state(cfg, basis);

  StepControl control;
  control.coherence = rydberg ? CoherenceConvention::Half : CoherenceConvention::Pauli;
  const QuantumJumpSimulator sim(jumps, basis, control);
  EnsembleOptions opts;
  opts.keep_trajectories = 1;
  const auto ens = quantum_ensemble(sim, init, grid, cfg.n_trajectories, cfg.master_seed, opts);
  out.series("density", ens.density);
  out.series("sigma_x", ens.sigma_x);
  for (int k = 0; k < cfg.n_sites; ++k) out.series("site_" + std::to_string(k), ens.site_density[k]);
  if (!ens.kept.empty()) out.text("heatmap.csv", heatmap_csv(grid, site_profile_heatmap(ens.kept[0])));

  const double t_first = grid.size() > 1 ? grid[1] : cfg.t_max;
  std::vector<double> windows{0.0};
  for (double e : log_edges(t_first, cfg.t_max, 1)) windows.push_back(e);
  const auto wait_edges = log_edges(std::min(1e-3, t_first / 100.0), cfg.t_max, 10);
  out.text("waiting_times.csv",
           waiting_csv(waiting_time_distribution(ens.events, windows, wait_edges)));
  if (ens.converged_dark > 0) {
    out.result->notes.push_back(std::to_string(ens.converged_dark) +
                                " trajectories converged to a dark state");
  }

  if (rydberg && cfg.n_sites == 1 && cfg.resolved_initial_state() == "all_down") {
    const double x = cfg.rydberg_spec().x;
    std::vector<double> ref;
    for (double t : grid) ref.push_back(reference::rydberg_quantum_density(t, x));
    out.series("density_reference", exact_series(grid, std::move(ref)));
  }

  if (!cfg.oracle) return;
  if (basis.size() > kDenseLindbladCap) {
    out.result->notes.push_back("oracle skipped: basis exceeds the dense Lindblad cap");
    return;
  }
  const auto rhos = lindblad_solve_dense(jumps, DensityMatrix::from_pure(init), grid);
  std::vector<double> n, sx;
  for (const auto& rho : rhos) {
    n.push_back(mean_excitation(rho));
    sx.push_back(mean_sigma_x(rho) * (rydberg ? 0.5 : 1.0));
  }
  out.series("density_oracle", exact_series(grid, std::move(n)));
  out.series("sigma_x_oracle", exact_series(grid, std::move(sx)));
}

void run_three_level(const ExperimentConfig& cfg, Outputs& out) {
  const RydbergSpec spec = cfg.rydberg_spec();
  const Basis basis(cfg.n_sites, 3);
  const auto grid = cfg.grid();
  const double factor = rescaled_time_factor(*spec.three_level);
  std::vector<double> physical;
  for (double t : grid) physical.push_back(t / factor);
  const PureState init = initial_pure_state(cfg, basis);
  const auto rhos = three_level_lindblad(spec, DensityMatrix::from_pure(init), physical);
  std::vector<double> n, sx;
  for (const auto& rho : rhos) {
    n.push_back(mean_excitation(rho));
    sx.push_back(0.5 * mean_sigma_x(rho));
  }
  out.series("density", exact_series(grid, std::move(n)));
  out.series("sigma_x", exact_series(grid, std::move(sx)));
  out.result->notes.push_back("times are rescaled by 4 omega_c^2 / gamma = " + format_real(factor));
}

nlohmann::ordered_json manifest_json(const ExperimentConfig& cfg, const RunResult& r,
                                     const std::string& status) {
  nlohmann::ordered_json m;
  m["status"] = status;
  nlohmann::ordered_json c = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.entries()) c[k] = v;
  m["config"] = c;
  m["seed"] = cfg.master_seed;
  m["versions"] = {{"qkcm", kVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"compiler", __VERSION__}};
  m["threads"] = default_thread_count();
  m["wall_time_s"] = r.wall_seconds;
  m["files"] = r.files;
  m["notes"] = r.notes;
  return m;
}

}  // namespace

void write_series_csv(const std::string& path, const TimeSeries& series) {
  write_file(path, series_csv(series));
}

TimeSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open series file '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "t,value,stderr", ErrorCode::InvalidArgument,
          "'" + path + "' is not a series file (header must be t,value,stderr)");
  TimeSeries s;
  s.label = fs::path(path).stem().string();
  std::vector<double> errs;
  bool all_errs = true;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<std::string, 3> f;
    std::istringstream ls(line);
    for (auto& field : f) std::getline(ls, field, ',');
    auto num = [&](const std::string& text) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        fail(ErrorCode::InvalidArgument,
             path + ":" + std::to_string(line_no) + ": bad number '" + text + "'");
      }
      return v;
    };
    s.times.push_back(num(f[0]));
    s.values.push_back(num(f[1]));
    if (f[2].empty()) all_errs = false;
    else errs.push_back(num(f[2]));
  }
  if (all_errs && !errs.empty()) s.stderrs = std::move(errs);
  s.validate();
  return s;
}

ComparisonReport compare_files(const std::string& classical_csv, const std::string& quantum_csv) {
  const TimeSeries a = read_series_csv(classical_csv);
  const TimeSeries b = read_series_csv(quantum_csv);
  require(!a.values.empty() && !b.values.empty(), ErrorCode::InvalidArgument,
          "cannot compare empty series");
  return compare_models(a, b, a.values.back(), b.values.back());
}

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.output_path = config.output_path;
  const fs::path dir(config.output_path);
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec && fs::is_directory(dir), ErrorCode::Io,
          "cannot create output directory '" + config.output_path + "'");

  const fs::path manifest = dir / "manifest.json";
  write_file(manifest, manifest_json(config, result, "running").dump(2) + "\n");
  Outputs out{dir, &result};
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  try {
    if (is_classical(config.model)) run_classical(config, out);
    else if (config.model == ModelKind::RydbergThreeLevel) run_three_level(config, out);
    else run_quantum(config, out);
  } catch (const std::exception& e) {
    result.wall_seconds = elapsed();
    auto m = manifest_json(config, result, "failed");
    m["error"] = e.what();
    write_file(manifest, m.dump(2) + "\n");
    throw;
  }
  result.wall_seconds = elapsed();
  write_file(manifest, manifest_json(config, result, "complete").dump(2) + "\n");
  return result;
}

}  // namespace qkcm
