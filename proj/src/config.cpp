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

#include "qkcm/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "qkcm/error.hpp"

namespace qkcm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  fail(ErrorCode::InvalidArgument,
       "config key '" + key + "': invalid value '" + value + "' (expected " + expected + ")");
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    bad_value(key, text, "a real number");
  }
  return v;
}

template <typename Int>
Int parse_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) bad_value(key, text, "an integer");
  return v;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

struct ModelName {
  const char* name;
  ModelKind kind;
};

constexpr ModelName kModelNames[] = {
    {"unconstrained", ModelKind::Unconstrained},
    {"east", ModelKind::East},
    {"fa", ModelKind::FA},
    {"excluded_volume_classical", ModelKind::ExcludedVolumeClassical},
    {"quantum_kcm", ModelKind::QuantumKCM},
    {"rydberg_effective", ModelKind::RydbergEffective},
    {"rydberg_three_level", ModelKind::RydbergThreeLevel},
};

ConstraintKind parse_constraint(const std::string& key, const std::string& v) {
  const std::string s = lower(trim(v));
  if (s == "east") return ConstraintKind::East;
  if (s == "fa") return ConstraintKind::FA;
  if (s == "unconstrained") return ConstraintKind::Unconstrained;
  bad_value(key, v, "east, fa or unconstrained");
}

const char* constraint_key(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::East: return "east";
    case ConstraintKind::FA: return "fa";
    case ConstraintKind::ExcludedVolume: return "excluded_volume";
    case ConstraintKind::Unconstrained: break;
  }
  return "unconstrained";
}

}  // namespace

const char* to_string(ModelKind kind) noexcept {
  for (const auto& m : kModelNames) {
    if (m.kind == kind) return m.name;
  }
  return "unknown";
}

bool is_classical(ModelKind kind) noexcept {
  return kind == ModelKind::Unconstrained || kind == ModelKind::East || kind == ModelKind::FA ||
         kind == ModelKind::ExcludedVolumeClassical;
}

bool is_rydberg(ModelKind kind) noexcept {
  return kind == ModelKind::RydbergEffective || kind == ModelKind::RydbergThreeLevel;
}

double parse_angle(const std::string& text) {
  std::string s = lower(trim(text));
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  const auto pi_at = s.find("pi");
  if (pi_at == std::string::npos) return parse_real("theta", s);
  std::string head = s.substr(0, pi_at);
  std::string tail = s.substr(pi_at + 2);
  if (!head.empty() && head.back() == '*') head.pop_back();
  const double mult = head.empty() ? 1.0 : head == "-" ? -1.0 : parse_real("theta", head);
  double div = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') bad_value("theta", text, "a number or a multiple of pi");
    div = parse_real("theta", tail.substr(1));
    if (div == 0.0) bad_value("theta", text, "a nonzero divisor");
  }
  return mult * std::numbers::pi / div;
}

void ExperimentConfig::set(const std::string& raw_key, const std::string& raw_value) {
  std::string key = lower(trim(raw_key));
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string value = trim(raw_value);
  if (key == "model") {
    const std::string v = lower(value);
    for (const auto& m : kModelNames) {
      if (v == m.name) {
        model = m.kind;
        return;
      }
    }
    bad_value(key, value,
              "unconstrained, east, fa, excluded_volume_classical, quantum_kcm, "
              "rydberg_effective or rydberg_three_level");
  } else if (key == "constraint") {
    constraint = parse_constraint(key, value);
  } else if (key == "n_sites" || key == "n") {
    n_sites = parse_integer<int>(key, value);
  } else if (key == "kappa_ratio") {
    kappa_ratio = parse_real(key, value);
  } else if (key == "x") {
    x = parse_real(key, value);
  } else if (key == "theta") {
    theta = parse_angle(value);
  } else if (key == "lambda") {
    lambda = parse_real(key, value);
  } else if (key == "boundary") {
    const std::string v = lower(value);
    if (v == "periodic") boundary = Boundary::Periodic;
    else if (v == "open") boundary = Boundary::Open;
    else bad_value(key, value, "periodic or open");
  } else if (key == "initial_state") {
    initial_state = lower(value);
  } else if (key == "t_max" || key == "tmax") {
    t_max = parse_real(key, value);
  } else if (key == "time_grid") {
    // "log", "linear", optionally followed by the point count: "log 81".
    std::istringstream is(lower(value));
    std::string kind;
    is >> kind;
    if (kind == "log") time_grid = GridKind::Log;
    else if (kind == "linear") time_grid = GridKind::Linear;
    else bad_value(key, value, "log or linear, optionally followed by a point count");
    std::string count;
    if (is >> count) n_points = parse_integer<std::size_t>(key, count);
  } else if (key == "n_points") {
    n_points = parse_integer<std::size_t>(key, value);
  } else if (key == "t_min") {
    t_min = parse_real(key, value);
  } else if (key == "n_trajectories" || key == "trajectories") {
    n_trajectories = parse_integer<std::size_t>(key, value);
  } else if (key == "master_seed" || key == "seed") {
    master_seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "oracle") {
    const std::string v = lower(value);
    if (v == "on" || v == "true" || v == "1") oracle = true;
    else if (v == "off" || v == "false" || v == "0") oracle = false;
    else bad_value(key, value, "on or off");
  } else if (key == "output_path" || key == "out") {
    output_path = value;
  } else if (key == "omega_c") {
    three_level.omega_c = parse_real(key, value);
  } else if (key == "omega_p") {
    three_level.omega_p = parse_real(key, value);
  } else if (key == "gamma") {
    three_level.gamma = parse_real(key, value);
  } else if (key == "v") {
    three_level.v = parse_real(key, value);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown config key '" + raw_key + "'");
  }
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::InvalidArgument,
           "config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return parse(text);

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, "manifest '" + path + "': " + e.what());
  }
  if (!doc.contains("config") || !doc["config"].is_object()) {
    fail(ErrorCode::InvalidArgument, "manifest '" + path + "' has no config object");
  }
  ExperimentConfig cfg;
  for (const auto& [k, v] : doc["config"].items()) {
    cfg.set(k, v.is_string() ? v.get<std::string>() : v.dump());
  }
  return cfg;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("model", to_string(model));
  if (constraint) e.emplace_back("constraint", constraint_key(*constraint));
  e.emplace_back("n_sites", std::to_string(n_sites));
  if (kappa_ratio) e.emplace_back("kappa_ratio", format_real(*kappa_ratio));
  if (x) e.emplace_back("x", format_real(*x));
  if (theta) e.emplace_back("theta", format_real(*theta));
  e.emplace_back("lambda", format_real(lambda));
  if (boundary) e.emplace_back("boundary", to_string(*boundary));
  e.emplace_back("initial_state", resolved_initial_state());
  e.emplace_back("t_max", format_real(t_max));
  e.emplace_back("time_grid", time_grid == GridKind::Log ? "log" : "linear");
  e.emplace_back("n_points", std::to_string(n_points));
  e.emplace_back("t_min", format_real(t_min));
  e.emplace_back("n_trajectories", std::to_string(n_trajectories));
  e.emplace_back("master_seed", std::to_string(master_seed));
  e.emplace_back("oracle", oracle ? "on" : "off");
  e.emplace_back("output_path", output_path);
  if (model == ModelKind::RydbergThreeLevel) {
    e.emplace_back("omega_c", format_real(three_level.omega_c));
    e.emplace_back("omega_p", format_real(three_level.omega_p));
    e.emplace_back("gamma", format_real(three_level.gamma));
    e.emplace_back("v", format_real(three_level.v));
  }
  return e;
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries()) out += k + " = " + v + "\n";
  return out;
}

void ExperimentConfig::validate() const {
  auto check = [](bool ok, const std::string& what) {
    require(ok, ErrorCode::InvalidArgument, "invalid config: " + what);
  };
  const std::string name = to_string(model);
  check(n_sites >= 1 && n_sites <= 30, "n_sites must lie in [1, 30]");
  check(lambda > 0.0, "lambda must be positive");
  check(t_max > 0.0, "t_max must be positive");
  check(n_points >= 2, "n_points must be at least 2");
  check(n_trajectories >= 1, "n_trajectories must be at least 1");
  check(time_grid == GridKind::Linear || (t_min > 0.0 && t_min < t_max),
        "log grids need 0 < t_min < t_max");
  check(!theta || model == ModelKind::QuantumKCM, "theta applies only to quantum_kcm, not " + name);
  check(!constraint || model == ModelKind::QuantumKCM,
        "constraint applies only to quantum_kcm; the classical models name it directly");
  check(!x || is_rydberg(model), "x applies only to rydberg_* models, not " + name);
  check(!kappa_ratio || !is_rydberg(model), "rydberg models take x instead of kappa_ratio");
  check(!kappa_ratio || *kappa_ratio > 0.0, "kappa_ratio must be positive");
  check(!x || *x > 0.0, "x must be positive");
  if (model == ModelKind::RydbergThreeLevel) {
    const auto& p = three_level;
    check(p.omega_c > 0.0 && p.omega_p > 0.0 && p.gamma > 0.0 && p.v > 0.0,
          "omega_c, omega_p, gamma and v must be positive");
    check(!x, "rydberg_three_level takes omega_p/omega_c, not x");
  }
  const int dim = model == ModelKind::RydbergThreeLevel ? 3 : 2;
  const std::string s = resolved_initial_state();
  if (s == "all_up" || s == "all_down") return;
  if (s == "product_s") {
    check(model != ModelKind::RydbergThreeLevel, "product_s is not defined for rydberg_three_level");
    return;
  }
  check(static_cast<int>(s.size()) == n_sites,
        "initial_state must be all_up, all_down, product_s or a string of " +
            std::to_string(n_sites) + " site levels");
  for (char c : s) {
    check(c >= '0' && c < '0' + dim, "initial_state has an invalid site level '" +
                                         std::string(1, c) + "'");
  }
}

Boundary ExperimentConfig::resolved_boundary() const {
  if (boundary) return *boundary;
  return is_rydberg(model) || model == ModelKind::ExcludedVolumeClassical ? Boundary::Open
                                                                          : Boundary::Periodic;
}

std::string ExperimentConfig::resolved_initial_state() const {
  if (initial_state) return *initial_state;
  return is_rydberg(model) || model == ModelKind::ExcludedVolumeClassical ? "all_down" : "all_up";
}

double ExperimentConfig::resolved_kappa() const {
  if (is_rydberg(model)) {
    const double xx = model == ModelKind::RydbergThreeLevel
                          ? three_level.omega_p / three_level.omega_c
                          : x.value_or(1.0);
    return xx * xx / (1.0 + xx * xx);
  }
  return kappa_from_ratio(kappa_ratio.value_or(1.0));
}

std::vector<double> ExperimentConfig::grid() const {
  return make_time_grid(time_grid, t_max, n_points, t_min);
}

ClassicalKCMSpec ExperimentConfig::classical_spec() const {
  ClassicalKCMSpec spec;
  spec.lambda = lambda;
  spec.kappa = resolved_kappa();
  spec.n_sites = n_sites;
  spec.constraint.boundary = resolved_boundary();
  switch (model) {
    case ModelKind::Unconstrained: spec.constraint.kind = ConstraintKind::Unconstrained; break;
    case ModelKind::East: spec.constraint.kind = ConstraintKind::East; break;
    case ModelKind::FA: spec.constraint.kind = ConstraintKind::FA; break;
    case ModelKind::ExcludedVolumeClassical:
      spec.constraint.kind = ConstraintKind::ExcludedVolume;
      break;
    case ModelKind::QuantumKCM:
      spec.constraint.kind = constraint.value_or(ConstraintKind::East);
      break;
    default:
      fail(ErrorCode::InvalidArgument, std::string("no classical spec for ") + to_string(model));
  }
  spec.validate();
  return spec;
}

QuantumKCMSpec ExperimentConfig::quantum_spec() const {
  require(model == ModelKind::QuantumKCM, ErrorCode::InvalidArgument,
          std::string("no quantum KCM spec for ") + to_string(model));
  QuantumKCMSpec spec;
  spec.kcm = classical_spec();
  spec.theta = theta.value_or(std::numbers::pi / 2);
  spec.validate();
  return spec;
}

RydbergSpec ExperimentConfig::rydberg_spec() const {
  require(is_rydberg(model), ErrorCode::InvalidArgument,
          std::string("no Rydberg spec for ") + to_string(model));
  RydbergSpec spec;
  spec.n_sites = n_sites;
  spec.boundary = resolved_boundary();
  if (model == ModelKind::RydbergThreeLevel) {
    spec.three_level = three_level;
    spec.x = three_level.omega_p / three_level.omega_c;
  } else {
    spec.x = x.value_or(1.0);
  }
  spec.validate();
  return spec;
}

}  // namespace qkcm
