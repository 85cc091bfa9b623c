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

#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qkcm/qkcm.h"

namespace {

int report_failure(qkcm_status status, const char* context) {
  std::fprintf(stderr, "qkcm %s: %s\n", context, qkcm_last_error());
  return static_cast<int>(status);
}

void print_check(const char* name, int passed, const char* detail, void*) {
  std::printf("[%s] %-26s %s\n", passed ? "PASS" : "FAIL", name, detail);
  std::fflush(stdout);
}

struct Overrides {
  std::optional<std::string> config;
  std::vector<std::pair<std::string, std::optional<std::string>>> keys;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical and quantum kinetically constrained spin models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qkcm_version());

  Overrides run_opts;
  run_opts.keys = {{"model", {}},        {"n_sites", {}},        {"kappa_ratio", {}},
                   {"x", {}},            {"theta", {}},          {"lambda", {}},
                   {"t_max", {}},        {"n_trajectories", {}}, {"master_seed", {}},
                   {"output_path", {}},  {"oracle", {}}};
  auto* run = app.add_subcommand("run", "run an experiment and write its result files");
  run->add_option("--config", run_opts.config, "key = value file or a run manifest");
  const char* flags[] = {"--model", "--n",    "--kappa-ratio",  "--x",    "--theta", "--lambda",
                         "--tmax",  "--trajectories", "--seed", "--out",  "--oracle"};
  const char* help[] = {"model name",
                        "number of sites",
                        "kappa/(1-kappa)",
                        "omega_p/omega_c for the Rydberg models",
                        "rotation angle, e.g. pi/2",
                        "classical rate",
                        "final time",
                        "number of trajectories",
                        "master seed",
                        "output directory",
                        "on or off; bare flag means on"};
  for (std::size_t i = 0; i < run_opts.keys.size(); ++i) {
    auto* opt = run->add_option(flags[i], run_opts.keys[i].second, help[i]);
    if (run_opts.keys[i].first == "oracle") opt->expected(0, 1);
  }

  std::string level = "fast";
  auto* verify = app.add_subcommand("verify", "run the oracle suite");
  verify->add_option("level,--level", level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));

  std::string file_a, file_b;
  std::optional<std::string> report_out;
  auto* compare = app.add_subcommand("compare", "compare a classical and a quantum series file");
  compare->add_option("classical", file_a, "t,value,stderr file")->required();
  compare->add_option("quantum", file_b, "t,value,stderr file")->required();
  compare->add_option("--out", report_out, "write the JSON report here as well");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : QKCM_USAGE_ERROR;
  }

  if (*run) {
    qkcm_config* cfg = nullptr;
    qkcm_status st = qkcm_config_create(&cfg);
    if (st != QKCM_OK) return report_failure(st, "run");
    if (run_opts.config) st = qkcm_config_load(cfg, run_opts.config->c_str());
    for (const auto& [key, value] : run_opts.keys) {
      if (st != QKCM_OK || !value) continue;
      const std::string v = value->empty() && key == "oracle" ? "on" : *value;
      st = qkcm_config_set(cfg, key.c_str(), v.c_str());
    }
    if (st != QKCM_OK) {
      qkcm_config_destroy(cfg);
      return report_failure(st, "run");
    }
    qkcm_result* result = nullptr;
    st = qkcm_run(cfg, &result);
    qkcm_config_destroy(cfg);
    if (st != QKCM_OK) return report_failure(st, "run");
    std::printf("wrote %zu series to %s in %.2f s\n", qkcm_result_series_count(result),
                qkcm_result_output_path(result), qkcm_result_wall_seconds(result));
    qkcm_result_destroy(result);
    return 0;
  }

  if (*verify) {
    int failed = 0;
    const qkcm_status st = qkcm_verify(level.c_str(), print_check, nullptr, &failed);
    if (st == QKCM_VERIFICATION_FAILED) {
      std::printf("%d check(s) failed\n", failed);
      return st;
    }
    if (st != QKCM_OK) return report_failure(st, "verify");
    std::printf("all checks passed\n");
    return 0;
  }

  char* json = nullptr;
  const qkcm_status st = qkcm_compare(file_a.c_str(), file_b.c_str(), &json);
  if (st != QKCM_OK) return report_failure(st, "compare");
  std::fputs(json, stdout);
  int code = 0;
  if (report_out) {
    if (std::FILE* f = std::fopen(report_out->c_str(), "w")) {
      std::fputs(json, f);
      std::fclose(f);
    } else {
      std::fprintf(stderr, "qkcm compare: cannot write %s\n", report_out->c_str());
      code = QKCM_USAGE_ERROR;
    }
  }
  qkcm_string_free(json);
  return code;
}
