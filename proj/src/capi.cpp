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

#include "qkcm/qkcm.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>

#include "qkcm/config.hpp"
#include "qkcm/error.hpp"
#include "qkcm/runner.hpp"
#include "qkcm/verify.hpp"

struct qkcm_config {
  qkcm::ExperimentConfig config;
};

struct qkcm_result {
  qkcm::RunResult result;
};

namespace {

thread_local std::string g_last_error;

qkcm_status status_of(qkcm::ErrorCode code) {
  switch (code) {
    case qkcm::ErrorCode::InvalidArgument:
    case qkcm::ErrorCode::DimensionMismatch:
    case qkcm::ErrorCode::OutOfRange:
    case qkcm::ErrorCode::CapExceeded:
    case qkcm::ErrorCode::Io:
      return QKCM_USAGE_ERROR;
    default:
      return QKCM_NUMERICAL_FAILURE;
  }
}

template <typename Fn>
qkcm_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const qkcm::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QKCM_NUMERICAL_FAILURE;
  } catch (...) {
    g_last_error = "unknown error";
    return QKCM_NUMERICAL_FAILURE;
  }
}

qkcm_status null_argument(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return QKCM_USAGE_ERROR;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* qkcm_last_error(void) { return g_last_error.c_str(); }

const char* qkcm_version(void) { return qkcm::kVersion; }

qkcm_status qkcm_config_create(qkcm_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new qkcm_config{};
    return QKCM_OK;
  });
}

qkcm_status qkcm_config_load(qkcm_config* config, const char* path) {
  if (!config || !path) return null_argument("config/path");
  return guarded([&] {
    config->config = qkcm::ExperimentConfig::load(path);
    return QKCM_OK;
  });
}

qkcm_status qkcm_config_set(qkcm_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return null_argument("config/key/value");
  return guarded([&] {
    config->config.set(key, value);
    return QKCM_OK;
  });
}

qkcm_status qkcm_config_text(const qkcm_config* config, char* buffer, size_t capacity,
                             size_t* needed) {
  if (!config) return null_argument("config");
  return guarded([&] {
    const std::string text = config->config.to_text();
    if (needed) *needed = text.size() + 1;
    if (buffer && capacity > 0) {
      const size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
    return QKCM_OK;
  });
}

void qkcm_config_destroy(qkcm_config* config) { delete config; }

qkcm_status qkcm_run(const qkcm_config* config, qkcm_result** out) {
  if (!config || !out) return null_argument("config/out");
  *out = nullptr;
  return guarded([&] {
    auto r = qkcm::run_experiment(config->config);
    *out = new qkcm_result{std::move(r)};
    return QKCM_OK;
  });
}

size_t qkcm_result_series_count(const qkcm_result* result) {
  return result ? result->result.series.size() : 0;
}

const char* qkcm_result_series_name(const qkcm_result* result, size_t index) {
  if (!result || index >= result->result.series.size()) return nullptr;
  return result->result.series[index].label.c_str();
}

size_t qkcm_result_series_length(const qkcm_result* result, size_t index) {
  if (!result || index >= result->result.series.size()) return 0;
  return result->result.series[index].size();
}

qkcm_status qkcm_result_series_data(const qkcm_result* result, size_t index, double* times,
                                    double* values, double* stderrs) {
  if (!result) return null_argument("result");
  if (index >= result->result.series.size()) {
    g_last_error = "series index out of range";
    return QKCM_USAGE_ERROR;
  }
  const auto& s = result->result.series[index];
  for (size_t i = 0; i < s.size(); ++i) {
    if (times) times[i] = s.times[i];
    if (values) values[i] = s.values[i];
    if (stderrs) stderrs[i] = s.stderrs ? (*s.stderrs)[i] : std::numeric_limits<double>::quiet_NaN();
  }
  return QKCM_OK;
}

const char* qkcm_result_output_path(const qkcm_result* result) {
  return result ? result->result.output_path.c_str() : nullptr;
}

double qkcm_result_wall_seconds(const qkcm_result* result) {
  return result ? result->result.wall_seconds : 0.0;
}

void qkcm_result_destroy(qkcm_result* result) { delete result; }

qkcm_status qkcm_verify(const char* level, qkcm_report_fn report, void* user, int* n_failed) {
  if (!level) return null_argument("level");
  return guarded([&] {
    const std::string l = level;
    if (l != "fast" && l != "full") {
      g_last_error = "verify level must be fast or full";
      return QKCM_USAGE_ERROR;
    }
    int failed = 0;
    qkcm::verify_suite(l == "fast" ? qkcm::VerifyLevel::Fast : qkcm::VerifyLevel::Full,
                       [&](const qkcm::CheckResult& c) {
                         if (!c.passed) ++failed;
                         if (report) report(c.name.c_str(), c.passed ? 1 : 0, c.detail.c_str(), user);
                       });
    if (n_failed) *n_failed = failed;
    if (failed > 0) {
      g_last_error = std::to_string(failed) + " verification check(s) failed";
      return QKCM_VERIFICATION_FAILED;
    }
    return QKCM_OK;
  });
}

qkcm_status qkcm_compare(const char* classical_csv, const char* quantum_csv, char** out_json) {
  if (!classical_csv || !quantum_csv) return null_argument("file");
  if (out_json) *out_json = nullptr;
  return guarded([&] {
    const auto report = qkcm::compare_files(classical_csv, quantum_csv);
    if (out_json) *out_json = duplicate(report.to_json());
    return QKCM_OK;
  });
}

void qkcm_string_free(char* text) { std::free(text); }

}  // extern "C"
