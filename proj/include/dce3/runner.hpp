#pragma once

// Scenario execution and output files.

#include "dce3/observables.hpp"
#include "dce3/scenario.hpp"

#include <filesystem>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dce3 {

struct RunResult {
  Scenario scenario;
  std::vector<ObservableSample> samples;
  Diagnostics diagnostics;
  std::vector<std::string> warnings;
};

// Throws IntegrationError, ConfigError, ... ; never writes files.
RunResult run_scenario(const Scenario& scenario);

// Pure-state norm or Lindblad trace/positivity outside tolerance.
bool quality_ok(const RunResult& result);

std::vector<std::string> csv_columns(const RunResult& result);
std::string format_csv(const RunResult& result);
std::string format_photon_dist_csv(const RunResult& result);
std::string format_sidecar(const RunResult& result);

struct OutputFiles {
  std::filesystem::path csv;
  std::filesystem::path json;
  std::filesystem::path photon_dist;  // empty unless requested
};

// <dir>/<name>.csv, <dir>/<name>.json and, on request, <dir>/<name>.photon_dist.csv.
OutputFiles write_outputs(const RunResult& result, const std::filesystem::path& dir);

// Runs independent scenarios on up to `jobs` threads. `done` is called from
// the worker thread once per scenario, with either a result or the exception.
struct JobOutcome {
  std::size_t index = 0;
  std::optional<RunResult> result;
  std::exception_ptr error;
};
std::vector<JobOutcome> run_parallel(const std::vector<Scenario>& scenarios, int jobs,
                                     const std::function<void(const JobOutcome&)>& done = {});

}  // namespace dce3
