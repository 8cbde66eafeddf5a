// dce3 command-line front end.
//
// Exit codes: 0 success, 1 regime warning under --strict (or a failed
// comparison), 2 integration error, 3 configuration error.

#include "dce3/compare.hpp"
#include "dce3/error.hpp"
#include "dce3/kernels.hpp"
#include "dce3/runner.hpp"
#include "dce3/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitWarning = 1;
constexpr int kExitIntegration = 2;
constexpr int kExitConfig = 3;

int exit_code_for(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const dce3::IntegrationError&) {
    return kExitIntegration;
  } catch (const dce3::StateError&) {
    return kExitIntegration;
  } catch (const dce3::NormalizationError&) {
    return kExitIntegration;
  } catch (const dce3::Error&) {
    return kExitConfig;
  } catch (...) {
    return kExitIntegration;
  }
}

std::string what(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return ex.what();
  } catch (...) {
    return "unknown error";
  }
}

dce3::Scenario apply_frame(dce3::Scenario s, const std::string& frame) {
  using dce3::Method;
  if (frame.empty()) return s;
  if (frame == "rwa") {
    if (s.method == Method::FullLab) s.method = Method::FullRwa;
    return s;
  }
  if (s.method != Method::FullRwa && s.method != Method::FullLab) {
    throw dce3::ConfigError(fmt::format("--frame lab applies to full evolutions, not '{}'", to_string(s.method)));
  }
  if (s.method == Method::FullRwa) {
    s.method = Method::FullLab;
    s.name += "-lab";
    if (s.eps_t_end > dce3::kLabFrameMaxEpsT) {
      const double spacing = s.eps_t_end / std::max(1, s.samples - 1);
      s.eps_t_end = dce3::kLabFrameMaxEpsT;
      s.samples = static_cast<int>(std::lround(s.eps_t_end / spacing)) + 1;
    }
  }
  return s;
}

int cmd_run(const std::vector<std::string>& presets, const std::vector<std::string>& configs,
            const std::string& out_dir, const std::string& frame, bool strict, int jobs) {
  std::vector<dce3::Scenario> scenarios;
  try {
    std::vector<std::string> names;
    for (const auto& p : presets) {
      if (p == "all") {
        for (const auto& n : dce3::preset_names()) names.push_back(n);
      } else {
        names.push_back(p);
      }
    }
    for (const auto& n : names) {
      dce3::Scenario s = dce3::preset(n);
      s.validate();
      scenarios.push_back(apply_frame(std::move(s), frame));
    }
    for (const auto& c : configs) scenarios.push_back(apply_frame(dce3::parse_scenario_file(c), frame));
    for (const auto& s : scenarios) s.validate();
  } catch (const dce3::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitConfig;
  }
  if (scenarios.empty()) {
    fmt::print(stderr, "error: run needs --preset or --config\n");
    return kExitConfig;
  }

  int code = kExitOk;
  dce3::run_parallel(scenarios, jobs, [&](const dce3::JobOutcome& o) {
    const std::string& name = scenarios[o.index].name;
    if (o.error) {
      fmt::print(stderr, "{}: error: {}\n", name, what(o.error));
      code = std::max(code, exit_code_for(o.error));
      return;
    }
    const dce3::RunResult& r = *o.result;
    try {
      const auto files = dce3::write_outputs(r, out_dir);
      fmt::print("{}: wrote {}\n", name, files.csv.string());
    } catch (const dce3::Error& e) {
      fmt::print(stderr, "{}: error: {}\n", name, e.what());
      code = std::max(code, kExitConfig);
      return;
    }
    for (const auto& w : r.warnings) fmt::print(stderr, "{}: warning: {}\n", name, w);
    if (!dce3::quality_ok(r)) {
      fmt::print(stderr, "{}: error: conservation check failed (norm deviation {:.3e}, trace deviation {:.3e})\n",
                 name, r.diagnostics.max_norm_deviation, r.diagnostics.max_trace_deviation);
      code = std::max(code, kExitIntegration);
    } else if (strict && !r.warnings.empty()) {
      code = std::max(code, kExitWarning);
    }
  });
  return code;
}

int cmd_compare(const std::string& a, const std::string& b, const std::vector<std::string>& tols,
                const std::string& window) {
  try {
    dce3::CompareOptions opts;
    for (const auto& t : tols) {
      for (auto& tol : dce3::parse_tolerances(t)) opts.tolerances.push_back(std::move(tol));
    }
    if (!window.empty()) {
      const auto colon = window.find(':');
      if (colon == std::string::npos) throw dce3::ComparisonError("--window needs lo:hi in eps*t");
      opts.window = std::pair{std::stod(window.substr(0, colon)), std::stod(window.substr(colon + 1))};
    }
    const auto report = dce3::compare_runs(a, b, opts);
    std::cout << dce3::format_report(report);
    return report.pass ? kExitOk : kExitWarning;
  } catch (const dce3::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument&) {
    fmt::print(stderr, "error: --window bounds must be numbers\n");
    return kExitConfig;
  }
}

int cmd_presets(const std::string& show) {
  if (!show.empty()) {
    try {
      std::cout << dce3::serialize_scenario(dce3::preset(show));
      return kExitOk;
    } catch (const dce3::Error& e) {
      fmt::print(stderr, "error: {}\n", e.what());
      return kExitConfig;
    }
  }
  for (const auto& n : dce3::preset_names()) {
    const auto s = dce3::preset(n);
    fmt::print("{:<20} {:<7} {:<9} N={:<4} eps={:<6g} eps_t_end={:g}\n", n, to_string(s.atom.config),
               to_string(s.method), s.fock_cutoff, s.epsilon, s.eps_t_end);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon generation from vacuum in a modulated cavity with a three-level atom"};
  app.require_subcommand(1);
  std::string kernels;
  app.add_option("--kernels", kernels, "Force the vector kernels (scalar, avx2)");

  auto* run = app.add_subcommand("run", "Run presets or config files");
  std::vector<std::string> presets, configs;
  std::string out_dir = "runs", frame;
  bool strict = false;
  int jobs = 1;
  run->add_option("--preset", presets, "Preset name (repeatable, 'all' for every preset)");
  run->add_option("--config", configs, "Scenario config file (repeatable)")->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--frame", frame, "Integration frame for full evolutions")->check(CLI::IsMember({"rwa", "lab"}));
  run->add_flag("--strict", strict, "Exit with 1 on physics-regime warnings");
  run->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber)->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Compare two runs column by column");
  std::string run_a, run_b, window;
  std::vector<std::string> tols;
  compare->add_option("runA", run_a, "First run (CSV, JSON sidecar or stem)")->required();
  compare->add_option("runB", run_b, "Second run")->required();
  compare->add_option("--tol", tols, "Tolerances, e.g. 'mean_n=rel:0.05,p_*=abs:1e-3'");
  compare->add_option("--window", window, "Restrict to eps*t in lo:hi");

  auto* list = app.add_subcommand("presets", "List presets");
  std::string show;
  list->add_option("--show", show, "Print a preset as a config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (!kernels.empty()) {
    try {
      dce3::kernels::select(kernels);
    } catch (const dce3::Error& e) {
      fmt::print(stderr, "error: {}\n", e.what());
      return kExitConfig;
    }
  }
  if (*run) return cmd_run(presets, configs, out_dir, frame, strict, jobs);
  if (*compare) return cmd_compare(run_a, run_b, tols, window);
  return cmd_presets(show);
}
