#pragma once

// Scenario description, presets and the INI config format.
//
//   [scenario]   name, method = full-rwa | full-lab | lindblad | chain | analytic,
//                branch (analytic only)
//   [hilbert]    config = ladder | v, fock_cutoff
//   [atom]       g, g2 | g3, delta2 | delta3, lambda, lambda2 | lambda3, e1
//   [drive]      epsilon, and either x or resonance = <branch name>
//   [integrator] rel_tol, abs_tol, max_step, tableau
//   [output]     eps_t_end, samples, photon_dist, chain_cutoff
//
// All quantities are dimensionless (hbar = omega_0 = 1).

#include "dce3/evolve.hpp"
#include "dce3/reduced.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dce3 {

enum class Method { FullRwa, FullLab, Lindblad, Chain, Analytic };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

// Lab-frame runs resolve optical phases and are capped in scaled time.
inline constexpr double kLabFrameMaxEpsT = 0.5;

struct Scenario {
  std::string name = "custom";
  Method method = Method::FullRwa;
  std::optional<Branch> branch;      // analytic closed form
  std::optional<Branch> resonance;   // when set, x is derived from the couplings
  int fock_cutoff = 196;
  AtomParams atom;
  double epsilon = 1e-3;
  double x = 0.0;                    // used when resonance is empty
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double max_step = 0.0;
  std::string tableau = "fehlberg78";
  double eps_t_end = 3.0;
  int samples = 301;
  bool photon_dist = false;
  int chain_cutoff = 400;

  // x after resolving the resonance condition.
  double resolved_x() const;
  DriveParams drive() const;
  HilbertSpec spec() const;
  Frame frame() const;
  HamiltonianModel model() const;
  IntegratorConfig integrator_config() const;
  ChainModel chain_model() const;

  // Method/config compatibility; throws ConfigError or ParameterError.
  void validate() const;

  bool operator==(const Scenario&) const = default;
};

std::vector<std::string> preset_names();
Scenario preset(std::string_view name);

Scenario parse_scenario(std::istream& in);
Scenario parse_scenario_file(const std::string& path);
// A preset name or a config path.
Scenario load_scenario(const std::string& name_or_path);

std::string serialize_scenario(const Scenario& scenario);

}  // namespace dce3
