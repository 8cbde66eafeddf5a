#pragma once

// Time evolution engines: Schrodinger (pure states), Lindblad (density
// matrices) and the reduced amplitude chain for the ladder atom at x = 0.
// Observables are taken at grid points reached by integrating exactly to
// them; state vectors are never interpolated.

#include "dce3/integrator.hpp"
#include "dce3/model.hpp"

#include <string>
#include <vector>

namespace dce3 {

// Sample times; uniform in scaled time eps*t for the usual runs.
class SampleGrid {
 public:
  SampleGrid() = default;
  // count points eps*t = k * eps_t_end / (count - 1), k = 0..count-1.
  static SampleGrid uniform_scaled(double epsilon, double eps_t_end, int count);
  // Plain times, for unmodulated problems.
  static SampleGrid explicit_times(std::vector<double> times);

  const std::vector<double>& times() const { return times_; }
  double epsilon() const { return epsilon_; }
  double scaled(double t) const { return epsilon_ * t; }

 private:
  std::vector<double> times_;
  double epsilon_ = 0.0;
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.0;
  std::string tableau = "fehlberg78";
  SampleGrid grid;

  void validate() const;
  StepControl step_control() const;
};

struct Diagnostics {
  double max_norm_deviation = 0.0;     // pure runs: | ||psi||^2 - 1 |
  double max_trace_deviation = 0.0;    // Lindblad runs: |tr rho - 1|
  double max_hermiticity_deviation = 0.0;
  double min_eigenvalue = 0.0;
  double max_leakage = 0.0;
  bool truncation_warning = false;
  bool norm_ok = true;
  StepStatistics steps;
  std::string kernels;
  std::string tableau;
};

struct Sample {
  double t = 0.0;
  double eps_t = 0.0;
  QuantumState state;
};

struct EvolutionResult {
  std::vector<Sample> samples;
  Diagnostics diagnostics;
};

// Pure-state propagation d|psi>/dt = -i H |psi> in the model's frame.
EvolutionResult evolve_schrodinger(const HamiltonianModel& model, const QuantumState& initial,
                                   const IntegratorConfig& cfg);

// Master-equation propagation; throws IntegrationError when positivity is lost
// beyond tolerance.
EvolutionResult evolve_lindblad(const HamiltonianModel& model, const QuantumState& initial,
                                const IntegratorConfig& cfg);
EvolutionResult evolve_lindblad(const LindbladGenerator& generator, const QuantumState& initial,
                                const IntegratorConfig& cfg);

// Reduced chain for p_{1,n}, n even, of the ladder atom at x = 0, Delta2 = 0,
// |epsilon| << |g|.
struct ChainModel {
  double g = 0.0;
  double g2 = 0.0;
  double epsilon = 0.0;
  int n_chain = 400;  // highest even photon number kept

  void validate() const;
  std::size_t size() const { return static_cast<std::size_t>(n_chain / 2 + 1); }
};

// Tridiagonal coefficients of the chain: dp_k/dt = lower[k] p_{k-1} + upper[k] p_{k+1},
// with p_k = p_{1,2k}.
struct ChainCoefficients {
  std::vector<double> lower;
  std::vector<double> upper;
};
ChainCoefficients chain_coefficients(const ChainModel& model);

// p_{3,n} ~= -(g/g2) sqrt((n+2)/(n+1)) p_{1,n+2}; throws ParameterError for g2 = 0.
std::vector<cplx> recover_third_level(const ChainModel& model, const std::vector<cplx>& p1);

struct ChainSample {
  double t = 0.0;
  double eps_t = 0.0;
  std::vector<cplx> p1;  // p1[k] = p_{1,2k}
};

struct ChainResult {
  std::vector<ChainSample> samples;
  Diagnostics diagnostics;
};

ChainResult evolve_amplitude_chain(const ChainModel& model, const std::vector<cplx>& initial,
                                   const IntegratorConfig& cfg);

// Pure ket on a ladder space with cutoff n_chain: p1 on |1,2k>, p3 on |3,2k>
// (when g2 != 0), p2 = 0.
Ket chain_to_ket(const ChainModel& model, const std::vector<cplx>& p1);

}  // namespace dce3
