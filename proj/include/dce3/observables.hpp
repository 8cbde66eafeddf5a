#pragma once

// Quantities derived from a state snapshot.

#include "dce3/model.hpp"

#include <array>
#include <map>
#include <vector>

namespace dce3 {

inline constexpr double kObservableNormTolerance = 1e-6;
inline constexpr double kAmpProbThreshold = 1e-14;
inline constexpr double kVacuumMeanN = 1e-12;

struct ObservableSample {
  double t = 0.0;
  double eps_t = 0.0;
  double mean_n = 0.0;
  double mean_n2 = 0.0;
  double mandel_q = 0.0;
  std::array<double, 3> pop{};  // sigma_11, sigma_22, sigma_33
  std::vector<double> photon_dist;
  std::map<BasisIndex, double> amp_probs;  // entries above kAmpProbThreshold
  double leakage = 0.0;
};

// Q = (<n^2> - <n>^2 - <n>) / <n>, defined as 0 when <n> < 1e-12.
double mandel_q(double mean_n, double mean_n2);
double mandel_q_from_distribution(const std::vector<double>& photon_dist);

// Throws StateError when the state is off normalization by more than 1e-6.
ObservableSample compute_observables(const QuantumState& state, double t = 0.0, double eps_t = 0.0);

// Diagonal phases e^{i phi_k(t)} taking a state in `frame` to the interaction
// picture of the model's atom layout. Identity for the RWA frames.
std::vector<cplx> interaction_phases(const HamiltonianModel& model, Frame frame, double t);

// |p_{i,n}|^2 in the interaction picture for a state produced in state_frame.
// Throws ConfigError when the frame or space does not belong to the model.
std::map<BasisIndex, double> extract_interaction_probs(const QuantumState& state, Frame state_frame,
                                                       const HamiltonianModel& model, double t);

}  // namespace dce3
