#include "dce3/observables.hpp"

#include "dce3/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace dce3 {

double mandel_q(double mean_n, double mean_n2) {
  if (mean_n < kVacuumMeanN) return 0.0;
  return (mean_n2 - mean_n * mean_n - mean_n) / mean_n;
}

double mandel_q_from_distribution(const std::vector<double>& photon_dist) {
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t n = 0; n < photon_dist.size(); ++n) {
    const double dn = static_cast<double>(n);
    m1 += dn * photon_dist[n];
    m2 += dn * dn * photon_dist[n];
  }
  return mandel_q(m1, m2);
}

ObservableSample compute_observables(const QuantumState& state, double t, double eps_t) {
  const double dev = state.norm_deviation();
  if (!(dev <= kObservableNormTolerance)) {
    throw StateError(fmt::format("state is off normalization by {:.3e}", dev));
  }
  const HilbertSpec& spec = state.spec();
  ObservableSample s;
  s.t = t;
  s.eps_t = eps_t;
  std::vector<double> diag(spec.dimension());
  if (state.is_pure()) {
    const Ket& psi = state.ket();
    for (std::size_t k = 0; k < diag.size(); ++k) diag[k] = std::norm(psi(static_cast<Eigen::Index>(k)));
    s.photon_dist = photon_distribution(psi, spec);
    s.pop = atomic_populations(psi, spec);
  } else {
    const Density& rho = state.density();
    for (std::size_t k = 0; k < diag.size(); ++k) {
      diag[k] = rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
    }
    s.photon_dist = partial_trace_atom(rho, spec);
    s.pop = atomic_populations(rho, spec);
  }
  for (std::size_t n = 0; n < s.photon_dist.size(); ++n) {
    const double dn = static_cast<double>(n);
    s.mean_n += dn * s.photon_dist[n];
    s.mean_n2 += dn * dn * s.photon_dist[n];
  }
  s.mandel_q = mandel_q(s.mean_n, s.mean_n2);
  for (std::size_t k = 0; k < diag.size(); ++k) {
    if (diag[k] > kAmpProbThreshold) s.amp_probs[unflatten(spec, k)] = diag[k];
  }
  s.leakage = fock_leakage(s.photon_dist);
  return s;
}

std::vector<cplx> interaction_phases(const HamiltonianModel& model, Frame frame, double t) {
  const HilbertSpec& spec = model.spec;
  std::vector<cplx> phases(spec.dimension(), cplx(1.0, 0.0));
  if (frame != Frame::Lab) return phases;
  // Undo the free evolution of the bare levels and of the modulated cavity,
  // int_0^t omega_s ds = t + eps (1 - cos(eta t)) / eta.
  const double eta = model.drive.eta();
  const double cavity_phase = t + model.drive.epsilon * (1.0 - std::cos(eta * t)) / eta;
  const std::array<double, 3> energies{model.atom.e1, model.atom.e2(), model.atom.e3()};
  for (int i = 1; i <= 3; ++i) {
    for (int n = 0; n <= spec.fock_cutoff(); ++n) {
      const double phi = energies[static_cast<std::size_t>(i - 1)] * t + n * cavity_phase;
      phases[flat_index(spec, i, n)] = std::polar(1.0, phi);
    }
  }
  return phases;
}

std::map<BasisIndex, double> extract_interaction_probs(const QuantumState& state, Frame state_frame,
                                                       const HamiltonianModel& model, double t) {
  if (!(state.spec() == model.spec)) throw ConfigError("state does not belong to the model's Hilbert space");
  if (state_frame != Frame::Lab && state_frame != rwa_frame(model.atom.config)) {
    throw ConfigError(fmt::format("state frame {} does not match the {} atom", to_string(state_frame),
                                  to_string(model.atom.config)));
  }
  const auto phases = interaction_phases(model, state_frame, t);
  const HilbertSpec& spec = model.spec;
  std::map<BasisIndex, double> out;
  for (std::size_t k = 0; k < spec.dimension(); ++k) {
    const auto ek = static_cast<Eigen::Index>(k);
    const double p = state.is_pure() ? std::norm(phases[k] * state.ket()(ek))
                                     : (phases[k] * state.density()(ek, ek) * std::conj(phases[k])).real();
    if (p > kAmpProbThreshold) out[unflatten(spec, k)] = p;
  }
  return out;
}

}  // namespace dce3
