#include "dce3/evolve.hpp"

#include "dce3/error.hpp"
#include "dce3/kernels.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace dce3 {

SampleGrid SampleGrid::uniform_scaled(double epsilon, double eps_t_end, int count) {
  if (epsilon == 0.0) throw ConfigError("scaled sample grid needs a nonzero epsilon");
  if (count < 1) throw ConfigError("sample grid needs at least one point");
  if (!(eps_t_end >= 0.0)) throw ConfigError("sample grid end must be non-negative");
  if (count > 1 && eps_t_end == 0.0) throw ConfigError("sample grid must be strictly increasing");
  SampleGrid g;
  g.epsilon_ = epsilon;
  g.times_.resize(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double et = count == 1 ? eps_t_end : eps_t_end * k / (count - 1);
    g.times_[static_cast<std::size_t>(k)] = et / std::abs(epsilon);
  }
  g.epsilon_ = std::abs(epsilon);
  return g;
}

SampleGrid SampleGrid::explicit_times(std::vector<double> times) {
  SampleGrid g;
  g.times_ = std::move(times);
  return g;
}

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("integrator tolerances must be positive");
  if (max_step < 0.0) throw ConfigError("max_step must be non-negative");
  tableau_by_name(tableau);
  const auto& ts = grid.times();
  if (ts.empty()) throw ConfigError("sample grid is empty");
  if (ts.front() < 0.0) throw ConfigError("sample grid starts before t = 0");
  for (std::size_t k = 1; k < ts.size(); ++k) {
    if (!(ts[k] > ts[k - 1])) throw ConfigError("sample grid must be strictly increasing");
  }
}

StepControl IntegratorConfig::step_control() const {
  StepControl c;
  c.rel_tol = rel_tol;
  c.abs_tol = abs_tol;
  c.max_step = max_step;
  return c;
}

namespace {

template <class Snapshot>
void run_on_grid(const IntegratorConfig& cfg, const ComplexRhs& rhs, std::vector<cplx>& y,
                 Diagnostics& diag, Snapshot&& snapshot) {
  cfg.validate();
  EmbeddedRungeKutta stepper(tableau_by_name(cfg.tableau), cfg.step_control());
  double t = 0.0;
  for (double target : cfg.grid.times()) {
    if (target > t) stepper.advance(rhs, t, target, y);
    snapshot(target);
  }
  diag.steps = stepper.statistics();
  diag.kernels = kernels::active().name;
  diag.tableau = stepper.tableau().name;
}

void check_initial(const HamiltonianModel& model, const QuantumState& initial) {
  model.validate();
  if (!(initial.spec() == model.spec)) {
    throw DimensionError("initial state lives in a different Hilbert space than the model");
  }
}

}  // namespace

EvolutionResult evolve_schrodinger(const HamiltonianModel& model, const QuantumState& initial,
                                   const IntegratorConfig& cfg) {
  check_initial(model, initial);
  if (!initial.is_pure()) throw StateError("Schrodinger evolution needs a pure initial state");
  if (initial.norm_deviation() > kPureNormTolerance) throw StateError("initial ket is not normalized");

  const Hamiltonian h = build_hamiltonian(model);
  const cplx minus_i(0.0, -1.0);
  ComplexRhs rhs = [&h, minus_i](double t, std::span<const cplx> y, std::span<cplx> dy) {
    h.apply(t, y, dy, minus_i, false);
  };

  EvolutionResult result;
  const Ket& psi0 = initial.ket();
  std::vector<cplx> y(psi0.data(), psi0.data() + psi0.size());
  const double eps = model.drive.epsilon;
  run_on_grid(cfg, rhs, y, result.diagnostics, [&](double t) {
    Ket psi = Eigen::Map<const Ket>(y.data(), static_cast<Eigen::Index>(y.size()));
    QuantumState s = QuantumState::snapshot(model.spec, std::move(psi));
    Diagnostics& d = result.diagnostics;
    d.max_norm_deviation = std::max(d.max_norm_deviation, s.norm_deviation());
    d.max_leakage = std::max(d.max_leakage, fock_leakage(photon_distribution(s.ket(), model.spec)));
    result.samples.push_back(Sample{t, std::abs(eps) * t, std::move(s)});
  });
  Diagnostics& d = result.diagnostics;
  d.truncation_warning = d.max_leakage > kLeakageThreshold;
  d.norm_ok = d.max_norm_deviation <= kPureNormTolerance;
  return result;
}

EvolutionResult evolve_lindblad(const HamiltonianModel& model, const QuantumState& initial,
                                const IntegratorConfig& cfg) {
  check_initial(model, initial);
  return evolve_lindblad(lindblad_generator(model), initial, cfg);
}

EvolutionResult evolve_lindblad(const LindbladGenerator& generator, const QuantumState& initial,
                                const IntegratorConfig& cfg) {
  const HilbertSpec& spec = generator.spec();
  if (!(initial.spec() == spec)) throw DimensionError("initial state does not match the generator space");
  const QuantumState checked = QuantumState::mixed(spec, initial.to_density());

  ComplexRhs rhs = [&generator](double t, std::span<const cplx> y, std::span<cplx> dy) {
    generator.apply(t, y, dy);
  };

  const Density& rho0 = checked.density();
  std::vector<cplx> y(rho0.data(), rho0.data() + rho0.size());
  const auto dim = static_cast<Eigen::Index>(spec.dimension());
  // Scaled time needs epsilon, which only the model knows; callers using the
  // generator overload get eps_t from the grid.
  const double eps = cfg.grid.epsilon();

  EvolutionResult result;
  result.diagnostics.min_eigenvalue = checked.min_eigenvalue();
  run_on_grid(cfg, rhs, y, result.diagnostics, [&](double t) {
    Density rho = Eigen::Map<const Density>(y.data(), dim, dim);
    QuantumState s = QuantumState::snapshot(spec, std::move(rho));
    Diagnostics& d = result.diagnostics;
    d.max_trace_deviation = std::max(d.max_trace_deviation, s.norm_deviation());
    d.max_hermiticity_deviation = std::max(d.max_hermiticity_deviation, s.hermiticity_deviation());
    const double emin = s.min_eigenvalue();
    d.min_eigenvalue = std::min(d.min_eigenvalue, emin);
    if (emin < -kPositivityTolerance) {
      throw IntegrationError(fmt::format("density matrix lost positivity (eigenvalue {:.3e}) at t = {}", emin, t));
    }
    d.max_leakage = std::max(d.max_leakage, fock_leakage(partial_trace_atom(s.density(), spec)));
    result.samples.push_back(Sample{t, eps * t, std::move(s)});
  });
  Diagnostics& d = result.diagnostics;
  d.truncation_warning = d.max_leakage > kLeakageThreshold;
  d.norm_ok = d.max_trace_deviation <= kTraceTolerance && d.max_hermiticity_deviation <= 1e-10;
  return result;
}

void ChainModel::validate() const {
  if (n_chain < 2 || n_chain % 2 != 0) throw ConfigError("chain cutoff must be an even number >= 2");
  if (!std::isfinite(g) || !std::isfinite(g2) || !std::isfinite(epsilon)) {
    throw ParameterError("chain parameters must be finite");
  }
  if (g == 0.0 && g2 == 0.0) throw ParameterError("chain needs a nonzero coupling (G_n = 0)");
}

ChainCoefficients chain_coefficients(const ChainModel& model) {
  model.validate();
  const std::size_t m = model.size();
  const double g_sq = model.g * model.g;
  const double g2_sq = model.g2 * model.g2;
  auto big_g_sq = [&](double n) { return n * g_sq + (n - 1.0) * g2_sq; };
  auto tilde_g_sq = [&](double n) { return n * g_sq + (n + 1.0) * g2_sq; };
  const double rate = model.epsilon / 4.0;

  ChainCoefficients c;
  c.lower.assign(m, 0.0);
  c.upper.assign(m, 0.0);
  c.upper[0] = -rate * std::sqrt(2.0);
  for (std::size_t k = 1; k < m; ++k) {
    const double n = 2.0 * static_cast<double>(k);
    const double gn = big_g_sq(n);
    c.lower[k] = rate * (n - 1.0) * std::sqrt(n / (n - 1.0)) * tilde_g_sq(n - 2.0) / gn;
    if (k + 1 < m) c.upper[k] = -rate * (n - 1.0) * std::sqrt((n + 2.0) / (n + 1.0)) * tilde_g_sq(n) / gn;
  }
  return c;
}

std::vector<cplx> recover_third_level(const ChainModel& model, const std::vector<cplx>& p1) {
  if (model.g2 == 0.0) {
    throw ParameterError("third-level recovery divides by g2; undefined for g2 = 0");
  }
  std::vector<cplx> p3(p1.size(), cplx{});
  for (std::size_t k = 0; k + 1 < p1.size(); ++k) {
    const double n = 2.0 * static_cast<double>(k);
    p3[k] = -(model.g / model.g2) * std::sqrt((n + 2.0) / (n + 1.0)) * p1[k + 1];
  }
  return p3;
}

ChainResult evolve_amplitude_chain(const ChainModel& model, const std::vector<cplx>& initial,
                                   const IntegratorConfig& cfg) {
  const ChainCoefficients coeffs = chain_coefficients(model);
  const std::size_t m = model.size();
  if (initial.size() != m) {
    throw DimensionError(fmt::format("chain initial state has {} coefficients, expected {}", initial.size(), m));
  }
  ComplexRhs rhs = [&coeffs, m](double, std::span<const cplx> y, std::span<cplx> dy) {
    for (std::size_t k = 0; k < m; ++k) {
      cplx v{};
      if (k > 0) v += coeffs.lower[k] * y[k - 1];
      if (k + 1 < m) v += coeffs.upper[k] * y[k + 1];
      dy[k] = v;
    }
  };
  ChainResult result;
  std::vector<cplx> y = initial;
  run_on_grid(cfg, rhs, y, result.diagnostics, [&](double t) {
    double leak = std::norm(y[m - 1]);
    if (m >= 2) leak += std::norm(y[m - 2]);
    result.diagnostics.max_leakage = std::max(result.diagnostics.max_leakage, leak);
    result.samples.push_back(ChainSample{t, std::abs(model.epsilon) * t, y});
  });
  result.diagnostics.truncation_warning = result.diagnostics.max_leakage > kLeakageThreshold;
  return result;
}

Ket chain_to_ket(const ChainModel& model, const std::vector<cplx>& p1) {
  const HilbertSpec spec(AtomConfig::Ladder, model.n_chain);
  Ket psi = Ket::Zero(static_cast<Eigen::Index>(spec.dimension()));
  for (std::size_t k = 0; k < p1.size(); ++k) {
    psi(static_cast<Eigen::Index>(flat_index(spec, 1, static_cast<int>(2 * k)))) = p1[k];
  }
  if (model.g2 != 0.0) {
    const auto p3 = recover_third_level(model, p1);
    for (std::size_t k = 0; k < p3.size(); ++k) {
      psi(static_cast<Eigen::Index>(flat_index(spec, 3, static_cast<int>(2 * k)))) = p3[k];
    }
  }
  return psi;
}

}  // namespace dce3
