#include "dce3/fock.hpp"

#include "dce3/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace dce3 {

std::string_view to_string(AtomConfig config) {
  return config == AtomConfig::Ladder ? "ladder" : "v";
}

AtomConfig parse_atom_config(std::string_view text) {
  if (text == "ladder" || text == "Ladder" || text == "xi") return AtomConfig::Ladder;
  if (text == "v" || text == "V") return AtomConfig::V;
  throw ConfigError(fmt::format("unknown atom configuration '{}'", text));
}

HilbertSpec::HilbertSpec(AtomConfig config, int fock_cutoff)
    : config_(config), fock_cutoff_(fock_cutoff) {
  if (fock_cutoff < 1) {
    throw ParameterError(fmt::format("Fock cutoff must be >= 1, got {}", fock_cutoff));
  }
}

std::size_t flat_index(const HilbertSpec& spec, int atom, int photons) {
  if (atom < 1 || atom > HilbertSpec::kAtomLevels) {
    throw IndexError(fmt::format("atom state {} outside 1..3", atom));
  }
  if (photons < 0 || photons > spec.fock_cutoff()) {
    throw IndexError(fmt::format("photon number {} outside 0..{}", photons, spec.fock_cutoff()));
  }
  return static_cast<std::size_t>(atom - 1) * static_cast<std::size_t>(spec.photon_levels()) +
         static_cast<std::size_t>(photons);
}

BasisIndex unflatten(const HilbertSpec& spec, std::size_t index) {
  if (index >= spec.dimension()) {
    throw IndexError(fmt::format("flat index {} outside [0, {})", index, spec.dimension()));
  }
  const auto levels = static_cast<std::size_t>(spec.photon_levels());
  return {static_cast<int>(index / levels) + 1, static_cast<int>(index % levels)};
}

namespace {

void check_ket(const Ket& state, const HilbertSpec& spec) {
  if (static_cast<std::size_t>(state.size()) != spec.dimension()) {
    throw DimensionError(
        fmt::format("state has {} amplitudes, space dimension is {}", state.size(), spec.dimension()));
  }
}

void check_density(const Density& rho, const HilbertSpec& spec) {
  if (rho.rows() != rho.cols()) {
    throw DimensionError(fmt::format("density matrix is {}x{}, not square", rho.rows(), rho.cols()));
  }
  if (static_cast<std::size_t>(rho.rows()) != spec.dimension()) {
    throw DimensionError(
        fmt::format("density matrix is {}x{}, space dimension is {}", rho.rows(), rho.cols(), spec.dimension()));
  }
}

void check_level(int i) {
  if (i < 1 || i > HilbertSpec::kAtomLevels) {
    throw IndexError(fmt::format("atom state {} outside 1..3", i));
  }
}

}  // namespace

Ket basis_ket(const HilbertSpec& spec, int atom, int photons) {
  Ket psi = Ket::Zero(static_cast<Eigen::Index>(spec.dimension()));
  psi(static_cast<Eigen::Index>(flat_index(spec, atom, photons))) = 1.0;
  return psi;
}

Ket apply_annihilation(const Ket& state, const HilbertSpec& spec) {
  check_ket(state, spec);
  Ket out = Ket::Zero(state.size());
  const int levels = spec.photon_levels();
  for (int i = 0; i < HilbertSpec::kAtomLevels; ++i) {
    const int base = i * levels;
    for (int n = 1; n < levels; ++n) {
      out(base + n - 1) = std::sqrt(static_cast<double>(n)) * state(base + n);
    }
  }
  return out;
}

Ket apply_creation(const Ket& state, const HilbertSpec& spec) {
  check_ket(state, spec);
  Ket out = Ket::Zero(state.size());
  const int levels = spec.photon_levels();
  for (int i = 0; i < HilbertSpec::kAtomLevels; ++i) {
    const int base = i * levels;
    for (int n = 0; n + 1 < levels; ++n) {
      out(base + n + 1) = std::sqrt(static_cast<double>(n + 1)) * state(base + n);
    }
  }
  return out;
}

Ket apply_number(const Ket& state, const HilbertSpec& spec) {
  check_ket(state, spec);
  Ket out(state.size());
  const int levels = spec.photon_levels();
  for (Eigen::Index k = 0; k < state.size(); ++k) {
    out(k) = static_cast<double>(k % levels) * state(k);
  }
  return out;
}

Ket apply_sigma(const Ket& state, int i, int j, const HilbertSpec& spec) {
  check_ket(state, spec);
  check_level(i);
  check_level(j);
  const int levels = spec.photon_levels();
  Ket out = Ket::Zero(state.size());
  out.segment((i - 1) * levels, levels) = state.segment((j - 1) * levels, levels);
  return out;
}

std::vector<double> photon_distribution(const Ket& state, const HilbertSpec& spec) {
  check_ket(state, spec);
  const int levels = spec.photon_levels();
  std::vector<double> dist(static_cast<std::size_t>(levels), 0.0);
  for (int i = 0; i < HilbertSpec::kAtomLevels; ++i) {
    for (int n = 0; n < levels; ++n) {
      dist[static_cast<std::size_t>(n)] += std::norm(state(i * levels + n));
    }
  }
  return dist;
}

std::vector<double> partial_trace_atom(const Density& rho, const HilbertSpec& spec) {
  check_density(rho, spec);
  const int levels = spec.photon_levels();
  std::vector<double> dist(static_cast<std::size_t>(levels), 0.0);
  for (int i = 0; i < HilbertSpec::kAtomLevels; ++i) {
    for (int n = 0; n < levels; ++n) {
      const int k = i * levels + n;
      dist[static_cast<std::size_t>(n)] += rho(k, k).real();
    }
  }
  return dist;
}

std::array<double, 3> atomic_populations(const Ket& state, const HilbertSpec& spec) {
  check_ket(state, spec);
  const int levels = spec.photon_levels();
  std::array<double, 3> pop{};
  for (int i = 0; i < 3; ++i) pop[static_cast<std::size_t>(i)] = state.segment(i * levels, levels).squaredNorm();
  return pop;
}

std::array<double, 3> atomic_populations(const Density& rho, const HilbertSpec& spec) {
  check_density(rho, spec);
  const int levels = spec.photon_levels();
  std::array<double, 3> pop{};
  for (int i = 0; i < 3; ++i) {
    double s = 0.0;
    for (int n = 0; n < levels; ++n) s += rho(i * levels + n, i * levels + n).real();
    pop[static_cast<std::size_t>(i)] = s;
  }
  return pop;
}

double fock_leakage(const std::vector<double>& photon_dist) {
  const std::size_t m = photon_dist.size();
  if (m == 0) return 0.0;
  double leak = photon_dist[m - 1];
  if (m >= 2) leak += photon_dist[m - 2];
  return leak;
}

QuantumState QuantumState::pure(const HilbertSpec& spec, Ket amplitudes) {
  QuantumState s = snapshot(spec, std::move(amplitudes));
  const double dev = s.norm_deviation();
  if (dev > kPureNormTolerance) {
    throw StateError(fmt::format("pure state norm deviates from 1 by {:.3e}", dev));
  }
  return s;
}

QuantumState QuantumState::mixed(const HilbertSpec& spec, Density rho) {
  QuantumState s = snapshot(spec, std::move(rho));
  if (const double h = s.hermiticity_deviation(); h > kHermiticityTolerance) {
    throw StateError(fmt::format("density matrix not Hermitian (deviation {:.3e})", h));
  }
  if (const double t = s.norm_deviation(); t > kTraceTolerance) {
    throw StateError(fmt::format("density matrix trace deviates from 1 by {:.3e}", t));
  }
  if (const double e = s.min_eigenvalue(); e < -kPositivityTolerance) {
    throw StateError(fmt::format("density matrix has negative eigenvalue {:.3e}", e));
  }
  return s;
}

QuantumState QuantumState::snapshot(const HilbertSpec& spec, Ket amplitudes) {
  check_ket(amplitudes, spec);
  QuantumState s(spec, Kind::PureKet);
  s.ket_ = std::move(amplitudes);
  return s;
}

QuantumState QuantumState::snapshot(const HilbertSpec& spec, Density rho) {
  check_density(rho, spec);
  QuantumState s(spec, Kind::DensityMatrix);
  s.rho_ = std::move(rho);
  return s;
}

const Ket& QuantumState::ket() const {
  if (kind_ != Kind::PureKet) throw StateError("state is a density matrix, not a ket");
  return ket_;
}

const Density& QuantumState::density() const {
  if (kind_ != Kind::DensityMatrix) throw StateError("state is a ket, not a density matrix");
  return rho_;
}

Density QuantumState::to_density() const {
  if (kind_ == Kind::DensityMatrix) return rho_;
  return ket_ * ket_.adjoint();
}

double QuantumState::norm_deviation() const {
  if (kind_ == Kind::PureKet) return std::abs(ket_.squaredNorm() - 1.0);
  return std::abs(rho_.trace() - cplx(1.0, 0.0));
}

double QuantumState::min_eigenvalue() const {
  if (kind_ == Kind::PureKet) return 0.0;
  const Density herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Density> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double QuantumState::hermiticity_deviation() const {
  if (kind_ == Kind::PureKet) return 0.0;
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

namespace dense {

Eigen::MatrixXcd annihilation(const HilbertSpec& spec) {
  const int levels = spec.photon_levels();
  Eigen::MatrixXcd field = Eigen::MatrixXcd::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) field(n - 1, n) = std::sqrt(static_cast<double>(n));
  const auto dim = static_cast<Eigen::Index>(spec.dimension());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < 3; ++i) out.block(i * levels, i * levels, levels, levels) = field;
  return out;
}

Eigen::MatrixXcd sigma(int i, int j, const HilbertSpec& spec) {
  check_level(i);
  check_level(j);
  const int levels = spec.photon_levels();
  const auto dim = static_cast<Eigen::Index>(spec.dimension());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  out.block((i - 1) * levels, (j - 1) * levels, levels, levels).setIdentity();
  return out;
}

Eigen::MatrixXcd identity(const HilbertSpec& spec) {
  const auto dim = static_cast<Eigen::Index>(spec.dimension());
  return Eigen::MatrixXcd::Identity(dim, dim);
}

}  // namespace dense

}  // namespace dce3
