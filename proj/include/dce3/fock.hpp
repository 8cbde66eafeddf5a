#pragma once

// Composite atom x cavity Hilbert space: basis bookkeeping and the
// elementary operator actions used everywhere else.
//
// Basis ordering: the atomic label is the slow index, the photon number the
// fast one, so |i,n> sits at flat index (i-1)*(N+1)+n. Atomic labels are
// 1-based (|1>,|2>,|3>); flat indices are 0-based.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <compare>
#include <cstddef>
#include <string_view>
#include <vector>

namespace dce3 {

using cplx = std::complex<double>;
using Ket = Eigen::VectorXcd;
using Density = Eigen::MatrixXcd;

enum class AtomConfig { Ladder, V };

std::string_view to_string(AtomConfig config);
AtomConfig parse_atom_config(std::string_view text);

class HilbertSpec {
 public:
  static constexpr int kAtomLevels = 3;

  HilbertSpec(AtomConfig config, int fock_cutoff);

  AtomConfig config() const { return config_; }
  int fock_cutoff() const { return fock_cutoff_; }
  int atom_levels() const { return kAtomLevels; }
  int photon_levels() const { return fock_cutoff_ + 1; }
  std::size_t dimension() const {
    return static_cast<std::size_t>(kAtomLevels) * static_cast<std::size_t>(photon_levels());
  }

  bool operator==(const HilbertSpec&) const = default;

 private:
  AtomConfig config_;
  int fock_cutoff_;
};

struct BasisIndex {
  int atom = 1;     // 1..3
  int photons = 0;  // 0..N

  auto operator<=>(const BasisIndex&) const = default;
};

std::size_t flat_index(const HilbertSpec& spec, int atom, int photons);
BasisIndex unflatten(const HilbertSpec& spec, std::size_t index);

Ket basis_ket(const HilbertSpec& spec, int atom, int photons);

// Matrix-free basis-rule actions. Results are unnormalized.
Ket apply_annihilation(const Ket& state, const HilbertSpec& spec);
// a^dagger truncated at N: the |i,N> component is dropped.
Ket apply_creation(const Ket& state, const HilbertSpec& spec);
Ket apply_number(const Ket& state, const HilbertSpec& spec);
// sigma_ij = |i><j| acting on the atomic factor.
Ket apply_sigma(const Ket& state, int i, int j, const HilbertSpec& spec);

std::vector<double> photon_distribution(const Ket& state, const HilbertSpec& spec);
// P(n) = sum_i <i,n|rho|i,n>.
std::vector<double> partial_trace_atom(const Density& rho, const HilbertSpec& spec);

std::array<double, 3> atomic_populations(const Ket& state, const HilbertSpec& spec);
std::array<double, 3> atomic_populations(const Density& rho, const HilbertSpec& spec);

// Probability held by the two highest retained Fock levels.
double fock_leakage(const std::vector<double>& photon_dist);

inline constexpr double kLeakageThreshold = 1e-8;
inline constexpr double kPureNormTolerance = 1e-10;
inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-8;
inline constexpr double kPositivityTolerance = 1e-8;

class QuantumState {
 public:
  enum class Kind { PureKet, DensityMatrix };

  // Validating factories; throw StateError/DimensionError on invariant violations.
  static QuantumState pure(const HilbertSpec& spec, Ket amplitudes);
  static QuantumState mixed(const HilbertSpec& spec, Density rho);

  // Integrator snapshots: shape-checked only; quality lives in the run diagnostics.
  static QuantumState snapshot(const HilbertSpec& spec, Ket amplitudes);
  static QuantumState snapshot(const HilbertSpec& spec, Density rho);

  Kind kind() const { return kind_; }
  bool is_pure() const { return kind_ == Kind::PureKet; }
  const HilbertSpec& spec() const { return spec_; }
  const Ket& ket() const;
  const Density& density() const;

  Density to_density() const;
  // |<psi|psi> - 1| or |tr(rho) - 1|.
  double norm_deviation() const;
  double min_eigenvalue() const;
  double hermiticity_deviation() const;

 private:
  QuantumState(const HilbertSpec& spec, Kind kind) : spec_(spec), kind_(kind) {}

  HilbertSpec spec_;
  Kind kind_;
  Ket ket_;
  Density rho_;
};

// Dense materializations of the single-factor operators lifted to the
// composite space. Used for the small Lindblad space and as a test oracle.
namespace dense {
Eigen::MatrixXcd annihilation(const HilbertSpec& spec);
Eigen::MatrixXcd sigma(int i, int j, const HilbertSpec& spec);
Eigen::MatrixXcd identity(const HilbertSpec& spec);
}  // namespace dense

}  // namespace dce3
