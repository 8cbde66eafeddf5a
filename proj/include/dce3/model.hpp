#pragma once

// Physical parameters and Hamiltonian builders. Units are dimensionless with
// hbar = omega_0 = 1; the |1> <-> |2> transition is resonant with the bare
// cavity (E2 = E1 + 1).

#include "dce3/banded_operator.hpp"
#include "dce3/fock.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dce3 {

inline constexpr double kMaxModulationDepth = 0.1;
inline constexpr double kModulationDepthWarning = 0.05;

// Cavity frequency omega_t = 1 + epsilon sin(eta t), eta = 2(1 + x).
struct DriveParams {
  double epsilon = 0.0;
  double x = 0.0;

  static constexpr double omega0 = 1.0;

  double eta() const { return 2.0 * (1.0 + x); }
  double q() const { return epsilon * (1.0 + x) / 4.0; }

  void validate() const;
  std::vector<std::string> warnings() const;

  bool operator==(const DriveParams&) const = default;
};

DriveParams make_drive(double epsilon, double x);

struct AtomParams {
  AtomConfig config = AtomConfig::Ladder;
  double g = 0.0;                  // |1> <-> |2>
  std::optional<double> g2;        // |2> <-> |3>, ladder only
  std::optional<double> g3;        // |1> <-> |3>, V only
  double delta2 = 0.0;             // 1 - Omega_2, ladder
  double delta3 = 0.0;             // 1 - Omega_3, V
  double lambda = 0.0;             // |2> -> |1>
  double lambda2 = 0.0;            // |3> -> |2>, ladder
  double lambda3 = 0.0;            // |3> -> |1>, V
  double e1 = 0.0;

  double e2() const { return e1 + 1.0; }
  // Ladder: E3 = E2 + Omega_2; V: E3 = E1 + Omega_3.
  double e3() const;
  // g2 (ladder) or g3 (V); zero when absent.
  double partner_coupling() const;
  double partner_detuning() const;
  double partner_damping() const;
  bool has_damping() const { return lambda > 0.0 || partner_damping() > 0.0; }

  void validate() const;

  bool operator==(const AtomParams&) const = default;
};

AtomParams ladder_atom(double g, double g2, double delta2 = 0.0, double lambda = 0.0,
                       double lambda2 = 0.0);
AtomParams v_atom(double g, double g3, double delta3 = 0.0, double lambda = 0.0,
                  double lambda3 = 0.0);

enum class Frame { Lab, RwaLadder, RwaV };

std::string_view to_string(Frame frame);
// Interaction-picture frame matching the atom layout.
Frame rwa_frame(AtomConfig config);

struct HamiltonianModel {
  Frame frame = Frame::RwaLadder;
  HilbertSpec spec{AtomConfig::Ladder, 1};
  AtomParams atom;
  DriveParams drive;

  void validate() const;
};

double omega_t(const DriveParams& drive, double t);
// chi_t = (4 omega_t)^-1 d omega_t / dt.
double chi_t(const DriveParams& drive, double t);

// Elementary pieces, built from basis rules.
BandedOperator number_operator(const HilbertSpec& spec);
// -i (a^2 - a^dagger^2)
BandedOperator pump_operator(const HilbertSpec& spec);
BandedOperator atomic_hamiltonian(const HilbertSpec& spec, const AtomParams& atom);
// Jaynes-Cummings coupling without counter-rotating terms.
BandedOperator interaction_operator(const HilbertSpec& spec, const AtomParams& atom);

// A Hermitian operator sum_k f_k(t) A_k. A term without a coefficient
// function is constant.
class Hamiltonian {
 public:
  struct Term {
    std::function<double(double)> coefficient;
    BandedOperator op;
  };

  Hamiltonian() = default;
  explicit Hamiltonian(BandedOperator constant);
  explicit Hamiltonian(std::vector<Term> terms);

  std::size_t dimension() const;
  bool time_dependent() const;

  // Applies scale * H(t) to ncols contiguous column vectors of length dimension().
  void apply(double t, const cplx* x, cplx* y, std::size_t ncols, cplx scale,
             bool accumulate) const;
  void apply(double t, std::span<const cplx> x, std::span<cplx> y, cplx scale = 1.0,
             bool accumulate = false) const;

  BandedOperator at(double t) const;
  Eigen::MatrixXcd dense(double t) const { return at(t).to_dense(); }

 private:
  std::vector<Term> terms_;
};

// H(t) = omega_t n - i chi_t (a^2 - a^dagger^2) + H_a + H_I.
Hamiltonian build_lab_hamiltonian(const HamiltonianModel& model);
// Ladder: H1 = (g a s21 + g2 a s32 - i q a^2 + h.c.) + x(s11 - n - s33) - Delta2 s33
// V:      H2 = (g a s21 + g3 a s31 - i q a^2 + h.c.) - x(n + s22 + s33) - Delta3 s33
BandedOperator build_rwa_hamiltonian(const HamiltonianModel& model);
// Dispatches on model.frame.
Hamiltonian build_hamiltonian(const HamiltonianModel& model);

// Decay channel with jump operator sigma_{lower,upper} = |lower><upper|.
struct CollapseChannel {
  int lower = 1;
  int upper = 2;
  double rate = 0.0;
};

// drho/dt = -i[H, rho] + sum_c rate_c D[sigma_c] rho,
// D[O]rho = (2 O rho O^dagger - O^dagger O rho - rho O^dagger O) / 2.
class LindbladGenerator {
 public:
  LindbladGenerator(HilbertSpec spec, Hamiltonian hamiltonian, std::vector<CollapseChannel> channels);

  const HilbertSpec& spec() const { return spec_; }
  const std::vector<CollapseChannel>& channels() const { return channels_; }
  const Hamiltonian& hamiltonian() const { return hamiltonian_; }

  // rho and out are column-major dim x dim arrays.
  void apply(double t, std::span<const cplx> rho, std::span<cplx> out) const;
  Density operator()(double t, const Density& rho) const;

 private:
  HilbertSpec spec_;
  Hamiltonian hamiltonian_;
  std::vector<CollapseChannel> channels_;
};

// Ladder: lambda D[s12] + lambda2 D[s23]; V: lambda D[s12] + lambda3 D[s13].
std::vector<CollapseChannel> collapse_channels(const AtomParams& atom);
LindbladGenerator lindblad_generator(const HamiltonianModel& model);

}  // namespace dce3
