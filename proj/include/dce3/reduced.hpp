#pragma once

// Closed-form predictions: empty cavity, weak-modulation two-photon and
// dispersive resonances, strong-modulation squeezing probabilities.

#include "dce3/model.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dce3 {

enum class Branch { MainX0, TwoPhotonPlus, TwoPhotonMinus, DispersivePlus, DispersiveMinus };

std::string_view to_string(Branch branch);
Branch parse_branch(std::string_view text);

// Validity thresholds for the closed forms.
inline constexpr double kWeakModulationRatio = 0.2;    // |eps| / |g|
inline constexpr double kStrongModulationRatio = 0.2;  // |g| / |eps|
inline constexpr double kStrongModulationXi = 0.3;
inline constexpr double kDispersiveRatio = 3.0;        // |Delta| / |g_partner|

// Ladder: G_n = sqrt(n g^2 + (n-1) g2^2), Gt_n = sqrt(n g^2 + (n+1) g2^2).
double ladder_big_g(double g, double g2, int n);
double ladder_tilde_g(double g, double g2, int n);
// V: G_n = sqrt(n (g^2 + g3^2)).
double v_big_g(double g, double g3, int n);

struct ResonanceSpec {
  AtomConfig config = AtomConfig::Ladder;
  Branch branch = Branch::MainX0;
  double g = 0.0;
  double partner = 0.0;   // g2 or g3
  double detuning = 0.0;  // Delta2 or Delta3
  double big_g2 = 0.0;
  double shift = 0.0;     // delta2 = g2^2/Delta2 or delta3 = g3^2/Delta3 (0 when Delta = 0)
  double j = 0.0;
  double nu_plus = 1.0;
  double nu_minus = 1.0;

  static ResonanceSpec from_atom(const AtomParams& atom, Branch branch);

  // Value of 2x at which the branch is resonant.
  double two_x() const;
  double x() const { return two_x() / 2.0; }
};

// x solving the branch resonance condition; depends only on the atom.
double resonance_shift(const AtomParams& atom, Branch branch);

// Probabilities keyed by basis state, plus regime warnings.
struct ClosedForm {
  std::map<BasisIndex, double> probs;
  std::vector<std::string> warnings;

  double at(int atom, int photons) const;
  double total() const;
};

double empty_cavity_mean_n(double epsilon, double t);

// {|p10|^2, |p12|^2, |p21|^2, |p30|^2} at 2x = +-G2, Delta2 = 0.
ClosedForm ladder_two_photon_probs(const AtomParams& atom, const DriveParams& drive, double t);
// 2x = delta2/2 +- J, |Delta2| >> |g2|.
ClosedForm ladder_dispersive_probs(const AtomParams& atom, const DriveParams& drive, Branch branch,
                                   double t);
// {|p10|^2, |p12|^2, |p21|^2, |p31|^2} at 2x = +-G2, Delta3 = 0.
ClosedForm v_two_photon_probs(const AtomParams& atom, const DriveParams& drive, double t);
// 2x = delta3 +- J, |Delta3| >> |g3|.
ClosedForm v_dispersive_probs(const AtomParams& atom, const DriveParams& drive, Branch branch, double t);

// <2n| exp[v t (a^dagger^2 - a^2)] |0>, evaluated in log space.
double squeezing_matrix_element(double v, double t, int n);
// Squeezed-vacuum P(m), m = 0..2*max_pairs; throws NormalizationError when the
// retained probability falls short of 1 by more than tolerance.
std::vector<double> squeezed_vacuum_distribution(double v, double t, int max_pairs,
                                                 double tolerance = 1e-12);

struct StrongModulationProbs {
  double ground_even = 0.0;  // |<1,2n|psi>|^2
  double second_odd = 0.0;   // |<2,2n+1|psi>|^2
  // V: |<3,2n+1|psi>|^2. Ladder: order-of-magnitude bound (xi xi2)^2 on |<3,2n|psi>|^2.
  double third = 0.0;
  bool third_is_bound = false;
};

StrongModulationProbs strong_modulation_probs_ladder(const AtomParams& atom, const DriveParams& drive,
                                                     double t, int n);
StrongModulationProbs strong_modulation_probs_v(const AtomParams& atom, const DriveParams& drive,
                                                double t, int n);
std::vector<std::string> strong_modulation_warnings(const AtomParams& atom, const DriveParams& drive,
                                                    double t);

// Photon distribution P(m), m = 0..2*max_pairs+1, from the strong-modulation
// families. The ladder bound term is not added.
std::vector<double> strong_modulation_distribution(const AtomParams& atom, const DriveParams& drive,
                                                   double t, int max_pairs);

// Q = 2<n> + 1 for the squeezed vacuum with <n> = sinh^2(2vt); 0 at <n> = 0.
double mandel_q_squeezed(double vt);

// Closed-form probabilities for a branch. MainX0 uses the strong-modulation
// families and returns |<1,2n>|^2, |<2,2n+1>|^2 and (V) |<3,2n+1>|^2 up to max_pairs.
ClosedForm analytic_probs(const AtomParams& atom, const DriveParams& drive, Branch branch, double t,
                          int max_pairs = 60);

}  // namespace dce3
