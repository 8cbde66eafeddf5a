#include "dce3/reduced.hpp"

#include "dce3/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace dce3 {

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::MainX0: return "main-x0";
    case Branch::TwoPhotonPlus: return "two-photon-plus";
    case Branch::TwoPhotonMinus: return "two-photon-minus";
    case Branch::DispersivePlus: return "dispersive-plus";
    case Branch::DispersiveMinus: return "dispersive-minus";
  }
  return "?";
}

Branch parse_branch(std::string_view text) {
  for (Branch b : {Branch::MainX0, Branch::TwoPhotonPlus, Branch::TwoPhotonMinus, Branch::DispersivePlus,
                   Branch::DispersiveMinus}) {
    if (text == to_string(b)) return b;
  }
  throw ConfigError(fmt::format("unknown resonance branch '{}'", text));
}

double ladder_big_g(double g, double g2, int n) { return std::sqrt(n * g * g + (n - 1) * g2 * g2); }
double ladder_tilde_g(double g, double g2, int n) { return std::sqrt(n * g * g + (n + 1) * g2 * g2); }
double v_big_g(double g, double g3, int n) { return std::sqrt(n * (g * g + g3 * g3)); }

namespace {

bool is_plus(Branch b) { return b == Branch::TwoPhotonPlus || b == Branch::DispersivePlus; }
bool is_dispersive(Branch b) { return b == Branch::DispersivePlus || b == Branch::DispersiveMinus; }

void check_resonance(const ResonanceSpec& r, const DriveParams& drive, std::vector<std::string>& w) {
  const double target = r.two_x();
  if (std::abs(2.0 * drive.x - target) > 1e-9 * std::max(1e-3, std::abs(target))) {
    w.push_back(fmt::format("2x = {:.6g} is off the {} resonance 2x = {:.6g}", 2.0 * drive.x,
                            to_string(r.branch), target));
  }
}

void check_weak(const AtomParams& atom, const DriveParams& drive, std::vector<std::string>& w) {
  if (atom.g == 0.0 || std::abs(drive.epsilon) / std::abs(atom.g) > kWeakModulationRatio) {
    w.push_back(fmt::format("weak-modulation regime needs |eps|/|g| <= {}", kWeakModulationRatio));
  }
}

void check_dispersive(const AtomParams& atom, std::vector<std::string>& w) {
  if (std::abs(atom.partner_detuning()) < kDispersiveRatio * std::abs(atom.partner_coupling())) {
    w.push_back(fmt::format("dispersive regime needs |Delta| >= {}|g_partner|", kDispersiveRatio));
  }
}

void require_config(const AtomParams& atom, AtomConfig config) {
  atom.validate();
  if (atom.config != config) {
    throw ConfigError(fmt::format("closed form is for the {} atom", to_string(config)));
  }
}

double sq(double v) { return v * v; }

}  // namespace

ResonanceSpec ResonanceSpec::from_atom(const AtomParams& atom, Branch branch) {
  atom.validate();
  ResonanceSpec r;
  r.config = atom.config;
  r.branch = branch;
  r.g = atom.g;
  r.partner = atom.partner_coupling();
  r.detuning = atom.partner_detuning();
  if (r.config == AtomConfig::Ladder) {
    r.big_g2 = ladder_big_g(r.g, r.partner, 2);
    if (r.detuning != 0.0) r.shift = r.partner * r.partner / r.detuning;
    r.j = std::sqrt(r.shift * r.shift / 4.0 + 2.0 * r.g * r.g);
    if (r.j > 0.0) {
      r.nu_plus = std::sqrt(1.0 + r.shift / (2.0 * r.j));
      r.nu_minus = std::sqrt(1.0 - r.shift / (2.0 * r.j));
    }
  } else {
    r.big_g2 = v_big_g(r.g, r.partner, 2);
    if (r.detuning != 0.0) r.shift = r.partner * r.partner / r.detuning;
    r.j = std::sqrt(r.shift * r.shift + 2.0 * r.g * r.g);
    if (r.j > 0.0) {
      r.nu_plus = std::sqrt(1.0 + r.shift / r.j);
      r.nu_minus = std::sqrt(1.0 - r.shift / r.j);
    }
  }
  if (is_dispersive(branch) && r.detuning == 0.0) {
    throw ConfigError("dispersive branch needs a nonzero partner detuning");
  }
  return r;
}

double ResonanceSpec::two_x() const {
  const double sign = is_plus(branch) ? 1.0 : -1.0;
  switch (branch) {
    case Branch::MainX0: return 0.0;
    case Branch::TwoPhotonPlus:
    case Branch::TwoPhotonMinus: return sign * big_g2;
    case Branch::DispersivePlus:
    case Branch::DispersiveMinus:
      return (config == AtomConfig::Ladder ? shift / 2.0 : shift) + sign * j;
  }
  return 0.0;
}

double resonance_shift(const AtomParams& atom, Branch branch) {
  return ResonanceSpec::from_atom(atom, branch).x();
}

double ClosedForm::at(int atom, int photons) const {
  auto it = probs.find(BasisIndex{atom, photons});
  return it == probs.end() ? 0.0 : it->second;
}

double ClosedForm::total() const {
  double s = 0.0;
  for (const auto& [k, v] : probs) s += v;
  return s;
}

double empty_cavity_mean_n(double epsilon, double t) { return sq(std::sinh(epsilon * t / 2.0)); }

ClosedForm ladder_two_photon_probs(const AtomParams& atom, const DriveParams& drive, double t) {
  require_config(atom, AtomConfig::Ladder);
  const auto r = ResonanceSpec::from_atom(atom, drive.x >= 0.0 ? Branch::TwoPhotonPlus : Branch::TwoPhotonMinus);
  ClosedForm out;
  check_weak(atom, drive, out.warnings);
  check_resonance(r, drive, out.warnings);
  if (atom.delta2 != 0.0) out.warnings.push_back("two-photon closed form assumes Delta2 = 0");
  const double gg = sq(r.big_g2);
  const double nu = std::sqrt(2.0) * drive.q() * r.g / r.big_g2;
  const double s2 = sq(std::sin(nu * t));
  out.probs[{1, 0}] = sq(std::cos(nu * t));
  out.probs[{1, 2}] = sq(r.g) / gg * s2;
  out.probs[{2, 1}] = 0.5 * s2;
  out.probs[{3, 0}] = sq(r.partner) / (2.0 * gg) * s2;
  return out;
}

ClosedForm ladder_dispersive_probs(const AtomParams& atom, const DriveParams& drive, Branch branch,
                                   double t) {
  require_config(atom, AtomConfig::Ladder);
  if (!is_dispersive(branch)) throw ConfigError("dispersive closed form needs a dispersive branch");
  const auto r = ResonanceSpec::from_atom(atom, branch);
  ClosedForm out;
  check_weak(atom, drive, out.warnings);
  check_dispersive(atom, out.warnings);
  check_resonance(r, drive, out.warnings);
  const bool plus = is_plus(branch);
  const double nu_same = plus ? r.nu_plus : r.nu_minus;
  const double nu_other = plus ? r.nu_minus : r.nu_plus;
  const double phase = drive.q() * nu_other * t;
  const double s2 = sq(std::sin(phase));
  out.probs[{1, 0}] = sq(std::cos(phase));
  out.probs[{1, 2}] = 0.5 * sq(nu_other) * s2;
  out.probs[{2, 1}] = 0.5 * sq(nu_same) * s2;
  out.probs[{3, 0}] = sq(r.partner / r.detuning) * out.probs[{2, 1}];
  return out;
}

ClosedForm v_two_photon_probs(const AtomParams& atom, const DriveParams& drive, double t) {
  require_config(atom, AtomConfig::V);
  const auto r = ResonanceSpec::from_atom(atom, drive.x >= 0.0 ? Branch::TwoPhotonPlus : Branch::TwoPhotonMinus);
  ClosedForm out;
  check_weak(atom, drive, out.warnings);
  check_resonance(r, drive, out.warnings);
  if (atom.delta3 != 0.0) out.warnings.push_back("two-photon closed form assumes Delta3 = 0");
  const double gg = sq(r.big_g2);
  const double qt = drive.q() * t;
  const double s2 = sq(std::sin(qt));
  out.probs[{1, 0}] = sq(std::cos(qt));
  out.probs[{1, 2}] = 0.5 * s2;
  out.probs[{2, 1}] = sq(r.g) / gg * s2;
  out.probs[{3, 1}] = sq(r.partner) / gg * s2;
  return out;
}

ClosedForm v_dispersive_probs(const AtomParams& atom, const DriveParams& drive, Branch branch, double t) {
  require_config(atom, AtomConfig::V);
  if (!is_dispersive(branch)) throw ConfigError("dispersive closed form needs a dispersive branch");
  const auto r = ResonanceSpec::from_atom(atom, branch);
  ClosedForm out;
  check_weak(atom, drive, out.warnings);
  check_dispersive(atom, out.warnings);
  check_resonance(r, drive, out.warnings);
  const bool plus = is_plus(branch);
  const double nu_same = plus ? r.nu_plus : r.nu_minus;
  const double nu_other = plus ? r.nu_minus : r.nu_plus;
  const double phase = drive.q() * nu_same * t;
  const double s2 = sq(std::sin(phase));
  out.probs[{1, 0}] = sq(std::cos(phase));
  out.probs[{1, 2}] = 0.5 * sq(nu_same) * s2;
  out.probs[{2, 1}] = 0.5 * sq(nu_other) * s2;
  out.probs[{3, 1}] = 2.0 * sq(r.partner / r.detuning) * out.probs[{1, 2}];
  return out;
}

double squeezing_matrix_element(double v, double t, int n) {
  if (n < 0) throw IndexError("squeezing matrix element needs n >= 0");
  const double arg = 2.0 * v * t;
  const double c = std::cosh(arg);
  const double ratio = std::tanh(arg);
  if (n == 0) return 1.0 / std::sqrt(c);
  if (ratio == 0.0) return 0.0;
  const double dn = n;
  const double log_mag = -0.5 * std::log(c) + dn * std::log(std::abs(ratio)) + 0.5 * std::lgamma(2.0 * dn + 1.0) -
                         dn * std::log(2.0) - std::lgamma(dn + 1.0);
  const double sign = (ratio < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
  return sign * std::exp(log_mag);
}

std::vector<double> squeezed_vacuum_distribution(double v, double t, int max_pairs, double tolerance) {
  if (max_pairs < 0) throw IndexError("max_pairs must be non-negative");
  std::vector<double> p(static_cast<std::size_t>(2 * max_pairs + 1), 0.0);
  double total = 0.0;
  for (int n = 0; n <= max_pairs; ++n) {
    const double l = squeezing_matrix_element(v, t, n);
    p[static_cast<std::size_t>(2 * n)] = l * l;
    total += l * l;
  }
  if (std::abs(1.0 - total) > tolerance) {
    throw NormalizationError(fmt::format("squeezed vacuum at 2vt = {} keeps {:.3e} of the probability "
                                         "with {} pairs; raise the cutoff",
                                         2.0 * v * t, total, max_pairs));
  }
  return p;
}

std::vector<std::string> strong_modulation_warnings(const AtomParams& atom, const DriveParams& drive,
                                                    double t) {
  std::vector<std::string> w;
  const double eps = std::abs(drive.epsilon);
  const double g = std::abs(atom.g);
  if (eps == 0.0 || g / eps > kStrongModulationRatio) {
    w.push_back(fmt::format("strong-modulation regime needs |g|/|eps| <= {}", kStrongModulationRatio));
  }
  if (g * t > 1.0) w.push_back("strong-modulation closed form is valid only for |g| t <= 1");
  if (eps > 0.0) {
    const double xi = 2.0 * g / eps;
    const double xi_p = 2.0 * std::abs(atom.partner_coupling()) / eps;
    if (xi >= kStrongModulationXi || xi_p >= kStrongModulationXi) {
      w.push_back(fmt::format("xi = {:.3g}, xi_partner = {:.3g}: expansion needs xi < {}", xi, xi_p,
                              kStrongModulationXi));
    }
  }
  if (drive.x != 0.0) w.push_back("strong-modulation closed form assumes x = 0");
  if (atom.partner_detuning() != 0.0) w.push_back("strong-modulation closed form assumes a resonant third level");
  return w;
}

namespace {

struct StrongParams {
  double q, xi, xi_p, theta1, theta2;
};

StrongParams strong_params(const AtomParams& atom, const DriveParams& drive) {
  if (drive.epsilon == 0.0) throw ParameterError("strong-modulation closed form needs epsilon != 0");
  StrongParams s{};
  s.q = drive.q();
  s.xi = 2.0 * atom.g / drive.epsilon;
  s.xi_p = 2.0 * atom.partner_coupling() / drive.epsilon;
  return s;
}

}  // namespace

StrongModulationProbs strong_modulation_probs_ladder(const AtomParams& atom, const DriveParams& drive,
                                                     double t, int n) {
  require_config(atom, AtomConfig::Ladder);
  StrongParams s = strong_params(atom, drive);
  const double xi2 = sq(s.xi), xp2 = sq(s.xi_p);
  s.theta1 = s.q * (1.0 - (xi2 - xp2) / 2.0);
  s.theta2 = s.q * (1.0 + (xi2 - xp2));
  const double l1 = squeezing_matrix_element(s.theta1, t, n);
  const double l2 = squeezing_matrix_element(s.theta2, t, n);
  const double c1 = std::cosh(2.0 * s.theta1 * t);
  const double s1 = std::sinh(2.0 * s.theta1 * t);
  const double c2 = std::cosh(2.0 * s.theta2 * t);
  // q t * 4n / sinh(4 theta1 t), with its t -> 0 limit n q / theta1.
  const double arg = 4.0 * s.theta1 * t;
  const double pair_term = n == 0 ? 0.0
                           : std::abs(arg) < 1e-300 ? n * s.q / s.theta1
                                                    : s.q * t * 4.0 * n / std::sinh(arg);
  const double dn = n;

  StrongModulationProbs p;
  p.ground_even = (1.0 - 2.0 * xi2 * (dn + 1.0)) * l1 * l1 +
                  l1 * (2.0 * xi2 * (2.0 * dn + 1.0) * l2 / c2 - (xi2 + xp2) * (pair_term - s.q * t * s1 / c1) * l1);
  p.second_odd = xi2 * (2.0 * dn + 1.0) * sq(l2 / c2 - l1);
  p.third = xi2 * xp2;
  p.third_is_bound = true;
  return p;
}

StrongModulationProbs strong_modulation_probs_v(const AtomParams& atom, const DriveParams& drive, double t,
                                                int n) {
  require_config(atom, AtomConfig::V);
  StrongParams s = strong_params(atom, drive);
  const double xi2 = sq(s.xi), xp2 = sq(s.xi_p);
  const double sum = xi2 + xp2;
  s.theta1 = s.q * (1.0 - sum);
  s.theta2 = s.q * (1.0 + sum / 2.0);
  const double l1 = squeezing_matrix_element(s.theta1, t, n);
  const double l2 = squeezing_matrix_element(s.theta2, t, n);
  const double c2 = std::cosh(2.0 * s.theta2 * t);
  const double dn = n;

  StrongModulationProbs p;
  p.ground_even = (1.0 - 2.0 * sum * (dn + 1.0)) * l1 * l1 + 2.0 * (2.0 * dn + 1.0) * sum * l2 * l1 / c2;
  const double diff = sq(l2 / c2 - l1) * (2.0 * dn + 1.0);
  p.second_odd = xi2 * diff;
  p.third = xp2 * diff;
  return p;
}

std::vector<double> strong_modulation_distribution(const AtomParams& atom, const DriveParams& drive, double t,
                                                   int max_pairs) {
  std::vector<double> dist(static_cast<std::size_t>(2 * max_pairs + 2), 0.0);
  const bool ladder = atom.config == AtomConfig::Ladder;
  for (int n = 0; n <= max_pairs; ++n) {
    const auto p = ladder ? strong_modulation_probs_ladder(atom, drive, t, n)
                          : strong_modulation_probs_v(atom, drive, t, n);
    dist[static_cast<std::size_t>(2 * n)] = p.ground_even;
    dist[static_cast<std::size_t>(2 * n + 1)] = p.second_odd + (p.third_is_bound ? 0.0 : p.third);
  }
  return dist;
}

double mandel_q_squeezed(double vt) {
  const double mean = sq(std::sinh(2.0 * vt));
  if (mean == 0.0) return 0.0;
  return 2.0 * mean + 1.0;
}

ClosedForm analytic_probs(const AtomParams& atom, const DriveParams& drive, Branch branch, double t,
                          int max_pairs) {
  const bool ladder = atom.config == AtomConfig::Ladder;
  switch (branch) {
    case Branch::TwoPhotonPlus:
    case Branch::TwoPhotonMinus: {
      ClosedForm out = ladder ? ladder_two_photon_probs(atom, drive, t) : v_two_photon_probs(atom, drive, t);
      if (is_plus(branch) != (drive.x >= 0.0)) out.warnings.push_back("drive x sign does not match the requested branch");
      return out;
    }
    case Branch::DispersivePlus:
    case Branch::DispersiveMinus:
      return ladder ? ladder_dispersive_probs(atom, drive, branch, t) : v_dispersive_probs(atom, drive, branch, t);
    case Branch::MainX0: {
      ClosedForm out;
      out.warnings = strong_modulation_warnings(atom, drive, t);
      for (int n = 0; n <= max_pairs; ++n) {
        const auto p = ladder ? strong_modulation_probs_ladder(atom, drive, t, n)
                              : strong_modulation_probs_v(atom, drive, t, n);
        out.probs[{1, 2 * n}] = p.ground_even;
        out.probs[{2, 2 * n + 1}] = p.second_odd;
        if (!p.third_is_bound) out.probs[{3, 2 * n + 1}] = p.third;
      }
      return out;
    }
  }
  return {};
}

}  // namespace dce3
