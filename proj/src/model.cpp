#include "dce3/model.hpp"

#include "dce3/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace dce3 {

void DriveParams::validate() const {
  if (!std::isfinite(epsilon) || !std::isfinite(x)) {
    throw ParameterError("drive parameters must be finite");
  }
  if (std::abs(epsilon) > kMaxModulationDepth) {
    throw ParameterError(
        fmt::format("modulation depth |epsilon| = {} exceeds {}", std::abs(epsilon), kMaxModulationDepth));
  }
}

std::vector<std::string> DriveParams::warnings() const {
  std::vector<std::string> out;
  if (std::abs(epsilon) > kModulationDepthWarning) {
    out.push_back(fmt::format("modulation depth |epsilon| = {} above {}: small-depth expansion is marginal",
                              std::abs(epsilon), kModulationDepthWarning));
  }
  return out;
}

DriveParams make_drive(double epsilon, double x) {
  DriveParams d{epsilon, x};
  d.validate();
  return d;
}

double AtomParams::e3() const {
  return config == AtomConfig::Ladder ? e2() + (1.0 - delta2) : e1 + (1.0 - delta3);
}

double AtomParams::partner_coupling() const {
  if (config == AtomConfig::Ladder) return g2.value_or(0.0);
  return g3.value_or(0.0);
}

double AtomParams::partner_detuning() const {
  return config == AtomConfig::Ladder ? delta2 : delta3;
}

double AtomParams::partner_damping() const {
  return config == AtomConfig::Ladder ? lambda2 : lambda3;
}

void AtomParams::validate() const {
  if (config == AtomConfig::Ladder) {
    if (g3.has_value()) throw ConfigError("ladder atom must not define g3");
    if (!g2.has_value()) throw ConfigError("ladder atom requires g2");
    if (lambda3 != 0.0 || delta3 != 0.0) throw ConfigError("ladder atom must not define lambda3/delta3");
  } else {
    if (g2.has_value()) throw ConfigError("V atom must not define g2");
    if (!g3.has_value()) throw ConfigError("V atom requires g3");
    if (lambda2 != 0.0 || delta2 != 0.0) throw ConfigError("V atom must not define lambda2/delta2");
  }
  for (double v : {g, partner_coupling(), delta2, delta3, lambda, lambda2, lambda3, e1}) {
    if (!std::isfinite(v)) throw ParameterError("atom parameters must be finite");
  }
  if (lambda < 0.0 || lambda2 < 0.0 || lambda3 < 0.0) {
    throw ParameterError("damping rates must be non-negative");
  }
}

AtomParams ladder_atom(double g, double g2, double delta2, double lambda, double lambda2) {
  AtomParams a;
  a.config = AtomConfig::Ladder;
  a.g = g;
  a.g2 = g2;
  a.delta2 = delta2;
  a.lambda = lambda;
  a.lambda2 = lambda2;
  a.validate();
  return a;
}

AtomParams v_atom(double g, double g3, double delta3, double lambda, double lambda3) {
  AtomParams a;
  a.config = AtomConfig::V;
  a.g = g;
  a.g3 = g3;
  a.delta3 = delta3;
  a.lambda = lambda;
  a.lambda3 = lambda3;
  a.validate();
  return a;
}

std::string_view to_string(Frame frame) {
  switch (frame) {
    case Frame::Lab: return "lab";
    case Frame::RwaLadder: return "rwa-ladder";
    case Frame::RwaV: return "rwa-v";
  }
  return "?";
}

Frame rwa_frame(AtomConfig config) {
  return config == AtomConfig::Ladder ? Frame::RwaLadder : Frame::RwaV;
}

void HamiltonianModel::validate() const {
  atom.validate();
  drive.validate();
  if (spec.config() != atom.config) {
    throw ConfigError("Hilbert space and atom parameters disagree on the atom configuration");
  }
  if ((frame == Frame::RwaLadder && atom.config != AtomConfig::Ladder) ||
      (frame == Frame::RwaV && atom.config != AtomConfig::V)) {
    throw ConfigError(fmt::format("frame {} does not match a {} atom", to_string(frame), to_string(atom.config)));
  }
}

double omega_t(const DriveParams& drive, double t) {
  return DriveParams::omega0 * (1.0 + drive.epsilon * std::sin(drive.eta() * t));
}

double chi_t(const DriveParams& drive, double t) {
  const double eta = drive.eta();
  return drive.epsilon * eta * std::cos(eta * t) / (4.0 * (1.0 + drive.epsilon * std::sin(eta * t)));
}

BandedOperator number_operator(const HilbertSpec& spec) {
  BandedOperator op(spec.dimension());
  for (int i = 1; i <= 3; ++i) {
    for (int n = 1; n <= spec.fock_cutoff(); ++n) {
      const auto k = flat_index(spec, i, n);
      op.add(k, k, static_cast<double>(n));
    }
  }
  return op;
}

BandedOperator pump_operator(const HilbertSpec& spec) {
  BandedOperator op(spec.dimension());
  const cplx I(0.0, 1.0);
  for (int i = 1; i <= 3; ++i) {
    for (int n = 0; n + 2 <= spec.fock_cutoff(); ++n) {
      const double amp = std::sqrt(static_cast<double>((n + 1) * (n + 2)));
      const auto lo = flat_index(spec, i, n);
      const auto hi = flat_index(spec, i, n + 2);
      op.add(hi, lo, I * amp);   // +i a^dagger^2
      op.add(lo, hi, -I * amp);  // -i a^2
    }
  }
  return op;
}

BandedOperator atomic_hamiltonian(const HilbertSpec& spec, const AtomParams& atom) {
  BandedOperator op(spec.dimension());
  const double energies[3] = {atom.e1, atom.e2(), atom.e3()};
  for (int i = 1; i <= 3; ++i) {
    if (energies[i - 1] == 0.0) continue;
    for (int n = 0; n <= spec.fock_cutoff(); ++n) {
      const auto k = flat_index(spec, i, n);
      op.add(k, k, energies[i - 1]);
    }
  }
  return op;
}

namespace {

// coupling * (a sigma_{upper,lower} + h.c.): |lower,n> <-> |upper,n-1> with sqrt(n).
void add_jc_coupling(BandedOperator& op, const HilbertSpec& spec, int lower, int upper, double coupling) {
  if (coupling == 0.0) return;
  for (int n = 1; n <= spec.fock_cutoff(); ++n) {
    const double amp = coupling * std::sqrt(static_cast<double>(n));
    const auto from = flat_index(spec, lower, n);
    const auto to = flat_index(spec, upper, n - 1);
    op.add(to, from, amp);
    op.add(from, to, amp);
  }
}

}  // namespace

BandedOperator interaction_operator(const HilbertSpec& spec, const AtomParams& atom) {
  BandedOperator op(spec.dimension());
  add_jc_coupling(op, spec, 1, 2, atom.g);
  if (atom.config == AtomConfig::Ladder) {
    add_jc_coupling(op, spec, 2, 3, atom.partner_coupling());
  } else {
    add_jc_coupling(op, spec, 1, 3, atom.partner_coupling());
  }
  return op;
}

Hamiltonian::Hamiltonian(BandedOperator constant) {
  terms_.push_back(Term{nullptr, std::move(constant)});
}

Hamiltonian::Hamiltonian(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ConfigError("Hamiltonian needs at least one term");
  for (const Term& t : terms_) {
    if (t.op.dimension() != terms_.front().op.dimension()) {
      throw DimensionError("Hamiltonian terms have different dimensions");
    }
  }
}

std::size_t Hamiltonian::dimension() const {
  return terms_.empty() ? 0 : terms_.front().op.dimension();
}

bool Hamiltonian::time_dependent() const {
  for (const Term& t : terms_) {
    if (t.coefficient) return true;
  }
  return false;
}

void Hamiltonian::apply(double t, const cplx* x, cplx* y, std::size_t ncols, cplx scale,
                        bool accumulate) const {
  const std::size_t dim = dimension();
  double coeffs[8];
  std::vector<double> many;
  double* c = coeffs;
  if (terms_.size() > 8) {
    many.resize(terms_.size());
    c = many.data();
  }
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    c[k] = terms_[k].coefficient ? terms_[k].coefficient(t) : 1.0;
  }
  for (std::size_t col = 0; col < ncols; ++col) {
    std::span<const cplx> xs(x + col * dim, dim);
    std::span<cplx> ys(y + col * dim, dim);
    bool acc = accumulate;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      if (c[k] == 0.0) continue;
      terms_[k].op.apply(xs, ys, scale * c[k], acc);
      acc = true;
    }
    if (!acc) std::fill(ys.begin(), ys.end(), cplx{});
  }
}

void Hamiltonian::apply(double t, std::span<const cplx> x, std::span<cplx> y, cplx scale,
                        bool accumulate) const {
  if (x.size() != dimension() || y.size() != dimension()) {
    throw DimensionError("Hamiltonian applied to a vector of the wrong size");
  }
  apply(t, x.data(), y.data(), 1, scale, accumulate);
}

BandedOperator Hamiltonian::at(double t) const {
  BandedOperator out(dimension());
  for (const Term& term : terms_) {
    const double c = term.coefficient ? term.coefficient(t) : 1.0;
    out += term.op.scaled(c);
  }
  return out;
}

Hamiltonian build_lab_hamiltonian(const HamiltonianModel& model) {
  model.validate();
  if (model.frame != Frame::Lab) throw ConfigError("lab Hamiltonian requested for an RWA model");
  BandedOperator constant = atomic_hamiltonian(model.spec, model.atom);
  constant += interaction_operator(model.spec, model.atom);
  const DriveParams drive = model.drive;
  std::vector<Hamiltonian::Term> terms;
  terms.push_back({nullptr, std::move(constant)});
  terms.push_back({[drive](double t) { return omega_t(drive, t); }, number_operator(model.spec)});
  terms.push_back({[drive](double t) { return chi_t(drive, t); }, pump_operator(model.spec)});
  return Hamiltonian(std::move(terms));
}

BandedOperator build_rwa_hamiltonian(const HamiltonianModel& model) {
  model.validate();
  if (model.frame == Frame::Lab) throw ConfigError("RWA Hamiltonian requested for a lab-frame model");
  const HilbertSpec& spec = model.spec;
  const AtomParams& atom = model.atom;
  const double x = model.drive.x;
  const double q = model.drive.q();

  BandedOperator h = interaction_operator(spec, atom);
  h += pump_operator(spec).scaled(q);
  for (int i = 1; i <= 3; ++i) {
    for (int n = 0; n <= spec.fock_cutoff(); ++n) {
      double diag = 0.0;
      if (model.frame == Frame::RwaLadder) {
        diag = x * ((i == 1 ? 1.0 : 0.0) - n - (i == 3 ? 1.0 : 0.0)) - (i == 3 ? atom.delta2 : 0.0);
      } else {
        diag = -x * (n + (i == 2 ? 1.0 : 0.0) + (i == 3 ? 1.0 : 0.0)) - (i == 3 ? atom.delta3 : 0.0);
      }
      if (diag != 0.0) {
        const auto k = flat_index(spec, i, n);
        h.add(k, k, diag);
      }
    }
  }
  return h;
}

Hamiltonian build_hamiltonian(const HamiltonianModel& model) {
  if (model.frame == Frame::Lab) return build_lab_hamiltonian(model);
  return Hamiltonian(build_rwa_hamiltonian(model));
}

LindbladGenerator::LindbladGenerator(HilbertSpec spec, Hamiltonian hamiltonian,
                                     std::vector<CollapseChannel> channels)
    : spec_(spec), hamiltonian_(std::move(hamiltonian)), channels_(std::move(channels)) {
  if (hamiltonian_.dimension() != spec_.dimension()) {
    throw DimensionError("Lindblad Hamiltonian does not match the Hilbert space");
  }
  for (const CollapseChannel& c : channels_) {
    if (c.rate < 0.0 || !std::isfinite(c.rate)) {
      throw ParameterError(fmt::format("damping rate {} must be non-negative", c.rate));
    }
    if (c.lower < 1 || c.lower > 3 || c.upper < 1 || c.upper > 3 || c.lower == c.upper) {
      throw IndexError(fmt::format("invalid collapse channel sigma_{}{}", c.lower, c.upper));
    }
  }
}

void LindbladGenerator::apply(double t, std::span<const cplx> rho, std::span<cplx> out) const {
  const auto dim = static_cast<Eigen::Index>(spec_.dimension());
  if (rho.size() != static_cast<std::size_t>(dim * dim) || out.size() != rho.size()) {
    throw DimensionError("density matrix storage does not match the Hilbert space");
  }
  const cplx I(0.0, 1.0);
  Eigen::Map<const Density> r(rho.data(), dim, dim);
  Eigen::Map<Density> o(out.data(), dim, dim);

  // -i H rho
  hamiltonian_.apply(t, rho.data(), out.data(), static_cast<std::size_t>(dim), -I, false);
  // +i rho H = +i (H rho^dagger)^dagger, using H = H^dagger.
  const Density rho_dag = r.adjoint();
  Density h_rho_dag(dim, dim);
  hamiltonian_.apply(t, rho_dag.data(), h_rho_dag.data(), static_cast<std::size_t>(dim), 1.0, false);
  o += I * h_rho_dag.adjoint();

  // Jump operators act on whole (N+1)x(N+1) blocks.
  const Eigen::Index b = spec_.photon_levels();
  for (const CollapseChannel& c : channels_) {
    if (c.rate == 0.0) continue;
    const Eigen::Index lo = (c.lower - 1) * b;
    const Eigen::Index hi = (c.upper - 1) * b;
    o.block(lo, lo, b, b) += c.rate * r.block(hi, hi, b, b);
    o.middleRows(hi, b) -= 0.5 * c.rate * r.middleRows(hi, b);
    o.middleCols(hi, b) -= 0.5 * c.rate * r.middleCols(hi, b);
  }
}

Density LindbladGenerator::operator()(double t, const Density& rho) const {
  Density out(rho.rows(), rho.cols());
  apply(t, std::span<const cplx>(rho.data(), static_cast<std::size_t>(rho.size())),
        std::span<cplx>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

std::vector<CollapseChannel> collapse_channels(const AtomParams& atom) {
  std::vector<CollapseChannel> out;
  out.push_back({1, 2, atom.lambda});
  if (atom.config == AtomConfig::Ladder) {
    out.push_back({2, 3, atom.lambda2});
  } else {
    out.push_back({1, 3, atom.lambda3});
  }
  return out;
}

LindbladGenerator lindblad_generator(const HamiltonianModel& model) {
  model.validate();
  return LindbladGenerator(model.spec, build_hamiltonian(model), collapse_channels(model.atom));
}

}  // namespace dce3
