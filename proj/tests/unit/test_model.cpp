#include "dce3/error.hpp"
#include "dce3/model.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace dce3;

namespace {

constexpr double kPi = std::numbers::pi;

HamiltonianModel ladder_model(Frame frame, int n_cut, double x = 0.0) {
  return HamiltonianModel{frame, HilbertSpec(AtomConfig::Ladder, n_cut), ladder_atom(3e-2, 4e-2, 0.1),
                          DriveParams{1e-3, x}};
}

HamiltonianModel v_model(Frame frame, int n_cut, double x = 0.0) {
  return HamiltonianModel{frame, HilbertSpec(AtomConfig::V, n_cut), v_atom(3e-2, 4e-2, -0.48),
                          DriveParams{1e-3, x}};
}

// Dense oracle assembled from the textbook operator definitions.
Eigen::MatrixXcd dense_rwa(const HamiltonianModel& m) {
  const auto& s = m.spec;
  const auto a = dense::annihilation(s);
  const auto ad = Eigen::MatrixXcd(a.adjoint());
  const auto n = Eigen::MatrixXcd(ad * a);
  const cplx I(0.0, 1.0);
  const double q = m.drive.q(), x = m.drive.x;
  Eigen::MatrixXcd coupling = m.atom.g * a * dense::sigma(2, 1, s);
  Eigen::MatrixXcd h;
  if (m.atom.config == AtomConfig::Ladder) {
    coupling += m.atom.partner_coupling() * a * dense::sigma(3, 2, s);
    coupling -= I * q * a * a;
    h = coupling + Eigen::MatrixXcd(coupling.adjoint());
    h += x * (dense::sigma(1, 1, s) - n - dense::sigma(3, 3, s)) - m.atom.delta2 * dense::sigma(3, 3, s);
  } else {
    coupling += m.atom.partner_coupling() * a * dense::sigma(3, 1, s);
    coupling -= I * q * a * a;
    h = coupling + Eigen::MatrixXcd(coupling.adjoint());
    h += -x * (n + dense::sigma(2, 2, s) + dense::sigma(3, 3, s)) - m.atom.delta3 * dense::sigma(3, 3, s);
  }
  return h;
}

Eigen::MatrixXcd dense_lab(const HamiltonianModel& m, double t) {
  const auto& s = m.spec;
  const auto a = dense::annihilation(s);
  const Eigen::MatrixXcd ad = a.adjoint();
  const cplx I(0.0, 1.0);
  Eigen::MatrixXcd h = omega_t(m.drive, t) * ad * a - I * chi_t(m.drive, t) * (a * a - ad * ad);
  h += m.atom.e1 * dense::sigma(1, 1, s) + m.atom.e2() * dense::sigma(2, 2, s) + m.atom.e3() * dense::sigma(3, 3, s);
  Eigen::MatrixXcd c = m.atom.g * a * dense::sigma(2, 1, s);
  if (m.atom.config == AtomConfig::Ladder) {
    c += m.atom.partner_coupling() * a * dense::sigma(3, 2, s);
  } else {
    c += m.atom.partner_coupling() * a * dense::sigma(3, 1, s);
  }
  h += c + Eigen::MatrixXcd(c.adjoint());
  return h;
}

Eigen::MatrixXcd dense_lindblad(const HamiltonianModel& m, const Eigen::MatrixXcd& h, const Density& rho) {
  const cplx I(0.0, 1.0);
  Density out = -I * (h * rho - rho * h);
  for (const auto& c : collapse_channels(m.atom)) {
    const auto o = dense::sigma(c.lower, c.upper, m.spec);
    const Eigen::MatrixXcd od = o.adjoint();
    out += c.rate * (o * rho * od - 0.5 * (od * o * rho + rho * od * o));
  }
  return out;
}

Density random_density(std::size_t dim, std::mt19937_64& rng, bool normalize = true) {
  std::normal_distribution<double> g;
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
  Density rho = m * m.adjoint();
  if (normalize) rho /= rho.trace();
  return rho;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("cavity frequency") {
  CHECK(omega_t(DriveParams{1e-3, 0.0}, 0.0) == 1.0);
  CHECK(omega_t(DriveParams{1e-3, 0.0}, kPi / 4) == doctest::Approx(1.001).epsilon(1e-14));
  CHECK(omega_t(DriveParams{0.0, 0.3}, 17.0) == 1.0);
}

TEST_CASE("squeezing rate chi_t") {
  CHECK(chi_t(DriveParams{1e-3, 0.0}, 0.0) == doctest::Approx(5e-4).epsilon(1e-14));
  CHECK(chi_t(DriveParams{0.0, 0.0}, 3.0) == 0.0);
  // eta t = pi
  CHECK(chi_t(DriveParams{1e-3, 0.0}, kPi / 2) == doctest::Approx(-5e-4).epsilon(1e-12));
  // chi_t = (4 omega)^-1 d omega/dt, checked by central differences.
  const DriveParams d{4e-2, 0.37};
  for (double t : {0.1, 1.3, 7.9}) {
    const double h = 1e-5;
    const double deriv = (omega_t(d, t + h) - omega_t(d, t - h)) / (2 * h);
    CHECK(chi_t(d, t) == doctest::Approx(deriv / (4 * omega_t(d, t))).epsilon(1e-8));
  }
}

TEST_CASE("drive derived quantities and validation") {
  const DriveParams d{1e-3, 0.25};
  CHECK(d.eta() == 2.5);
  CHECK(d.q() == doctest::Approx(1e-3 * 1.25 / 4).epsilon(1e-15));
  CHECK_THROWS_AS(make_drive(0.2, 0.0), ParameterError);
  CHECK(DriveParams{0.07, 0.0}.warnings().size() == 1);
  CHECK(DriveParams{0.01, 0.0}.warnings().empty());
}

TEST_CASE("atom parameter validation") {
  AtomParams a = ladder_atom(3e-2, 4e-2);
  a.g3 = 1e-2;
  CHECK_THROWS_AS(a.validate(), ConfigError);
  AtomParams v = v_atom(3e-2, 4e-2);
  v.g2 = 1e-2;
  CHECK_THROWS_AS(v.validate(), ConfigError);
  CHECK_THROWS_AS(ladder_atom(3e-2, 4e-2, 0.0, -1e-4), ParameterError);
  CHECK(ladder_atom(3e-2, 4e-2, 0.1).e3() == doctest::Approx(1.9));
  CHECK(v_atom(3e-2, 4e-2, -0.48).e3() == doctest::Approx(1.48));
  CHECK(ladder_atom(3e-2, 4e-2).e2() - ladder_atom(3e-2, 4e-2).e1 == 1.0);
}

TEST_CASE("model rejects mismatched layouts") {
  HamiltonianModel m = ladder_model(Frame::RwaV, 4);
  CHECK_THROWS_AS(m.validate(), ConfigError);
  m = ladder_model(Frame::RwaLadder, 4);
  m.spec = HilbertSpec(AtomConfig::V, 4);
  CHECK_THROWS_AS(build_rwa_hamiltonian(m), ConfigError);
  CHECK_THROWS_AS(build_lab_hamiltonian(ladder_model(Frame::RwaLadder, 4)), ConfigError);
}

TEST_CASE("lab-frame matrix elements") {
  const auto lad = ladder_model(Frame::Lab, 6);
  const auto& s = lad.spec;
  const auto hi = interaction_operator(s, lad.atom);
  CHECK(hi.element(flat_index(s, 2, 1), flat_index(s, 1, 2)) == cplx(3e-2 * std::sqrt(2.0), 0.0));
  const auto vm = v_model(Frame::Lab, 6);
  const auto hv = interaction_operator(vm.spec, vm.atom);
  CHECK(hv.element(flat_index(vm.spec, 3, 0), flat_index(vm.spec, 1, 1)) == cplx(4e-2, 0.0));

  const Hamiltonian h = build_lab_hamiltonian(lad);
  for (double t : {0.0, 0.4, 2.0}) {
    const cplx e = h.at(t).element(flat_index(s, 1, 2), flat_index(s, 1, 0));
    CHECK(std::abs(e - cplx(0.0, chi_t(lad.drive, t) * std::sqrt(2.0))) < 1e-16);
  }
}

TEST_CASE("rwa matrix elements") {
  const double x = 0.02;
  const auto lad = ladder_model(Frame::RwaLadder, 6, x);
  const auto h1 = build_rwa_hamiltonian(lad);
  const auto& s = lad.spec;
  CHECK(h1.element(flat_index(s, 1, 0), flat_index(s, 1, 0)) == cplx(x, 0.0));
  CHECK(std::abs(h1.element(flat_index(s, 1, 2), flat_index(s, 1, 0)) - cplx(0.0, lad.drive.q() * std::sqrt(2.0))) <
        1e-18);
  const auto vm = v_model(Frame::RwaV, 6, x);
  const auto h2 = build_rwa_hamiltonian(vm);
  CHECK(h2.element(flat_index(vm.spec, 3, 0), flat_index(vm.spec, 3, 0)).real() ==
        doctest::Approx(-x + 0.48).epsilon(1e-14));
}

TEST_CASE("banded Hamiltonians match dense oracles") {
  for (const auto& m : {ladder_model(Frame::RwaLadder, 7, 0.013), v_model(Frame::RwaV, 7, -0.021)}) {
    CHECK((build_rwa_hamiltonian(m).to_dense() - dense_rwa(m)).cwiseAbs().maxCoeff() < 1e-14);
  }
  for (const auto& m : {ladder_model(Frame::Lab, 7, 0.013), v_model(Frame::Lab, 7, -0.021)}) {
    const Hamiltonian h = build_lab_hamiltonian(m);
    for (double t : {0.0, 1.7, 123.4}) {
      CHECK((h.dense(t) - dense_lab(m, t)).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("every Hamiltonian is Hermitian at random times") {
  std::mt19937_64 rng(5);
  const double eps = 1e-3;
  std::uniform_real_distribution<double> u(0.0, 10.0 / eps);
  for (const auto& m : {ladder_model(Frame::Lab, 12), v_model(Frame::Lab, 12), ladder_model(Frame::RwaLadder, 12),
                        v_model(Frame::RwaV, 12)}) {
    const Hamiltonian h = build_hamiltonian(m);
    CHECK(h.time_dependent() == (m.frame == Frame::Lab));
    for (int k = 0; k < 20; ++k) {
      const Eigen::MatrixXcd d = h.dense(u(rng));
      CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("a vanishing partner coupling decouples the third level") {
  // Only the pump, which stays within the level, may touch |3,n>.
  auto check_isolated = [](const Eigen::MatrixXcd& d, const HilbertSpec& s) {
    const auto first = static_cast<Eigen::Index>(flat_index(s, 3, 0));
    for (Eigen::Index k = first; k < d.rows(); ++k) {
      for (Eigen::Index j = 0; j < first; ++j) {
        CHECK(d(k, j) == cplx(0.0, 0.0));
        CHECK(d(j, k) == cplx(0.0, 0.0));
      }
    }
  };
  for (Frame f : {Frame::Lab, Frame::RwaLadder}) {
    HamiltonianModel m{f, HilbertSpec(AtomConfig::Ladder, 6), ladder_atom(3e-2, 0.0, 0.2), DriveParams{1e-3, 0.01}};
    check_isolated(build_hamiltonian(m).dense(0.3), m.spec);
  }
  HamiltonianModel v{Frame::RwaV, HilbertSpec(AtomConfig::V, 5), v_atom(3e-2, 0.0, 0.3), DriveParams{1e-3, 0.0}};
  const Eigen::MatrixXcd d = build_rwa_hamiltonian(v).to_dense();
  check_isolated(d, v.spec);
  const auto k = static_cast<Eigen::Index>(flat_index(v.spec, 3, 0));
  CHECK(d(k, k) == cplx(-0.3, 0.0));
}

TEST_CASE("lindblad: decay of |2,0>") {
  const HilbertSpec s(AtomConfig::Ladder, 3);
  BandedOperator zero(s.dimension());
  const LindbladGenerator gen(s, Hamiltonian(zero), {{1, 2, 5e-4}, {2, 3, 0.0}});
  const Ket e = basis_ket(s, 2, 0), g = basis_ket(s, 1, 0);
  const Density rhodot = gen(0.0, e * e.adjoint());
  const Density expected = 5e-4 * (g * g.adjoint() - e * e.adjoint());
  CHECK((rhodot - expected).cwiseAbs().maxCoeff() < 1e-18);
  CHECK(gen(0.0, g * g.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lindblad generator matches the dense master equation") {
  std::mt19937_64 rng(17);
  HamiltonianModel lad{Frame::RwaLadder, HilbertSpec(AtomConfig::Ladder, 5),
                       ladder_atom(3e-2, 4e-2, 0.1, 5e-4, 8e-4), DriveParams{1e-3, 0.02}};
  HamiltonianModel vm{Frame::Lab, HilbertSpec(AtomConfig::V, 5), v_atom(3e-2, 4e-2, -0.2, 5e-4, 9e-4),
                      DriveParams{1e-3, 0.02}};
  for (const auto& m : {lad, vm}) {
    const auto gen = lindblad_generator(m);
    const Density rho = random_density(m.spec.dimension(), rng);
    const double t = 2.5;
    const Density expected = dense_lindblad(m, build_hamiltonian(m).dense(t), rho);
    CHECK((gen(t, rho) - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("lindblad output is traceless for random Hermitian input") {
  std::mt19937_64 rng(23);
  HamiltonianModel m{Frame::RwaLadder, HilbertSpec(AtomConfig::Ladder, 7), ladder_atom(3e-2, 4e-2, 0.0, 5e-4, 8.9e-4),
                     DriveParams{1e-3, 0.03}};
  const auto gen = lindblad_generator(m);
  for (int k = 0; k < 100; ++k) {
    const Density rho = random_density(m.spec.dimension(), rng);
    CHECK(std::abs(gen(0.0, rho).trace()) < 1e-12);
  }
}

TEST_CASE("closed-system lindblad reduces to the commutator") {
  std::mt19937_64 rng(29);
  HamiltonianModel m{Frame::RwaV, HilbertSpec(AtomConfig::V, 4), v_atom(3e-2, 4e-2), DriveParams{1e-3, 0.0}};
  const auto gen = lindblad_generator(m);
  const Density rho = random_density(m.spec.dimension(), rng);
  const Eigen::MatrixXcd h = build_rwa_hamiltonian(m).to_dense();
  CHECK((gen(0.0, rho) - cplx(0.0, -1.0) * (h * rho - rho * h)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("negative damping rates are rejected") {
  const HilbertSpec s(AtomConfig::Ladder, 2);
  CHECK_THROWS_AS(LindbladGenerator(s, Hamiltonian(BandedOperator(s.dimension())), {{1, 2, -1e-3}}), ParameterError);
}

}
