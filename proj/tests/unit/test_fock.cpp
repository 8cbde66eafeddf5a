#include "dce3/error.hpp"
#include "dce3/fock.hpp"

#include <doctest.h>

#include <cmath>

using namespace dce3;

TEST_SUITE("fock") {

TEST_CASE("flat index follows (i-1)(N+1)+n") {
  CHECK(flat_index(HilbertSpec(AtomConfig::Ladder, 7), 1, 0) == 0);
  CHECK(flat_index(HilbertSpec(AtomConfig::Ladder, 7), 3, 5) == 21);
  CHECK(flat_index(HilbertSpec(AtomConfig::V, 196), 2, 196) == 393);
}

TEST_CASE("flat index rejects out-of-range labels") {
  const HilbertSpec spec(AtomConfig::Ladder, 7);
  CHECK_THROWS_AS(flat_index(spec, 0, 0), IndexError);
  CHECK_THROWS_AS(flat_index(spec, 4, 0), IndexError);
  CHECK_THROWS_AS(flat_index(spec, 1, -1), IndexError);
  CHECK_THROWS_AS(flat_index(spec, 1, 8), IndexError);
  CHECK_THROWS_AS(unflatten(spec, spec.dimension()), IndexError);
}

TEST_CASE("hilbert spec invariants") {
  const HilbertSpec spec(AtomConfig::V, 7);
  CHECK(spec.dimension() == 24);
  CHECK(spec.atom_levels() == 3);
  CHECK_THROWS_AS(HilbertSpec(AtomConfig::Ladder, 0), ParameterError);
}

TEST_CASE("unflatten inverts flat index over the whole basis") {
  for (int n_cut = 1; n_cut <= 16; ++n_cut) {
    const HilbertSpec spec(AtomConfig::Ladder, n_cut);
    for (std::size_t k = 0; k < spec.dimension(); ++k) {
      const BasisIndex b = unflatten(spec, k);
      REQUIRE(flat_index(spec, b.atom, b.photons) == k);
    }
  }
}

TEST_CASE("annihilation on basis states") {
  const HilbertSpec spec(AtomConfig::Ladder, 7);
  CHECK((apply_annihilation(basis_ket(spec, 1, 1), spec) - basis_ket(spec, 1, 0)).norm() == 0.0);
  CHECK((apply_annihilation(basis_ket(spec, 2, 4), spec) - 2.0 * basis_ket(spec, 2, 3)).norm() < 1e-15);
  CHECK(apply_annihilation(basis_ket(spec, 3, 0), spec).norm() == 0.0);
}

TEST_CASE("sigma on basis states") {
  const HilbertSpec spec(AtomConfig::Ladder, 7);
  CHECK((apply_sigma(basis_ket(spec, 1, 0), 2, 1, spec) - basis_ket(spec, 2, 0)).norm() == 0.0);
  CHECK(apply_sigma(basis_ket(spec, 3, 2), 2, 1, spec).norm() == 0.0);
  CHECK((apply_sigma(basis_ket(spec, 3, 5), 3, 3, spec) - basis_ket(spec, 3, 5)).norm() == 0.0);
}

TEST_CASE("commutator of a and a^dagger on the truncated space") {
  const int n_cut = 9;
  const HilbertSpec spec(AtomConfig::V, n_cut);
  for (int i = 1; i <= 3; ++i) {
    for (int n = 0; n <= n_cut; ++n) {
      const Ket k = basis_ket(spec, i, n);
      const Ket comm = apply_annihilation(apply_creation(k, spec), spec) -
                       apply_creation(apply_annihilation(k, spec), spec);
      // The truncation shows up only at the top level: [a, a^dagger]|N> = -N|N>.
      const double expected = n < n_cut ? 1.0 : -static_cast<double>(n_cut);
      CHECK((comm - expected * k).norm() < 1e-13);
    }
  }
}

TEST_CASE("basis rules agree with dense matrices") {
  const HilbertSpec spec(AtomConfig::Ladder, 6);
  Ket psi(static_cast<Eigen::Index>(spec.dimension()));
  for (Eigen::Index k = 0; k < psi.size(); ++k) psi(k) = cplx(std::sin(0.7 * k + 0.1), std::cos(1.3 * k));
  const auto a = dense::annihilation(spec);
  CHECK((apply_annihilation(psi, spec) - a * psi).norm() < 1e-14);
  CHECK((apply_creation(psi, spec) - a.adjoint() * psi).norm() < 1e-14);
  CHECK((apply_number(psi, spec) - a.adjoint() * a * psi).norm() < 1e-13);
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      CHECK((apply_sigma(psi, i, j, spec) - dense::sigma(i, j, spec) * psi).norm() < 1e-14);
    }
  }
}

TEST_CASE("number expectation is the photon-weighted norm") {
  const HilbertSpec spec(AtomConfig::Ladder, 5);
  Ket psi(static_cast<Eigen::Index>(spec.dimension()));
  for (Eigen::Index k = 0; k < psi.size(); ++k) psi(k) = cplx(std::cos(0.3 * k), 0.2 * k);
  double weighted = 0.0;
  for (std::size_t k = 0; k < spec.dimension(); ++k) {
    weighted += unflatten(spec, k).photons * std::norm(psi(static_cast<Eigen::Index>(k)));
  }
  const cplx expect = psi.dot(apply_number(psi, spec));
  CHECK(expect.real() >= 0.0);
  CHECK(std::abs(expect.real() - weighted) < 1e-12 * weighted);
  CHECK(std::abs(expect.imag()) < 1e-12);
}

TEST_CASE("partial trace over the atom") {
  const HilbertSpec spec(AtomConfig::Ladder, 7);
  const Ket g0 = basis_ket(spec, 1, 0);
  auto p = partial_trace_atom(g0 * g0.adjoint(), spec);
  CHECK(p[0] == 1.0);
  for (std::size_t n = 1; n < p.size(); ++n) CHECK(p[n] == 0.0);

  const Ket e1 = basis_ket(spec, 2, 1);
  p = partial_trace_atom(0.5 * g0 * g0.adjoint() + 0.5 * e1 * e1.adjoint(), spec);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));

  // Coherences between atomic levels do not contribute.
  const Ket psi = (g0 + basis_ket(spec, 3, 2)) / std::sqrt(2.0);
  p = partial_trace_atom(psi * psi.adjoint(), spec);
  CHECK(std::abs(p[0] - 0.5) < 1e-15);
  CHECK(std::abs(p[2] - 0.5) < 1e-15);
  double total = 0.0;
  for (double v : p) total += v;
  CHECK(std::abs(total - 1.0) < 1e-10);
}

TEST_CASE("partial trace rejects wrong shapes") {
  const HilbertSpec spec(AtomConfig::Ladder, 3);
  CHECK_THROWS_AS(partial_trace_atom(Density::Identity(5, 5), spec), DimensionError);
  CHECK_THROWS_AS(partial_trace_atom(Density::Zero(12, 11), spec), DimensionError);
}

TEST_CASE("quantum state validation") {
  const HilbertSpec spec(AtomConfig::Ladder, 3);
  CHECK_NOTHROW(QuantumState::pure(spec, basis_ket(spec, 1, 0)));
  CHECK_THROWS_AS(QuantumState::pure(spec, 1.001 * basis_ket(spec, 1, 0)), StateError);
  CHECK_THROWS_AS(QuantumState::pure(spec, Ket::Zero(5)), DimensionError);

  const auto dim = static_cast<Eigen::Index>(spec.dimension());
  Density rho = Density::Zero(dim, dim);
  rho(0, 0) = 1.0;
  CHECK_NOTHROW(QuantumState::mixed(spec, rho));
  Density skew = rho;
  skew(0, 1) = cplx(0.0, 1e-9);
  CHECK_THROWS_AS(QuantumState::mixed(spec, skew), StateError);
  Density heavy = 1.1 * rho;
  CHECK_THROWS_AS(QuantumState::mixed(spec, heavy), StateError);
  Density negative = Density::Zero(dim, dim);
  negative(0, 0) = 1.1;
  negative(1, 1) = -0.1;
  CHECK_THROWS_AS(QuantumState::mixed(spec, negative), StateError);

  const auto pure = QuantumState::pure(spec, basis_ket(spec, 2, 1));
  CHECK_THROWS_AS(pure.density(), StateError);
  CHECK(pure.to_density()(flat_index(spec, 2, 1), flat_index(spec, 2, 1)) == cplx(1.0, 0.0));
}

TEST_CASE("leakage sums the two highest levels") {
  CHECK(fock_leakage({0.5, 0.25, 0.125, 0.125}) == 0.25);
  CHECK(fock_leakage({1.0}) == 1.0);
}

}
