#include "dce3/banded_operator.hpp"
#include "dce3/error.hpp"
#include "dce3/kernels.hpp"

#include <doctest.h>

#include <random>

using namespace dce3;

namespace {

BandedOperator random_banded(std::size_t dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BandedOperator op(dim);
  const std::ptrdiff_t offsets[] = {-9, -2, -1, 0, 2, 8};
  for (std::ptrdiff_t d : offsets) {
    for (std::size_t r = 0; r < dim; ++r) {
      const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(r) + d;
      if (c < 0 || c >= static_cast<std::ptrdiff_t>(dim)) continue;
      op.add(r, static_cast<std::size_t>(c), cplx(u(rng), u(rng)));
    }
  }
  return op;
}

}  // namespace

TEST_SUITE("banded") {

TEST_CASE("elements accumulate and read back") {
  BandedOperator op(5);
  op.add(1, 3, cplx(1.0, 2.0));
  op.add(1, 3, cplx(0.5, 0.0));
  CHECK(op.element(1, 3) == cplx(1.5, 2.0));
  CHECK(op.element(3, 1) == cplx(0.0, 0.0));
  CHECK(op.adjoint().element(3, 1) == cplx(1.5, -2.0));
  CHECK_THROWS_AS(op.add(5, 0, 1.0), IndexError);
}

TEST_CASE("banded product agrees with the dense product for every kernel table") {
  std::mt19937_64 rng(11);
  const std::size_t dim = 37;
  const BandedOperator op = random_banded(dim, rng);
  const Eigen::MatrixXcd dense = op.to_dense();
  Ket x(static_cast<Eigen::Index>(dim));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = cplx(u(rng), u(rng));

  const std::string original = kernels::active().name;
  for (const auto* table : kernels::available_tables()) {
    CAPTURE(table->name);
    kernels::select(table->name);
    CHECK((op.apply(x) - dense * x).norm() < 1e-14 * dense.norm() * x.norm());

    Ket y = Ket::Constant(x.size(), cplx(0.25, -0.5));
    const Ket y0 = y;
    const cplx s(0.0, -1.0);
    op.apply(std::span<const cplx>(x.data(), dim), std::span<cplx>(y.data(), dim), s, true);
    CHECK((y - (y0 + s * (dense * x))).norm() < 1e-13);
  }
  kernels::select(original);
}

TEST_CASE("adjoint, sums and scaling") {
  std::mt19937_64 rng(3);
  const BandedOperator a = random_banded(12, rng);
  const BandedOperator b = random_banded(12, rng);
  CHECK((a.adjoint().to_dense() - a.to_dense().adjoint()).norm() == 0.0);
  BandedOperator sum = a;
  sum += b.scaled(cplx(0.0, 2.0));
  CHECK((sum.to_dense() - (a.to_dense() + cplx(0.0, 2.0) * b.to_dense())).norm() < 1e-14);
  BandedOperator herm = a;
  herm += a.adjoint();
  CHECK(herm.hermiticity_deviation() < 1e-15);
  CHECK(a.hermiticity_deviation() > 0.1);
}

}
