#include "dce3/error.hpp"
#include "dce3/integrator.hpp"

#include <doctest.h>

#include <cmath>

using namespace dce3;

namespace {

// y' = i y, y(0) = 1.
const ComplexRhs rotation = [](double, std::span<const cplx> y, std::span<cplx> dy) {
  for (std::size_t k = 0; k < y.size(); ++k) dy[k] = cplx(0.0, 1.0) * y[k];
};

double fixed_step_error(const ButcherTableau& tab, double h, double t_end) {
  StepControl c;
  c.rel_tol = 1e3;
  c.abs_tol = 1e3;
  c.initial_step = h;
  c.max_step = h;
  EmbeddedRungeKutta rk(tab, c);
  std::vector<cplx> y{cplx(1.0, 0.0)};
  double t = 0.0;
  rk.advance(rotation, t, t_end, y);
  return std::abs(y[0] - std::exp(cplx(0.0, t_end)));
}

}  // namespace

TEST_SUITE("integrator") {

TEST_CASE("tableaus are consistent") {
  for (const auto* tab : {&fehlberg78(), &dormand_prince54()}) {
    CAPTURE(tab->name);
    double bsum = 0.0, esum = 0.0;
    for (double b : tab->b) bsum += b;
    for (double e : tab->e) esum += e;
    CHECK(bsum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(esum) < 1e-14);
    for (std::size_t i = 1; i < tab->stages(); ++i) {
      double row = 0.0;
      for (double a : tab->a[i]) row += a;
      CHECK(row == doctest::Approx(tab->c[i]).epsilon(1e-13));
    }
  }
  CHECK(&tableau_by_name("rkf78") == &fehlberg78());
  CHECK_THROWS_AS(tableau_by_name("euler"), ConfigError);
}

TEST_CASE("observed convergence order") {
  const double e1 = fixed_step_error(dormand_prince54(), 0.2, 4.0);
  const double e2 = fixed_step_error(dormand_prince54(), 0.1, 4.0);
  CHECK(std::log2(e1 / e2) > 4.5);
  const double f1 = fixed_step_error(fehlberg78(), 0.8, 8.0);
  const double f2 = fixed_step_error(fehlberg78(), 0.4, 8.0);
  CHECK(std::log2(f1 / f2) > 7.3);
}

TEST_CASE("adaptive accuracy follows the tolerance") {
  for (const auto* tab : {&fehlberg78(), &dormand_prince54()}) {
    StepControl c;
    c.rel_tol = 1e-11;
    c.abs_tol = 1e-13;
    EmbeddedRungeKutta rk(*tab, c);
    std::vector<cplx> y{cplx(1.0, 0.0), cplx(0.0, 2.0)};
    double t = 0.0;
    rk.advance(rotation, t, 50.0, y);
    CHECK(std::abs(y[0] - std::exp(cplx(0.0, 50.0))) < 1e-8);
    CHECK(std::abs(y[1] - cplx(0.0, 2.0) * std::exp(cplx(0.0, 50.0))) < 2e-8);
    CHECK(rk.statistics().accepted > 0);
  }
}

TEST_CASE("advance lands exactly on every grid point") {
  EmbeddedRungeKutta rk(fehlberg78(), StepControl{});
  std::vector<cplx> y{cplx(1.0, 0.0)};
  double t = 0.0;
  for (int k = 1; k <= 30; ++k) {
    const double target = 0.37 * k;
    rk.advance(rotation, t, target, y);
    CHECK(t == target);
  }
  CHECK(std::abs(y[0] - std::exp(cplx(0.0, t))) < 1e-8);
}

TEST_CASE("finite-time blow-up raises an integration error") {
  const ComplexRhs blowup = [](double, std::span<const cplx> y, std::span<cplx> dy) { dy[0] = y[0] * y[0]; };
  EmbeddedRungeKutta rk(dormand_prince54(), StepControl{});
  std::vector<cplx> y{cplx(1.0, 0.0)};
  double t = 0.0;
  CHECK_THROWS_AS(rk.advance(blowup, t, 2.0, y), IntegrationError);
  CHECK(t < 1.0);
}

TEST_CASE("invalid controls are rejected") {
  StepControl c;
  c.rel_tol = 0.0;
  CHECK_THROWS_AS(EmbeddedRungeKutta(fehlberg78(), c), ConfigError);
  c = StepControl{};
  c.max_step = -1.0;
  CHECK_THROWS_AS(EmbeddedRungeKutta(fehlberg78(), c), ConfigError);
}

}
