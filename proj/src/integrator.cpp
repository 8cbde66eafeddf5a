#include "dce3/integrator.hpp"

#include "dce3/error.hpp"
#include "dce3/kernels.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace dce3 {

namespace {

ButcherTableau make_fehlberg78() {
  ButcherTableau t;
  t.name = "fehlberg78";
  t.order = 8;
  t.error_order = 7;
  t.c = {0.0, 2.0 / 27, 1.0 / 9, 1.0 / 6, 5.0 / 12, 1.0 / 2, 5.0 / 6, 1.0 / 6, 2.0 / 3, 1.0 / 3, 1.0, 0.0, 1.0};
  t.a = {
      {},
      {2.0 / 27},
      {1.0 / 36, 1.0 / 12},
      {1.0 / 24, 0.0, 1.0 / 8},
      {5.0 / 12, 0.0, -25.0 / 16, 25.0 / 16},
      {1.0 / 20, 0.0, 0.0, 1.0 / 4, 1.0 / 5},
      {-25.0 / 108, 0.0, 0.0, 125.0 / 108, -65.0 / 27, 125.0 / 54},
      {31.0 / 300, 0.0, 0.0, 0.0, 61.0 / 225, -2.0 / 9, 13.0 / 900},
      {2.0, 0.0, 0.0, -53.0 / 6, 704.0 / 45, -107.0 / 9, 67.0 / 90, 3.0},
      {-91.0 / 108, 0.0, 0.0, 23.0 / 108, -976.0 / 135, 311.0 / 54, -19.0 / 60, 17.0 / 6, -1.0 / 12},
      {2383.0 / 4100, 0.0, 0.0, -341.0 / 164, 4496.0 / 1025, -301.0 / 82, 2133.0 / 4100, 45.0 / 82,
       45.0 / 164, 18.0 / 41},
      {3.0 / 205, 0.0, 0.0, 0.0, 0.0, -6.0 / 41, -3.0 / 205, -3.0 / 41, 3.0 / 41, 6.0 / 41, 0.0},
      {-1777.0 / 4100, 0.0, 0.0, -341.0 / 164, 4496.0 / 1025, -289.0 / 82, 2193.0 / 4100, 51.0 / 82,
       33.0 / 164, 12.0 / 41, 0.0, 1.0},
  };
  t.b = {0.0, 0.0, 0.0, 0.0, 0.0, 34.0 / 105, 9.0 / 35, 9.0 / 35, 9.0 / 280, 9.0 / 280, 0.0,
         41.0 / 840, 41.0 / 840};
  const double w = 41.0 / 840;
  t.e = {-w, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -w, w, w};
  return t;
}

ButcherTableau make_dormand_prince54() {
  ButcherTableau t;
  t.name = "dopri54";
  t.order = 5;
  t.error_order = 4;
  t.c = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  t.a = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
  };
  t.b = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
  const std::vector<double> bhat = {5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
  t.e.resize(t.b.size());
  for (std::size_t j = 0; j < t.b.size(); ++j) t.e[j] = t.b[j] - bhat[j];
  return t;
}

const double* as_doubles(const std::vector<cplx>& v) { return reinterpret_cast<const double*>(v.data()); }
double* as_doubles(std::vector<cplx>& v) { return reinterpret_cast<double*>(v.data()); }

}  // namespace

const ButcherTableau& fehlberg78() {
  static const ButcherTableau t = make_fehlberg78();
  return t;
}

const ButcherTableau& dormand_prince54() {
  static const ButcherTableau t = make_dormand_prince54();
  return t;
}

const ButcherTableau& tableau_by_name(std::string_view name) {
  if (name == "fehlberg78" || name == "rkf78") return fehlberg78();
  if (name == "dopri54" || name == "dopri5") return dormand_prince54();
  throw ConfigError(fmt::format("unknown integrator tableau '{}'", name));
}

EmbeddedRungeKutta::EmbeddedRungeKutta(const ButcherTableau& tableau, StepControl control)
    : tableau_(tableau), control_(control) {
  if (!(control_.rel_tol > 0.0) || !(control_.abs_tol > 0.0)) {
    throw ConfigError("integrator tolerances must be positive");
  }
  if (control_.max_step < 0.0 || control_.initial_step < 0.0 || control_.min_step < 0.0) {
    throw ConfigError("integrator step bounds must be non-negative");
  }
}

double EmbeddedRungeKutta::initial_step(const ComplexRhs& rhs, double t, const std::vector<cplx>& y,
                                        double span) {
  if (control_.initial_step > 0.0) return control_.initial_step;
  // h = 0.01 |y| / |f| in the weighted norm, capped by the interval.
  std::vector<cplx> f(y.size());
  rhs(t, y, f);
  ++stats_.rhs_evaluations;
  const auto& k = kernels::active();
  const std::size_t n = 2 * y.size();
  auto weighted = [&](const std::vector<cplx>& v) {
    return std::sqrt(k.scaled_sum_sq(as_doubles(v), as_doubles(y), as_doubles(y), n, control_.abs_tol,
                                     control_.rel_tol) /
                     static_cast<double>(n));
  };
  const double ynorm = weighted(y);
  const double fnorm = weighted(f);
  double h = (fnorm > 1e-5 && ynorm > 1e-5) ? 0.01 * ynorm / fnorm : 1e-6 * span;
  h = std::min(h, span);
  if (control_.max_step > 0.0) h = std::min(h, control_.max_step);
  return std::max(h, control_.min_step);
}

void EmbeddedRungeKutta::advance(const ComplexRhs& rhs, double& t, double t_end, std::vector<cplx>& y) {
  if (!(t_end > t)) return;
  const std::size_t s = tableau_.stages();
  const std::size_t n = y.size();
  const std::size_t nd = 2 * n;
  if (k_.size() != s || (s > 0 && k_[0].size() != n)) {
    k_.assign(s, std::vector<cplx>(n));
    stage_.assign(n, cplx{});
    next_.assign(n, cplx{});
    err_.assign(n, cplx{});
  }
  if (step_ <= 0.0) step_ = initial_step(rhs, t, y, t_end - t);

  const auto& kern = kernels::active();
  const double safety = 0.9;
  const double exponent = 1.0 / (std::min(tableau_.order, tableau_.error_order) + 1.0);
  std::vector<const double*> terms(s);
  std::vector<double> coeff(s);
  for (std::size_t j = 0; j < s; ++j) terms[j] = reinterpret_cast<const double*>(k_[j].data());

  while (t < t_end) {
    if (stats_.accepted + stats_.rejected >= control_.max_steps) {
      throw IntegrationError(fmt::format("step budget of {} exhausted at t = {}", control_.max_steps, t));
    }
    double h = step_;
    if (control_.max_step > 0.0) h = std::min(h, control_.max_step);
    bool lands = false;
    // Stretch by up to 1% rather than leave a sliver before the grid point.
    if (t + 1.01 * h >= t_end) {
      h = t_end - t;
      lands = true;
    }

    for (std::size_t i = 0; i < s; ++i) {
      if (i == 0) {
        rhs(t, y, k_[0]);
      } else {
        for (std::size_t j = 0; j < i; ++j) coeff[j] = h * tableau_.a[i][j];
        kern.lincomb(as_doubles(stage_), as_doubles(y), coeff.data(), terms.data(), i, nd);
        rhs(t + tableau_.c[i] * h, stage_, k_[i]);
      }
    }
    stats_.rhs_evaluations += static_cast<long>(s);

    for (std::size_t j = 0; j < s; ++j) coeff[j] = h * tableau_.b[j];
    kern.lincomb(as_doubles(next_), as_doubles(y), coeff.data(), terms.data(), s, nd);
    for (std::size_t j = 0; j < s; ++j) coeff[j] = h * tableau_.e[j];
    kern.lincomb(as_doubles(err_), nullptr, coeff.data(), terms.data(), s, nd);
    const double err = std::sqrt(kern.scaled_sum_sq(as_doubles(err_), as_doubles(y), as_doubles(next_), nd,
                                                    control_.abs_tol, control_.rel_tol) /
                                 static_cast<double>(nd));
    if (!std::isfinite(err)) {
      throw IntegrationError(fmt::format("non-finite error estimate at t = {}", t));
    }

    double factor = err > 0.0 ? safety * std::pow(err, -exponent) : 5.0;
    factor = std::clamp(factor, 0.2, 5.0);
    if (err <= 1.0) {
      t = lands ? t_end : t + h;
      y.swap(next_);
      ++stats_.accepted;
      stats_.smallest_step = stats_.accepted == 1 ? h : std::min(stats_.smallest_step, h);
      stats_.largest_step = std::max(stats_.largest_step, h);
      // A truncated landing step says nothing about the natural step size.
      if (!lands || h >= step_) step_ = h * factor;
    } else {
      ++stats_.rejected;
      step_ = h * std::max(factor, 0.2);
      if (step_ < control_.min_step || step_ < 1e-14 * std::max(1.0, std::abs(t))) {
        throw IntegrationError(fmt::format("step size underflow ({:.3e}) at t = {}; problem may be stiff", step_, t));
      }
    }
  }
}

}  // namespace dce3
