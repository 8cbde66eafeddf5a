#pragma once

// Adaptive embedded Runge-Kutta propagation of complex state vectors.

#include "dce3/fock.hpp"

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dce3 {

struct ButcherTableau {
  std::string name;
  int order = 0;            // order of the propagated solution
  int error_order = 0;      // order of the embedded estimate
  std::vector<double> c;
  std::vector<std::vector<double>> a;  // strictly lower triangular rows
  std::vector<double> b;
  std::vector<double> e;    // b - b_hat, so the error estimate is h * sum e_j k_j

  std::size_t stages() const { return b.size(); }
};

// Fehlberg 7(8): 13 stages, the 8th-order solution is propagated.
const ButcherTableau& fehlberg78();
// Dormand-Prince 5(4).
const ButcherTableau& dormand_prince54();
const ButcherTableau& tableau_by_name(std::string_view name);

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.0;      // 0: unbounded
  double initial_step = 0.0;  // 0: estimated from the first derivative
  double min_step = 1e-12;
  long max_steps = 50'000'000;
};

struct StepStatistics {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
  double smallest_step = 0.0;
  double largest_step = 0.0;
};

// dy/dt = f(t, y), complex vector state.
using ComplexRhs = std::function<void(double t, std::span<const cplx> y, std::span<cplx> dydt)>;

class EmbeddedRungeKutta {
 public:
  EmbeddedRungeKutta(const ButcherTableau& tableau, StepControl control);

  // Advances y from t to t_end (t_end > t). The step-size estimate in `step`
  // carries over between calls; landing exactly on t_end does not shrink it.
  void advance(const ComplexRhs& rhs, double& t, double t_end, std::vector<cplx>& y);

  const StepStatistics& statistics() const { return stats_; }
  const ButcherTableau& tableau() const { return tableau_; }
  const StepControl& control() const { return control_; }

 private:
  double initial_step(const ComplexRhs& rhs, double t, const std::vector<cplx>& y, double span);

  const ButcherTableau& tableau_;
  StepControl control_;
  StepStatistics stats_;
  double step_ = 0.0;
  std::vector<std::vector<cplx>> k_;
  std::vector<cplx> stage_;
  std::vector<cplx> next_;
  std::vector<cplx> err_;
};

}  // namespace dce3
