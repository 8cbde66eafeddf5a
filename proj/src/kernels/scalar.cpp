#include "dce3/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace dce3::kernels {
namespace {

void cmul_acc_scalar(std::complex<double>* y, const std::complex<double>* c,
                     const std::complex<double>* x, std::size_t n, std::complex<double> s) {
  for (std::size_t k = 0; k < n; ++k) y[k] += s * (c[k] * x[k]);
}

void lincomb_scalar(double* out, const double* base, const double* coeff,
                    const double* const* terms, std::size_t nterms, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = base ? base[i] : 0.0;
    for (std::size_t j = 0; j < nterms; ++j) acc += coeff[j] * terms[j][i];
    out[i] = acc;
  }
}

double scaled_sum_sq_scalar(const double* err, const double* y0, const double* y1,
                            std::size_t n, double atol, double rtol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / scale;
    sum += r * r;
  }
  return sum;
}

double sum_sq_scalar(const double* x, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += x[i] * x[i];
  return sum;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", cmul_acc_scalar, lincomb_scalar, scaled_sum_sq_scalar,
                                 sum_sq_scalar};
  return table;
}

}  // namespace dce3::kernels
