#pragma once

// Data-parallel inner loops of the propagators. Every kernel has a scalar
// reference implementation; an AVX2/FMA variant is compiled on x86-64 and
// chosen at startup when the CPU reports support. Set DCE3_KERNELS=scalar
// (or avx2) in the environment to force a table.
//
// Complex arrays are passed as interleaved (re, im) doubles, which is the
// layout of std::complex<double>.

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace dce3::kernels {

struct KernelTable {
  const char* name;

  // y[k] += s * c[k] * x[k] for k < n, complex.
  void (*cmul_acc)(std::complex<double>* y, const std::complex<double>* c,
                   const std::complex<double>* x, std::size_t n, std::complex<double> s);

  // out[i] = base[i] + sum_j coeff[j] * terms[j][i] for i < n (doubles).
  // base may be null, in which case it is treated as zero. Terms with a zero
  // coefficient are still read.
  void (*lincomb)(double* out, const double* base, const double* coeff,
                  const double* const* terms, std::size_t nterms, std::size_t n);

  // sum_i (err[i] / (atol + rtol * max(|y0[i]|, |y1[i]|)))^2
  double (*scaled_sum_sq)(const double* err, const double* y0, const double* y1,
                          std::size_t n, double atol, double rtol);

  // sum_i x[i]^2
  double (*sum_sq)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the binary was built without the AVX2 variant.
const KernelTable* avx2_table();
bool cpu_supports_avx2();

// Tables usable on this machine, scalar first.
std::vector<const KernelTable*> available_tables();

// Table used by the propagators. Selected once, on first use.
const KernelTable& active();

// Force a table by name ("scalar" or "avx2"); throws ConfigError when the
// table is unavailable on this machine. Not thread-safe against concurrent runs.
void select(std::string_view name);

}  // namespace dce3::kernels
