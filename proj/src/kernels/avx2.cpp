// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "dce3/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace dce3::kernels {
namespace {

// Two complex numbers per register: [re0, im0, re1, im1].
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_swap = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_swap));
}

void cmul_acc_avx2(std::complex<double>* y, const std::complex<double>* c,
                   const std::complex<double>* x, std::size_t n, std::complex<double> s) {
  auto* yd = reinterpret_cast<double*>(y);
  const auto* cd = reinterpret_cast<const double*>(c);
  const auto* xd = reinterpret_cast<const double*>(x);
  const __m256d sv = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d cv = _mm256_loadu_pd(cd + 2 * k);
    const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
    const __m256d prod = cmul(sv, cmul(cv, xv));
    _mm256_storeu_pd(yd + 2 * k, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * k), prod));
  }
  for (; k < n; ++k) y[k] += s * (c[k] * x[k]);
}

void lincomb_avx2(double* out, const double* base, const double* coeff,
                  const double* const* terms, std::size_t nterms, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = base ? _mm256_loadu_pd(base + i) : _mm256_setzero_pd();
    for (std::size_t j = 0; j < nterms; ++j) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(coeff[j]), _mm256_loadu_pd(terms[j] + i), acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = base ? base[i] : 0.0;
    for (std::size_t j = 0; j < nterms; ++j) acc = std::fma(coeff[j], terms[j][i], acc);
    out[i] = acc;
  }
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double scaled_sum_sq_avx2(const double* err, const double* y0, const double* y1,
                          std::size_t n, double atol, double rtol) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d av = _mm256_set1_pd(atol);
  const __m256d rv = _mm256_set1_pd(rtol);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a0 = _mm256_andnot_pd(sign, _mm256_loadu_pd(y0 + i));
    const __m256d a1 = _mm256_andnot_pd(sign, _mm256_loadu_pd(y1 + i));
    const __m256d scale = _mm256_fmadd_pd(rv, _mm256_max_pd(a0, a1), av);
    const __m256d r = _mm256_div_pd(_mm256_loadu_pd(err + i), scale);
    acc = _mm256_fmadd_pd(r, r, acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / scale;
    sum += r * r;
  }
  return sum;
}

double sum_sq_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) sum += x[i] * x[i];
  return sum;
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{"avx2", cmul_acc_avx2, lincomb_avx2, scaled_sum_sq_avx2,
                                 sum_sq_avx2};
  return &table;
}

}  // namespace dce3::kernels
