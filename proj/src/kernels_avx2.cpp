#include <immintrin.h>

#include "nco/kernels.hpp"

// AVX2+FMA lane. Complex doubles are processed two at a time as [re,im,re,im]
// packs; the tail element (odd n) falls back to the scalar expression. Callers
// reach this table only after a cpuid check in the dispatcher.

namespace nco::kernels {
namespace {

inline __m256d cmul_acc(__m256d ar, __m256d ai, __m256d xv) {
  // (ar + i*ai) * (xr + i*xi) for two packed complex values.
  const __m256d xsw = _mm256_permute_pd(xv, 0x5);
  const __m256d t = _mm256_mul_pd(ai, xsw);
  return _mm256_fmaddsub_pd(ar, xv, t);
}

void axpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const std::size_t n2 = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= n2; i += 4) {
    const __m256d xv = _mm256_loadu_pd(xd + i);
    const __m256d yv = _mm256_loadu_pd(yd + i);
    _mm256_storeu_pd(yd + i, _mm256_add_pd(yv, cmul_acc(ar, ai, xv)));
  }
  if (i < n2) y[i / 2] += a * x[i / 2];
}

void scal_avx2(std::size_t n, cplx a, cplx* x) {
  double* xd = reinterpret_cast<double*>(x);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const std::size_t n2 = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= n2; i += 4) {
    const __m256d xv = _mm256_loadu_pd(xd + i);
    _mm256_storeu_pd(xd + i, cmul_acc(ar, ai, xv));
  }
  if (i < n2) x[i / 2] *= a;
}

struct PairSums {
  double even_a, odd_a, even_b, odd_b;
};

// accA collects xr*yr (even) / xi*yi (odd); accB collects xi*yr / xr*yi.
PairSums dot_core(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc_a = _mm256_setzero_pd();
  __m256d acc_b = _mm256_setzero_pd();
  const std::size_t n2 = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= n2; i += 4) {
    const __m256d xv = _mm256_loadu_pd(xd + i);
    const __m256d yv = _mm256_loadu_pd(yd + i);
    const __m256d xsw = _mm256_permute_pd(xv, 0x5);
    acc_a = _mm256_fmadd_pd(xv, yv, acc_a);
    acc_b = _mm256_fmadd_pd(xsw, yv, acc_b);
  }
  alignas(32) double ta[4], tb[4];
  _mm256_store_pd(ta, acc_a);
  _mm256_store_pd(tb, acc_b);
  PairSums s{ta[0] + ta[2], ta[1] + ta[3], tb[0] + tb[2], tb[1] + tb[3]};
  if (i < n2) {
    const cplx xv = x[i / 2], yv = y[i / 2];
    s.even_a += xv.real() * yv.real();
    s.odd_a += xv.imag() * yv.imag();
    s.even_b += xv.imag() * yv.real();
    s.odd_b += xv.real() * yv.imag();
  }
  return s;
}

cplx dotu_avx2(std::size_t n, const cplx* x, const cplx* y) {
  const PairSums s = dot_core(n, x, y);
  return {s.even_a - s.odd_a, s.even_b + s.odd_b};
}

cplx dotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
  const PairSums s = dot_core(n, x, y);
  return {s.even_a + s.odd_a, s.odd_b - s.even_b};
}

double sumabs2_avx2(std::size_t n, const cplx* x) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n2 = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= n2; i += 4) {
    const __m256d xv = _mm256_loadu_pd(xd + i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  alignas(32) double t[4];
  _mm256_store_pd(t, acc);
  double s = t[0] + t[1] + t[2] + t[3];
  if (i < n2) s += std::norm(x[i / 2]);
  return s;
}

}  // namespace

const Table& avx2_table() {
  static const Table t{axpy_avx2, scal_avx2, dotu_avx2, dotc_avx2,
                       sumabs2_avx2, "avx2"};
  return t;
}

}  // namespace nco::kernels
