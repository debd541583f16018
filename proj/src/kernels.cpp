#include "nco/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "nco/errors.hpp"

namespace nco::kernels {

const Table& scalar_table();
#if NCO_HAVE_AVX2_LANE
const Table& avx2_table();
#endif

bool lane_available(Lane lane) noexcept {
  switch (lane) {
    case Lane::scalar:
      return true;
    case Lane::avx2:
#if NCO_HAVE_AVX2_LANE
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const Table& lane_table(Lane lane) {
  if (!lane_available(lane)) throw structural_error("kernel lane unavailable on this host");
  switch (lane) {
    case Lane::scalar:
      return scalar_table();
    case Lane::avx2:
#if NCO_HAVE_AVX2_LANE
      return avx2_table();
#else
      break;
#endif
  }
  throw structural_error("kernel lane unavailable on this host");
}

Lane preferred_lane() noexcept {
  if (const char* env = std::getenv("NCO_KERNEL_LANE")) {
    if (std::strcmp(env, "scalar") == 0) return Lane::scalar;
    if (std::strcmp(env, "avx2") == 0 && lane_available(Lane::avx2)) return Lane::avx2;
  }
  return lane_available(Lane::avx2) ? Lane::avx2 : Lane::scalar;
}

const Table& active() noexcept {
  static const Table& t = lane_table(preferred_lane());
  return t;
}

void matvec(const Table& t, std::size_t m, std::size_t n,
            const cplx* a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < m; ++i) y[i] = t.dotu(n, a + i * n, x);
}

void gemm_acc(const Table& t, std::size_t m, std::size_t k, std::size_t n,
              const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < k; ++l)
      t.axpy(n, a[i * k + l], b + l * n, c + i * n);
}

void matvec(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y) {
  matvec(active(), m, n, a, x, y);
}

void gemm_acc(std::size_t m, std::size_t k, std::size_t n,
              const cplx* a, const cplx* b, cplx* c) {
  gemm_acc(active(), m, k, n, a, b, c);
}

}  // namespace nco::kernels
