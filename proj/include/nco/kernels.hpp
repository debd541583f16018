#pragma once

#include <complex>
#include <cstddef>

namespace nco::kernels {

using cplx = std::complex<double>;

// One ISA lane. Every dense matrix/vector operation in the library reduces to
// these five 1-D cores, so lane equivalence tests cover the arithmetic surface.
struct Table {
  void (*axpy)(std::size_t n, cplx a, const cplx* x, cplx* y);  // y += a*x
  void (*scal)(std::size_t n, cplx a, cplx* x);                 // x *= a
  cplx (*dotu)(std::size_t n, const cplx* x, const cplx* y);    // sum x_i y_i
  cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);    // sum conj(x_i) y_i
  double (*sumabs2)(std::size_t n, const cplx* x);              // sum |x_i|^2
  const char* name;
};

enum class Lane { scalar, avx2 };

bool lane_available(Lane lane) noexcept;
const Table& lane_table(Lane lane);  // throws structural_error if unavailable

// cpuid-selected lane; NCO_KERNEL_LANE=scalar|avx2 overrides when available.
Lane preferred_lane() noexcept;
const Table& active() noexcept;

// Composite kernels over a lane's cores. All matrices are dense row-major.
void matvec(const Table& t, std::size_t m, std::size_t n,
            const cplx* a, const cplx* x, cplx* y);  // y = A x
void gemm_acc(const Table& t, std::size_t m, std::size_t k, std::size_t n,
              const cplx* a, const cplx* b, cplx* c);  // C += A B

void matvec(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y);
void gemm_acc(std::size_t m, std::size_t k, std::size_t n,
              const cplx* a, const cplx* b, cplx* c);

}  // namespace nco::kernels
