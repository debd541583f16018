#include "nco/kernels.hpp"

// Reference lane: sequential double-precision loops, no reassociation. Other
// lanes are tested for agreement against this one.

namespace nco::kernels {
namespace {

void axpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(std::size_t n, cplx a, cplx* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

cplx dotu_scalar(std::size_t n, const cplx* x, const cplx* y) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

cplx dotc_scalar(std::size_t n, const cplx* x, const cplx* y) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double sumabs2_scalar(std::size_t n, const cplx* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
  return s;
}

}  // namespace

const Table& scalar_table() {
  static const Table t{axpy_scalar, scal_scalar, dotu_scalar, dotc_scalar,
                       sumabs2_scalar, "scalar"};
  return t;
}

}  // namespace nco::kernels
