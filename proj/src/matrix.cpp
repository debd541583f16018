#include "nco/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "nco/errors.hpp"
#include "nco/kernels.hpp"

namespace nco {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw structural_error("matrix shape mismatch in +=");
  kernels::active().axpy(a_.size(), cplx{1.0, 0.0}, o.a_.data(), a_.data());
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw structural_error("matrix shape mismatch in -=");
  kernels::active().axpy(a_.size(), cplx{-1.0, 0.0}, o.a_.data(), a_.data());
  return *this;
}

Matrix& Matrix::operator*=(cplx s) {
  kernels::active().scal(a_.size(), s, a_.data());
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw structural_error("matrix shape mismatch in *");
  Matrix c(a.rows(), b.cols());
  kernels::gemm_acc(a.rows(), a.cols(), b.cols(), a.data(), b.data(), c.data());
  return c;
}

Matrix Matrix::adjoint() const {
  Matrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cplx Matrix::trace_sum() const {
  if (rows_ != cols_) throw structural_error("trace of non-square matrix");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
  return s;
}

double Matrix::frob_norm() const {
  return std::sqrt(kernels::active().sumabs2(a_.size(), a_.data()));
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const cplx& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::herm_defect() const {
  if (rows_ != cols_) throw structural_error("hermiticity of non-square matrix");
  double d = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d;
}

std::vector<cplx> matvec(const Matrix& a, const std::vector<cplx>& x) {
  if (a.cols() != x.size()) throw structural_error("matvec shape mismatch");
  std::vector<cplx> y(a.rows());
  kernels::matvec(a.rows(), a.cols(), a.data(), x.data(), y.data());
  return y;
}

}  // namespace nco
