#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nco {

using cplx = std::complex<double>;

// Dense complex matrix, row-major. Arithmetic runs on the active kernel lane.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return a_.empty(); }

  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(cplx s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);  // gemm

  Matrix adjoint() const;
  cplx trace_sum() const;  // unweighted matrix trace
  double frob_norm() const;
  double max_abs() const;
  double herm_defect() const;  // max |a_ij - conj(a_ji)|
  bool is_hermitian(double tol) const { return herm_defect() <= tol; }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> a_;
};

// y = A x on the active lane.
std::vector<cplx> matvec(const Matrix& a, const std::vector<cplx>& x);

struct Eigh {
  std::vector<double> values;  // ascending
  Matrix vectors;              // unitary, A = V diag(values) V^*
};

// Cyclic complex Jacobi for Hermitian input; the caller checks Hermiticity.
Eigh eigh(const Matrix& a);

}  // namespace nco
