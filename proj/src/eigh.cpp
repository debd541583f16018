#include <algorithm>
#include <cmath>
#include <numeric>

#include "nco/errors.hpp"
#include "nco/matrix.hpp"

namespace nco {
namespace {

// One similarity J^* A J zeroing A(p,q). J differs from I only at
// J_pp = c, J_pq = s*u, J_qp = -s*conj(u), J_qq = c with u = A(p,q)/|A(p,q)|.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const cplx apq = a(p, q);
  const double mag = std::abs(apq);
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  if (mag == 0.0 || mag <= 1e-20 * (std::abs(app) + std::abs(aqq))) {
    a(p, q) = a(q, p) = 0.0;
    return;
  }
  const cplx u = apq / mag;
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const std::size_t n = a.rows();
  const cplx su = s * u;
  const cplx sub = s * std::conj(u);

  for (std::size_t k = 0; k < n; ++k) {  // rows p, q
    const cplx rp = a(p, k), rq = a(q, k);
    a(p, k) = c * rp - su * rq;
    a(q, k) = sub * rp + c * rq;
  }
  for (std::size_t k = 0; k < n; ++k) {  // columns p, q
    const cplx cp = a(k, p), cq = a(k, q);
    a(k, p) = c * cp - sub * cq;
    a(k, q) = su * cp + c * cq;
  }
  a(p, p) = cplx{app - t * mag, 0.0};
  a(q, q) = cplx{aqq + t * mag, 0.0};
  a(p, q) = a(q, p) = 0.0;

  for (std::size_t k = 0; k < n; ++k) {  // accumulate V <- V J
    const cplx vp = v(k, p), vq = v(k, q);
    v(k, p) = c * vp - sub * vq;
    v(k, q) = su * vp + c * vq;
  }
}

double off_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

Eigh eigh(const Matrix& input) {
  if (input.rows() != input.cols()) throw structural_error("eigh needs a square matrix");
  const std::size_t n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::identity(n);
  const double scale = std::max(a.frob_norm(), 1e-300);

  if (n > 1) {
    bool converged = false;
    for (int sweep = 0; sweep < 80; ++sweep) {
      if (off_norm(a) <= 1e-14 * scale) {
        converged = true;
        break;
      }
      for (std::size_t p = 0; p + 1 < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
    if (!converged && off_norm(a) > 1e-12 * scale)
      throw numerical_error("jacobi eigensolver did not converge");
  }

  Eigh r;
  r.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.values[i] = a(i, i).real();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return r.values[x] < r.values[y]; });

  Eigh out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = r.values[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

}  // namespace nco
