#pragma once

// Independent oracles for the test suite. Everything here recomputes results
// from definitions using its own arithmetic (plain loops, a real symmetric
// Jacobi sweep on the 2d x 2d embedding of Hermitian matrices) so that a bug
// in the library's kernels or eigensolver cannot cancel out of a comparison.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nco/algebra.hpp"
#include "nco/symfunc.hpp"

namespace oracle {

using nco::cplx;

// Plain triple-loop product, no shared code with the library kernels.
inline nco::Matrix mul(const nco::Matrix& a, const nco::Matrix& b) {
  nco::Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline nco::Matrix adjoint(const nco::Matrix& a) {
  nco::Matrix r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

// Cyclic Jacobi for a real symmetric matrix; returns eigenvalues ascending and
// the orthogonal eigenvector matrix (columns).
struct RealEig {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // vectors[k] is the k-th column
};

inline RealEig jacobi_sym(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
  }
  RealEig out;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t i, std::size_t j) { return a[i][i] < a[j][j]; });
  for (std::size_t i : idx) {
    out.values.push_back(a[i][i]);
    std::vector<double> col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = v[k][i];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

// Hermitian H -> real symmetric [[Re H, -Im H], [Im H, Re H]]; its spectrum is
// that of H with every eigenvalue doubled, and (u; v) maps back to z = u + iv.
struct HermEig {
  std::vector<double> values;           // ascending, one entry per dimension
  std::vector<std::vector<cplx>> vecs;  // orthonormal eigenvectors
};

inline HermEig herm_eig(const nco::Matrix& h) {
  const std::size_t d = h.rows();
  std::vector<std::vector<double>> m(2 * d, std::vector<double>(2 * d, 0.0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const cplx z = 0.5 * (h(i, j) + std::conj(h(j, i)));  // symmetrize noise away
      m[i][j] = z.real();
      m[i][j + d] = -z.imag();
      m[i + d][j] = z.imag();
      m[i + d][j + d] = z.real();
    }
  const RealEig re = jacobi_sym(std::move(m));
  HermEig out;
  // Candidates come in pairs (z and iz); complex Gram-Schmidt keeps d of them.
  for (std::size_t k = 0; k < 2 * d; ++k) {
    std::vector<cplx> z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = cplx(re.vectors[k][i], re.vectors[k][i + d]);
    for (const std::vector<cplx>& w : out.vecs) {
      cplx ip(0.0);
      for (std::size_t i = 0; i < d; ++i) ip += std::conj(w[i]) * z[i];
      for (std::size_t i = 0; i < d; ++i) z[i] -= ip * w[i];
    }
    double nrm2 = 0.0;
    for (const cplx& zi : z) nrm2 += std::norm(zi);
    if (nrm2 < 0.25) continue;  // dependent partner of an already-kept vector
    const double inv = 1.0 / std::sqrt(nrm2);
    for (cplx& zi : z) zi *= inv;
    out.values.push_back(re.values[k]);
    out.vecs.push_back(std::move(z));
    if (out.vecs.size() == d) break;
  }
  if (out.vecs.size() != d) throw std::runtime_error("oracle eigenvector extraction failed");
  return out;
}

// Singular values of an arbitrary complex matrix, descending.
inline std::vector<double> singular_values(const nco::Matrix& b) {
  const HermEig e = herm_eig(mul(adjoint(b), b));
  std::vector<double> s;
  for (double v : e.values) s.push_back(std::sqrt(std::max(v, 0.0)));
  std::sort(s.begin(), s.end(), std::greater<double>());
  return s;
}

struct WeightedValue {
  double value;
  double weight;
};

// All singular values of x with their block trace weights, descending.
inline std::vector<WeightedValue> weighted_singular_values(const nco::AlgElement& x) {
  std::vector<WeightedValue> all;
  for (std::size_t j = 0; j < x.n_blocks(); ++j)
    for (double s : singular_values(x.block(j)))
      all.push_back({s, x.algebra()->weights()[j]});
  std::sort(all.begin(), all.end(),
            [](const WeightedValue& a, const WeightedValue& b) { return a.value > b.value; });
  return all;
}

// mu_t(x) by the definition: the least candidate level lambda whose strict
// upper level set has trace weight at most t. Candidate levels are the
// singular values themselves, which is where the infimum is attained.
inline double mu_by_definition(const nco::AlgElement& x, double t) {
  const std::vector<WeightedValue> all = weighted_singular_values(x);
  double best = 0.0;  // lambda beyond every singular value always qualifies
  bool found = false;
  for (const WeightedValue& cand : all) {
    double tail = 0.0;
    for (const WeightedValue& s : all)
      if (s.value > cand.value) tail += s.weight;
    if (tail <= t && (!found || cand.value < best)) {
      best = cand.value;
      found = true;
    }
  }
  double total = 0.0;
  for (const WeightedValue& s : all)
    if (s.value > 0.0) total += s.weight;
  return (t >= total) ? 0.0 : best;
}

// Right-continuous evaluation of the rearrangement assembled independently.
inline double mu_from_rearrangement(const nco::AlgElement& x, double t) {
  double start = 0.0;
  for (const WeightedValue& s : weighted_singular_values(x)) {
    if (t < start + s.weight) return s.value;
    start += s.weight;
  }
  return 0.0;
}

// Piecewise data -> integral of the step function up to s, plain accumulation.
inline double sf_integral_raw(const nco::StepFunction& f, double s) {
  double acc = 0.0, start = 0.0;
  for (const nco::StepPiece& p : f.pieces()) {
    if (start >= s) break;
    const double end = std::isinf(p.length) ? s : std::min(s, start + p.length);
    if (end > start) acc += p.value * (end - start);
    start += p.length;
  }
  return acc;
}

// Dense-grid majorization: compare running integrals at n_pts points spanning
// both supports (plus a far tail point for the total masses).
inline bool majorizes_grid(const nco::StepFunction& xf, const nco::StepFunction& yf,
                           std::size_t n_pts, double tol) {
  double span = 1.0;
  for (const nco::StepPiece& p : xf.pieces())
    if (!std::isinf(p.length)) span += p.length;
  for (const nco::StepPiece& p : yf.pieces())
    if (!std::isinf(p.length)) span += p.length;
  for (std::size_t i = 1; i <= n_pts; ++i) {
    const double s = span * static_cast<double>(i) / static_cast<double>(n_pts);
    if (sf_integral_raw(yf, s) > sf_integral_raw(xf, s) + tol) return false;
  }
  return true;
}

// One spectral cluster of |x| restricted to a block.
struct AbsCluster {
  std::size_t block;
  double level;            // singular value
  std::size_t mult;
  nco::Matrix projector;   // d_j x d_j eigenprojection
};

// Distinct-level eigenprojections of |x|, block by block, via the independent
// eigensolver. Levels within rel_tol of each other merge into one cluster.
inline std::vector<AbsCluster> abs_clusters(const nco::AlgElement& x, double rel_tol = 1e-8) {
  std::vector<AbsCluster> out;
  double scale = 0.0;
  for (std::size_t j = 0; j < x.n_blocks(); ++j) scale = std::max(scale, x.block(j).max_abs());
  const double tol = rel_tol * (scale + 1e-300);
  for (std::size_t j = 0; j < x.n_blocks(); ++j) {
    const std::size_t d = x.block(j).rows();
    const HermEig e = herm_eig(mul(adjoint(x.block(j)), x.block(j)));
    std::size_t k = 0;
    while (k < d) {
      const double s0 = std::sqrt(std::max(e.values[k], 0.0));
      AbsCluster c{j, s0, 0, nco::Matrix(d, d)};
      while (k < d && std::sqrt(std::max(e.values[k], 0.0)) <= s0 + tol) {
        for (std::size_t r = 0; r < d; ++r)
          for (std::size_t q = 0; q < d; ++q)
            c.projector(r, q) += e.vecs[k][r] * std::conj(e.vecs[k][q]);
        ++c.mult;
        ++k;
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

// Exhaustive search over spectral projections of |x|: does some subset of the
// eigenclusters give tau(e_perp) <= eps and ||x e||_inf <= delta? Tolerances
// mirror the production membership check.
inline bool nbhd_member_by_enumeration(const nco::AlgElement& x, double eps, double delta) {
  const std::vector<AbsCluster> cs = abs_clusters(x);
  if (cs.size() > 20) throw std::runtime_error("enumeration oracle: too many clusters");
  const std::vector<double>& w = x.algebra()->weights();
  const std::vector<std::size_t>& dims = x.algebra()->block_dims();
  for (std::size_t mask = 0; mask < (std::size_t(1) << cs.size()); ++mask) {
    std::vector<nco::Matrix> e;
    for (std::size_t j = 0; j < dims.size(); ++j) e.emplace_back(dims[j], dims[j]);
    double kept_trace = 0.0;
    for (std::size_t c = 0; c < cs.size(); ++c)
      if (mask & (std::size_t(1) << c)) {
        e[cs[c].block] += cs[c].projector;
        kept_trace += w[cs[c].block] * static_cast<double>(cs[c].mult);
      }
    const double trace_perp = x.algebra()->trace_identity() - kept_trace;
    if (trace_perp > eps + 1e-9) continue;
    double sup = 0.0;
    for (std::size_t j = 0; j < dims.size(); ++j) {
      const std::vector<double> sv = singular_values(mul(x.block(j), e[j]));
      if (!sv.empty()) sup = std::max(sup, sv.front());
    }
    if (sup <= delta + 1e-9 * std::max(1.0, delta)) return true;
  }
  return false;
}

}  // namespace oracle
