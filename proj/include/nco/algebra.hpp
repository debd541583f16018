#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "nco/matrix.hpp"

namespace nco {

// Finite direct sum of complex matrix blocks with strictly positive trace
// weights: tau(x) = sum_j w_j * Tr(x_j).
class TracedAlgebra {
public:
  static std::shared_ptr<const TracedAlgebra> make(std::vector<std::size_t> dims,
                                                   std::vector<double> weights);

  const std::vector<std::size_t>& block_dims() const { return dims_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t n_blocks() const { return dims_.size(); }
  std::size_t total_dim() const { return total_dim_; }
  std::size_t superop_dim() const { return superop_dim_; }  // sum d_j^2
  std::size_t vec_offset(std::size_t block) const { return vec_offsets_[block]; }
  double trace_identity() const { return trace_identity_; }
  bool all_blocks_scalar() const;

private:
  TracedAlgebra() = default;
  std::vector<std::size_t> dims_;
  std::vector<double> weights_;
  std::vector<std::size_t> vec_offsets_;
  std::size_t total_dim_ = 0;
  std::size_t superop_dim_ = 0;
  double trace_identity_ = 0.0;
};

using AlgebraPtr = std::shared_ptr<const TracedAlgebra>;

class AlgElement {
public:
  AlgElement(AlgebraPtr alg, std::vector<Matrix> blocks);

  static AlgElement zero(const AlgebraPtr& alg);
  static AlgElement identity(const AlgebraPtr& alg);
  // entries listed block by block along the diagonal, total_dim() of them
  static AlgElement diagonal(const AlgebraPtr& alg, const std::vector<double>& entries);

  const AlgebraPtr& algebra() const { return alg_; }
  std::size_t n_blocks() const { return blocks_.size(); }
  const Matrix& block(std::size_t j) const { return blocks_[j]; }
  Matrix& block(std::size_t j) { return blocks_[j]; }

  AlgElement& operator+=(const AlgElement& o);
  AlgElement& operator-=(const AlgElement& o);
  AlgElement& operator*=(cplx s);
  friend AlgElement operator+(AlgElement a, const AlgElement& b) { return a += b; }
  friend AlgElement operator-(AlgElement a, const AlgElement& b) { return a -= b; }
  friend AlgElement operator*(AlgElement a, cplx s) { return a *= s; }
  friend AlgElement operator*(cplx s, AlgElement a) { return a *= s; }
  friend AlgElement operator*(const AlgElement& a, const AlgElement& b);  // blockwise

  AlgElement adjoint() const;
  double herm_defect() const;
  bool is_self_adjoint(double rel_tol = 1e-9) const;
  double max_abs() const;

  // Row-major block concatenation used by superoperators.
  std::vector<cplx> to_vec() const;
  static AlgElement from_vec(const AlgebraPtr& alg, const std::vector<cplx>& v);

private:
  AlgebraPtr alg_;
  std::vector<Matrix> blocks_;
};

void check_same_algebra(const AlgElement& a, const AlgElement& b);

cplx trace(const AlgElement& x);
double trace_real(const AlgElement& x);  // imaginary part must be noise-level

AlgElement abs(const AlgElement& x);           // (x* x)^(1/2)
double uniform_norm(const AlgElement& x);      // largest singular value
double lp_norm(const AlgElement& x, double p); // tau(|x|^p)^(1/p), p >= 1

// Spectral calculus for positive x: eigenvalues mapped through phi.
AlgElement apply_function(const std::function<double(double)>& phi, const AlgElement& x);

struct SpectralDecomposition {
  AlgebraPtr algebra;
  std::vector<double> eigenvalues;        // ascending, clustered
  std::vector<AlgElement> projections;    // pairwise orthogonal, sum to 1
  std::vector<double> tau_multiplicities;
  AlgElement reconstruct() const;
};

SpectralDecomposition spectral_decompose(const AlgElement& x, double cluster_rtol = 1e-9);

class Projection {
public:
  explicit Projection(AlgElement e, double tol = 1e-8);
  static Projection identity(const AlgebraPtr& alg);
  static Projection zero(const AlgebraPtr& alg);
  const AlgElement& element() const { return e_; }
  const AlgebraPtr& algebra() const { return e_.algebra(); }
  Projection complement() const;
  double trace() const;

private:
  AlgElement e_;
};

// Self-adjoint x; closed interval [lo, hi] on the (block) eigenvalues.
Projection spectral_projection(const AlgElement& x, double lo, double hi);
// Open lower end: eigenvalues strictly above nu.
Projection spectral_projection_above(const AlgElement& x, double nu);

// Lattice meet: projection onto the kernel of the summed complements.
Projection projection_meet(const std::vector<Projection>& ps);

double min_eigenvalue(const AlgElement& x);  // self-adjoint x

enum class ElementKind { general, hermitian, positive, projection };

AlgElement random_element(const AlgebraPtr& alg, ElementKind kind, std::uint64_t seed);
AlgElement random_unitary(const AlgebraPtr& alg, std::uint64_t seed);

}  // namespace nco
