#include "nco/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "nco/errors.hpp"
#include "nco/rng.hpp"

namespace nco {
namespace {

// Eigendecompositions of every block of a self-adjoint element, after
// symmetrizing away roundoff-level asymmetry.
std::vector<Eigh> block_eigh(const AlgElement& x, const char* who) {
  if (!x.is_self_adjoint()) throw domain_error(std::string(who) + ": element is not self-adjoint");
  std::vector<Eigh> out;
  out.reserve(x.n_blocks());
  for (std::size_t j = 0; j < x.n_blocks(); ++j) {
    Matrix b = x.block(j);
    Matrix h = b;
    h += b.adjoint();
    h *= cplx{0.5, 0.0};
    out.push_back(eigh(h));
  }
  return out;
}

// P += sum over selected columns of v v^*.
void add_outer(Matrix& p, const Matrix& v, const std::vector<std::size_t>& cols) {
  const std::size_t d = v.rows();
  for (std::size_t k : cols)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        p(a, b) += v(a, k) * std::conj(v(b, k));
}

std::vector<double> block_singular_values(const Matrix& b) {
  const Eigh e = eigh(b.adjoint() * b);
  std::vector<double> s(e.values.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::sqrt(std::max(e.values[k], 0.0));
  return s;
}

}  // namespace

std::shared_ptr<const TracedAlgebra> TracedAlgebra::make(std::vector<std::size_t> dims,
                                                         std::vector<double> weights) {
  if (dims.empty()) throw structural_error("algebra needs at least one block");
  if (dims.size() != weights.size())
    throw structural_error("algebra block/weight count mismatch");
  auto alg = std::shared_ptr<TracedAlgebra>(new TracedAlgebra());
  alg->dims_ = std::move(dims);
  alg->weights_ = std::move(weights);
  for (std::size_t j = 0; j < alg->dims_.size(); ++j) {
    if (alg->dims_[j] == 0) throw structural_error("algebra block dimension must be positive");
    const double w = alg->weights_[j];
    if (!(w > 0.0) || !std::isfinite(w))
      throw domain_error("algebra trace weights must be strictly positive and finite");
    alg->vec_offsets_.push_back(alg->superop_dim_);
    alg->total_dim_ += alg->dims_[j];
    alg->superop_dim_ += alg->dims_[j] * alg->dims_[j];
    alg->trace_identity_ += w * static_cast<double>(alg->dims_[j]);
  }
  return alg;
}

bool TracedAlgebra::all_blocks_scalar() const {
  return std::all_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d == 1; });
}

AlgElement::AlgElement(AlgebraPtr alg, std::vector<Matrix> blocks)
    : alg_(std::move(alg)), blocks_(std::move(blocks)) {
  if (!alg_) throw structural_error("element needs an algebra");
  if (blocks_.size() != alg_->n_blocks()) throw structural_error("element block count mismatch");
  for (std::size_t j = 0; j < blocks_.size(); ++j)
    if (blocks_[j].rows() != alg_->block_dims()[j] || blocks_[j].cols() != alg_->block_dims()[j])
      throw structural_error("element block shape mismatch");
}

AlgElement AlgElement::zero(const AlgebraPtr& alg) {
  std::vector<Matrix> blocks;
  for (std::size_t d : alg->block_dims()) blocks.emplace_back(d, d);
  return AlgElement(alg, std::move(blocks));
}

AlgElement AlgElement::identity(const AlgebraPtr& alg) {
  std::vector<Matrix> blocks;
  for (std::size_t d : alg->block_dims()) blocks.push_back(Matrix::identity(d));
  return AlgElement(alg, std::move(blocks));
}

AlgElement AlgElement::diagonal(const AlgebraPtr& alg, const std::vector<double>& entries) {
  if (entries.size() != alg->total_dim())
    throw structural_error("diagonal entry count must equal total dimension");
  AlgElement x = zero(alg);
  std::size_t pos = 0;
  for (std::size_t j = 0; j < alg->n_blocks(); ++j)
    for (std::size_t k = 0; k < alg->block_dims()[j]; ++k) x.block(j)(k, k) = entries[pos++];
  return x;
}

void check_same_algebra(const AlgElement& a, const AlgElement& b) {
  if (a.algebra() == b.algebra()) return;
  const auto& x = *a.algebra();
  const auto& y = *b.algebra();
  if (x.block_dims() != y.block_dims() || x.weights() != y.weights())
    throw structural_error("elements belong to different algebras");
}

AlgElement& AlgElement::operator+=(const AlgElement& o) {
  check_same_algebra(*this, o);
  for (std::size_t j = 0; j < blocks_.size(); ++j) blocks_[j] += o.blocks_[j];
  return *this;
}

AlgElement& AlgElement::operator-=(const AlgElement& o) {
  check_same_algebra(*this, o);
  for (std::size_t j = 0; j < blocks_.size(); ++j) blocks_[j] -= o.blocks_[j];
  return *this;
}

AlgElement& AlgElement::operator*=(cplx s) {
  for (Matrix& b : blocks_) b *= s;
  return *this;
}

AlgElement operator*(const AlgElement& a, const AlgElement& b) {
  check_same_algebra(a, b);
  std::vector<Matrix> blocks;
  blocks.reserve(a.n_blocks());
  for (std::size_t j = 0; j < a.n_blocks(); ++j) blocks.push_back(a.block(j) * b.block(j));
  return AlgElement(a.algebra(), std::move(blocks));
}

AlgElement AlgElement::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const Matrix& b : blocks_) blocks.push_back(b.adjoint());
  return AlgElement(alg_, std::move(blocks));
}

double AlgElement::herm_defect() const {
  double d = 0.0;
  for (const Matrix& b : blocks_) d = std::max(d, b.herm_defect());
  return d;
}

bool AlgElement::is_self_adjoint(double rel_tol) const {
  return herm_defect() <= rel_tol * (max_abs() + 1e-300);
}

double AlgElement::max_abs() const {
  double m = 0.0;
  for (const Matrix& b : blocks_) m = std::max(m, b.max_abs());
  return m;
}

std::vector<cplx> AlgElement::to_vec() const {
  std::vector<cplx> v(alg_->superop_dim());
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    const std::size_t d = blocks_[j].rows();
    std::copy(blocks_[j].data(), blocks_[j].data() + d * d, v.begin() + alg_->vec_offset(j));
  }
  return v;
}

AlgElement AlgElement::from_vec(const AlgebraPtr& alg, const std::vector<cplx>& v) {
  if (v.size() != alg->superop_dim()) throw structural_error("vectorized element has wrong length");
  AlgElement x = zero(alg);
  for (std::size_t j = 0; j < alg->n_blocks(); ++j) {
    const std::size_t d = alg->block_dims()[j];
    std::copy(v.begin() + alg->vec_offset(j), v.begin() + alg->vec_offset(j) + d * d,
              x.block(j).data());
  }
  return x;
}

cplx trace(const AlgElement& x) {
  cplx s{0.0, 0.0};
  for (std::size_t j = 0; j < x.n_blocks(); ++j)
    s += x.algebra()->weights()[j] * x.block(j).trace_sum();
  return s;
}

double trace_real(const AlgElement& x) {
  const cplx t = trace(x);
  if (std::abs(t.imag()) > 1e-6 * (1.0 + std::abs(t.real())))
    throw numerical_error("trace has a non-negligible imaginary part");
  return t.real();
}

AlgElement abs(const AlgElement& x) {
  AlgElement r = AlgElement::zero(x.algebra());
  for (std::size_t j = 0; j < x.n_blocks(); ++j) {
    const Matrix& b = x.block(j);
    const Eigh e = eigh(b.adjoint() * b);
    const std::size_t d = b.rows();
    Matrix& out = r.block(j);
    for (std::size_t k = 0; k < d; ++k) {
      const double s = std::sqrt(std::max(e.values[k], 0.0));
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t c = 0; c < d; ++c)
          out(a, c) += s * e.vectors(a, k) * std::conj(e.vectors(c, k));
    }
  }
  return r;
}

double uniform_norm(const AlgElement& x) {
  double m = 0.0;
  for (std::size_t j = 0; j < x.n_blocks(); ++j) {
    const Matrix& b = x.block(j);
    const Eigh e = eigh(b.adjoint() * b);
    if (!e.values.empty()) m = std::max(m, std::sqrt(std::max(e.values.back(), 0.0)));
  }
  return m;
}

double lp_norm(const AlgElement& x, double p) {
  if (!(p >= 1.0)) throw domain_error("lp_norm needs p >= 1");
  double s = 0.0;
  for (std::size_t j = 0; j < x.n_blocks(); ++j)
    for (double sv : block_singular_values(x.block(j)))
      s += x.algebra()->weights()[j] * std::pow(sv, p);
  return std::pow(s, 1.0 / p);
}

AlgElement apply_function(const std::function<double(double)>& phi, const AlgElement& x) {
  const std::vector<Eigh> es = block_eigh(x, "apply_function");
  double scale = 0.0;
  for (const Eigh& e : es)
    for (double v : e.values) scale = std::max(scale, std::abs(v));
  AlgElement r = AlgElement::zero(x.algebra());
  for (std::size_t j = 0; j < x.n_blocks(); ++j) {
    const Eigh& e = es[j];
    const std::size_t d = x.block(j).rows();
    Matrix& out = r.block(j);
    for (std::size_t k = 0; k < d; ++k) {
      if (e.values[k] < -1e-9 * (scale + 1e-300))
        throw domain_error("apply_function needs a positive element");
      const double f = phi(std::max(e.values[k], 0.0));
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t c = 0; c < d; ++c)
          out(a, c) += f * e.vectors(a, k) * std::conj(e.vectors(c, k));
    }
  }
  return r;
}

AlgElement SpectralDecomposition::reconstruct() const {
  AlgElement x = AlgElement::zero(algebra);
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    x += cplx{eigenvalues[i], 0.0} * projections[i];
  return x;
}

SpectralDecomposition spectral_decompose(const AlgElement& x, double cluster_rtol) {
  const std::vector<Eigh> es = block_eigh(x, "spectral_decompose");

  struct Entry {
    double value;
    std::size_t block, col;
  };
  std::vector<Entry> entries;
  double scale = 0.0;
  for (std::size_t j = 0; j < es.size(); ++j)
    for (std::size_t k = 0; k < es[j].values.size(); ++k) {
      entries.push_back({es[j].values[k], j, k});
      scale = std::max(scale, std::abs(es[j].values[k]));
    }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.value < b.value; });

  SpectralDecomposition out;
  out.algebra = x.algebra();
  const double gap = cluster_rtol * (scale + 1e-300);
  std::size_t i = 0;
  while (i < entries.size()) {
    std::size_t k = i + 1;
    while (k < entries.size() && entries[k].value - entries[k - 1].value <= gap) ++k;
    double mean = 0.0;
    std::vector<std::vector<std::size_t>> cols(x.n_blocks());
    double mult = 0.0;
    for (std::size_t m = i; m < k; ++m) {
      mean += entries[m].value;
      cols[entries[m].block].push_back(entries[m].col);
      mult += x.algebra()->weights()[entries[m].block];
    }
    mean /= static_cast<double>(k - i);
    AlgElement p = AlgElement::zero(x.algebra());
    for (std::size_t j = 0; j < x.n_blocks(); ++j)
      if (!cols[j].empty()) add_outer(p.block(j), es[j].vectors, cols[j]);
    out.eigenvalues.push_back(mean);
    out.projections.push_back(std::move(p));
    out.tau_multiplicities.push_back(mult);
    i = k;
  }
  return out;
}

Projection::Projection(AlgElement e, double tol) : e_(std::move(e)) {
  if (e_.herm_defect() > tol) throw domain_error("projection is not self-adjoint");
  AlgElement sq = e_ * e_;
  sq -= e_;
  if (sq.max_abs() > tol) throw domain_error("projection is not idempotent");
}

Projection Projection::identity(const AlgebraPtr& alg) {
  return Projection(AlgElement::identity(alg));
}

Projection Projection::zero(const AlgebraPtr& alg) {
  return Projection(AlgElement::zero(alg));
}

Projection Projection::complement() const {
  AlgElement c = AlgElement::identity(e_.algebra());
  c -= e_;
  return Projection(std::move(c));
}

double Projection::trace() const { return trace_real(e_); }

namespace {

Projection select_projection(const AlgElement& x, const char* who,
                             const std::function<bool(double)>& take) {
  const std::vector<Eigh> es = block_eigh(x, who);
  AlgElement p = AlgElement::zero(x.algebra());
  for (std::size_t j = 0; j < x.n_blocks(); ++j) {
    std::vector<std::size_t> cols;
    for (std::size_t k = 0; k < es[j].values.size(); ++k)
      if (take(es[j].values[k])) cols.push_back(k);
    if (!cols.empty()) add_outer(p.block(j), es[j].vectors, cols);
  }
  return Projection(std::move(p));
}

}  // namespace

Projection spectral_projection(const AlgElement& x, double lo, double hi) {
  if (!(lo <= hi)) throw domain_error("spectral_projection needs lo <= hi");
  return select_projection(x, "spectral_projection",
                           [lo, hi](double v) { return lo <= v && v <= hi; });
}

Projection spectral_projection_above(const AlgElement& x, double nu) {
  return select_projection(x, "spectral_projection", [nu](double v) { return v > nu; });
}

Projection projection_meet(const std::vector<Projection>& ps) {
  if (ps.empty()) throw structural_error("projection_meet needs at least one projection");
  AlgElement sum = AlgElement::zero(ps.front().algebra());
  for (const Projection& p : ps) {
    check_same_algebra(sum, p.element());
    sum += p.complement().element();
  }
  // Kernel of the summed complements = intersection of the ranges.
  return select_projection(sum, "projection_meet", [](double v) { return v <= 1e-9; });
}

double min_eigenvalue(const AlgElement& x) {
  const std::vector<Eigh> es = block_eigh(x, "min_eigenvalue");
  double m = es.front().values.front();
  for (const Eigh& e : es) m = std::min(m, e.values.front());
  return m;
}

namespace {

Matrix random_gaussian_matrix(std::size_t d, CounterRng& rng) {
  Matrix g(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) g(a, b) = rng.next_cgaussian();
  return g;
}

}  // namespace

AlgElement random_element(const AlgebraPtr& alg, ElementKind kind, std::uint64_t seed) {
  CounterRng root(seed);
  AlgElement x = AlgElement::zero(alg);
  for (std::size_t j = 0; j < alg->n_blocks(); ++j) {
    CounterRng rng = root.fork(j);
    const std::size_t d = alg->block_dims()[j];
    Matrix g = random_gaussian_matrix(d, rng);
    switch (kind) {
      case ElementKind::general:
        x.block(j) = g;
        break;
      case ElementKind::hermitian: {
        Matrix h = g;
        h += g.adjoint();
        h *= cplx{0.5, 0.0};
        x.block(j) = h;
        break;
      }
      case ElementKind::positive: {
        Matrix h = g.adjoint() * g;
        h *= cplx{1.0 / static_cast<double>(d), 0.0};
        x.block(j) = h;
        break;
      }
      case ElementKind::projection: {
        Matrix h = g;
        h += g.adjoint();
        const Eigh e = eigh(h);
        const std::size_t rank = 1 + static_cast<std::size_t>(rng.next_u64() % d);
        std::vector<std::size_t> cols;
        for (std::size_t k = d - rank; k < d; ++k) cols.push_back(k);
        add_outer(x.block(j), e.vectors, cols);
        break;
      }
    }
  }
  return x;
}

AlgElement random_unitary(const AlgebraPtr& alg, std::uint64_t seed) {
  CounterRng root(seed);
  AlgElement u = AlgElement::zero(alg);
  for (std::size_t j = 0; j < alg->n_blocks(); ++j) {
    CounterRng rng = root.fork(j ^ 0xABCDEF);
    const std::size_t d = alg->block_dims()[j];
    Matrix g = random_gaussian_matrix(d, rng);
    Matrix h = g;
    h += g.adjoint();
    u.block(j) = eigh(h).vectors;  // accumulated Jacobi rotations are unitary
  }
  return u;
}

}  // namespace nco
