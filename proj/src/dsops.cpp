#include "nco/dsops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nco/errors.hpp"
#include "nco/kernels.hpp"
#include "nco/rng.hpp"

namespace nco {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Trace weight attached to each vectorized coordinate.
std::vector<double> vec_weights(const TracedAlgebra& alg) {
  std::vector<double> w(alg.superop_dim());
  for (std::size_t j = 0; j < alg.n_blocks(); ++j) {
    const std::size_t d = alg.block_dims()[j];
    std::fill_n(w.begin() + alg.vec_offset(j), d * d, alg.weights()[j]);
  }
  return w;
}

double min_eig_symmetrized(const AlgElement& z) {
  AlgElement h = z;
  h += z.adjoint();
  h *= cplx{0.5, 0.0};
  return min_eigenvalue(h);
}

// Dense k x k complex inverse by Gauss-Jordan with partial pivoting.
bool invert_small(Matrix m, Matrix* out) {
  const std::size_t k = m.rows();
  Matrix inv = Matrix::identity(k);
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (std::abs(m(piv, col)) < 1e-12) return false;
    if (piv != col)
      for (std::size_t c = 0; c < k; ++c) {
        std::swap(m(piv, c), m(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    const cplx d = m(col, col);
    for (std::size_t c = 0; c < k; ++c) {
      m(col, c) /= d;
      inv(col, c) /= d;
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const cplx f = m(r, col);
      if (f == cplx{0.0, 0.0}) continue;
      for (std::size_t c = 0; c < k; ++c) {
        m(r, c) -= f * m(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  *out = std::move(inv);
  return true;
}

}  // namespace

DSOperator::DSOperator(AlgebraPtr alg, Matrix s, std::string desc)
    : alg_(std::move(alg)), s_(std::move(s)), desc_(std::move(desc)) {
  const std::size_t m = alg_->superop_dim();
  if (s_.rows() != m || s_.cols() != m) throw structural_error("superoperator has wrong shape");
  const std::vector<double> w = vec_weights(*alg_);
  sadj_ = Matrix(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) sadj_(i, j) = std::conj(s_(j, i)) * (w[j] / w[i]);
}

DSOperator DSOperator::unitary_conjugation(const AlgElement& u, bool validate) {
  const AlgebraPtr& alg = u.algebra();
  if (validate) {
    for (std::size_t j = 0; j < u.n_blocks(); ++j) {
      Matrix defect = u.block(j) * u.block(j).adjoint();
      defect -= Matrix::identity(u.block(j).rows());
      if (defect.max_abs() > 1e-8)
        throw domain_error("unitary_conjugation: block " + std::to_string(j) + " is not unitary");
    }
  }
  Matrix s(alg->superop_dim(), alg->superop_dim());
  for (std::size_t j = 0; j < alg->n_blocks(); ++j) {
    const std::size_t d = alg->block_dims()[j];
    const std::size_t o = alg->vec_offset(j);
    const Matrix& ub = u.block(j);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t r = 0; r < d; ++r)
          for (std::size_t c = 0; c < d; ++c)
            s(o + a * d + b, o + r * d + c) = ub(a, r) * std::conj(ub(b, c));
  }
  return DSOperator(alg, std::move(s), "unitary_conjugation");
}

DSOperator DSOperator::schur_correlation(const AlgebraPtr& alg, std::size_t block,
                                         const Matrix& c, bool validate) {
  if (block >= alg->n_blocks()) throw structural_error("schur_correlation: block index out of range");
  const std::size_t d = alg->block_dims()[block];
  if (c.rows() != d || c.cols() != d)
    throw structural_error("schur_correlation: matrix shape does not match the block");
  if (validate) {
    if (c.herm_defect() > 1e-9 * (c.max_abs() + 1e-300))
      throw domain_error("schur_correlation: matrix is not Hermitian");
    for (std::size_t i = 0; i < d; ++i)
      if (std::abs(c(i, i) - cplx{1.0, 0.0}) > 1e-9)
        throw domain_error("schur_correlation: diagonal entry " + std::to_string(i) + " is not 1");
    Matrix h = c;
    h += c.adjoint();
    h *= cplx{0.5, 0.0};
    const Eigh e = eigh(h);
    if (e.values.front() < -1e-9 * std::max(std::abs(e.values.back()), 1.0))
      throw domain_error("schur_correlation: matrix is not positive semidefinite");
  }
  Matrix s = Matrix::identity(alg->superop_dim());
  const std::size_t o = alg->vec_offset(block);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t k = 0; k < d; ++k) s(o + r * d + k, o + r * d + k) = c(r, k);
  return DSOperator(alg, std::move(s), "schur_correlation(block=" + std::to_string(block) + ")");
}

DSOperator DSOperator::substochastic(const AlgebraPtr& alg, const Matrix& s, bool validate) {
  if (!alg->all_blocks_scalar())
    throw structural_error("substochastic needs an algebra with all blocks of dimension 1");
  const std::size_t m = alg->n_blocks();
  if (s.rows() != m || s.cols() != m) throw structural_error("substochastic: matrix shape mismatch");
  if (validate) {
    const std::vector<double>& w = alg->weights();
    for (std::size_t i = 0; i < m; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (std::abs(s(i, j).imag()) > 1e-12)
          throw domain_error("substochastic: entries must be real");
        if (s(i, j).real() < -1e-12)
          throw domain_error("substochastic: negative entry in row " + std::to_string(i));
        row += s(i, j).real();
      }
      if (row > 1.0 + 1e-12)
        throw domain_error("substochastic: row " + std::to_string(i) + " sums to " +
                           std::to_string(row));
    }
    for (std::size_t j = 0; j < m; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < m; ++i) col += w[i] * s(i, j).real();
      if (col > w[j] * (1.0 + 1e-12))
        throw domain_error("substochastic: weighted column " + std::to_string(j) + " sums to " +
                           std::to_string(col) + " > " + std::to_string(w[j]));
    }
  }
  return DSOperator(alg, s, "substochastic");
}

DSOperator DSOperator::compose(const DSOperator& a, const DSOperator& b) {
  check_same_algebra(AlgElement::zero(a.alg_), AlgElement::zero(b.alg_));
  return DSOperator(a.alg_, a.s_ * b.s_, "compose(" + a.desc_ + ";" + b.desc_ + ")");
}

DSOperator DSOperator::convex_combine(const DSOperator& a, const DSOperator& b, double lambda) {
  check_same_algebra(AlgElement::zero(a.alg_), AlgElement::zero(b.alg_));
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw domain_error("convex_combine needs lambda in [0, 1]");
  Matrix s = a.s_;
  s *= cplx{lambda, 0.0};
  Matrix sb = b.s_;
  sb *= cplx{1.0 - lambda, 0.0};
  s += sb;
  return DSOperator(a.alg_, std::move(s),
                    "mix(" + std::to_string(lambda) + ";" + a.desc_ + ";" + b.desc_ + ")");
}

DSOperator DSOperator::identity(const AlgebraPtr& alg) {
  return DSOperator(alg, Matrix::identity(alg->superop_dim()), "identity");
}

DSOperator DSOperator::from_superop(const AlgebraPtr& alg, Matrix s, std::string descriptor) {
  return DSOperator(alg, std::move(s), std::move(descriptor));
}

AlgElement DSOperator::apply(const AlgElement& x) const {
  check_same_algebra(x, AlgElement::zero(alg_));
  return AlgElement::from_vec(alg_, matvec(s_, x.to_vec()));
}

AlgElement DSOperator::apply_adjoint(const AlgElement& x) const {
  check_same_algebra(x, AlgElement::zero(alg_));
  return AlgElement::from_vec(alg_, matvec(sadj_, x.to_vec()));
}

bool DSReport::pass() const {
  return hermiticity_ok && choi_ok && sup_contractive && trace_contractive && samples_ok;
}

std::string DSReport::first_failure() const {
  if (!hermiticity_ok) return "hermiticity_preserving";
  if (!choi_ok) return "choi_psd";
  if (!sup_contractive) return "sup_contractive";
  if (!trace_contractive) return "trace_contractive";
  if (!samples_ok) return "sampled_contractivity";
  return "";
}

DSReport verify_ds(const DSOperator& t, std::size_t n_samples, std::uint64_t seed) {
  const TracedAlgebra& alg = *t.algebra();
  const Matrix& s = t.superop();
  DSReport r{};

  // T(x^*) = T(x)^* in superoperator coordinates.
  double defect = 0.0;
  for (std::size_t jo = 0; jo < alg.n_blocks(); ++jo)
    for (std::size_t ji = 0; ji < alg.n_blocks(); ++ji) {
      const std::size_t dco = alg.block_dims()[jo], dci = alg.block_dims()[ji];
      const std::size_t oo = alg.vec_offset(jo), oi = alg.vec_offset(ji);
      for (std::size_t a = 0; a < dco; ++a)
        for (std::size_t b = 0; b < dco; ++b)
          for (std::size_t rr = 0; rr < dci; ++rr)
            for (std::size_t cc = 0; cc < dci; ++cc)
              defect = std::max(defect,
                                std::abs(s(oo + a * dco + b, oi + rr * dci + cc) -
                                         std::conj(s(oo + b * dco + a, oi + cc * dci + rr))));
    }
  r.herm_defect = defect;
  r.hermiticity_ok = defect <= 1e-9 * (s.max_abs() + 1e-300);

  // Complete positivity: one Choi matrix per input block.
  const std::size_t dt = alg.total_dim();
  std::vector<std::size_t> row_off(alg.n_blocks());
  for (std::size_t j = 0, acc = 0; j < alg.n_blocks(); ++j) {
    row_off[j] = acc;
    acc += alg.block_dims()[j];
  }
  double choi_min = kInf;
  for (std::size_t ji = 0; ji < alg.n_blocks(); ++ji) {
    const std::size_t d = alg.block_dims()[ji];
    Matrix choi(d * dt, d * dt);
    for (std::size_t rr = 0; rr < d; ++rr)
      for (std::size_t cc = 0; cc < d; ++cc) {
        const std::size_t col = alg.vec_offset(ji) + rr * d + cc;
        // Column of S = vec(T(E_rc)); scatter its blocks into the embedding.
        for (std::size_t jo = 0; jo < alg.n_blocks(); ++jo) {
          const std::size_t dd = alg.block_dims()[jo];
          for (std::size_t a = 0; a < dd; ++a)
            for (std::size_t b = 0; b < dd; ++b)
              choi(rr * dt + row_off[jo] + a, cc * dt + row_off[jo] + b) =
                  s(alg.vec_offset(jo) + a * dd + b, col);
        }
      }
    Matrix h = choi;
    h += choi.adjoint();
    h *= cplx{0.5, 0.0};
    const Eigh e = eigh(h);
    choi_min = std::min(choi_min, e.values.front());
  }
  r.choi_min_eig = choi_min;
  r.choi_ok = choi_min >= -1e-9 * std::max(s.max_abs(), 1.0);

  const AlgElement one = AlgElement::identity(t.algebra());
  AlgElement z = one;
  z -= t.apply(one);
  r.sup_margin = min_eig_symmetrized(z);
  r.sup_contractive = r.sup_margin >= -1e-9 * std::max(z.max_abs(), 1.0);

  AlgElement za = one;
  za -= t.apply_adjoint(one);
  r.trace_margin = min_eig_symmetrized(za);
  r.trace_contractive = r.trace_margin >= -1e-9 * std::max(za.max_abs(), 1.0);

  r.max_sup_ratio = 0.0;
  r.max_l1_ratio = 0.0;
  CounterRng rng(seed);
  const ElementKind kinds[3] = {ElementKind::general, ElementKind::hermitian,
                                ElementKind::positive};
  for (std::size_t i = 0; i < n_samples; ++i) {
    const AlgElement x = random_element(t.algebra(), kinds[i % 3], rng.fork(i).seed());
    const double sup = uniform_norm(x);
    if (sup == 0.0) continue;
    const AlgElement tx = t.apply(x);
    r.max_sup_ratio = std::max(r.max_sup_ratio, uniform_norm(tx) / sup);
    const double l1 = lp_norm(x, 1.0);
    if (l1 > 0.0) r.max_l1_ratio = std::max(r.max_l1_ratio, lp_norm(tx, 1.0) / l1);
  }
  r.samples_ok = r.max_sup_ratio <= 1.0 + 1e-8 && r.max_l1_ratio <= 1.0 + 1e-8;
  return r;
}

double max_orlicz_ratio(const DSOperator& t, const OrliczFunction& phi,
                        std::size_t n_samples, std::uint64_t seed) {
  CounterRng rng(seed);
  const ElementKind kinds[3] = {ElementKind::general, ElementKind::hermitian,
                                ElementKind::positive};
  double worst = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const AlgElement x = random_element(t.algebra(), kinds[i % 3], rng.fork(i).seed());
    const double nx = luxemburg_norm(x, phi).value;
    if (nx == 0.0) continue;
    worst = std::max(worst, luxemburg_norm(t.apply(x), phi).value / nx);
  }
  return worst;
}

double kadison_margin(const DSOperator& s, const AlgElement& x) {
  if (!x.is_self_adjoint()) throw domain_error("kadison_margin needs a self-adjoint element");
  AlgElement z = s.apply(x * x);
  const AlgElement sx = s.apply(x);
  z -= sx * sx;
  return min_eig_symmetrized(z);
}

AverageIterator::AverageIterator(const DSOperator& t, const AlgElement& x)
    : t_(&t), alg_(t.algebra()), y_(x.to_vec()), sum_(alg_->superop_dim()),
      a_n_(AlgElement::zero(alg_)) {
  check_same_algebra(x, AlgElement::zero(alg_));
}

const AlgElement& AverageIterator::step() {
  kernels::active().axpy(sum_.size(), cplx{1.0, 0.0}, y_.data(), sum_.data());
  ++n_;
  std::vector<cplx> avg = sum_;
  kernels::active().scal(avg.size(), cplx{1.0 / static_cast<double>(n_), 0.0}, avg.data());
  a_n_ = AlgElement::from_vec(alg_, avg);
  std::vector<cplx> next(y_.size());
  kernels::matvec(y_.size(), y_.size(), t_->superop().data(), y_.data(), next.data());
  y_ = std::move(next);
  return a_n_;
}

AlgElement FixedPointLimit::apply(const AlgElement& x) const {
  if (!spectral_ok) throw numerical_error("fixed point projector unavailable");
  const AlgebraPtr alg = x.algebra();
  return AlgElement::from_vec(alg, matvec(projector, x.to_vec()));
}

FixedPointLimit fixed_point_limit(const DSOperator& t, double null_tol, double gap_tol) {
  FixedPointLimit out;
  const std::size_t m = t.algebra()->superop_dim();
  Matrix d = t.superop();
  d -= Matrix::identity(m);

  const Eigh right = eigh(d.adjoint() * d);
  double scale = std::sqrt(std::max(right.values.back(), 0.0));
  const double thr = null_tol * std::max(scale, 1.0);

  std::vector<std::size_t> null_cols;
  out.gap = kInf;
  for (std::size_t k = 0; k < m; ++k) {
    const double sv = std::sqrt(std::max(right.values[k], 0.0));
    if (sv <= thr)
      null_cols.push_back(k);
    else
      out.gap = std::min(out.gap, sv);
  }
  out.fixed_dim = null_cols.size();

  if (out.gap < gap_tol) {
    out.flags.push_back("spectral gap below tolerance; Cesaro estimate only");
    return out;
  }
  if (null_cols.empty()) {
    out.projector = Matrix(m, m);  // averages converge to 0
    out.spectral_ok = true;
    return out;
  }

  const Eigh left = eigh(d * d.adjoint());
  std::vector<std::size_t> left_cols;
  for (std::size_t k = 0; k < m; ++k)
    if (std::sqrt(std::max(left.values[k], 0.0)) <= thr) left_cols.push_back(k);
  if (left_cols.size() != null_cols.size()) {
    out.flags.push_back("left/right fixed spaces disagree; Cesaro estimate only");
    return out;
  }

  const std::size_t k = null_cols.size();
  Matrix v(m, k), w(m, k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < m; ++i) {
      v(i, c) = right.vectors(i, null_cols[c]);
      w(i, c) = left.vectors(i, left_cols[c]);
    }

  // Oblique projector V (W^* V)^{-1} W^* onto ker(S-1) along ran(S-1).
  Matrix mats = w.adjoint() * v;
  Matrix inv;
  if (!invert_small(std::move(mats), &inv)) {
    out.flags.push_back("unit eigenspace is defective; Cesaro estimate only");
    return out;
  }
  out.projector = v * inv * w.adjoint();

  Matrix idem = out.projector * out.projector;
  idem -= out.projector;
  if (idem.max_abs() > 1e-8 * std::max(1.0, out.projector.max_abs())) {
    out.flags.push_back("projector failed idempotence check; Cesaro estimate only");
    out.projector = Matrix();
    return out;
  }
  out.spectral_ok = true;
  return out;
}

bool rate_fit(const std::vector<ErgodicRecord>& records, std::size_t n_lo, std::size_t n_hi,
              double* exponent) {
  double max_d = 0.0;
  for (const ErgodicRecord& r : records)
    if (r.n >= n_lo && r.n <= n_hi) max_d = std::max(max_d, r.dist_to_limit);
  if (max_d <= 0.0) return false;
  // Steps with exact cancellation leave rounding residue many decades below
  // the trend line; any genuine power decay over the window stays far above.
  const double floor = 1e-9 * max_d;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (const ErgodicRecord& r : records) {
    if (r.n < n_lo || r.n > n_hi || r.dist_to_limit <= floor) continue;
    const double lx = std::log(static_cast<double>(r.n));
    const double ly = std::log(r.dist_to_limit);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt < 3) return false;
  const double denom = static_cast<double>(cnt) * sxx - sx * sx;
  if (denom <= 0.0) return false;
  *exponent = (static_cast<double>(cnt) * sxy - sx * sy) / denom;
  return true;
}

namespace {

void record_pass(const DSOperator& t, const AlgElement& x, std::size_t n_max,
                 const OrliczFunction& phi, const AlgElement& xhat, ErgodicTrace* out) {
  out->records.clear();
  out->records.reserve(n_max);
  AverageIterator it(t, x);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const AlgElement& a = it.step();
    AlgElement diff = a;
    diff -= xhat;
    out->records.push_back(
        {n, uniform_norm(a), luxemburg_norm(a, phi).value, uniform_norm(diff)});
  }
}

}  // namespace

ErgodicTrace ergodic_averages(const DSOperator& t, const AlgElement& x, std::size_t n_max,
                              const OrliczFunction& phi) {
  if (n_max == 0) throw domain_error("ergodic_averages needs n_max >= 1");
  ErgodicTrace out;
  FixedPointLimit fpl = fixed_point_limit(t);
  out.flags = fpl.flags;

  if (fpl.spectral_ok) {
    AlgElement xhat = fpl.apply(x);
    record_pass(t, x, n_max, phi, xhat, &out);
    const double bound = 10.0 * uniform_norm(x) / static_cast<double>(n_max);
    if (out.records.back().dist_to_limit <= bound + 1e-12) {
      out.limit = std::move(xhat);
    } else {
      out.flags.push_back("limit validation failed; Cesaro estimate only");
    }
  }
  if (!out.limit.has_value()) {
    // Fall back to A_N as the limit estimate and re-record against it.
    AverageIterator it(t, x);
    for (std::size_t n = 1; n <= n_max; ++n) it.step();
    AlgElement xhat = it.current();
    record_pass(t, x, n_max, phi, xhat, &out);
    out.limit = std::move(xhat);
    out.limit_is_estimate = true;
  }
  out.rate_defined = rate_fit(out.records, std::max<std::size_t>(10, n_max / 100), n_max,
                              &out.rate_exponent);
  return out;
}

}  // namespace nco
