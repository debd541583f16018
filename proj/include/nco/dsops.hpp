#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nco/algebra.hpp"
#include "nco/orlicz.hpp"

namespace nco {

// Positive trace- and norm-contractive map stored as a dense superoperator on
// the vectorized algebra (dimension sum d_j^2). Checked factories validate
// their inputs eagerly; from_superop defers everything to verify_ds.
class DSOperator {
public:
  static DSOperator unitary_conjugation(const AlgElement& u, bool validate = true);
  static DSOperator schur_correlation(const AlgebraPtr& alg, std::size_t block,
                                      const Matrix& c, bool validate = true);
  // Diagonal algebra only: (T x)_i = sum_j s(i, j) x_j.
  static DSOperator substochastic(const AlgebraPtr& alg, const Matrix& s, bool validate = true);
  static DSOperator compose(const DSOperator& a, const DSOperator& b);  // x -> a(b(x))
  static DSOperator convex_combine(const DSOperator& a, const DSOperator& b, double lambda);
  static DSOperator identity(const AlgebraPtr& alg);
  static DSOperator from_superop(const AlgebraPtr& alg, Matrix s, std::string descriptor);

  const AlgebraPtr& algebra() const { return alg_; }
  const std::string& descriptor() const { return desc_; }
  const Matrix& superop() const { return s_; }
  const Matrix& superop_adjoint() const { return sadj_; }  // trace adjoint

  AlgElement apply(const AlgElement& x) const;
  AlgElement apply_adjoint(const AlgElement& x) const;

private:
  DSOperator(AlgebraPtr alg, Matrix s, std::string desc);
  AlgebraPtr alg_;
  Matrix s_;
  Matrix sadj_;
  std::string desc_;
};

struct DSReport {
  bool hermiticity_ok;
  double herm_defect;         // superoperator symmetry defect
  bool choi_ok;
  double choi_min_eig;        // over all input blocks
  bool sup_contractive;
  double sup_margin;          // min eig of 1 - T(1)
  bool trace_contractive;
  double trace_margin;        // min eig of 1 - T^+(1)
  bool samples_ok;
  double max_sup_ratio, max_l1_ratio;
  bool pass() const;
  std::string first_failure() const;  // empty when pass()
};

DSReport verify_ds(const DSOperator& t, std::size_t n_samples = 50,
                   std::uint64_t seed = 20260814);

// Largest ||T x||_Phi / ||x||_Phi over seeded samples.
double max_orlicz_ratio(const DSOperator& t, const OrliczFunction& phi,
                        std::size_t n_samples, std::uint64_t seed);

// min eig of S(x^2) - S(x)^2 for self-adjoint x.
double kadison_margin(const DSOperator& s, const AlgElement& x);

// Incremental Cesaro averages: step() advances to A_n for n = 1, 2, ...
class AverageIterator {
public:
  AverageIterator(const DSOperator& t, const AlgElement& x);
  const AlgElement& step();
  const AlgElement& current() const { return a_n_; }
  std::size_t n() const { return n_; }

private:
  const DSOperator* t_;
  AlgebraPtr alg_;
  std::vector<cplx> y_;    // T^n(x)
  std::vector<cplx> sum_;  // sum of y over steps taken
  std::size_t n_ = 0;
  AlgElement a_n_;
};

struct FixedPointLimit {
  Matrix projector;  // superoperator-space projector onto the fixed space
  bool spectral_ok = false;
  double gap = 0.0;  // smallest nonzero singular value of S - 1
  std::size_t fixed_dim = 0;
  std::vector<std::string> flags;
  AlgElement apply(const AlgElement& x) const;  // requires spectral_ok
};

FixedPointLimit fixed_point_limit(const DSOperator& t, double null_tol = 1e-8,
                                  double gap_tol = 1e-6);

struct ErgodicRecord {
  std::size_t n;
  double sup_norm;
  double orlicz_norm;
  double dist_to_limit;
};

struct ErgodicTrace {
  std::vector<ErgodicRecord> records;
  std::optional<AlgElement> limit;  // validated fixed point, or Cesaro estimate
  bool limit_is_estimate = false;
  double rate_exponent = 0.0;  // least-squares slope of log dist vs log n
  bool rate_defined = false;
  std::vector<std::string> flags;
};

ErgodicTrace ergodic_averages(const DSOperator& t, const AlgElement& x, std::size_t n_max,
                              const OrliczFunction& phi);

// Slope over records with n in [n_lo, n_hi]; false when too few usable points.
bool rate_fit(const std::vector<ErgodicRecord>& records, std::size_t n_lo, std::size_t n_hi,
              double* exponent);

}  // namespace nco
