#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nco/algebra.hpp"
#include "nco/dsops.hpp"
#include "nco/orlicz.hpp"

namespace nco {

// Parameters for the equicontinuity witnesses: t is the smallest constant with
// t*Phi(u) >= u for u >= delta/2, nu = delta/(2t), gamma = min(1, epsilon*nu).
struct WitnessParams {
  double epsilon = 0.0;
  double delta = 0.0;
  double t = 0.0;
  double nu = 0.0;
  double gamma = 0.0;
  std::size_t n_horizon = 0;
};

WitnessParams make_witness_params(const OrliczFunction& phi, double epsilon, double delta,
                                  std::size_t n_horizon);

struct WitnessReport {
  explicit WitnessReport(Projection witness) : e(std::move(witness)) {}

  WitnessParams params;
  Projection e;
  double trace_complement = 0.0;
  double trace_bound = 0.0;  // epsilon, or ||x||_1 / nu for the plain search
  double sup_bound_achieved = 0.0;
  double meet_margin = 0.0;  // min over n of min eig(nu e - e A_n e)
  double truncated_piece_sup = 0.0;   // sup_n ||e A_n(x_trunc) e||
  double function_piece_sup = 0.0;    // sup_n ||e A_n(Phi(x)) e||
  double square_norm_discrepancy = 0.0;  // | ||x^2||_tilde - ||x||^2 |
  std::vector<double> kadison_margins;   // per n, squared-problem bridge
  bool sup_ok = false;
  bool trace_ok = false;
  bool trace_asserted = false;  // commutative scenario: trace_ok is a guarantee
  std::vector<std::string> flags;

  bool pass() const { return sup_ok && (!trace_asserted || trace_ok); }
};

// e = spectral projection of x onto [0, nu]; tau(e_perp) <= tau(x)/nu and
// e x e <= nu e hold by construction.
Projection chebyshev_projection(const AlgElement& x, double nu);

// Meet of the level-nu spectral projections of A_1(x)..A_N(x). The sup bound
// sup_n ||e A_n(x) e|| <= nu holds unconditionally; the trace bound
// tau(e_perp) <= ||x||_1 / nu is asserted only on diagonal algebras with unit
// weights and reported otherwise.
WitnessReport yeadon_search(const DSOperator& t, const AlgElement& x, double nu,
                            std::size_t n_horizon);

// Bilateral witness: splits x at delta/2, runs the level search on Phi(x) at
// nu, and certifies sup_n ||e A_n(x) e|| <= delta/2 + t*nu <= delta.
// Requires ||x||_Phi <= gamma.
WitnessReport buem_witness(const DSOperator& t, const OrliczFunction& phi, double epsilon,
                           double delta, const AlgElement& x, std::size_t n_horizon);

// One-sided witness for 2-convex Phi: runs the bilateral machinery on x^2 with
// Phi(sqrt(.)) and delta^2, then certifies sup_n ||A_n(x) e|| <= delta through
// A_n(x)^2 <= A_n(x^2). Requires ||x||_Phi <= sqrt(gamma of the squared run).
WitnessReport uem_witness(const DSOperator& t, const OrliczFunction& phi, double epsilon,
                          double delta, const AlgElement& x, std::size_t n_horizon);

struct NbhdResult {
  bool member = false;
  double level = 0.0;  // mu_epsilon(x), right-continuous
  std::optional<Projection> e;
  double trace_complement = 0.0;
  bool verified = false;  // tau(e_perp) <= epsilon and ||x e|| <= delta rechecked
};

// Membership of x in the neighborhood {||x e|| <= delta, tau(e_perp) <= epsilon}.
NbhdResult measure_nbhd_member(const AlgElement& x, double epsilon, double delta);

struct TruncationPoint {
  double n;
  double remainder_norm;  // ||x - x e_n||_Phi, e_n the (1/n, n) spectral window
};

std::vector<TruncationPoint> truncation_sequence(const AlgElement& x, const OrliczFunction& phi,
                                                 const std::vector<double>& n_list);

struct DecayPoint {
  std::size_t n;
  double sandwiched;  // ||e (A_n - xhat) e||
  double one_sided;   // ||(A_n - xhat) e||, emitted for 2-convex Phi
};

struct ConvergenceReport {
  explicit ConvergenceReport(Projection witness) : e(std::move(witness)) {}

  ErgodicTrace trace;
  Projection e;
  double trace_complement = 0.0;
  double tail_sup = 0.0;  // max sandwiched distance over n >= n_cap/2
  std::vector<DecayPoint> decay;
  bool one_sided_emitted = false;
  bool norm_bound_ok = false;  // ||xhat||_Phi <= ||x||_Phi + 1e-8
  bool cesaro_fallback = false;
  std::vector<std::string> flags;
};

// Ergodic trace plus a sandwiching projection with tau(e_perp) <= epsilon
// chosen among the spectral level sets of |A_N - xhat| to minimize the tail
// sup of the sandwiched distance.
ConvergenceReport convergence_report(const DSOperator& t, const AlgElement& x,
                                     const OrliczFunction& phi, double epsilon,
                                     std::size_t n_cap);

}  // namespace nco
