#include "nco/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nco/errors.hpp"
#include "nco/symfunc.hpp"

namespace nco {
namespace {

void require_positive(const AlgElement& x, const char* who) {
  if (!x.is_self_adjoint() || min_eigenvalue(x) < -1e-9 * (x.max_abs() + 1e-300))
    throw domain_error(std::string(who) + " needs a positive element");
}

double sym_min_eig(const AlgElement& z) {
  AlgElement h = z;
  h += z.adjoint();
  h *= cplx{0.5, 0.0};
  return min_eigenvalue(h);
}

AlgElement sandwich(const Projection& e, const AlgElement& a) {
  return e.element() * a * e.element();
}

bool commutative_unit_weights(const TracedAlgebra& alg) {
  if (!alg.all_blocks_scalar()) return false;
  for (double w : alg.weights())
    if (w != 1.0) return false;
  return true;
}

// Level set [0, nu] of a positive element, absorbing eigenvalue noise below 0.
Projection level_projection(const AlgElement& a, double nu) {
  const double lo = -1e-9 * (a.max_abs() + 1e-300);
  return spectral_projection(a, lo, nu);
}

}  // namespace

WitnessParams make_witness_params(const OrliczFunction& phi, double epsilon, double delta,
                                  std::size_t n_horizon) {
  if (!(epsilon > 0.0)) throw domain_error("witness parameters need epsilon > 0");
  if (!(delta > 0.0)) throw domain_error("witness parameters need delta > 0");
  WitnessParams p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.t = lemma_constant(phi, delta / 2.0);
  p.nu = delta / (2.0 * p.t);
  p.gamma = std::min(1.0, epsilon * p.nu);
  p.n_horizon = n_horizon;
  return p;
}

Projection chebyshev_projection(const AlgElement& x, double nu) {
  require_positive(x, "chebyshev_projection");
  if (!(nu > 0.0)) throw domain_error("chebyshev_projection needs nu > 0");
  return level_projection(x, nu);
}

WitnessReport yeadon_search(const DSOperator& t, const AlgElement& x, double nu,
                            std::size_t n_horizon) {
  require_positive(x, "yeadon_search");
  if (!(nu > 0.0)) throw domain_error("yeadon_search needs nu > 0");
  if (n_horizon == 0) throw domain_error("yeadon_search needs a horizon >= 1");
  check_same_algebra(x, AlgElement::zero(t.algebra()));

  std::vector<AlgElement> avgs;
  avgs.reserve(n_horizon);
  std::optional<Projection> e;
  AverageIterator it(t, x);
  for (std::size_t n = 1; n <= n_horizon; ++n) {
    const AlgElement& a = it.step();
    avgs.push_back(a);
    Projection p = level_projection(a, nu);
    e = e ? projection_meet({*e, p}) : std::move(p);
  }

  WitnessReport rep(std::move(*e));
  rep.params.nu = nu;
  rep.params.n_horizon = n_horizon;
  rep.trace_complement = rep.e.complement().trace();
  rep.trace_bound = lp_norm(x, 1.0) / nu;
  rep.sup_bound_achieved = 0.0;
  rep.meet_margin = 0.0;
  bool first = true;
  for (const AlgElement& a : avgs) {
    const AlgElement s = sandwich(rep.e, a);
    rep.sup_bound_achieved = std::max(rep.sup_bound_achieved, uniform_norm(s));
    AlgElement gap = rep.e.element() * cplx{nu, 0.0};
    gap -= s;
    const double m = sym_min_eig(gap);
    rep.meet_margin = first ? m : std::min(rep.meet_margin, m);
    first = false;
  }
  rep.sup_ok = rep.sup_bound_achieved <= nu + 1e-9 &&
               rep.meet_margin >= -1e-9 * std::max(1.0, nu);
  rep.trace_ok = rep.trace_complement <= rep.trace_bound + 1e-9;
  rep.trace_asserted = commutative_unit_weights(*t.algebra());
  return rep;
}

WitnessReport buem_witness(const DSOperator& t, const OrliczFunction& phi, double epsilon,
                           double delta, const AlgElement& x, std::size_t n_horizon) {
  WitnessParams params = make_witness_params(phi, epsilon, delta, n_horizon);
  require_positive(x, "buem_witness");
  const double nx = luxemburg_norm(x, phi).value;
  if (nx > params.gamma * (1.0 + 1e-9) + 1e-12)
    throw domain_error("buem_witness: the norm of x exceeds the threshold gamma");

  const double cut = delta / 2.0;
  const AlgElement x_trunc =
      apply_function([cut](double u) { return u <= cut ? u : 0.0; }, x);
  const AlgElement phix = apply_function([&phi](double u) { return phi(u); }, x);

  WitnessReport inner = yeadon_search(t, phix, params.nu, n_horizon);

  WitnessReport rep(inner.e);
  rep.params = params;
  rep.trace_complement = inner.trace_complement;
  rep.trace_bound = epsilon;
  rep.function_piece_sup = inner.sup_bound_achieved;
  rep.meet_margin = inner.meet_margin;

  AverageIterator it_x(t, x);
  AverageIterator it_tr(t, x_trunc);
  for (std::size_t n = 1; n <= n_horizon; ++n) {
    rep.sup_bound_achieved =
        std::max(rep.sup_bound_achieved, uniform_norm(sandwich(rep.e, it_x.step())));
    rep.truncated_piece_sup =
        std::max(rep.truncated_piece_sup, uniform_norm(sandwich(rep.e, it_tr.step())));
  }

  rep.sup_ok = rep.sup_bound_achieved <= delta + 1e-8;
  rep.trace_ok = rep.trace_complement <= epsilon + 1e-9;
  rep.trace_asserted = commutative_unit_weights(*t.algebra());
  if (rep.truncated_piece_sup > cut + 1e-8)
    rep.flags.push_back("truncated piece exceeded delta/2");
  if (rep.sup_bound_achieved >
      rep.truncated_piece_sup + params.t * rep.function_piece_sup + 1e-8)
    rep.flags.push_back("decomposition chain violated");
  if (!inner.sup_ok) rep.flags.push_back("level search sup bound failed");
  return rep;
}

WitnessReport uem_witness(const DSOperator& t, const OrliczFunction& phi, double epsilon,
                          double delta, const AlgElement& x, std::size_t n_horizon) {
  if (!two_convex_check(phi)) throw domain_error("uem_witness needs a 2-convex function");
  require_positive(x, "uem_witness");
  const OrliczFunction tilde = derived_tilde(phi);
  WitnessParams tparams = make_witness_params(tilde, epsilon, delta * delta, n_horizon);
  const double nx = luxemburg_norm(x, phi).value;
  const double thr = std::sqrt(tparams.gamma);
  if (nx > thr * (1.0 + 1e-9) + 1e-12)
    throw domain_error("uem_witness: the norm of x exceeds the squared-run threshold");

  const AlgElement x2 = x * x;
  const double n2 = luxemburg_norm(x2, tilde).value;

  WitnessReport inner = buem_witness(t, tilde, epsilon, delta * delta, x2, n_horizon);

  WitnessReport rep(inner.e);
  rep.params = tparams;
  rep.params.delta = delta;  // report the outer uniform bound
  rep.trace_complement = inner.trace_complement;
  rep.trace_bound = epsilon;
  rep.truncated_piece_sup = inner.truncated_piece_sup;
  rep.function_piece_sup = inner.function_piece_sup;
  rep.meet_margin = inner.meet_margin;
  rep.square_norm_discrepancy = std::abs(n2 - nx * nx);
  if (rep.square_norm_discrepancy > 1e-8 * std::max(1.0, nx * nx))
    rep.flags.push_back("square norm identity drift");
  for (const std::string& f : inner.flags) rep.flags.push_back("squared run: " + f);

  const double bridge_tol = -1e-9 * std::max(1.0, uniform_norm(x) * uniform_norm(x));
  AverageIterator it_x(t, x);
  AverageIterator it_x2(t, x2);
  rep.kadison_margins.reserve(n_horizon);
  bool bridge_ok = true;
  for (std::size_t n = 1; n <= n_horizon; ++n) {
    const AlgElement& a = it_x.step();
    const AlgElement& a2 = it_x2.step();
    rep.sup_bound_achieved =
        std::max(rep.sup_bound_achieved, uniform_norm(a * rep.e.element()));
    AlgElement bridge = a2;
    bridge -= a * a;
    const double m = sym_min_eig(sandwich(rep.e, bridge));
    rep.kadison_margins.push_back(m);
    bridge_ok = bridge_ok && m >= bridge_tol;
  }
  if (!bridge_ok) rep.flags.push_back("bridge inequality violated");

  rep.sup_ok = rep.sup_bound_achieved <= delta + 1e-8;
  rep.trace_ok = rep.trace_complement <= epsilon + 1e-9;
  rep.trace_asserted = commutative_unit_weights(*t.algebra());
  return rep;
}

NbhdResult measure_nbhd_member(const AlgElement& x, double epsilon, double delta) {
  if (!(epsilon > 0.0) || !(delta > 0.0))
    throw domain_error("measure_nbhd_member needs epsilon, delta > 0");
  NbhdResult res;
  res.level = singular_value_function(x).value_at(epsilon);
  res.member = res.level <= delta;
  if (!res.member) return res;
  const double slack = 1e-10 * (1.0 + res.level);
  Projection e = spectral_projection(abs(x), -slack, res.level + slack);
  res.trace_complement = e.complement().trace();
  res.verified = res.trace_complement <= epsilon + 1e-9 &&
                 uniform_norm(x * e.element()) <= delta + 1e-9 * std::max(1.0, delta);
  res.e = std::move(e);
  return res;
}

std::vector<TruncationPoint> truncation_sequence(const AlgElement& x, const OrliczFunction& phi,
                                                 const std::vector<double>& n_list) {
  require_positive(x, "truncation_sequence");
  std::vector<TruncationPoint> out;
  out.reserve(n_list.size());
  for (double n : n_list) {
    if (!(n > 0.0)) throw domain_error("truncation_sequence needs positive window parameters");
    // Open spectral window (1/n, n).
    const double lo = std::nextafter(1.0 / n, std::numeric_limits<double>::infinity());
    const double hi = std::nextafter(n, 0.0);
    Projection e = lo <= hi ? spectral_projection(x, lo, hi) : Projection::zero(x.algebra());
    AlgElement r = x;
    r -= x * e.element();
    out.push_back({n, luxemburg_norm(r, phi).value});
  }
  return out;
}

ConvergenceReport convergence_report(const DSOperator& t, const AlgElement& x,
                                     const OrliczFunction& phi, double epsilon,
                                     std::size_t n_cap) {
  if (n_cap < 2) throw domain_error("convergence_report needs n_cap >= 2");
  if (!(epsilon > 0.0)) throw domain_error("convergence_report needs epsilon > 0");

  ErgodicTrace trace = ergodic_averages(t, x, n_cap, phi);
  const AlgElement& xhat = *trace.limit;
  if (luxemburg_norm(xhat, phi).value > luxemburg_norm(x, phi).value + 1e-8)
    throw numerical_error("limit norm exceeds the source norm");

  std::vector<AlgElement> diffs;
  diffs.reserve(n_cap);
  AverageIterator it(t, x);
  for (std::size_t n = 1; n <= n_cap; ++n) {
    AlgElement d = it.step();
    d -= xhat;
    diffs.push_back(std::move(d));
  }

  // Candidate witnesses: level sets of |A_N - xhat|, largest trace first.
  const AlgElement abs_d = abs(diffs.back());
  const StepFunction mu_d = singular_value_function(diffs.back());
  std::vector<double> levels;
  for (const StepPiece& p : mu_d.pieces())
    if (levels.empty() || p.value < levels.back() * (1.0 - 1e-12) - 1e-300)
      levels.push_back(p.value);

  const std::size_t tail_lo = std::max<std::size_t>(1, n_cap / 2);
  std::optional<Projection> best;
  double best_sup = 0.0, best_tc = 0.0;
  for (double v : levels) {
    const double slack = 1e-10 * (1.0 + v);
    Projection e = spectral_projection(abs_d, -slack, v + slack);
    const double tc = e.complement().trace();
    if (tc > epsilon + 1e-12) continue;
    double ts = 0.0;
    for (std::size_t n = tail_lo; n <= n_cap; ++n)
      ts = std::max(ts, uniform_norm(sandwich(e, diffs[n - 1])));
    if (!best || ts < best_sup) {
      best = std::move(e);
      best_sup = ts;
      best_tc = tc;
    }
  }

  if (!best) throw numerical_error("no feasible sandwiching projection found");
  ConvergenceReport rep(std::move(*best));
  rep.trace = std::move(trace);
  rep.trace_complement = best_tc;
  rep.tail_sup = best_sup;
  rep.one_sided_emitted = two_convex_check(phi);
  rep.norm_bound_ok = true;
  rep.cesaro_fallback = rep.trace.limit_is_estimate;
  rep.flags = rep.trace.flags;
  rep.decay.reserve(n_cap);
  for (std::size_t n = 1; n <= n_cap; ++n) {
    const AlgElement& d = diffs[n - 1];
    rep.decay.push_back({n, uniform_norm(sandwich(rep.e, d)),
                         rep.one_sided_emitted ? uniform_norm(d * rep.e.element()) : 0.0});
  }
  return rep;
}

}  // namespace nco
