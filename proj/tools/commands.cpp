#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nco/boyd.hpp"
#include "nco/dsops.hpp"
#include "nco/errors.hpp"
#include "nco/maximal.hpp"
#include "nco/orlicz.hpp"
#include "nco/symfunc.hpp"
#include "scenario.hpp"

namespace nco::cli {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string csv_path(const std::string& out_dir, const std::string& command,
                     const std::string& scenario) {
  return out_dir + "/" + command + "_" + scenario + ".csv";
}

nlohmann::json witness_json(const WitnessReport& w) {
  nlohmann::json j;
  j["epsilon"] = w.params.epsilon;
  j["delta"] = w.params.delta;
  j["t"] = w.params.t;
  j["nu"] = w.params.nu;
  j["gamma"] = w.params.gamma;
  j["trace_complement"] = w.trace_complement;
  j["sup_bound"] = w.sup_bound_achieved;
  j["pass"] = w.pass();
  j["flags"] = w.flags;
  return j;
}

nlohmann::json element_json(const AlgElement& x) {
  nlohmann::json blocks = nlohmann::json::array();
  for (std::size_t b = 0; b < x.n_blocks(); ++b) {
    const Matrix& m = x.block(b);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < m.cols(); ++j)
        row.push_back({m(i, j).real(), m(i, j).imag()});
      rows.push_back(std::move(row));
    }
    blocks.push_back(std::move(rows));
  }
  return blocks;
}

RunReport start(const char* command, const Scenario& sc, std::uint64_t seed) {
  RunReport rep;
  rep.command = command;
  rep.scenario = sc.name;
  rep.seed = seed;
  return rep;
}

}  // namespace

RunReport cmd_verify(const Scenario& sc, std::uint64_t seed, const std::string& out_dir) {
  (void)out_dir;  // the report itself is the artifact
  RunReport rep = start("verify", sc, seed);
  const CounterRng root(seed);
  const AlgebraPtr alg = build_algebra(sc);
  const OrliczFunction phi = build_orlicz(sc);
  const DSOperator op = build_operator(sc, alg, root);
  const BuiltElement be = build_element(sc, alg, phi, root);
  const AlgElement& x = be.x;
  const std::size_t horizon = sc.get_size("horizon", 256);
  const double eps = sc.get_double("epsilon", 0.5);
  const double delta = sc.get_double("delta", 1.0);

  // Algebra invariants on fresh samples.
  const AlgElement a = random_element(alg, ElementKind::general, root.fork(101).seed());
  const AlgElement b = random_element(alg, ElementKind::general, root.fork(102).seed());
  const double cyc = std::abs(trace(a * b) - trace(b * a));
  rep.add("algebra.trace_cyclic", cyc <= 1e-9 * (a.max_abs() * b.max_abs() + 1.0), cyc);
  const double faith = trace_real(a.adjoint() * a);
  rep.add("algebra.faithful", faith > 0.0, faith);

  // Rearrangement invariants for the configured element.
  const StepFunction mu = singular_value_function(x);
  const double l1 = lp_norm(x, 1.0);
  const double integral = sf_integral(mu, kInf);
  rep.add("symfunc.integral_l1", std::abs(integral - l1) <= 1e-9 * std::max(1.0, l1),
          std::abs(integral - l1));
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < mu.pieces().size(); ++i)
    decreasing = decreasing && mu.pieces()[i].value > mu.pieces()[i + 1].value;
  rep.add("symfunc.decreasing", decreasing, decreasing ? 1.0 : 0.0);

  const double lux = luxemburg_norm(x, phi).value;
  const double lux_sf = luxemburg_norm_sf(mu, phi).value;
  rep.add("orlicz.dual_path", std::abs(lux - lux_sf) <= 1e-8, std::abs(lux - lux_sf));
  if (lux > 0.0) {
    const P12aReport pr = p12a_check(x * cplx{1.0 / lux, 0.0}, phi);
    rep.add("orlicz.modular_bound", pr.pass, pr.modular);
    const double two = luxemburg_norm(x * cplx{2.0, 0.0}, phi).value;
    rep.add("orlicz.homogeneous", std::abs(two - 2.0 * lux) <= 1e-8 * std::max(1.0, lux),
            std::abs(two - 2.0 * lux));
  } else {
    rep.add("orlicz.modular_bound", true, 0.0, true, "zero element");
    rep.add("orlicz.homogeneous", true, 0.0, true, "zero element");
  }

  // Operator certificates.
  const DSReport ds = verify_ds(op, 50, root.fork(103).seed());
  rep.add("dsops.hermiticity", ds.hermiticity_ok, ds.herm_defect);
  rep.add("dsops.choi_psd", ds.choi_ok, ds.choi_min_eig);
  rep.add("dsops.sup_contractive", ds.sup_contractive, ds.sup_margin);
  rep.add("dsops.trace_contractive", ds.trace_contractive, ds.trace_margin);
  rep.add("dsops.sampled_contractivity", ds.samples_ok,
          std::max(ds.max_sup_ratio, ds.max_l1_ratio));
  if (!ds.pass()) rep.notes.push_back("operator certificate failed: " + ds.first_failure());

  const double ratio = max_orlicz_ratio(op, phi, 25, root.fork(104).seed());
  rep.add("dsops.orlicz_contractive", ratio <= 1.0 + 1e-8, ratio);
  const AlgElement h = random_element(alg, ElementKind::hermitian, root.fork(105).seed());
  const double km = kadison_margin(op, h);
  const double hsup = uniform_norm(h);
  rep.add("dsops.kadison", km >= -1e-9 * std::max(1.0, hsup * hsup), km);

  // Witness machinery at configured sizes.
  const AlgElement xp = abs(x);
  const double xp_sup = uniform_norm(xp);
  const double nu = sc.get_double("nu", xp_sup > 0.0 ? 0.5 * xp_sup : 1.0);
  const std::size_t n_wit = std::min<std::size_t>(horizon, 128);
  const WitnessReport yr = yeadon_search(op, xp, nu, n_wit);
  rep.add("maximal.yeadon_sup", yr.sup_ok, yr.sup_bound_achieved);
  rep.add("maximal.yeadon_trace", yr.trace_ok, yr.trace_complement, yr.trace_asserted);

  const WitnessParams wp = make_witness_params(phi, eps, delta, n_wit);
  AlgElement xw = xp;
  const double nxp = luxemburg_norm(xp, phi).value;
  if (nxp > 0.9 * wp.gamma) xw *= cplx{0.9 * wp.gamma / nxp, 0.0};
  const WitnessReport br = buem_witness(op, phi, eps, delta, xw, n_wit);
  rep.add("maximal.buem_sup", br.sup_ok, br.sup_bound_achieved);
  rep.add("maximal.buem_trace", br.trace_ok, br.trace_complement, br.trace_asserted);

  const double level = mu.value_at(eps);
  const NbhdResult nb = measure_nbhd_member(x, eps, 1.5 * level + 1e-6);
  rep.add("maximal.nbhd_witness", nb.member && nb.verified, nb.level);

  const std::vector<TruncationPoint> tr =
      truncation_sequence(xp, phi, {2.0, 4.0, 8.0, 16.0, 64.0});
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < tr.size(); ++i)
    monotone = monotone && tr[i + 1].remainder_norm <= tr[i].remainder_norm + 1e-10;
  rep.add("maximal.truncation_monotone", monotone, tr.back().remainder_norm);

  rep.extra["element_norm"] = be.norm;
  rep.extra["operator"] = op.descriptor();
  return rep;
}

RunReport cmd_ergodic(const Scenario& sc, std::uint64_t seed, const std::string& out_dir) {
  RunReport rep = start("ergodic", sc, seed);
  const CounterRng root(seed);
  const AlgebraPtr alg = build_algebra(sc);
  const OrliczFunction phi = build_orlicz(sc);
  const DSOperator op = build_operator(sc, alg, root);
  const BuiltElement be = build_element(sc, alg, phi, root);
  const std::size_t n_cap = std::max<std::size_t>(2, sc.get_size("horizon", 512));
  const double eps = sc.get_double("epsilon", 0.5);

  try {
    const ConvergenceReport cr = convergence_report(op, be.x, phi, eps, n_cap);
    rep.add("ergodic.norm_bound", cr.norm_bound_ok,
            luxemburg_norm(*cr.trace.limit, phi).value);
    rep.add("ergodic.witness_feasible", cr.trace_complement <= eps + 1e-12,
            cr.trace_complement);
    rep.add("ergodic.rate", true, cr.trace.rate_exponent, false,
            cr.trace.rate_defined ? "least-squares fit" : "no usable decay points");
    rep.add("ergodic.limit_validated", !cr.cesaro_fallback, cr.cesaro_fallback ? 0.0 : 1.0,
            false);

    std::ostringstream csv;
    csv << "n,sup_norm,orlicz_norm,dist_to_limit,sandwiched_dist\n";
    for (std::size_t i = 0; i < cr.trace.records.size(); ++i) {
      const ErgodicRecord& r = cr.trace.records[i];
      csv << r.n << ',' << fmt_g(r.sup_norm) << ',' << fmt_g(r.orlicz_norm) << ','
          << fmt_g(r.dist_to_limit) << ',' << fmt_g(cr.decay[i].sandwiched) << '\n';
    }
    // Reports record artifact names relative to their own directory so that
    // identical (config, seed) runs are byte-identical regardless of --out.
    write_text_atomic(csv_path(out_dir, "ergodic", sc.name), csv.str());
    rep.artifacts.push_back("ergodic_" + sc.name + ".csv");

    rep.extra["rate_exponent"] = cr.trace.rate_exponent;
    rep.extra["rate_defined"] = cr.trace.rate_defined;
    rep.extra["cesaro_fallback"] = cr.cesaro_fallback;
    rep.extra["tail_sup"] = cr.tail_sup;
    rep.extra["trace_complement"] = cr.trace_complement;
    rep.extra["one_sided_emitted"] = cr.one_sided_emitted;
    rep.extra["limit"] = element_json(*cr.trace.limit);
    rep.extra["limit_norm"] = luxemburg_norm(*cr.trace.limit, phi).value;
    rep.extra["source_norm"] = be.norm;
    rep.extra["flags"] = cr.flags;
  } catch (const numerical_error& e) {
    rep.add("ergodic.norm_bound", false, 0.0, true, e.what());
  }
  return rep;
}

RunReport cmd_maximal(const Scenario& sc, std::uint64_t seed, const std::string& out_dir) {
  RunReport rep = start("maximal", sc, seed);
  const CounterRng root(seed);
  const AlgebraPtr alg = build_algebra(sc);
  const OrliczFunction phi = build_orlicz(sc);
  const DSOperator op = build_operator(sc, alg, root);
  const std::string ek = sc.get_string("element.kind", "positive");
  if (ek != "positive" && ek != "projection" && ek != "indicator" && ek != "zero")
    sc.fail("element.kind", "maximal runs need a positive element kind");
  const BuiltElement be = build_element(sc, alg, phi, root);
  const AlgElement& x = be.x;
  const std::size_t horizon = std::max<std::size_t>(1, sc.get_size("horizon", 128));
  const double eps = sc.get_double("epsilon", 0.5);
  const double delta = sc.get_double("delta", 1.0);

  const WitnessParams wp = make_witness_params(phi, eps, delta, horizon);
  const bool two_conv = two_convex_check(phi);
  double uem_thr = kInf;
  if (two_conv) {
    const OrliczFunction tilde = derived_tilde(phi);
    uem_thr = std::sqrt(make_witness_params(tilde, eps, delta * delta, horizon).gamma);
  }

  const double nu = sc.get_double("nu", wp.nu);
  const WitnessReport yr = yeadon_search(op, x, nu, horizon);
  rep.add("maximal.yeadon_sup", yr.sup_ok, yr.sup_bound_achieved);
  rep.add("maximal.yeadon_trace", yr.trace_ok, yr.trace_complement, yr.trace_asserted);
  rep.extra["yeadon"] = witness_json(yr);
  rep.extra["yeadon"]["trace_bound"] = yr.trace_bound;
  const double l1 = lp_norm(x, 1.0);
  if (l1 > 0.0) rep.extra["yeadon"]["study_ratio"] = yr.trace_complement * nu / l1;

  // The witnesses are only defined below their norm thresholds; rescale the
  // element for them unless the config pinned a target norm explicitly.
  AlgElement xw = x;
  const double limit = 0.9 * std::min(wp.gamma, two_conv ? uem_thr : wp.gamma);
  if (!be.rescaled && be.norm > limit && be.norm > 0.0) {
    xw *= cplx{limit / be.norm, 0.0};
    rep.notes.push_back("element rescaled to meet the witness threshold");
  }

  try {
    const WitnessReport br = buem_witness(op, phi, eps, delta, xw, horizon);
    rep.add("maximal.buem_sup", br.sup_ok, br.sup_bound_achieved);
    rep.add("maximal.buem_trace", br.trace_ok, br.trace_complement, br.trace_asserted);
    rep.extra["buem"] = witness_json(br);
    rep.extra["buem"]["truncated_piece_sup"] = br.truncated_piece_sup;
    rep.extra["buem"]["function_piece_sup"] = br.function_piece_sup;
  } catch (const domain_error& e) {
    rep.add("maximal.buem_sup", false, 0.0, true, e.what());
  }

  if (two_conv) {
    try {
      const WitnessReport ur = uem_witness(op, phi, eps, delta, xw, horizon);
      rep.add("maximal.uem_sup", ur.sup_ok, ur.sup_bound_achieved);
      rep.extra["uem"] = witness_json(ur);
      rep.extra["uem"]["square_norm_discrepancy"] = ur.square_norm_discrepancy;
      rep.extra["uem"]["kadison_margin_min"] =
          ur.kadison_margins.empty()
              ? 0.0
              : *std::min_element(ur.kadison_margins.begin(), ur.kadison_margins.end());
    } catch (const domain_error& e) {
      rep.add("maximal.uem_sup", false, 0.0, true, e.what());
    }
  } else {
    rep.notes.push_back("uem skipped: the configured function is not 2-convex");
  }

  rep.extra["element_norm"] = be.norm;
  (void)out_dir;
  return rep;
}

RunReport cmd_boyd(const Scenario& sc, std::uint64_t seed, const std::string& out_dir) {
  RunReport rep = start("boyd", sc, seed);
  const OrliczFunction phi = build_orlicz(sc);
  const BoydEstimate est = estimate_boyd(phi);

  std::ostringstream csv;
  csv << "s,dilation_norm_lower,local_index\n";
  for (std::size_t i = 0; i < est.s_grid.size(); ++i)
    csv << fmt_g(est.s_grid[i]) << ',' << fmt_g(est.dilation_norm_lower[i]) << ','
        << fmt_g(est.local_index[i]) << '\n';
  write_text_atomic(csv_path(out_dir, "boyd", sc.name), csv.str());
  rep.artifacts.push_back("boyd_" + sc.name + ".csv");

  if (phi.is_power_kind()) {
    const double p = phi.param();
    rep.add("boyd.p_recovered", std::abs(est.p_hat - p) <= 0.05, est.p_hat);
    rep.add("boyd.q_recovered", std::abs(est.q_hat - p) <= 0.05, est.q_hat);
  } else if (phi.kind() == OrliczFunction::Kind::log_power && phi.param() <= 1.0 + 1e-12) {
    rep.add("boyd.p_hat_bound", est.p_hat <= 1.1, est.p_hat);
  } else {
    rep.add("boyd.p_hat", true, est.p_hat, false);
    rep.add("boyd.q_hat", true, est.q_hat, false);
  }
  rep.extra["p_hat"] = est.p_hat;
  rep.extra["q_hat"] = est.q_hat;
  rep.extra["function"] = phi.describe();
  return rep;
}

RunReport cmd_norms(const Scenario& sc, std::uint64_t seed, const std::string& out_dir) {
  RunReport rep = start("norms", sc, seed);
  const CounterRng root(seed);
  const AlgebraPtr alg = build_algebra(sc);
  const OrliczFunction phi = build_orlicz(sc);
  const std::size_t samples = std::max<std::size_t>(1, sc.get_size("samples", 100));
  const bool is_power = phi.kind() == OrliczFunction::Kind::power;
  const ElementKind kinds[3] = {ElementKind::general, ElementKind::hermitian,
                                ElementKind::positive};

  std::ostringstream csv;
  csv << "sample,matrix_norm,mu_norm,discrepancy,lp_ref\n";
  double max_disc = 0.0, max_lp_diff = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const AlgElement x = random_element(alg, kinds[i % 3], root.fork(3000 + i).seed());
    const double mn = luxemburg_norm(x, phi).value;
    const double sn = luxemburg_norm_sf(singular_value_function(x), phi).value;
    const double disc = std::abs(mn - sn);
    max_disc = std::max(max_disc, disc);
    double lp_ref = std::numeric_limits<double>::quiet_NaN();
    if (is_power) {
      lp_ref = lp_norm(x, phi.param());
      max_lp_diff = std::max(max_lp_diff, std::abs(mn - lp_ref));
    }
    csv << i << ',' << fmt_g(mn) << ',' << fmt_g(sn) << ',' << fmt_g(disc) << ','
        << fmt_g(lp_ref) << '\n';
  }
  write_text_atomic(csv_path(out_dir, "norms", sc.name), csv.str());
  rep.artifacts.push_back("norms_" + sc.name + ".csv");

  rep.add("norms.dual_path_max", max_disc <= 1e-8, max_disc);
  if (is_power) rep.add("norms.lp_match_max", max_lp_diff <= 1e-8, max_lp_diff);
  rep.extra["samples"] = samples;
  return rep;
}

}  // namespace nco::cli
