#include "scenario.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace nco::cli {
namespace {

std::vector<std::pair<double, double>> parse_knots(const Scenario& sc, const std::string& key) {
  // "u:v u:v ..." pairs.
  std::vector<std::pair<double, double>> knots;
  std::istringstream in(sc.get_string(key, ""));
  std::string tok;
  while (in >> tok) {
    const std::size_t colon = tok.find(':');
    if (colon == std::string::npos) sc.fail(key, "expected 'u:v' pairs");
    try {
      knots.emplace_back(std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1)));
    } catch (const std::exception&) {
      sc.fail(key, "expected 'u:v' pairs of numbers");
    }
  }
  if (knots.empty()) sc.fail(key, "expected at least one knot");
  return knots;
}

Matrix cyclic_shift(std::size_t m) {
  // S e_j = e_{j+1 mod m} on coordinates: (S x)_i = x_{i-1 mod m}.
  Matrix s(m, m);
  for (std::size_t i = 0; i < m; ++i) s(i, (i + m - 1) % m) = cplx{1.0, 0.0};
  return s;
}

AlgElement phase_unitary(const AlgebraPtr& alg) {
  std::vector<Matrix> blocks;
  for (std::size_t d : alg->block_dims()) {
    Matrix u(d, d);
    for (std::size_t a = 0; a < d; ++a)
      u(a, a) = std::polar(1.0, std::numbers::pi * static_cast<double>(a) / static_cast<double>(d));
    blocks.push_back(std::move(u));
  }
  return AlgElement(alg, std::move(blocks));
}

AlgElement exchange_unitary(const AlgebraPtr& alg) {
  std::vector<Matrix> blocks;
  for (std::size_t d : alg->block_dims()) blocks.push_back(cyclic_shift(d));
  return AlgElement(alg, std::move(blocks));
}

}  // namespace

AlgebraPtr build_algebra(const Scenario& sc) {
  const std::vector<std::size_t> dims = sc.get_sizes("algebra.dims", {2, 2, 1});
  const std::vector<double> weights = sc.get_doubles("algebra.weights", {1.0, 0.5, 2.0});
  try {
    return TracedAlgebra::make(dims, weights);
  } catch (const std::exception& e) {
    sc.fail("algebra.dims", e.what());
  }
}

OrliczFunction build_orlicz(const Scenario& sc) {
  const std::string kind = sc.get_string("orlicz.kind", "power");
  try {
    if (kind == "power") return OrliczFunction::power(sc.get_double("orlicz.p", 2.0));
    if (kind == "power_over_p")
      return OrliczFunction::power_over_p(sc.get_double("orlicz.p", 2.0));
    if (kind == "log_power") return OrliczFunction::log_power(sc.get_double("orlicz.alpha", 1.0));
    if (kind == "piecewise_linear")
      return OrliczFunction::piecewise_linear(parse_knots(sc, "orlicz.knots"));
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    sc.fail("orlicz.kind", e.what());
  }
  sc.fail("orlicz.kind", "unknown kind '" + kind + "'");
}

DSOperator build_operator(const Scenario& sc, const AlgebraPtr& alg, const CounterRng& root,
                          const std::string& prefix) {
  const std::string kind = sc.get_string(prefix + "kind", "unitary");
  const std::uint64_t tag = sc.get_u64(prefix + "seed", 1001);
  const CounterRng rng = root.fork(tag);
  try {
    if (kind == "identity") return DSOperator::identity(alg);
    if (kind == "unitary") {
      const std::string pattern = sc.get_string(prefix + "pattern", "random");
      if (pattern == "random")
        return DSOperator::unitary_conjugation(random_unitary(alg, rng.seed()), false);
      if (pattern == "phases") return DSOperator::unitary_conjugation(phase_unitary(alg), false);
      if (pattern == "exchange")
        return DSOperator::unitary_conjugation(exchange_unitary(alg), false);
      sc.fail(prefix + "pattern", "unknown unitary pattern '" + pattern + "'");
    }
    if (kind == "schur") {
      const std::size_t block = sc.get_size(prefix + "block", 0);
      if (block >= alg->n_blocks()) sc.fail(prefix + "block", "block index out of range");
      const double c = sc.get_double(prefix + "c", 0.5);
      const std::size_t d = alg->block_dims()[block];
      Matrix corr(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) corr(i, j) = cplx{i == j ? 1.0 : c, 0.0};
      return DSOperator::schur_correlation(alg, block, corr, false);
    }
    if (kind == "substochastic") {
      const std::size_t m = alg->n_blocks();
      const std::string pattern = sc.get_string(prefix + "pattern", "cycle");
      Matrix s(m, m);
      if (pattern == "cycle") {
        s = cyclic_shift(m);
      } else if (pattern == "average") {
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) s(i, j) = cplx{1.0 / static_cast<double>(m), 0.0};
      } else if (pattern == "random") {
        // Convex combination of shift powers: doubly stochastic by design.
        CounterRng g = rng;
        std::vector<double> w(m);
        double total = 0.0;
        for (double& v : w) {
          v = 0.05 + g.next_unit();
          total += v;
        }
        Matrix shift = cyclic_shift(m);
        Matrix pow_k = Matrix::identity(m);
        for (std::size_t k = 0; k < m; ++k) {
          Matrix term = pow_k;
          term *= cplx{w[k] / total, 0.0};
          s += term;
          pow_k = shift * pow_k;
        }
      } else {
        sc.fail(prefix + "pattern", "unknown substochastic pattern '" + pattern + "'");
      }
      return DSOperator::substochastic(alg, s, false);
    }
    if (kind == "compose" || kind == "mix") {
      DSOperator a = build_operator(sc, alg, root, prefix + "a.");
      DSOperator b = build_operator(sc, alg, root, prefix + "b.");
      if (kind == "compose") return DSOperator::compose(a, b);
      return DSOperator::convex_combine(a, b, sc.get_double(prefix + "lambda", 0.5));
    }
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    sc.fail(prefix + "kind", e.what());
  }
  sc.fail(prefix + "kind", "unknown kind '" + kind + "'");
}

BuiltElement build_element(const Scenario& sc, const AlgebraPtr& alg, const OrliczFunction& phi,
                           const CounterRng& root) {
  const std::string kind = sc.get_string("element.kind", "hermitian");
  const std::uint64_t tag = sc.get_u64("element.seed", 2001);
  AlgElement x = AlgElement::zero(alg);
  if (kind == "general") {
    x = random_element(alg, ElementKind::general, root.fork(tag).seed());
  } else if (kind == "hermitian") {
    x = random_element(alg, ElementKind::hermitian, root.fork(tag).seed());
  } else if (kind == "positive") {
    x = random_element(alg, ElementKind::positive, root.fork(tag).seed());
  } else if (kind == "projection") {
    x = random_element(alg, ElementKind::projection, root.fork(tag).seed());
  } else if (kind == "indicator") {
    const std::size_t idx = sc.get_size("element.index", 0);
    if (idx >= alg->total_dim()) sc.fail("element.index", "index exceeds the total dimension");
    std::vector<double> diag(alg->total_dim(), 0.0);
    diag[idx] = 1.0;
    x = AlgElement::diagonal(alg, diag);
  } else if (kind != "zero") {
    sc.fail("element.kind", "unknown kind '" + kind + "'");
  }

  BuiltElement out{std::move(x), 0.0, false};
  if (sc.has("element.target_norm")) {
    const double target = sc.get_double("element.target_norm", 0.0);
    if (!(target > 0.0)) sc.fail("element.target_norm", "expected a positive norm");
    const double n0 = luxemburg_norm(out.x, phi).value;
    if (n0 == 0.0) sc.fail("element.target_norm", "cannot rescale a zero element");
    out.x *= cplx{target / n0, 0.0};
    out.rescaled = true;
  }
  out.norm = luxemburg_norm(out.x, phi).value;
  return out;
}

}  // namespace nco::cli
