#include <doctest.h>

#include <cmath>
#include <limits>

#include "nco/algebra.hpp"
#include "nco/errors.hpp"
#include "nco/orlicz.hpp"
#include "nco/rng.hpp"
#include "nco/symfunc.hpp"

using namespace nco;

namespace {

const AlgebraPtr& mixed_alg() {
  static const AlgebraPtr alg = TracedAlgebra::make({2, 2, 1}, {1.0, 0.5, 2.0});
  return alg;
}

const OrliczFunction& phi1() {
  static const OrliczFunction f = OrliczFunction::log_power(1.0);
  return f;
}

AlgElement rescaled_to(const AlgElement& x, const OrliczFunction& phi, double target) {
  const double n = luxemburg_norm(x, phi).value;
  REQUIRE(n > 0.0);
  return x * cplx(target / n, 0.0);
}

}  // namespace

TEST_SUITE("orlicz") {
  TEST_CASE("evaluation and inverse round trips") {
    const OrliczFunction p2 = OrliczFunction::power(2.0);
    CHECK(p2(0.0) == 0.0);
    CHECK(p2(3.0) == doctest::Approx(9.0));
    CHECK(p2.inverse(9.0) == doctest::Approx(3.0));

    const OrliczFunction pov3 = OrliczFunction::power_over_p(3.0);
    CHECK(pov3(2.0) == doctest::Approx(8.0 / 3.0));

    CHECK(phi1()(1.0) == doctest::Approx(std::log(std::exp(1.0) + 1.0)));

    const OrliczFunction pw =
        OrliczFunction::piecewise_linear({{1.0, 0.5}, {2.0, 2.0}, {4.0, 8.0}});
    CHECK(pw(0.5) == doctest::Approx(0.25));   // first segment through the origin
    CHECK(pw(1.5) == doctest::Approx(1.25));   // interpolation
    CHECK(pw(6.0) == doctest::Approx(14.0));   // extended with the last slope 3
    CHECK(pw.inverse(14.0) == doctest::Approx(6.0).epsilon(1e-8));

    for (const OrliczFunction& f : {p2, pov3, phi1(), pw})
      for (double u : {0.3, 1.0, 2.7, 19.0})
        CHECK(f.inverse(f(u)) == doctest::Approx(u).epsilon(1e-8));

    CHECK_THROWS_AS((void)OrliczFunction::power(0.5), domain_error);
    CHECK_THROWS_AS((void)OrliczFunction::piecewise_linear({{2.0, 1.0}, {1.0, 3.0}}),
                    domain_error);
    // concave knots are rejected
    CHECK_THROWS_AS((void)OrliczFunction::piecewise_linear({{1.0, 2.0}, {3.0, 3.0}}),
                    domain_error);
  }

  TEST_CASE("growth lemma constant") {
    CHECK(lemma_constant(OrliczFunction::power(2.0), 0.5) == doctest::Approx(2.0));
    CHECK(lemma_constant(OrliczFunction::power(1.0), 0.17) == doctest::Approx(1.0));
    CHECK(lemma_constant(OrliczFunction::power(1.0), 42.0) == doctest::Approx(1.0));
    // frozen: 1 / ln(e + 1)
    CHECK(lemma_constant(phi1(), 1.0) == doctest::Approx(0.76146285961466).epsilon(1e-12));

    // the guarantee itself: t * phi(u) >= u on a sweep of u >= delta
    for (double delta : {0.2, 1.0, 5.0}) {
      const double t = lemma_constant(phi1(), delta);
      for (double u = delta; u < 1e4 * delta; u *= 1.7)
        CHECK(t * phi1()(u) >= u * (1.0 - 1e-12));
    }
    CHECK_THROWS_AS((void)lemma_constant(OrliczFunction::power(2.0), 0.0), domain_error);
  }

  TEST_CASE("doubling certificate") {
    CHECK(delta2_sup(OrliczFunction::power(2.0)) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(delta2_sup(OrliczFunction::power(3.0)) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(delta2_sup(OrliczFunction::power(1.0)) == doctest::Approx(2.0).epsilon(1e-12));
    const double k1 = delta2_sup(phi1(), 1e-6, 1e6);
    CHECK(k1 <= 4.0);
    CHECK(k1 >= 2.0);
  }

  TEST_CASE("2-convexity certificate") {
    CHECK(two_convex_check(OrliczFunction::power(3.0)));
    CHECK(two_convex_check(OrliczFunction::power(2.0)));
    CHECK_FALSE(two_convex_check(OrliczFunction::power(1.0)));
    for (double p : {2.0, 3.0, 4.0}) CHECK(two_convex_check(OrliczFunction::power_over_p(p)));
    CHECK_FALSE(two_convex_check(OrliczFunction::power_over_p(1.5)));
  }

  TEST_CASE("square substitution") {
    const OrliczFunction t2 = derived_tilde(OrliczFunction::power(2.0));
    for (double u : {0.1, 1.0, 7.0}) CHECK(t2(u) == doctest::Approx(u).epsilon(1e-12));

    const OrliczFunction t4 = derived_tilde(OrliczFunction::power(4.0));
    for (double u : {0.1, 1.0, 7.0}) CHECK(t4(u) == doctest::Approx(u * u).epsilon(1e-12));

    const OrliczFunction phi3 = OrliczFunction::power(3.0);
    const OrliczFunction t3 = derived_tilde(phi3);
    for (double u : {0.2, 1.3, 5.0}) {
      CHECK(t3(u * u) == doctest::Approx(phi3(u)).epsilon(1e-10));
      CHECK(t3.inverse(t3(u)) == doctest::Approx(u).epsilon(1e-8));
    }

    CHECK_THROWS_AS((void)derived_tilde(OrliczFunction::power(1.0)), domain_error);
  }

  TEST_CASE("modular on hand elements and against the commutative integral") {
    const AlgebraPtr alg = TracedAlgebra::make({1, 1}, {1.0, 1.0});
    const OrliczFunction p2 = OrliczFunction::power(2.0);
    CHECK(modular(AlgElement::diagonal(alg, {3.0, 1.0}), p2) == doctest::Approx(10.0));
    CHECK(modular(AlgElement::zero(alg), p2) == 0.0);

    for (int i = 0; i < 15; ++i) {
      const AlgElement x = random_element(mixed_alg(), ElementKind::general, 2700 + i);
      for (const OrliczFunction& f : {p2, OrliczFunction::power(3.0), phi1()}) {
        const double direct = modular(x, f);
        const double via_mu = modular_sf(singular_value_function(x), f);
        CHECK(direct == doctest::Approx(via_mu).epsilon(1e-9).scale(1.0 + direct));
      }
    }
  }

  TEST_CASE("rearrangement commutes with the function applied to the modulus") {
    for (int i = 0; i < 15; ++i) {
      const AlgElement x = random_element(mixed_alg(), ElementKind::general, 3300 + i);
      for (const OrliczFunction& f :
           {OrliczFunction::power(2.0), OrliczFunction::power(3.0), phi1()}) {
        const StepFunction lhs = singular_value_function(apply_function(f, abs(x)));
        const StepFunction mu = singular_value_function(x);
        std::vector<StepPiece> mapped;
        for (const StepPiece& p : mu.pieces())
          if (!std::isinf(p.length)) mapped.push_back({f(p.value), p.length});
        const StepFunction rhs{std::move(mapped)};
        CHECK(lhs.almost_equal(rhs, 1e-9 * (1.0 + lhs.sup_value()), 1e-12));
      }
    }
  }

  TEST_CASE("luxemburg norm on hand elements") {
    const AlgebraPtr alg = TracedAlgebra::make({1, 1}, {1.0, 1.0});
    const AlgElement x = AlgElement::diagonal(alg, {3.0, 4.0});
    const OrliczFunction p2 = OrliczFunction::power(2.0);
    const NormResult r = luxemburg_norm(x, p2);
    CHECK(r.value == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(r.modular_at_value <= 1.0 + 1e-9);
    CHECK(r.bracket_hi - r.bracket_lo <= 1e-10 * std::max(1.0, r.value) * 1.01);
    // modular at the lower bracket end straddles 1
    CHECK(modular(x * cplx(1.0 / r.bracket_lo, 0.0), p2) >= 1.0 - 1e-9);

    CHECK(luxemburg_norm(AlgElement::zero(alg), p2).value == 0.0);

    const AlgElement g = random_element(mixed_alg(), ElementKind::general, 12);
    CHECK(luxemburg_norm(g, OrliczFunction::power(1.0)).value ==
          doctest::Approx(lp_norm(g, 1.0)).epsilon(1e-8));
  }

  TEST_CASE("power-kind norms equal the lp norms") {
    for (int i = 0; i < 20; ++i) {
      const AlgElement x = random_element(mixed_alg(), ElementKind::general, 4100 + i);
      for (double p : {1.0, 1.5, 2.0, 3.0})
        CHECK(luxemburg_norm(x, OrliczFunction::power(p)).value ==
              doctest::Approx(lp_norm(x, p)).epsilon(1e-8));
    }
  }

  TEST_CASE("matrix and step-function norms agree") {
    const AlgebraPtr alg = TracedAlgebra::make({1, 1}, {1.0, 1.0});
    const OrliczFunction p2 = OrliczFunction::power(2.0);
    const StepFunction mu = singular_value_function(AlgElement::diagonal(alg, {3.0, 4.0}));
    CHECK(luxemburg_norm_sf(mu, p2).value == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(luxemburg_norm_sf(StepFunction({{1.0, 1.0}}), p2).value ==
          doctest::Approx(1.0).epsilon(1e-9));

    for (int i = 0; i < 25; ++i) {
      const AlgElement x = random_element(mixed_alg(), ElementKind::general, 4700 + i);
      for (const OrliczFunction& f :
           {p2, OrliczFunction::power(3.0), phi1(),
            OrliczFunction::piecewise_linear({{1.0, 0.5}, {2.0, 2.0}, {4.0, 8.0}})}) {
        const double via_matrix = luxemburg_norm(x, f).value;
        const double via_mu = luxemburg_norm_sf(singular_value_function(x), f).value;
        CHECK(via_matrix == doctest::Approx(via_mu).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("norm axioms on samples") {
    const OrliczFunction f = phi1();
    for (int i = 0; i < 10; ++i) {
      const AlgElement x = random_element(mixed_alg(), ElementKind::general, 5100 + i);
      const AlgElement y = random_element(mixed_alg(), ElementKind::general, 5200 + i);
      const double nx = luxemburg_norm(x, f).value;
      const double ny = luxemburg_norm(y, f).value;
      CHECK(luxemburg_norm(x * cplx(-2.5, 0.0), f).value == doctest::Approx(2.5 * nx).epsilon(1e-8));
      CHECK(luxemburg_norm(x * cplx(0.0, 1.0), f).value == doctest::Approx(nx).epsilon(1e-8));
      CHECK(luxemburg_norm(x + y, f).value <= nx + ny + 1e-8);
    }
  }

  TEST_CASE("majorization implies the norm inequality") {
    for (int i = 0; i < 30; ++i) {
      const AlgElement x = random_element(mixed_alg(), ElementKind::general, 5600 + i);
      const AlgElement y = random_element(mixed_alg(), ElementKind::general, 5650 + i);
      const StepFunction xf = singular_value_function(x);
      const StepFunction yf = singular_value_function(y);
      if (!majorizes(xf, yf)) continue;
      for (const OrliczFunction& f : {OrliczFunction::power(2.0), phi1()})
        CHECK(luxemburg_norm(y, f).value <= luxemburg_norm(x, f).value + 1e-8);
    }
    // plus a pair where majorization is guaranteed: x and a contraction of it
    const AlgElement x = random_element(mixed_alg(), ElementKind::general, 5900);
    const AlgElement y = x * cplx(0.5, 0.0);
    CHECK(majorizes(singular_value_function(x), singular_value_function(y)));
    CHECK(luxemburg_norm(y, phi1()).value <= luxemburg_norm(x, phi1()).value + 1e-8);
  }

  TEST_CASE("modular at the norm is admissible and near one under doubling") {
    for (int i = 0; i < 10; ++i) {
      const AlgElement x = random_element(mixed_alg(), ElementKind::general, 6100 + i);
      for (const OrliczFunction& f : {OrliczFunction::power(2.0), phi1()}) {
        const NormResult r = luxemburg_norm(x, f);
        CHECK(r.modular_at_value <= 1.0 + 1e-9);
        CHECK(r.modular_at_value >= 1.0 - 1e-6);  // doubling keeps the modular continuous
      }
    }
  }

  TEST_CASE("modular is dominated by the norm on the unit ball") {
    const OrliczFunction p2 = OrliczFunction::power(2.0);
    for (int i = 0; i < 20; ++i) {
      const AlgElement x = random_element(mixed_alg(), ElementKind::general, 6400 + i);
      for (double target : {0.3, 0.7, 1.0}) {
        const AlgElement y = rescaled_to(x, p2, target);
        const P12aReport rep = p12a_check(y, p2);
        CHECK(rep.pass);
        CHECK(rep.modular <= rep.norm + 1e-9);
      }
    }
    CHECK(p12a_check(AlgElement::zero(mixed_alg()), p2).pass);
    const AlgElement big = rescaled_to(random_element(mixed_alg(), ElementKind::general, 3), p2, 2.0);
    CHECK_THROWS_AS((void)p12a_check(big, p2), domain_error);
  }

  TEST_CASE("unit sphere turns the modular bound into an equality for powers") {
    const OrliczFunction p2 = OrliczFunction::power(2.0);
    const AlgElement y = rescaled_to(random_element(mixed_alg(), ElementKind::general, 8), p2, 1.0);
    const P12aReport rep = p12a_check(y, p2);
    CHECK(rep.pass);
    CHECK(rep.modular == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("squared elements swap between the function and its substitution") {
    for (int i = 0; i < 12; ++i) {
      const AlgElement x = random_element(mixed_alg(), ElementKind::positive, 6800 + i);
      for (double p : {2.0, 3.0, 4.0}) {
        const OrliczFunction f = OrliczFunction::power(p);
        const OrliczFunction ft = derived_tilde(f);
        const double direct = luxemburg_norm(x, f).value;
        const double squared = luxemburg_norm(x * x, ft).value;
        CHECK(squared == doctest::Approx(direct * direct).epsilon(1e-8));
      }
    }
  }
}
