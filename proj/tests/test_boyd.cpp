#include <doctest.h>

#include <cmath>

#include "nco/boyd.hpp"
#include "nco/errors.hpp"
#include "nco/orlicz.hpp"

using namespace nco;

TEST_SUITE("boyd") {
  TEST_CASE("fundamental function of power kinds is the root") {
    const OrliczFunction p2 = OrliczFunction::power(2.0);
    for (double t : {0.01, 0.5, 1.0, 16.0})
      CHECK(fundamental_function(p2, t) == doctest::Approx(std::sqrt(t)).epsilon(1e-10));
    const OrliczFunction p1 = OrliczFunction::power(1.0);
    CHECK(fundamental_function(p1, 3.0) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK_THROWS_AS((void)fundamental_function(p2, 0.0), domain_error);
    CHECK_THROWS_AS((void)fundamental_function(p2, -1.0), domain_error);
  }

  TEST_CASE("default grids span the documented dyadic range") {
    const std::vector<double> s = default_s_grid();
    CHECK(s.size() == 20);
    double lo = 1e9, hi = 0.0;
    for (double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      CHECK(v != 1.0);
      CHECK(v > 0.0);
    }
    CHECK(lo == doctest::Approx(std::pow(2.0, -10.0)));
    CHECK(hi == doctest::Approx(std::pow(2.0, 10.0)));
  }

  TEST_CASE("power functions recover their exponent") {
    for (double p : {1.0, 2.0, 4.0}) {
      const BoydEstimate est = estimate_boyd(OrliczFunction::power(p));
      CHECK(std::abs(est.p_hat - p) <= 0.05);
      CHECK(std::abs(est.q_hat - p) <= 0.05);
      CHECK(est.p_hat <= est.q_hat + 0.05);
      for (std::size_t i = 0; i < est.s_grid.size(); ++i)
        if (est.s_grid[i] >= 1.0) CHECK(est.dilation_norm_lower[i] >= 1.0 - 1e-12);
    }
    const BoydEstimate over = estimate_boyd(OrliczFunction::power_over_p(3.0));
    CHECK(std::abs(over.p_hat - 3.0) <= 0.05);
  }

  TEST_CASE("logarithmic growth pins the upper estimate near one") {
    const BoydEstimate est = estimate_boyd(OrliczFunction::log_power(1.0));
    CHECK(est.s_grid.back() == doctest::Approx(1024.0));
    CHECK(est.p_hat <= 1.1);
    CHECK(est.p_hat >= 1.0 - 0.05);
  }

  TEST_CASE("estimates are monotone down the grid for powers") {
    const BoydEstimate est = estimate_boyd(OrliczFunction::power(2.0));
    REQUIRE(est.s_grid.size() == est.local_index.size());
    for (double li : est.local_index) CHECK(li == doctest::Approx(2.0).epsilon(1e-6));
  }

  TEST_CASE("bad grids are rejected") {
    CHECK_THROWS_AS((void)estimate_boyd(OrliczFunction::power(2.0), {1.0}), domain_error);
    CHECK_THROWS_AS((void)estimate_boyd(OrliczFunction::power(2.0), {-2.0}), domain_error);
    CHECK_THROWS_AS((void)estimate_boyd(OrliczFunction::power(2.0), {2.0}, {0.0}), domain_error);
  }
}
