#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nco/algebra.hpp"
#include "nco/symfunc.hpp"

namespace nco {

// Convex growth function Phi: [0, inf) -> [0, inf), Phi(0) = 0, strictly
// increasing. Kinds cover u^p, u^p/p, u ln^alpha(e + u), convex piecewise
// linear interpolants, and the substitution Phi(sqrt(u)).
class OrliczFunction {
public:
  enum class Kind { power, power_over_p, log_power, piecewise_linear, tilde };

  static OrliczFunction power(double p);
  static OrliczFunction power_over_p(double p);
  static OrliczFunction log_power(double alpha);
  // (u_i, v_i) knots, strictly increasing in both, implicit (0, 0) start;
  // extended beyond the last knot with the final slope.
  static OrliczFunction piecewise_linear(std::vector<std::pair<double, double>> knots);

  double operator()(double u) const;
  double inverse(double v) const;

  Kind kind() const { return kind_; }
  double param() const { return param_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  bool is_power_kind() const { return kind_ == Kind::power || kind_ == Kind::power_over_p; }
  std::string describe() const;

  friend OrliczFunction derived_tilde(const OrliczFunction& phi);

private:
  OrliczFunction(Kind kind, double param) : kind_(kind), param_(param) {}
  Kind kind_;
  double param_;
  std::vector<std::pair<double, double>> knots_;
  std::shared_ptr<const OrliczFunction> base_;
};

// Smallest t with t * Phi(u) >= u for all u >= delta, namely delta / Phi(delta);
// the guarantee is re-verified on a sample grid.
double lemma_constant(const OrliczFunction& phi, double delta);

// sup of Phi(2u)/Phi(u) over a log grid of [u_lo, u_hi].
double delta2_sup(const OrliczFunction& phi, double u_lo = 1e-8, double u_hi = 1e8,
                  std::size_t grid = 4096);

// Midpoint convexity of u -> Phi(sqrt(u)) sampled over a log grid.
bool two_convex_check(const OrliczFunction& phi, std::size_t grid = 1000);

// The substituted function u -> Phi(sqrt(u)).
OrliczFunction derived_tilde(const OrliczFunction& phi);

double modular(const AlgElement& x, const OrliczFunction& phi);     // tau(Phi(|x|))
double modular_sf(const StepFunction& f, const OrliczFunction& phi);

struct NormResult {
  double value;             // admissible upper end of the bracket
  double bracket_lo, bracket_hi;
  double modular_at_value;  // <= 1 by construction for value > 0
};

NormResult luxemburg_norm(const AlgElement& x, const OrliczFunction& phi);
NormResult luxemburg_norm_sf(const StepFunction& f, const OrliczFunction& phi);

struct P12aReport {
  double norm;
  double modular;
  bool pass;  // modular <= norm + 1e-9
};

// For ||x||_Phi <= 1: tau(Phi(|x|)) <= ||x||_Phi.
P12aReport p12a_check(const AlgElement& x, const OrliczFunction& phi);

}  // namespace nco
