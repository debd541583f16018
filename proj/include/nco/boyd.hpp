#pragma once

#include <vector>

#include "nco/orlicz.hpp"

namespace nco {

// Grid estimates of the Boyd indices from dilation norms on the scale of the
// fundamental function. The reported dilation norms are lower bounds (max over
// a finite b grid), so the local indices are one-sided estimates.
struct BoydEstimate {
  std::vector<double> s_grid;
  std::vector<double> dilation_norm_lower;  // max_b phi(s b) / phi(b)
  std::vector<double> local_index;          // log s / log dilation_norm_lower
  double p_hat;                             // local index at the largest s
  double q_hat;                             // local index at the smallest s
};

// phi(t) = 1 / Phi^{-1}(1 / t); increasing, phi(0+) = 0.
double fundamental_function(const OrliczFunction& phi, double t);

std::vector<double> default_s_grid();  // 2^k for k in -10..-1 and 1..10
std::vector<double> default_b_grid();  // log spaced over [1e-12, 1e12]

// Empty grids select the defaults. s values must be positive and not 1.
BoydEstimate estimate_boyd(const OrliczFunction& phi, std::vector<double> s_grid = {},
                           std::vector<double> b_grid = {});

}  // namespace nco
