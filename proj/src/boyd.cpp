#include "nco/boyd.hpp"

#include <algorithm>
#include <cmath>

#include "nco/errors.hpp"

namespace nco {

double fundamental_function(const OrliczFunction& phi, double t) {
  if (!(t > 0.0)) throw domain_error("fundamental_function needs t > 0");
  return 1.0 / phi.inverse(1.0 / t);
}

std::vector<double> default_s_grid() {
  std::vector<double> s;
  for (int k = -10; k <= 10; ++k)
    if (k != 0) s.push_back(std::ldexp(1.0, k));
  return s;
}

std::vector<double> default_b_grid() {
  // 4 points per decade across [1e-12, 1e12].
  std::vector<double> b;
  for (int k = -48; k <= 48; ++k) b.push_back(std::pow(10.0, 0.25 * k));
  return b;
}

BoydEstimate estimate_boyd(const OrliczFunction& phi, std::vector<double> s_grid,
                           std::vector<double> b_grid) {
  if (s_grid.empty()) s_grid = default_s_grid();
  if (b_grid.empty()) b_grid = default_b_grid();
  std::sort(s_grid.begin(), s_grid.end());
  for (double s : s_grid)
    if (!(s > 0.0) || s == 1.0) throw domain_error("dilation scale must be positive and not 1");
  for (double b : b_grid)
    if (!(b > 0.0)) throw domain_error("b grid must be positive");

  std::vector<double> fb(b_grid.size());
  for (std::size_t i = 0; i < b_grid.size(); ++i) fb[i] = fundamental_function(phi, b_grid[i]);

  BoydEstimate out;
  out.s_grid = s_grid;
  out.dilation_norm_lower.reserve(s_grid.size());
  out.local_index.reserve(s_grid.size());
  for (double s : s_grid) {
    double best = 0.0;
    for (std::size_t i = 0; i < b_grid.size(); ++i)
      best = std::max(best, fundamental_function(phi, s * b_grid[i]) / fb[i]);
    out.dilation_norm_lower.push_back(best);
    const double lh = std::log(best);
    out.local_index.push_back(lh == 0.0 ? 0.0 : std::log(s) / lh);
  }
  out.q_hat = out.local_index.front();
  out.p_hat = out.local_index.back();
  return out;
}

}  // namespace nco
