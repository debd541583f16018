#pragma once

#include <vector>

#include "nco/algebra.hpp"

namespace nco {

struct StepPiece {
  double value;
  double length;  // may be INFINITY only on a trailing zero-value piece
};

// Nonincreasing right-continuous step function on (0, inf). Canonical form:
// strictly decreasing positive values followed by a trailing (0, inf) piece.
class StepFunction {
public:
  StepFunction();  // the zero function
  explicit StepFunction(std::vector<StepPiece> pieces);

  const std::vector<StepPiece>& pieces() const { return pieces_; }
  double value_at(double t) const;  // right-continuous
  double sup_value() const { return pieces_.front().value; }
  double support_length() const;  // measure of {f > 0}, always finite

  // Sup-distance on values, ignoring slivers narrower than length_tol.
  bool almost_equal(const StepFunction& o, double value_tol, double length_tol) const;

private:
  std::vector<StepPiece> pieces_;
};

// Weighted decreasing rearrangement of the singular values of x: each block
// eigenvalue of |x| contributes one piece of length w_j.
StepFunction singular_value_function(const AlgElement& x);

double sf_integral(const StepFunction& f, double upper);  // upper may be INFINITY
StepFunction dilate(const StepFunction& f, double s);     // t -> f(t / s)

// True iff the running integral of y stays below the running integral of x.
bool majorizes(const StepFunction& x_sf, const StepFunction& y_sf, double tol = 1e-10);

std::vector<double> sf_breakpoints(const StepFunction& f);  // finite piece ends

}  // namespace nco
