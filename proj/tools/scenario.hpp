#pragma once

#include <string>

#include "config.hpp"
#include "nco/algebra.hpp"
#include "nco/dsops.hpp"
#include "nco/orlicz.hpp"
#include "nco/rng.hpp"

namespace nco::cli {

AlgebraPtr build_algebra(const Scenario& sc);
OrliczFunction build_orlicz(const Scenario& sc);

// Operators are built unchecked here; cmd_verify surfaces bad inputs through
// the certificate suite instead of a constructor throw.
DSOperator build_operator(const Scenario& sc, const AlgebraPtr& alg, const CounterRng& root,
                          const std::string& prefix = "operator.");

struct BuiltElement {
  AlgElement x;
  double norm;     // Orlicz norm after any rescale
  bool rescaled;   // element.target_norm was applied
};

BuiltElement build_element(const Scenario& sc, const AlgebraPtr& alg, const OrliczFunction& phi,
                           const CounterRng& root);

}  // namespace nco::cli
