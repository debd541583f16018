#include "nco/symfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nco/errors.hpp"
#include "nco/sfjson.hpp"

namespace nco {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

StepFunction::StepFunction() : pieces_{{0.0, kInf}} {}

StepFunction::StepFunction(std::vector<StepPiece> pieces) {
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const StepPiece& p = pieces[i];
    if (std::isnan(p.value) || p.value < 0.0 || !std::isfinite(p.value))
      throw structural_error("step function values must be finite and nonnegative");
    if (!(p.length > 0.0)) throw structural_error("step function lengths must be positive");
    if (std::isinf(p.length)) {
      if (i + 1 != pieces.size())
        throw structural_error("only the last piece may have infinite length");
      if (p.value != 0.0)
        throw structural_error("an infinite-length piece must carry value 0");
    }
    if (i > 0 && pieces[i - 1].value < p.value)
      throw structural_error("step function values must be nonincreasing");
  }
  for (const StepPiece& p : pieces) {
    if (!pieces_.empty() && pieces_.back().value == p.value)
      pieces_.back().length += p.length;
    else
      pieces_.push_back(p);
  }
  if (pieces_.empty() || pieces_.back().value != 0.0) pieces_.push_back({0.0, kInf});
  pieces_.back().length = kInf;
}

double StepFunction::value_at(double t) const {
  if (t < 0.0) throw domain_error("step function argument must be nonnegative");
  double start = 0.0;
  for (const StepPiece& p : pieces_) {
    if (t < start + p.length) return p.value;
    start += p.length;
  }
  return 0.0;
}

double StepFunction::support_length() const {
  double s = 0.0;
  for (const StepPiece& p : pieces_)
    if (p.value > 0.0) s += p.length;
  return s;
}

std::vector<double> sf_breakpoints(const StepFunction& f) {
  std::vector<double> b;
  double start = 0.0;
  for (const StepPiece& p : f.pieces()) {
    if (std::isinf(p.length)) break;
    start += p.length;
    b.push_back(start);
  }
  return b;
}

bool StepFunction::almost_equal(const StepFunction& o, double value_tol,
                                double length_tol) const {
  std::vector<double> cuts{0.0};
  for (double t : sf_breakpoints(*this)) cuts.push_back(t);
  for (double t : sf_breakpoints(o)) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(cuts.back() + 1.0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= length_tol) continue;
    const double m = 0.5 * (cuts[i] + cuts[i + 1]);
    if (std::abs(value_at(m) - o.value_at(m)) > value_tol) return false;
  }
  return true;
}

StepFunction singular_value_function(const AlgElement& x) {
  struct Sv {
    double value;
    double weight;
  };
  std::vector<Sv> all;
  for (std::size_t j = 0; j < x.n_blocks(); ++j) {
    const Matrix& b = x.block(j);
    const Eigh e = eigh(b.adjoint() * b);
    for (double v : e.values)
      all.push_back({std::sqrt(std::max(v, 0.0)), x.algebra()->weights()[j]});
  }
  std::sort(all.begin(), all.end(), [](const Sv& a, const Sv& b) { return a.value > b.value; });
  std::vector<StepPiece> pieces;
  pieces.reserve(all.size());
  for (const Sv& s : all) pieces.push_back({s.value, s.weight});
  return StepFunction(std::move(pieces));
}

double sf_integral(const StepFunction& f, double upper) {
  if (std::isnan(upper) || upper < 0.0) throw domain_error("integration bound must be nonnegative");
  double s = 0.0, start = 0.0;
  for (const StepPiece& p : f.pieces()) {
    if (p.value > 0.0) {
      const double overlap = std::min(upper, start + p.length) - start;
      if (overlap > 0.0) s += p.value * overlap;
    }
    start += p.length;
    if (start >= upper) break;
  }
  return s;
}

StepFunction dilate(const StepFunction& f, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw domain_error("dilation factor must be positive and finite");
  std::vector<StepPiece> pieces;
  for (const StepPiece& p : f.pieces())
    pieces.push_back({p.value, std::isinf(p.length) ? kInf : p.length * s});
  return StepFunction(std::move(pieces));
}

bool majorizes(const StepFunction& x_sf, const StepFunction& y_sf, double tol) {
  std::vector<double> cuts;
  for (double t : sf_breakpoints(x_sf)) cuts.push_back(t);
  for (double t : sf_breakpoints(y_sf)) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  // Running integrals are piecewise linear, so kinks decide the comparison.
  for (double s : cuts)
    if (sf_integral(y_sf, s) > sf_integral(x_sf, s) + tol) return false;
  return sf_integral(y_sf, kInf) <= sf_integral(x_sf, kInf) + tol;
}

nlohmann::json sf_to_json(const StepFunction& f) {
  nlohmann::json out = nlohmann::json::array();
  for (const StepPiece& p : f.pieces()) {
    nlohmann::json jp{{"value", p.value}};
    if (std::isinf(p.length))
      jp["length"] = nullptr;
    else
      jp["length"] = p.length;
    out.push_back(std::move(jp));
  }
  return out;
}

StepFunction sf_from_json(const nlohmann::json& j) {
  std::vector<StepPiece> pieces;
  for (const auto& jp : j) {
    const double value = jp.at("value").get<double>();
    const auto& jl = jp.at("length");
    pieces.push_back({value, jl.is_null() ? kInf : jl.get<double>()});
  }
  return StepFunction(std::move(pieces));
}

}  // namespace nco
