#pragma once

// Composite trapezoid rule on [-L, L] with interval doubling. For entire
// integrands with Gaussian decay the rule converges geometrically, so two
// successive refinements agreeing to the tolerance is a reliable stop.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "pbl/error.hpp"

namespace pbl {

struct QuadratureScheme {
  enum class Rule { Trapezoid };

  Rule rule = Rule::Trapezoid;
  std::size_t initial_intervals = 256;
  double half_width = 0.0;  // 0 selects L from the integrand tails
  double tolerance = 1e-10;
  int max_refinements = 10;
};

namespace detail {

inline std::vector<double> trapezoid_nodes(double half_width, std::size_t intervals) {
  std::vector<double> x(intervals + 1);
  const double h = 2.0 * half_width / static_cast<double>(intervals);
  for (std::size_t i = 0; i <= intervals; ++i) x[i] = -half_width + h * static_cast<double>(i);
  return x;
}

inline std::vector<double> trapezoid_weights(std::size_t intervals, double half_width) {
  const double h = 2.0 * half_width / static_cast<double>(intervals);
  std::vector<double> w(intervals + 1, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

}  // namespace detail

/// Smallest L (from `start`, growing by 25%) at which `magnitude` stays below
/// `threshold` on both tails of width one.
inline double tail_half_width(const std::function<double(double)>& magnitude, double threshold,
                              double start = 6.0, double limit = 400.0) {
  for (double half = start; half <= limit; half *= 1.25) {
    bool small = true;
    for (double off = 0.0; off <= 1.0 && small; off += 0.125) {
      small = magnitude(half - off) <= threshold && magnitude(-(half - off)) <= threshold;
    }
    if (small) return half;
  }
  std::ostringstream os;
  os << "integrand does not decay below " << threshold << " within |x| <= " << limit;
  throw QuadratureNotConverged(os.str());
}

/// Drives trapezoid refinement for any quantity computed from a node grid:
/// `evaluate(nodes, weights)` returns a matrix; refinement stops once the
/// largest entrywise change drops below tolerance * max(1, |value|).
template <typename Evaluate>
Eigen::MatrixXcd refine_trapezoid(double half_width, const QuadratureScheme& scheme, Evaluate&& evaluate) {
  std::size_t intervals = std::max<std::size_t>(scheme.initial_intervals, 8);
  Eigen::MatrixXcd previous = evaluate(detail::trapezoid_nodes(half_width, intervals),
                                       detail::trapezoid_weights(intervals, half_width));
  double change = 0.0;
  for (int level = 0; level < scheme.max_refinements; ++level) {
    intervals *= 2;
    Eigen::MatrixXcd current = evaluate(detail::trapezoid_nodes(half_width, intervals),
                                        detail::trapezoid_weights(intervals, half_width));
    change = (current - previous).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, current.cwiseAbs().maxCoeff());
    if (change <= scheme.tolerance * scale) return current;
    previous = std::move(current);
  }
  std::ostringstream os;
  os.precision(3);
  os << "trapezoid refinement stalled at change " << change << " after " << intervals << " intervals";
  throw QuadratureNotConverged(os.str());
}

using ComplexFunction = std::function<std::complex<double>(double)>;

/// <f, g> = integral of conj(f) g over the real line.
inline std::complex<double> inner_product(const ComplexFunction& f, const ComplexFunction& g,
                                          const QuadratureScheme& scheme = {}) {
  double half = scheme.half_width;
  if (half <= 0.0) {
    half = tail_half_width([&](double x) { return std::abs(f(x)) * std::abs(g(x)); }, scheme.tolerance * 1e-3);
  }
  const auto result = refine_trapezoid(half, scheme, [&](const std::vector<double>& x, const std::vector<double>& w) {
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * std::conj(f(x[i])) * g(x[i]);
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = sum;
    return m;
  });
  return result(0, 0);
}

/// A function sampled on an abscissa array; the exchange format for grid data.
struct GridFunction {
  std::vector<double> x;
  std::vector<std::complex<double>> values;
};

inline GridFunction sample(const ComplexFunction& f, const std::vector<double>& x) {
  GridFunction out{x, {}};
  out.values.reserve(x.size());
  for (double xi : x) out.values.push_back(f(xi));
  return out;
}

/// Trapezoid inner product of two functions sampled on the same abscissae.
inline std::complex<double> grid_inner_product(const GridFunction& f, const GridFunction& g) {
  if (f.x.size() != g.x.size() || f.values.size() != f.x.size() || g.values.size() != g.x.size()) {
    throw DomainViolation("grid functions must share one abscissa array");
  }
  std::complex<double> sum = 0.0;
  for (std::size_t i = 1; i < f.x.size(); ++i) {
    if (f.x[i] != g.x[i]) throw DomainViolation("grid functions must share one abscissa array");
    const double h = f.x[i] - f.x[i - 1];
    sum += 0.5 * h * (std::conj(f.values[i - 1]) * g.values[i - 1] + std::conj(f.values[i]) * g.values[i]);
  }
  return sum;
}

}  // namespace pbl
