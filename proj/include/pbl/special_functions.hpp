#pragma once

// Entire functions of a squared argument u = theta^2. The quadratic forms in
// this library only ever produce real theta^2, so theta itself is real
// (u > 0) or purely imaginary (u < 0); evaluating through u keeps every
// value real and removes the theta = 0 singularity.

#include <cmath>

namespace pbl::detail {

// Below this |u| the truncated Taylor series is exact to double rounding.
inline constexpr double kSeriesCutoff = 1e-4;

/// sinh(sqrt(u)) / sqrt(u), continued to sin(sqrt(-u)) / sqrt(-u) for u < 0.
template <typename Real>
Real sinhc_sq(Real u) {
  using std::abs, std::sqrt, std::sinh, std::sin;
  if (abs(u) < Real(kSeriesCutoff)) {
    return Real(1) + u / Real(6) * (Real(1) + u / Real(20) * (Real(1) + u / Real(42)));
  }
  if (u > 0) {
    const Real t = sqrt(u);
    return sinh(t) / t;
  }
  const Real t = sqrt(-u);
  return sin(t) / t;
}

/// cosh(sqrt(u)), continued to cos(sqrt(-u)) for u < 0.
template <typename Real>
Real cosh_sq(Real u) {
  using std::sqrt, std::cosh, std::cos;
  if (u >= 0) return cosh(sqrt(u));
  return cos(sqrt(-u));
}

/// atanh(sqrt(u)) / sqrt(u) for 0 <= u < 1, and atan(sqrt(-u)) / sqrt(-u) for
/// u < 0. Diverges as u -> 1; callers must reject u >= 1.
template <typename Real>
Real atanhc_sq(Real u) {
  using std::abs, std::sqrt, std::atanh, std::atan;
  if (abs(u) < Real(kSeriesCutoff)) {
    return Real(1) + u * (Real(1) / Real(3) + u * (Real(1) / Real(5) + u / Real(7)));
  }
  if (u > 0) {
    const Real t = sqrt(u);
    return atanh(t) / t;
  }
  const Real t = sqrt(-u);
  return atan(t) / t;
}

/// tanh(2 sqrt(u)) / sqrt(u), continued to tan(2 sqrt(-u)) / sqrt(-u).
template <typename Real>
Real tanh2c_sq(Real u) {
  using std::abs, std::sqrt, std::tanh, std::tan;
  if (abs(u) < Real(kSeriesCutoff)) {
    // 2 tanh(y)/y with y^2 = 4u
    const Real y2 = Real(4) * u;
    return Real(2) *
           (Real(1) - y2 / Real(3) + Real(2) * y2 * y2 / Real(15) - Real(17) * y2 * y2 * y2 / Real(315));
  }
  if (u > 0) {
    const Real t = sqrt(u);
    return tanh(Real(2) * t) / t;
  }
  const Real t = sqrt(-u);
  return tan(Real(2) * t) / t;
}

}  // namespace pbl::detail
