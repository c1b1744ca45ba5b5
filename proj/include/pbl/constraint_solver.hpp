#pragma once

// Constraint regimes for H = hbar omega (c d + 1/2):
//   * Hermitian closure: real quadruple with alpha beta = gamma delta,
//   * pseudo-Hermitian: real quadruple, Dyson map fixed by epsilon(lambda),
//     nu = lambda epsilon / 2,
//   * unconstrained: classification only.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pbl/bogoliubov.hpp"
#include "pbl/error.hpp"
#include "pbl/special_functions.hpp"

namespace pbl {

struct PhysicalScales {
  double mass = 1.0;
  double omega = 1.0;
  double hbar = 1.0;

  void validate() const {
    if (!(mass > 0.0) || !(omega > 0.0) || !(hbar > 0.0)) {
      throw ConstraintViolation("mass, omega and hbar must all be strictly positive");
    }
  }
};

/// Coefficients of H / (hbar omega) = mu_ada a^dagger a - mu_aa a a
///                                   - mu_adad a^dagger a^dagger + mu_0.
/// mu_0 carries the alpha delta shift from normal-ordering a a^dagger.
struct SwansonCoefficients {
  cplx mu_ada;
  cplx mu_aa;
  cplx mu_adad;
  cplx mu_0;

  bool is_hermitian(double tol = 1e-12) const {
    return std::abs(mu_ada.imag()) <= tol && std::abs(mu_0.imag()) <= tol &&
           std::abs(mu_aa - std::conj(mu_adad)) <= tol;
  }
};

inline SwansonCoefficients swanson_coefficients(const BogoliubovParams& p) {
  const cplx ad = p.alpha() * p.delta();
  return {ad + p.beta() * p.gamma(), p.alpha() * p.beta(), p.gamma() * p.delta(), 0.5 + ad};
}

enum class Hermiticity { Hermitian, NonHermitian };

inline std::string to_string(Hermiticity h) {
  return h == Hermiticity::Hermitian ? "Hermitian" : "NonHermitian";
}

/// Hermitian iff alpha delta and beta gamma are real and alpha beta = conj(gamma delta).
inline Hermiticity classify(const BogoliubovParams& p, double tol = 1e-12) {
  const cplx ad = p.alpha() * p.delta();
  const cplx bg = p.beta() * p.gamma();
  const cplx ab = p.alpha() * p.beta();
  const cplx gd = p.gamma() * p.delta();
  const bool hermitian = std::abs(ad.imag()) <= tol && std::abs(bg.imag()) <= tol &&
                         std::abs(ab - std::conj(gd)) <= tol;
  return hermitian ? Hermiticity::Hermitian : Hermiticity::NonHermitian;
}

// ---------------------------------------------------------------------------
// Hermitian closure

/// Solves alpha beta = gamma delta together with unit determinant for (beta, delta).
template <typename Real>
std::pair<Real, Real> hermitian_closure(Real alpha, Real gamma) {
  const Real denom = gamma * gamma - alpha * alpha;
  if (denom == Real(0)) {
    throw DegenerateParameters("hermitian_closure requires gamma^2 != alpha^2");
  }
  return {gamma / denom, alpha / denom};
}

struct HermitianMass {
  double mass;            // m (gamma - alpha) / (gamma + alpha)
  double mass_from_beta;  // m (beta - delta) / (beta + delta)
  bool physical;          // gamma > alpha > 0 and beta > delta > 0
};

inline HermitianMass hermitian_mass(const BogoliubovParams& p, const PhysicalScales& scales,
                                    double tol = 1e-12) {
  scales.validate();
  if (!p.is_real()) throw ConstraintViolation("hermitian_mass needs a real quadruple");
  const double a = p.alpha().real(), b = p.beta().real(), g = p.gamma().real(), d = p.delta().real();
  if (std::abs(a * b - g * d) > tol * std::max(1.0, std::abs(a * b))) {
    throw ConstraintViolation("hermitian_mass needs alpha beta = gamma delta");
  }
  if (g + a == 0.0 || b + d == 0.0) throw DegenerateParameters("gamma + alpha or beta + delta vanishes");
  const bool ordered = g > a && a > 0.0 && b > d && d > 0.0;
  // The identity (alpha = delta = 0) is the unmodified oscillator and counts as physical.
  const bool trivial = a == 0.0 && d == 0.0 && g > 0.0 && b > 0.0;
  return {scales.mass * (g - a) / (g + a), scales.mass * (b - d) / (b + d), ordered || trivial};
}

// ---------------------------------------------------------------------------
// Pseudo-Hermitian regime

namespace detail {

struct RealQuad {
  double a, b, g, d;
};

inline RealQuad require_real(const BogoliubovParams& p, const char* who) {
  if (!p.is_real()) {
    throw ConstraintViolation(std::string(who) + " needs a real quadruple");
  }
  return {p.alpha().real(), p.beta().real(), p.gamma().real(), p.delta().real()};
}

// epsilon(lambda) = (y/2) * atanhc(y^2 (1 - lambda^2)) with
// y = (ab - gd) / ((ab + gd) + lambda (bg + ad)).
struct EpsilonTerms {
  double numerator;    // ab - gd
  double denominator;  // (ab + gd) + lambda (bg + ad)
};

inline EpsilonTerms epsilon_terms(const RealQuad& q, double lambda) {
  return {q.a * q.b - q.g * q.d, (q.a * q.b + q.g * q.d) + lambda * (q.b * q.g + q.a * q.d)};
}

}  // namespace detail

/// |argument of the arctanh| in epsilon(lambda). For |lambda| > 1 the argument
/// is imaginary; its modulus is returned. Infinite where the denominator vanishes.
inline double arctanh_argument_magnitude(const BogoliubovParams& p, double lambda) {
  const auto q = detail::require_real(p, "arctanh_argument_magnitude");
  const auto t = detail::epsilon_terms(q, lambda);
  if (t.numerator == 0.0) return 0.0;
  if (t.denominator == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(t.numerator / t.denominator) * std::sqrt(std::abs(1.0 - lambda * lambda));
}

/// Real epsilon solving the Hermitization constraint for nu = lambda epsilon / 2.
/// lambda = +-1 and |lambda| > 1 go through the analytic continuation of
/// atanh(z)/z, so no branch needs special casing.
inline double epsilon_of_lambda(const BogoliubovParams& p, double lambda) {
  const auto q = detail::require_real(p, "epsilon_of_lambda");
  if (!std::isfinite(lambda)) throw LambdaExcluded("lambda must be finite");
  const auto t = detail::epsilon_terms(q, lambda);
  if (t.numerator == 0.0) return 0.0;
  if (t.denominator == 0.0) {
    throw LambdaExcluded("lambda = " + std::to_string(lambda) + " zeroes the epsilon denominator");
  }
  const double y = t.numerator / t.denominator;
  const double u = y * y * (1.0 - lambda * lambda);
  if (u >= 1.0) {
    std::ostringstream os;
    os.precision(17);
    os << "lambda = " << lambda << " lies in the excluded window (|arctanh argument|^2 = " << u << ")";
    throw LambdaExcluded(os.str());
  }
  return 0.5 * y * detail::atanhc_sq(u);
}

/// Residual of tanh(2 theta)/theta = (ab - gd) / (eps (ab + gd) + 2 nu (bg + ad))
/// with theta^2 = eps^2 - 4 nu^2. The trivial solution eps = nu = 0 of a
/// Hermitian quadruple has zero residual.
inline double constraint_residual(const BogoliubovParams& p, double epsilon, double nu) {
  const auto q = detail::require_real(p, "constraint_residual");
  const double num = q.a * q.b - q.g * q.d;
  const double den = epsilon * (q.a * q.b + q.g * q.d) + 2.0 * nu * (q.b * q.g + q.a * q.d);
  const double lhs = detail::tanh2c_sq(epsilon * epsilon - 4.0 * nu * nu);
  if (den == 0.0) {
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::abs(lhs - num / den);
}

/// Forbidden open interval (lo, hi) of lambda. Empty (lo == hi) for a Hermitian quadruple.
struct LambdaWindow {
  double excluded_lo;
  double excluded_hi;

  bool empty() const noexcept { return !(excluded_lo < excluded_hi); }
  bool contains(double lambda) const noexcept { return lambda > excluded_lo && lambda < excluded_hi; }
};

/// Window endpoints -2 beta delta / (beta^2 + delta^2) and -2 alpha gamma / (alpha^2 + gamma^2),
/// valid under the ordering 0 < alpha/gamma < delta/beta < 1. A Hermitian quadruple has no
/// window, so the ordering is not enforced there.
inline LambdaWindow admissible_lambda_window(const BogoliubovParams& p, double tol = 1e-12) {
  const auto q = detail::require_real(p, "admissible_lambda_window");
  const double from_bd = -2.0 * q.b * q.d / (q.b * q.b + q.d * q.d);
  const double from_ag = -2.0 * q.a * q.g / (q.a * q.a + q.g * q.g);
  if (std::abs(q.a * q.b - q.g * q.d) <= tol * std::max(1.0, std::abs(q.a * q.b))) {
    return {from_ag, from_ag};
  }
  const bool ordered = q.g != 0.0 && q.b != 0.0 && 0.0 < q.a / q.g && q.a / q.g < q.d / q.b && q.d / q.b < 1.0;
  if (!ordered) {
    std::ostringstream os;
    os.precision(17);
    os << "window needs 0 < alpha/gamma < delta/beta < 1, got alpha/gamma = " << q.a / q.g
       << ", delta/beta = " << q.d / q.b;
    throw OrderingViolation(os.str());
  }
  return {from_bd, from_ag};
}

struct HermitizationResult {
  double lambda;
  double epsilon;
  double nu;
  BogoliubovParams hatted;
  BogoliubovParams tilde;
  double varkappa;
  double modified_mass;
  double xi_residual;  // max(|delta~ - k alpha~|, |beta~ - k gamma~|), relative to the tilde scale
};

inline constexpr double kXiTolerance = 1e-10;

struct VarkappaFit {
  cplx varkappa;
  double residual;  // max(|delta~ - k alpha~|, |beta~ - k gamma~|) / max(1, max |entry|)
};

/// Best k for delta~ = k alpha~, beta~ = k gamma~, taken from the
/// larger-magnitude denominator.
inline VarkappaFit fit_varkappa(const BogoliubovParams& tilde) {
  const cplx a = tilde.alpha(), b = tilde.beta(), g = tilde.gamma(), d = tilde.delta();
  const cplx kappa = std::abs(a) >= std::abs(g) ? d / a : b / g;
  const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(g), std::abs(d)});
  return {kappa, std::max(std::abs(d - kappa * a), std::abs(b - kappa * g)) / scale};
}

/// Picks the Dyson map for lambda and returns the transformed quadruple
/// satisfying delta~ = k alpha~ and beta~ = k gamma~, plus the modified mass.
inline HermitizationResult hermitize(const BogoliubovParams& p, double lambda, const PhysicalScales& scales) {
  scales.validate();
  const double eps = epsilon_of_lambda(p, lambda);
  const double nu = 0.5 * lambda * eps;
  const BogoliubovParams hatted = adjoint_map_quadruple({eps, nu});
  const BogoliubovParams tilde = compose(p, hatted, 1e-10);

  const auto fit = fit_varkappa(tilde);
  if (!(fit.residual <= kXiTolerance) ||
      std::abs(fit.varkappa.imag()) > kXiTolerance * std::max(1.0, std::abs(fit.varkappa))) {
    std::ostringstream os;
    os.precision(17);
    os << "tilde quadruple misses delta~ = k alpha~, beta~ = k gamma~ by " << fit.residual
       << " at lambda = " << lambda;
    throw ConstraintResidualTooLarge(os.str());
  }
  const cplx mass = scales.mass / ((tilde.alpha() + tilde.gamma()) * (tilde.beta() + tilde.delta()));
  return {lambda, eps, nu, hatted, tilde, fit.varkappa.real(), mass.real(), fit.residual};
}

/// Closed-form modified masses at lambda = 0, +1, -1 for a real quadruple.
template <typename Real>
struct SpecialMasses {
  Real at_zero;
  Real at_plus_one;
  Real at_minus_one;
};

template <typename Real>
SpecialMasses<Real> special_masses(Real alpha, Real beta, Real gamma, Real delta, Real mass = Real(1)) {
  using std::sqrt;
  const Real root_sum = sqrt(alpha * delta) + sqrt(beta * gamma);
  return {mass / (root_sum * root_sum), mass / ((gamma + alpha) * (beta + delta)),
          mass * (gamma - alpha) * (beta - delta)};
}

inline SpecialMasses<double> special_masses(const BogoliubovParams& p, const PhysicalScales& scales) {
  const auto q = detail::require_real(p, "special_masses");
  return special_masses<double>(q.a, q.b, q.g, q.d, scales.mass);
}

enum class MassPair { ZeroPlusOne, ZeroMinusOne, PlusOneMinusOne };

/// Recovers the Hermitian closure (beta, delta) for given (alpha, gamma) by
/// equating two of the special masses under unit determinant, with
/// delta = (beta gamma - 1) / alpha eliminated. The mass difference touches
/// zero tangentially at the closure, so the root is located as the minimum of
/// |difference| in extended precision rather than by bracketing a sign change.
inline std::pair<double, double> solve_hermitian_limit(double alpha_in, double gamma_in,
                                                       MassPair pair = MassPair::ZeroPlusOne) {
  using Real = long double;
  const Real alpha = alpha_in, gamma = gamma_in;
  if (!(alpha > 0) || !(gamma > alpha)) {
    throw OrderingViolation("solve_hermitian_limit needs 0 < alpha < gamma");
  }
  const auto delta_of = [&](Real beta) { return (beta * gamma - 1) / alpha; };
  const auto gap = [&](Real beta) -> Real {
    const auto m = special_masses<Real>(alpha, beta, gamma, delta_of(beta));
    switch (pair) {
      case MassPair::ZeroPlusOne: return m.at_zero - m.at_plus_one;
      case MassPair::ZeroMinusOne: return m.at_zero - m.at_minus_one;
      case MassPair::PlusOneMinusOne: return m.at_plus_one - m.at_minus_one;
    }
    return 0;
  };
  // delta >= 0 and delta / beta < 1 bound beta to [1/gamma, 1/(gamma - alpha)).
  const Real lo = 1 / gamma;
  const Real hi = 1 / (gamma - alpha);
  constexpr int kScan = 4000;
  Real best = lo;
  Real best_val = std::numeric_limits<Real>::infinity();
  for (int i = 1; i < kScan; ++i) {
    const Real beta = lo + (hi - lo) * Real(i) / Real(kScan);
    const Real v = std::abs(gap(beta));
    if (v < best_val) {
      best_val = v;
      best = beta;
    }
  }
  Real left = std::max(lo, best - (hi - lo) / kScan);
  Real right = std::min(hi, best + (hi - lo) / kScan);
  const Real inv_phi = (std::sqrt(Real(5)) - 1) / 2;
  Real x1 = right - inv_phi * (right - left);
  Real x2 = left + inv_phi * (right - left);
  Real f1 = std::abs(gap(x1)), f2 = std::abs(gap(x2));
  for (int it = 0; it < 200 && right - left > std::numeric_limits<Real>::epsilon() * 4; ++it) {
    if (f1 < f2) {
      right = x2;
      x2 = x1;
      f2 = f1;
      x1 = right - inv_phi * (right - left);
      f1 = std::abs(gap(x1));
    } else {
      left = x1;
      x1 = x2;
      f1 = f2;
      x2 = left + inv_phi * (right - left);
      f2 = std::abs(gap(x2));
    }
  }
  const Real beta = (left + right) / 2;
  if (!(std::abs(gap(beta)) < Real(1e-12))) {
    throw DegenerateParameters("no beta equates the requested pair of masses");
  }
  return {static_cast<double>(beta), static_cast<double>(delta_of(beta))};
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRow {
  double lambda;
  bool defined;
  double epsilon;
  double nu;
  double varkappa;
  double mass;
};

inline std::vector<double> linspace(double start, double stop, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = start;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

inline SweepRow sweep_row(const BogoliubovParams& p, double lambda, const PhysicalScales& scales) {
  try {
    const auto r = hermitize(p, lambda, scales);
    return {lambda, true, r.epsilon, r.nu, r.varkappa, r.modified_mass};
  } catch (const LambdaExcluded&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {lambda, false, nan, nan, nan, nan};
  }
}

/// One row per grid point, in grid order. Rows are independent and are split
/// over `threads` workers (0 = hardware concurrency).
inline std::vector<SweepRow> mass_sweep(const BogoliubovParams& p, const std::vector<double>& lambda_grid,
                                        const PhysicalScales& scales, unsigned threads = 1) {
  detail::require_real(p, "mass_sweep");
  scales.validate();
  std::vector<SweepRow> rows(lambda_grid.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, rows.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = sweep_row(p, lambda_grid[i], scales);
    return rows;
  }
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t i = w; i < rows.size(); i += threads) rows[i] = sweep_row(p, lambda_grid[i], scales);
      });
    }
  }
  return rows;
}

}  // namespace pbl
