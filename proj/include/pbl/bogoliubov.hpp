#pragma once

// Generalized Bogoliubov transformations. A quadruple (alpha, beta, gamma,
// delta) stands for the matrix
//
//     T = [  beta  -delta ]
//         [ -alpha  gamma ]
//
// acting on the column (a, a^dagger), so that d = beta a - delta a^dagger and
// c = -alpha a + gamma a^dagger. Unit determinant beta*gamma - alpha*delta = 1
// is what makes [d, c] = 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <utility>

#include "pbl/error.hpp"
#include "pbl/special_functions.hpp"

namespace pbl {

using cplx = std::complex<double>;

inline constexpr double kDefaultDetTolerance = 1e-12;

class BogoliubovParams {
 public:
  cplx alpha() const noexcept { return alpha_; }
  cplx beta() const noexcept { return beta_; }
  cplx gamma() const noexcept { return gamma_; }
  cplx delta() const noexcept { return delta_; }

  /// beta*gamma - alpha*delta, kept from construction for diagnostics.
  cplx det() const noexcept { return det_; }

  bool is_real(double tol = 1e-14) const noexcept {
    return std::abs(alpha_.imag()) <= tol && std::abs(beta_.imag()) <= tol &&
           std::abs(gamma_.imag()) <= tol && std::abs(delta_.imag()) <= tol;
  }

  friend BogoliubovParams make_params(cplx, cplx, cplx, cplx, double);
  friend BogoliubovParams make_params_unchecked(cplx, cplx, cplx, cplx);

 private:
  BogoliubovParams(cplx a, cplx b, cplx g, cplx d)
      : alpha_(a), beta_(b), gamma_(g), delta_(d), det_(b * g - a * d) {}

  cplx alpha_, beta_, gamma_, delta_;
  cplx det_;
};

/// Validating constructor. The tolerance is relative to the size of the two
/// products entering the determinant.
inline BogoliubovParams make_params(cplx alpha, cplx beta, cplx gamma, cplx delta,
                                    double tol = kDefaultDetTolerance) {
  BogoliubovParams p(alpha, beta, gamma, delta);
  const double scale = std::max({1.0, std::abs(beta * gamma), std::abs(alpha * delta)});
  const double dev = std::abs(p.det() - 1.0);
  if (!(dev <= tol * scale)) {
    std::ostringstream os;
    os.precision(17);
    os << "beta*gamma - alpha*delta = " << p.det() << " deviates from 1 by " << dev;
    throw DeterminantViolation(os.str());
  }
  return p;
}

/// Skips the determinant check. Used for negative controls that must feed a
/// deliberately broken quadruple into downstream diagnostics.
inline BogoliubovParams make_params_unchecked(cplx alpha, cplx beta, cplx gamma, cplx delta) {
  return BogoliubovParams(alpha, beta, gamma, delta);
}

inline BogoliubovParams identity_params() { return make_params(0.0, 1.0, 1.0, 0.0); }

/// Quadruple of T(outer) * T(inner).
inline BogoliubovParams compose(const BogoliubovParams& outer, const BogoliubovParams& inner,
                                double tol = kDefaultDetTolerance) {
  const cplx a = outer.alpha(), b = outer.beta(), g = outer.gamma(), d = outer.delta();
  const cplx ah = inner.alpha(), bh = inner.beta(), gh = inner.gamma(), dh = inner.delta();
  return make_params(a * bh + g * ah, b * bh + d * ah, a * dh + g * gh, b * dh + d * gh, tol);
}

/// T^{-1} = [[gamma, delta], [alpha, beta]] for unit determinant.
inline BogoliubovParams invert(const BogoliubovParams& p, double tol = kDefaultDetTolerance) {
  return make_params(-p.alpha(), p.gamma(), p.beta(), -p.delta(), tol);
}

/// Parameters of eta = exp(epsilon a^dagger a + nu a a + conj(nu) a^dagger a^dagger).
struct AdjointMapParams {
  double epsilon = 0.0;
  cplx nu = 0.0;

  /// epsilon^2 - 4|nu|^2; negative values give an imaginary theta.
  double theta_squared() const noexcept { return epsilon * epsilon - 4.0 * std::norm(nu); }

  cplx theta() const noexcept { return std::sqrt(cplx(theta_squared(), 0.0)); }
};

/// The quadruple realizing a -> eta a eta^{-1} as a Bogoliubov transformation.
/// Evaluated through theta^2, so theta = 0 and imaginary theta need no special
/// casing by the caller.
inline BogoliubovParams adjoint_map_quadruple(const AdjointMapParams& map,
                                              double tol = kDefaultDetTolerance) {
  const double u = map.theta_squared();
  const double s = detail::sinhc_sq(u);
  const double c = detail::cosh_sq(u);
  const cplx alpha = -2.0 * map.nu * s;
  const double beta = c - map.epsilon * s;
  const double gamma = c + map.epsilon * s;
  const cplx delta = 2.0 * std::conj(map.nu) * s;
  return make_params(alpha, beta, gamma, delta, tol);
}

/// The operator coeff_a * a + coeff_adag * a^dagger.
struct LadderCombination {
  cplx coeff_a = 0.0;
  cplx coeff_adag = 0.0;

  LadderCombination adjoint() const { return {std::conj(coeff_adag), std::conj(coeff_a)}; }
};

/// [x, y] for x = x1 a + x2 a^dagger, y = y1 a + y2 a^dagger, as a multiple of
/// the identity (using [a, a^dagger] = 1).
inline cplx commutator(const LadderCombination& x, const LadderCombination& y) {
  return x.coeff_a * y.coeff_adag - x.coeff_adag * y.coeff_a;
}

/// Returns (d, c) = (beta a - delta a^dagger, -alpha a + gamma a^dagger).
inline std::pair<LadderCombination, LadderCombination> pseudo_boson_pair(const BogoliubovParams& p) {
  return {LadderCombination{p.beta(), -p.delta()}, LadderCombination{-p.alpha(), p.gamma()}};
}

/// d^dagger == c, i.e. beta = conj(gamma) and alpha = conj(delta).
inline bool mutually_adjoint(const BogoliubovParams& p, double tol = 1e-12) {
  return std::abs(p.beta() - std::conj(p.gamma())) <= tol &&
         std::abs(p.alpha() - std::conj(p.delta())) <= tol;
}

inline double max_abs_diff(const BogoliubovParams& x, const BogoliubovParams& y) {
  return std::max({std::abs(x.alpha() - y.alpha()), std::abs(x.beta() - y.beta()),
                   std::abs(x.gamma() - y.gamma()), std::abs(x.delta() - y.delta())});
}

}  // namespace pbl
