#pragma once

// Position-space eigenfamilies of the pseudo-bosons e, f built from a tilde
// quadruple (units m = omega = hbar = 1):
//
//   e = [(beta~ - delta~) x + (beta~ + delta~) d/dx] / sqrt(2)
//   f = [(gamma~ - alpha~) x - (alpha~ + gamma~) d/dx] / sqrt(2)
//
// phi_n = f^n phi_0 / sqrt(n!) with e phi_0 = 0, and Psi_n = (e^dagger)^n Psi_0 / sqrt(n!)
// with f^dagger Psi_0 = 0. The Psi family is the phi family of the dual quadruple
// (conj delta~, conj gamma~, conj beta~, conj alpha~), so one evaluator serves both.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pbl/bogoliubov.hpp"
#include "pbl/error.hpp"
#include "pbl/quadrature.hpp"

namespace pbl {

enum class FamilyTag { Phi, Psi };

/// (conj delta, conj gamma, conj beta, conj alpha); still unit determinant.
inline BogoliubovParams dual_quadruple(const BogoliubovParams& t) {
  return make_params(std::conj(t.delta()), std::conj(t.gamma()), std::conj(t.beta()), std::conj(t.alpha()), 1e-10);
}

/// Closed-form phi-type family of a quadruple without the square-integrability
/// check. gaussian_width and prefactors only depend on p = alpha + gamma and
/// q = beta + delta.
class FamilyKernel {
 public:
  explicit FamilyKernel(const BogoliubovParams& q)
      : p_(q.alpha() + q.gamma()), q_(q.beta() + q.delta()), width_((q.beta() - q.delta()) / q_) {
    if (p_ == cplx(0.0) || q_ == cplx(0.0)) {
      throw DegenerateParameters("alpha + gamma and beta + delta must be nonzero");
    }
  }

  cplx width() const noexcept { return width_; }
  cplx p() const noexcept { return p_; }
  cplx q() const noexcept { return q_; }
  cplx hermite_scale() const { return std::sqrt(p_ * q_); }

  /// Polynomial parts g_0..g_nmax at x, where g_n = (s/q)^n H_n(x/s) / sqrt(2^n n!) and
  /// s^2 = p q. The recurrence only involves s^2, so no square-root branch enters.
  void polynomials(std::size_t nmax, double x, std::vector<cplx>& g) const {
    g.assign(nmax + 1, cplx(0.0));
    g[0] = 1.0;
    if (nmax == 0) return;
    const cplx xq = x / q_;
    const cplx ratio = p_ / q_;
    g[1] = std::numbers::sqrt2 * xq;
    for (std::size_t n = 1; n < nmax; ++n) {
      const double dn = static_cast<double>(n);
      g[n + 1] = std::sqrt(2.0 / (dn + 1.0)) * xq * g[n] - std::sqrt(dn / (dn + 1.0)) * ratio * g[n - 1];
    }
  }

  cplx envelope(double x) const { return std::exp(-0.5 * width_ * x * x); }

  /// Values and first two x-derivatives of g_n(x) exp(-w x^2 / 2), from
  /// g_n' = sqrt(2n) g_{n-1} / q.
  struct Jet {
    cplx value, first, second;
  };

  Jet jet(std::size_t n, double x) const {
    std::vector<cplx> g;
    polynomials(n, x, g);
    const auto gm = [&](std::size_t k) { return k <= n ? g[k] : cplx(0.0); };
    const double dn = static_cast<double>(n);
    const cplx g0 = g[n];
    const cplx g1 = n >= 1 ? std::sqrt(2.0 * dn) / q_ * gm(n - 1) : cplx(0.0);
    const cplx g2 = n >= 2 ? std::sqrt(2.0 * dn) * std::sqrt(2.0 * (dn - 1.0)) / (q_ * q_) * gm(n - 2) : cplx(0.0);
    const cplx w = width_;
    const cplx env = envelope(x);
    return {g0 * env, (g1 - w * x * g0) * env, (g2 - 2.0 * w * x * g1 - w * g0 + w * w * x * x * g0) * env};
  }

 private:
  cplx p_, q_, width_;
};

struct WaveFamily {
  BogoliubovParams tilde;
  FamilyTag tag;
  cplx normalization;
  cplx width;          // Gaussian exponent w: phi_0 ~ exp(-w x^2 / 2)
  cplx hermite_scale;  // s with Hermite argument x / s
  FamilyKernel kernel;

  cplx operator()(std::size_t n, double x) const { return normalization * value_unnormalized(n, x); }

  /// Members 0..nmax at x.
  std::vector<cplx> all(std::size_t nmax, double x) const {
    std::vector<cplx> g;
    kernel.polynomials(nmax, x, g);
    const cplx env = normalization * kernel.envelope(x);
    for (auto& v : g) v *= env;
    return g;
  }

  /// n-th member with value, first and second derivative, analytic.
  FamilyKernel::Jet jet(std::size_t n, double x) const {
    auto j = kernel.jet(n, x);
    return {normalization * j.value, normalization * j.first, normalization * j.second};
  }

 private:
  cplx value_unnormalized(std::size_t n, double x) const {
    std::vector<cplx> g;
    kernel.polynomials(n, x, g);
    return g[n] * kernel.envelope(x);
  }
};

inline cplx phi_width(const BogoliubovParams& t) { return (t.beta() - t.delta()) / (t.beta() + t.delta()); }

/// Gaussian exponent of Psi_0: (conj gamma~ - conj alpha~) / (conj gamma~ + conj alpha~).
inline cplx psi_width(const BogoliubovParams& t) {
  return std::conj((t.gamma() - t.alpha()) / (t.gamma() + t.alpha()));
}

inline bool square_integrable(const BogoliubovParams& t, FamilyTag tag) {
  const cplx w = tag == FamilyTag::Phi ? phi_width(t) : psi_width(t);
  return std::isfinite(w.real()) && w.real() > 0.0;
}

/// (N_phi, N_Psi) with ||phi_0|| = 1 and <Psi_0, phi_0> = 1.
inline std::pair<cplx, cplx> normalize(const BogoliubovParams& t) {
  if (!square_integrable(t, FamilyTag::Phi) || !square_integrable(t, FamilyTag::Psi)) {
    throw NotSquareIntegrable("both Gaussian exponents need a positive real part");
  }
  const cplx wphi = phi_width(t);
  const cplx wpsi = psi_width(t);
  const cplx n_phi = std::pow(wphi.real() / std::numbers::pi, 0.25);
  // integral of exp(-(w_phi + conj w_psi) x^2 / 2), principal branch
  const cplx overlap = std::sqrt(2.0 * std::numbers::pi / (wphi + std::conj(wpsi)));
  const cplx n_psi = std::conj(1.0 / (n_phi * overlap));
  return {n_phi, n_psi};
}

inline WaveFamily build_family(const BogoliubovParams& t, FamilyTag tag) {
  if (!square_integrable(t, tag)) {
    throw NotSquareIntegrable(std::string(tag == FamilyTag::Phi ? "phi" : "Psi") +
                              " family has a Gaussian exponent with non-positive real part");
  }
  const BogoliubovParams source = tag == FamilyTag::Phi ? t : dual_quadruple(t);
  FamilyKernel kernel(source);
  cplx norm;
  if (tag == FamilyTag::Phi) {
    norm = std::pow(kernel.width().real() / std::numbers::pi, 0.25);
  } else if (square_integrable(t, FamilyTag::Phi)) {
    norm = normalize(t).second;
  } else {
    // no biorthogonal partner: fall back to ||Psi_0|| = 1
    norm = std::pow(kernel.width().real() / std::numbers::pi, 0.25);
  }
  return WaveFamily{t, tag, norm, kernel.width(), kernel.hermite_scale(), kernel};
}

/// |alpha~ beta~ - gamma~ delta~|; zero exactly when the families form Riesz-type
/// biorthogonal bases rather than D-quasi bases.
inline double basis_defect(const BogoliubovParams& t) {
  return std::abs(t.alpha() * t.beta() - t.gamma() * t.delta());
}

// ---------------------------------------------------------------------------
// Gram matrix

enum class BasisRegime { Basis, QuasiBasis };

struct GramReport {
  std::size_t nmax;
  Eigen::MatrixXcd gram;  // (m, n) = <Psi_m, phi_n>
  double max_offdiag;
  double max_diag_deviation;
  double defect;  // |alpha~ beta~ - gamma~ delta~|
  BasisRegime regime;

  double max_deviation() const noexcept { return std::max(max_offdiag, max_diag_deviation); }
};

namespace detail {

inline double family_half_width(const WaveFamily& a, const WaveFamily& b, std::size_t nmax, double threshold) {
  return tail_half_width(
      [&](double x) {
        double ma = 0.0, mb = 0.0;
        for (const auto& v : a.all(nmax, x)) ma = std::max(ma, std::abs(v));
        for (const auto& v : b.all(nmax, x)) mb = std::max(mb, std::abs(v));
        return ma * mb;
      },
      threshold);
}

}  // namespace detail

inline GramReport gram(const BogoliubovParams& t, std::size_t nmax, const QuadratureScheme& scheme = {},
                       double defect_tol = 1e-10) {
  const WaveFamily phi = build_family(t, FamilyTag::Phi);
  const WaveFamily psi = build_family(t, FamilyTag::Psi);
  const double half =
      scheme.half_width > 0.0 ? scheme.half_width : detail::family_half_width(phi, psi, nmax, scheme.tolerance * 1e-3);
  const auto n = static_cast<Eigen::Index>(nmax + 1);
  Eigen::MatrixXcd g = refine_trapezoid(half, scheme, [&](const std::vector<double>& x, const std::vector<double>& w) {
    Eigen::MatrixXcd phi_vals(n, static_cast<Eigen::Index>(x.size()));
    Eigen::MatrixXcd psi_vals(n, static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto pv = phi.all(nmax, x[i]);
      const auto sv = psi.all(nmax, x[i]);
      for (Eigen::Index k = 0; k < n; ++k) {
        phi_vals(k, static_cast<Eigen::Index>(i)) = w[i] * pv[static_cast<std::size_t>(k)];
        psi_vals(k, static_cast<Eigen::Index>(i)) = sv[static_cast<std::size_t>(k)];
      }
    }
    return Eigen::MatrixXcd(psi_vals.conjugate() * phi_vals.transpose());
  });

  GramReport rep{nmax, g, 0.0, 0.0, basis_defect(t), BasisRegime::Basis};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) {
        rep.max_diag_deviation = std::max(rep.max_diag_deviation, std::abs(g(i, j) - 1.0));
      } else {
        rep.max_offdiag = std::max(rep.max_offdiag, std::abs(g(i, j)));
      }
    }
  }
  rep.regime = rep.defect <= defect_tol ? BasisRegime::Basis : BasisRegime::QuasiBasis;
  return rep;
}

// ---------------------------------------------------------------------------
// Test functions and the D domain

/// A test function plus, when known, the rate b of its Gaussian envelope exp(-b x^2).
struct TestFunction {
  ComplexFunction eval;
  std::optional<double> gaussian_decay;

  cplx operator()(double x) const { return eval(x); }
};

/// amplitude * exp(-decay (x - center)^2 + i wavenumber x)
inline TestFunction gaussian(double decay, double center = 0.0, double wavenumber = 0.0, cplx amplitude = 1.0) {
  return {[=](double x) {
            const double dx = x - center;
            return amplitude * std::exp(cplx(-decay * dx * dx, wavenumber * x));
          },
          decay};
}

/// Fits b in |chi| ~ exp(-b x^2) from the envelope at |x| = 4, 6, 8. Both
/// secant estimates must agree to 20%.
inline double estimate_gaussian_decay(const ComplexFunction& chi) {
  const auto envelope = [&](double r) { return std::max(std::abs(chi(r)), std::abs(chi(-r))); };
  const double r1 = 4.0, r2 = 6.0, r3 = 8.0;
  const double m1 = envelope(r1), m2 = envelope(r2), m3 = envelope(r3);
  constexpr double tiny = std::numeric_limits<double>::min() * 1e10;
  if (!(m1 > tiny && m2 > tiny && m3 > tiny) || !std::isfinite(m1) || !std::isfinite(m2) || !std::isfinite(m3)) {
    throw UnknownDecay("envelope vanishes or is not finite at the probe radii");
  }
  const double b12 = -(std::log(m2) - std::log(m1)) / (r2 * r2 - r1 * r1);
  const double b23 = -(std::log(m3) - std::log(m2)) / (r3 * r3 - r2 * r2);
  if (!(b12 > 0.0 && b23 > 0.0) || std::abs(b12 - b23) > 0.2 * std::max(b12, b23)) {
    throw UnknownDecay("envelope is not of Gaussian class");
  }
  return b23;
}

/// exp(x^2 |alpha~ beta~ - gamma~ delta~| / 2) chi in L^2, decided from the
/// Gaussian rate of chi: true iff the rate exceeds the defect / 2.
inline bool in_domain_D(const TestFunction& chi, const BogoliubovParams& t, double defect_tol = 1e-14) {
  const double defect = basis_defect(t);
  if (defect <= defect_tol) return true;
  const double rate = chi.gaussian_decay ? *chi.gaussian_decay : estimate_gaussian_decay(chi.eval);
  return rate > 0.5 * defect;
}

struct ParsevalTrace {
  cplx reference;                    // <chi, xi>
  std::vector<cplx> psi_then_phi;    // S_k = sum_{n<=k} <chi, Psi_n><phi_n, xi>
  std::vector<cplx> phi_then_psi;    // S_k = sum_{n<=k} <chi, phi_n><Psi_n, xi>

  double error() const { return std::abs(psi_then_phi.back() - reference); }
  double ordering_gap() const { return std::abs(psi_then_phi.back() - phi_then_psi.back()); }
};

/// Partial sums of both quasi-basis resolutions of <chi, xi>.
inline ParsevalTrace quasi_parseval(const BogoliubovParams& t, const TestFunction& chi, const TestFunction& xi,
                                    std::size_t nmax, const QuadratureScheme& scheme = {}) {
  if (!in_domain_D(chi, t) || !in_domain_D(xi, t)) {
    throw DomainViolation("test functions must decay faster than exp(-defect x^2 / 2)");
  }
  const WaveFamily phi = build_family(t, FamilyTag::Phi);
  const WaveFamily psi = build_family(t, FamilyTag::Psi);
  const auto n = static_cast<Eigen::Index>(nmax + 1);

  double half = scheme.half_width;
  if (half <= 0.0) {
    const double fam = detail::family_half_width(phi, psi, nmax, scheme.tolerance * 1e-3);
    const double tests = tail_half_width(
        [&](double x) { return std::max(std::abs(chi(x)), std::abs(xi(x))); }, scheme.tolerance * 1e-3);
    half = std::max(fam, tests);
  }
  // columns: <chi,Psi_n>, <phi_n,xi>, <chi,phi_n>, <Psi_n,xi>; last row holds <chi,xi>
  const Eigen::MatrixXcd coeffs =
      refine_trapezoid(half, scheme, [&](const std::vector<double>& x, const std::vector<double>& w) {
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n + 1, 4);
        for (std::size_t i = 0; i < x.size(); ++i) {
          const auto pv = phi.all(nmax, x[i]);
          const auto sv = psi.all(nmax, x[i]);
          const cplx cx = std::conj(chi(x[i]));
          const cplx xv = xi(x[i]);
          for (Eigen::Index k = 0; k < n; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            c(k, 0) += w[i] * cx * sv[kk];
            c(k, 1) += w[i] * std::conj(pv[kk]) * xv;
            c(k, 2) += w[i] * cx * pv[kk];
            c(k, 3) += w[i] * std::conj(sv[kk]) * xv;
          }
          c(n, 0) += w[i] * cx * xv;
        }
        return c;
      });

  ParsevalTrace trace{coeffs(n, 0), {}, {}};
  cplx s1 = 0.0, s2 = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    s1 += coeffs(k, 0) * coeffs(k, 1);
    s2 += coeffs(k, 2) * coeffs(k, 3);
    trace.psi_then_phi.push_back(s1);
    trace.phi_then_psi.push_back(s2);
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Differential-operator checks (analytic derivatives only)

namespace detail {

struct PositionOperators {
  cplx e_x, e_d;  // e = (e_x x + e_d d/dx) / sqrt 2
  cplx f_x, f_d;  // f = (f_x x + f_d d/dx) / sqrt 2
};

inline PositionOperators position_operators(const BogoliubovParams& t) {
  return {t.beta() - t.delta(), t.beta() + t.delta(), t.gamma() - t.alpha(), -(t.alpha() + t.gamma())};
}

}  // namespace detail

/// sup over the grid interior of |(f e) phi_n - n phi_n|.
inline double number_op_residual(const BogoliubovParams& t, std::size_t n, const std::vector<double>& grid) {
  const WaveFamily phi = build_family(t, FamilyTag::Phi);
  const auto ops = detail::position_operators(t);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double x = grid[i];
    const auto j = phi.jet(n, x);
    // e phi and its derivative
    const cplx e_val = (ops.e_x * x * j.value + ops.e_d * j.first) / std::numbers::sqrt2;
    const cplx e_der = (ops.e_x * (j.value + x * j.first) + ops.e_d * j.second) / std::numbers::sqrt2;
    const cplx fe = (ops.f_x * x * e_val + ops.f_d * e_der) / std::numbers::sqrt2;
    worst = std::max(worst, std::abs(fe - static_cast<double>(n) * j.value));
  }
  return worst;
}

struct LadderResiduals {
  double e_on_phi0;       // sup |e phi_0|
  double fdag_on_psi0;    // sup |f^dagger Psi_0|
  double phi_raising;     // sup_n |f phi_n / sqrt(n+1) - phi_{n+1}|
  double psi_raising;     // sup_n |e^dagger Psi_n / sqrt(n+1) - Psi_{n+1}|
};

/// Vacuum and raising relations of both families on a grid, up to level nmax.
inline LadderResiduals ladder_residuals(const BogoliubovParams& t, std::size_t nmax, const std::vector<double>& grid) {
  const WaveFamily phi = build_family(t, FamilyTag::Phi);
  const WaveFamily psi = build_family(t, FamilyTag::Psi);
  const auto ops = detail::position_operators(t);
  // f^dagger = (conj f_x x - conj f_d d/dx) / sqrt 2, e^dagger likewise
  LadderResiduals r{0.0, 0.0, 0.0, 0.0};
  for (double x : grid) {
    const auto p0 = phi.jet(0, x);
    const auto s0 = psi.jet(0, x);
    r.e_on_phi0 = std::max(r.e_on_phi0, std::abs(ops.e_x * x * p0.value + ops.e_d * p0.first) / std::numbers::sqrt2);
    r.fdag_on_psi0 = std::max(
        r.fdag_on_psi0, std::abs(std::conj(ops.f_x) * x * s0.value - std::conj(ops.f_d) * s0.first) / std::numbers::sqrt2);
    for (std::size_t n = 0; n < nmax; ++n) {
      const double root = std::sqrt(static_cast<double>(n + 1));
      const auto pn = phi.jet(n, x);
      const cplx raised = (ops.f_x * x * pn.value + ops.f_d * pn.first) / std::numbers::sqrt2 / root;
      r.phi_raising = std::max(r.phi_raising, std::abs(raised - phi(n + 1, x)));
      const auto sn = psi.jet(n, x);
      const cplx sraised =
          (std::conj(ops.e_x) * x * sn.value - std::conj(ops.e_d) * sn.first) / std::numbers::sqrt2 / root;
      r.psi_raising = std::max(r.psi_raising, std::abs(sraised - psi(n + 1, x)));
    }
  }
  return r;
}

}  // namespace pbl
