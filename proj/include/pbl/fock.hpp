#pragma once

// Dense matrix representations on the lowest N Fock levels. Every identity
// checked here only holds away from the truncation edge, so residuals are
// measured on a leading K x K window.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "pbl/bogoliubov.hpp"
#include "pbl/constraint_solver.hpp"
#include "pbl/error.hpp"

namespace pbl {

using MatrixXc = Eigen::MatrixXcd;

struct TruncatedOperator {
  MatrixXc entries;
  std::string label;

  Eigen::Index dim() const noexcept { return entries.rows(); }
};

inline void require_dim(Eigen::Index n, Eigen::Index min, const char* who) {
  if (n < min) {
    throw DimensionTooSmall(std::string(who) + " needs N >= " + std::to_string(min) + ", got " +
                            std::to_string(n));
  }
}

/// a with sqrt(n+1) on the superdiagonal, and its conjugate transpose.
inline std::pair<TruncatedOperator, TruncatedOperator> ladder_matrices(Eigen::Index n) {
  require_dim(n, 2, "ladder_matrices");
  MatrixXc a = MatrixXc::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) a(i, i + 1) = std::sqrt(static_cast<double>(i + 1));
  MatrixXc adag = a.adjoint();
  return {{std::move(a), "a"}, {std::move(adag), "a^dagger"}};
}

inline TruncatedOperator operator_matrix(const LadderCombination& comb, Eigen::Index n,
                                         std::string label = "z1 a + z2 a^dagger") {
  const auto [a, adag] = ladder_matrices(n);
  return {comb.coeff_a * a.entries + comb.coeff_adag * adag.entries, std::move(label)};
}

inline MatrixXc commutator(const MatrixXc& x, const MatrixXc& y) { return x * y - y * x; }

/// Largest |entry| of the leading k x k block of m - target.
inline double block_residual(const MatrixXc& m, const MatrixXc& target, Eigen::Index k) {
  k = std::min({k, m.rows(), target.rows()});
  if (k <= 0) return 0.0;
  return (m.topLeftCorner(k, k) - target.topLeftCorner(k, k)).cwiseAbs().maxCoeff();
}

/// hbar omega (C D + 1/2) with C, D the truncated pseudo-bosons of p.
inline TruncatedOperator hamiltonian_matrix(const BogoliubovParams& p, Eigen::Index n,
                                            const PhysicalScales& scales = {}) {
  scales.validate();
  const auto [d, c] = pseudo_boson_pair(p);
  const MatrixXc dm = operator_matrix(d, n).entries;
  const MatrixXc cm = operator_matrix(c, n).entries;
  const double unit = scales.hbar * scales.omega;
  return {unit * (cm * dm + 0.5 * MatrixXc::Identity(n, n)), "H"};
}

/// The same Hamiltonian assembled from its normal-ordered Swanson coefficients.
inline TruncatedOperator swanson_matrix(const SwansonCoefficients& mu, Eigen::Index n,
                                        const PhysicalScales& scales = {}) {
  scales.validate();
  const auto [a, adag] = ladder_matrices(n);
  const MatrixXc& am = a.entries;
  const MatrixXc& bm = adag.entries;
  const double unit = scales.hbar * scales.omega;
  MatrixXc h = mu.mu_ada * (bm * am) - mu.mu_aa * (am * am) - mu.mu_adad * (bm * bm) +
               mu.mu_0 * MatrixXc::Identity(n, n);
  return {unit * h, "H (normal ordered)"};
}

/// Hermitian exponent epsilon a^dagger a + nu a a + conj(nu) a^dagger a^dagger.
inline MatrixXc eta_exponent(const AdjointMapParams& map, Eigen::Index n) {
  const auto [a, adag] = ladder_matrices(n);
  const MatrixXc& am = a.entries;
  const MatrixXc& bm = adag.entries;
  return map.epsilon * (bm * am) + map.nu * (am * am) + std::conj(map.nu) * (bm * bm);
}

namespace detail {

inline MatrixXc hermitian_part(const MatrixXc& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace detail

inline TruncatedOperator eta_matrix(const AdjointMapParams& map, Eigen::Index n) {
  require_dim(n, 4, "eta_matrix");
  const MatrixXc x = eta_exponent(map, n);
  return {detail::hermitian_part(x.exp()), "eta"};
}

/// exp(-X) rather than a matrix inverse of exp(X).
inline TruncatedOperator eta_inverse_matrix(const AdjointMapParams& map, Eigen::Index n) {
  require_dim(n, 4, "eta_inverse_matrix");
  const MatrixXc x = eta_exponent(map, n);
  return {detail::hermitian_part((-x).exp()), "eta^-1"};
}

struct SimilarityReport {
  Eigen::Index dim;
  Eigen::Index window;
  double residual_a;       // eta a eta^-1 - (beta^ a - delta^ a^dagger)
  double residual_adag;    // eta a^dagger eta^-1 - (-alpha^ a + gamma^ a^dagger)
  double inverse_residual; // eta eta^-1 - 1

  double max_residual() const noexcept { return std::max(residual_a, residual_adag); }
};

inline constexpr double kInverseTolerance = 1e-6;

inline SimilarityReport verify_adjoint_action(const AdjointMapParams& map, Eigen::Index n, Eigen::Index k) {
  require_dim(n, 4, "verify_adjoint_action");
  if (k <= 0 || k >= n) throw DimensionTooSmall("window K must satisfy 0 < K < N");
  const MatrixXc eta = eta_matrix(map, n).entries;
  const MatrixXc eta_inv = eta_inverse_matrix(map, n).entries;
  const MatrixXc id = MatrixXc::Identity(n, n);
  const double inv_res = block_residual(eta * eta_inv, id, k);
  if (!(inv_res <= kInverseTolerance)) {
    throw ConditioningFailure("eta * eta^-1 deviates from identity by " + std::to_string(inv_res) +
                              " on the verification window");
  }
  const auto [a, adag] = ladder_matrices(n);
  const BogoliubovParams hat = adjoint_map_quadruple(map);
  const MatrixXc target_a = hat.beta() * a.entries - hat.delta() * adag.entries;
  const MatrixXc target_adag = -hat.alpha() * a.entries + hat.gamma() * adag.entries;
  return {n, k, block_residual(eta * a.entries * eta_inv, target_a, k),
          block_residual(eta * adag.entries * eta_inv, target_adag, k), inv_res};
}

/// Largest |H - H^dagger| entry on the leading k x k block.
inline double hermiticity_residual(const MatrixXc& h, Eigen::Index k) {
  return block_residual(h, h.adjoint(), k);
}

struct SpectralReport {
  Eigen::Index dim;
  Eigen::Index levels;
  std::vector<double> h_eigenvalues;  // Hermitian h = hbar omega (f e + 1/2)
  std::vector<cplx> H_eigenvalues;    // raw non-Hermitian H, lowest real parts
  double h_hermiticity;               // over the whole truncated matrix
  double max_h_gap;                   // max_n |E_n(h) - hbar omega (n + 1/2)|
  double max_H_gap;                   // same for H, using |E_n(H) - target|
  double max_H_vs_h;                  // max_n |E_n(H) - E_n(h)|
};

/// Lowest `count` eigenvalues of a general matrix ordered by real part.
inline std::vector<cplx> lowest_eigenvalues(const MatrixXc& m, Eigen::Index count) {
  Eigen::ComplexEigenSolver<MatrixXc> solver(m, false);
  std::vector<cplx> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
  ev.resize(static_cast<std::size_t>(std::min<Eigen::Index>(count, m.rows())));
  return ev;
}

/// Lowest `count` eigenvalues of the Hermitian part of m, ascending.
inline std::vector<double> lowest_hermitian_eigenvalues(const MatrixXc& m, Eigen::Index count) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(detail::hermitian_part(m), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + std::min<Eigen::Index>(count, ev.size()));
  return out;
}

/// Compares the spectra of H(params) and of the Hermitized h built from the
/// tilde quadruple of hermitize(params, lambda) against hbar omega (n + 1/2).
inline SpectralReport verify_isospectral(const BogoliubovParams& params, double lambda, Eigen::Index n,
                                         Eigen::Index k, const PhysicalScales& scales = {}) {
  require_dim(n, 2, "verify_isospectral");
  k = std::min(k, n);
  const auto herm = hermitize(params, lambda, scales);
  const MatrixXc h = hamiltonian_matrix(herm.tilde, n, scales).entries;
  const MatrixXc big_h = hamiltonian_matrix(params, n, scales).entries;

  SpectralReport rep{n, k, lowest_hermitian_eigenvalues(h, k), lowest_eigenvalues(big_h, k),
                     hermiticity_residual(h, n), 0.0, 0.0, 0.0};
  const double unit = scales.hbar * scales.omega;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double target = unit * (static_cast<double>(i) + 0.5);
    const auto idx = static_cast<std::size_t>(i);
    rep.max_h_gap = std::max(rep.max_h_gap, std::abs(rep.h_eigenvalues[idx] - target));
    rep.max_H_gap = std::max(rep.max_H_gap, std::abs(rep.H_eigenvalues[idx] - target));
    rep.max_H_vs_h = std::max(rep.max_H_vs_h, std::abs(rep.H_eigenvalues[idx] - rep.h_eigenvalues[idx]));
  }
  return rep;
}

/// <v| eta^dagger eta |v>, the metric norm of v.
inline double metric_norm_squared(const MatrixXc& eta, const Eigen::VectorXcd& v) {
  const Eigen::VectorXcd w = eta * v;
  return w.squaredNorm();
}

}  // namespace pbl
