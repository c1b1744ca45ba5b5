#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pbl/constraint_solver.hpp"

namespace {

using pbl::cplx;

pbl::BogoliubovParams example() { return pbl::make_params(0.5, 0.625, 2.0, 0.5); }

// Real quadruple with 0 < alpha/gamma < delta/beta < 1 and unit determinant.
pbl::BogoliubovParams random_ordered(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ua(0.1, 1.0);
  std::uniform_real_distribution<double> ug(1.2, 3.0);
  std::uniform_real_distribution<double> u01(0.05, 0.95);
  const double alpha = ua(rng), gamma = ug(rng);
  const double lo = alpha / gamma;
  const double r = lo + (1.0 - lo) * u01(rng);
  const double beta = 1.0 / (gamma - alpha * r);
  return pbl::make_params(alpha, beta, gamma, r * beta);
}

TEST(Swanson, ExampleCoefficients) {
  const auto mu = pbl::swanson_coefficients(example());
  EXPECT_EQ(mu.mu_ada, cplx(1.5));
  EXPECT_EQ(mu.mu_aa, cplx(0.3125));
  EXPECT_EQ(mu.mu_adad, cplx(1.0));
  EXPECT_EQ(mu.mu_0, cplx(0.75));
  EXPECT_FALSE(mu.is_hermitian());
  EXPECT_EQ(pbl::classify(example()), pbl::Hermiticity::NonHermitian);
}

TEST(Swanson, IdentityIsOscillator) {
  const auto mu = pbl::swanson_coefficients(pbl::identity_params());
  EXPECT_EQ(mu.mu_ada, cplx(1.0));
  EXPECT_EQ(mu.mu_aa, cplx(0.0));
  EXPECT_EQ(mu.mu_adad, cplx(0.0));
  EXPECT_EQ(mu.mu_0, cplx(0.5));
  EXPECT_EQ(pbl::classify(pbl::identity_params()), pbl::Hermiticity::Hermitian);
  EXPECT_EQ(pbl::to_string(pbl::Hermiticity::Hermitian), "Hermitian");
}

TEST(HermitianClosure, HandValues) {
  const auto [beta, delta] = pbl::hermitian_closure(1.0, 2.0);
  EXPECT_NEAR(beta, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(delta, 1.0 / 3.0, 1e-15);
  const auto p = pbl::make_params(1.0, beta, 2.0, delta);
  EXPECT_EQ(pbl::classify(p), pbl::Hermiticity::Hermitian);
  EXPECT_TRUE(pbl::swanson_coefficients(p).is_hermitian());
}

TEST(HermitianClosure, ZeroAlphaGivesIdentity) {
  const auto [beta, delta] = pbl::hermitian_closure(0.0, 1.0);
  EXPECT_EQ(beta, 1.0);
  EXPECT_EQ(delta, 0.0);
  EXPECT_EQ(pbl::hermitian_mass(pbl::identity_params(), {}).mass, 1.0);
  EXPECT_TRUE(pbl::hermitian_mass(pbl::identity_params(), {}).physical);
}

TEST(HermitianClosure, DegenerateRejected) {
  EXPECT_THROW(pbl::hermitian_closure(1.0, 1.0), pbl::DegenerateParameters);
  EXPECT_THROW(pbl::hermitian_closure(1.0, -1.0), pbl::DegenerateParameters);
}

TEST(HermitianMass, ClosureMass) {
  const auto [beta, delta] = pbl::hermitian_closure(1.0, 2.0);
  const auto p = pbl::make_params(1.0, beta, 2.0, delta);
  const auto m = pbl::hermitian_mass(p, {2.0, 1.0, 1.0});
  EXPECT_NEAR(m.mass, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.mass_from_beta, 2.0 / 3.0, 1e-15);
  EXPECT_TRUE(m.physical);
}

TEST(HermitianMass, ReversedOrderingIsUnphysical) {
  const auto [beta, delta] = pbl::hermitian_closure(2.0, 1.0);
  const auto p = pbl::make_params(2.0, beta, 1.0, delta);
  EXPECT_FALSE(pbl::hermitian_mass(p, {}).physical);
}

TEST(HermitianMass, RequiresClosure) {
  EXPECT_THROW(pbl::hermitian_mass(example(), {}), pbl::ConstraintViolation);
  EXPECT_THROW(pbl::hermitian_mass(pbl::identity_params(), {0.0, 1.0, 1.0}), pbl::ConstraintViolation);
}

TEST(Epsilon, ExampleAtZeroHasClosedForm) {
  // arctanh argument -11/21, so epsilon = atanh(-11/21)/2 = ln(5/16)/4
  const double eps = pbl::epsilon_of_lambda(example(), 0.0);
  EXPECT_NEAR(eps, 0.25 * std::log(0.3125), 1e-15);
  EXPECT_NEAR(pbl::arctanh_argument_magnitude(example(), 0.0), 11.0 / 21.0, 1e-15);
}

TEST(Epsilon, ExampleAtPlusMinusOneIsLinear) {
  // the arctanh argument vanishes, leaving epsilon = y / 2
  EXPECT_NEAR(pbl::epsilon_of_lambda(example(), 1.0), -0.6875 / 2.8125 / 2.0, 1e-15);
  EXPECT_NEAR(pbl::epsilon_of_lambda(example(), -1.0), -0.6875 / (1.3125 - 1.5) / 2.0, 1e-15);
}

TEST(Epsilon, HermitianQuadrupleGivesZero) {
  const auto p = pbl::make_params(1.0, 2.0 / 3.0, 2.0, 1.0 / 3.0);
  for (double lambda : {-3.0, -1.0, 0.0, 0.5, 2.0}) {
    EXPECT_EQ(pbl::epsilon_of_lambda(p, lambda), 0.0);
  }
}

TEST(Epsilon, ComplexQuadrupleRejected) {
  const auto p = pbl::make_params(cplx(0.2, 0.1), (1.0 + cplx(0.2, 0.1) * 0.3) / 1.1, 1.1, 0.3);
  EXPECT_THROW(pbl::epsilon_of_lambda(p, 0.0), pbl::ConstraintViolation);
}

TEST(Epsilon, ResidualSmallAcrossAdmissibleGrid) {
  const auto p = example();
  const auto window = pbl::admissible_lambda_window(p);
  int used = 0;
  for (double lambda : pbl::linspace(-5.0, 5.0, 401)) {
    if (window.contains(lambda) || lambda == window.excluded_lo || lambda == window.excluded_hi) continue;
    const double eps = pbl::epsilon_of_lambda(p, lambda);
    EXPECT_LT(pbl::constraint_residual(p, eps, 0.5 * lambda * eps), 1e-10) << lambda;
    ++used;
  }
  EXPECT_GT(used, 300);
}

TEST(Epsilon, ExcludedInsideWindow) {
  const auto p = example();
  EXPECT_THROW(pbl::epsilon_of_lambda(p, -0.7), pbl::LambdaExcluded);
  EXPECT_THROW(pbl::epsilon_of_lambda(p, -0.9), pbl::LambdaExcluded);
  EXPECT_THROW(pbl::epsilon_of_lambda(p, std::nan("")), pbl::LambdaExcluded);
}

TEST(Window, ExampleEndpoints) {
  const auto w = pbl::admissible_lambda_window(example());
  EXPECT_NEAR(w.excluded_lo, -40.0 / 41.0, 1e-15);
  EXPECT_NEAR(w.excluded_hi, -8.0 / 17.0, 1e-15);
  EXPECT_FALSE(w.empty());
  EXPECT_TRUE(w.contains(-0.7));
  EXPECT_FALSE(w.contains(0.0));
  EXPECT_LT(pbl::arctanh_argument_magnitude(example(), -8.0 / 17.0 + 1e-9), 1.0);
  EXPECT_GT(pbl::arctanh_argument_magnitude(example(), -8.0 / 17.0 - 1e-9), 1.0);
  EXPECT_NO_THROW(pbl::epsilon_of_lambda(example(), -8.0 / 17.0 + 1e-9));
}

TEST(Window, EndpointsSaturateArctanhArgument) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_ordered(rng);
    const auto w = pbl::admissible_lambda_window(p);
    EXPECT_NEAR(pbl::arctanh_argument_magnitude(p, w.excluded_lo), 1.0, 1e-12);
    EXPECT_NEAR(pbl::arctanh_argument_magnitude(p, w.excluded_hi), 1.0, 1e-12);
    EXPECT_GT(pbl::arctanh_argument_magnitude(p, 0.5 * (w.excluded_lo + w.excluded_hi)), 1.0);
  }
}

TEST(Window, OrderingViolationRejected) {
  // alpha/gamma = 2 > 1
  EXPECT_THROW(pbl::admissible_lambda_window(pbl::make_params(2.0, 1.0, 1.0, 0.0)), pbl::OrderingViolation);
  // delta/beta < alpha/gamma
  EXPECT_THROW(pbl::admissible_lambda_window(pbl::make_params(0.5, 1.0, 1.1, 0.2)), pbl::OrderingViolation);
}

TEST(Window, HermitianQuadrupleHasEmptyWindow) {
  EXPECT_TRUE(pbl::admissible_lambda_window(pbl::identity_params()).empty());
  EXPECT_TRUE(pbl::admissible_lambda_window(pbl::make_params(1.0, 2.0 / 3.0, 2.0, 1.0 / 3.0)).empty());
}

TEST(Hermitize, ExampleAtZero) {
  const auto r = pbl::hermitize(example(), 0.0, {});
  EXPECT_EQ(r.nu, 0.0);
  EXPECT_NEAR(r.varkappa, std::sqrt(0.3125), 1e-14);
  EXPECT_NEAR(r.modified_mass, 1.0 / (1.5 + 2.0 * std::sqrt(0.3125)), 1e-14);
  EXPECT_LT(r.xi_residual, 1e-14);
  EXPECT_TRUE(pbl::swanson_coefficients(r.tilde).is_hermitian(1e-12));
  EXPECT_LT(std::abs(r.tilde.det() - 1.0), 1e-14);
}

TEST(Hermitize, MassScalesWithM) {
  const auto r1 = pbl::hermitize(example(), 2.0, {1.0, 1.0, 1.0});
  const auto r3 = pbl::hermitize(example(), 2.0, {3.0, 1.0, 1.0});
  EXPECT_NEAR(r3.modified_mass, 3.0 * r1.modified_mass, 1e-14);
}

TEST(Hermitize, InvalidScalesRejected) {
  EXPECT_THROW(pbl::hermitize(example(), 0.0, {-1.0, 1.0, 1.0}), pbl::ConstraintViolation);
}

TEST(SpecialMasses, ExampleValues) {
  const auto m = pbl::special_masses(example(), {});
  EXPECT_NEAR(m.at_zero, 1.0 / std::pow(0.5 + std::sqrt(1.25), 2), 1e-15);
  EXPECT_NEAR(m.at_plus_one, 1.0 / 2.8125, 1e-15);
  EXPECT_NEAR(m.at_minus_one, 0.1875, 1e-15);
}

TEST(SpecialMasses, AgreeWithHermitizedMass) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_ordered(rng);
    const auto m = pbl::special_masses(p, {});
    EXPECT_NEAR(pbl::hermitize(p, 0.0, {}).modified_mass, m.at_zero, 1e-12);
    EXPECT_NEAR(pbl::hermitize(p, 1.0, {}).modified_mass, m.at_plus_one, 1e-12);
    EXPECT_NEAR(pbl::hermitize(p, -1.0, {}).modified_mass, m.at_minus_one, 1e-12);
  }
}

TEST(SpecialMasses, PositiveOnDenseGrid) {
  for (double lambda : pbl::linspace(-20.0, 20.0, 801)) {
    const auto row = pbl::sweep_row(example(), lambda, {});
    if (row.defined) EXPECT_GT(row.mass, 0.0) << lambda;
  }
}

TEST(HermitianLimit, RecoversClosure) {
  for (auto pair : {pbl::MassPair::ZeroPlusOne, pbl::MassPair::ZeroMinusOne, pbl::MassPair::PlusOneMinusOne}) {
    const auto [beta, delta] = pbl::solve_hermitian_limit(1.0, 2.0, pair);
    EXPECT_NEAR(beta, 2.0 / 3.0, 1e-8);
    EXPECT_NEAR(delta, 1.0 / 3.0, 1e-8);
  }
  const auto [beta, delta] = pbl::solve_hermitian_limit(0.5, 1.5);
  const auto [cb, cd] = pbl::hermitian_closure(0.5, 1.5);
  EXPECT_NEAR(beta, cb, 1e-8);
  EXPECT_NEAR(delta, cd, 1e-8);
}

TEST(HermitianLimit, RequiresOrderedInputs) {
  EXPECT_THROW(pbl::solve_hermitian_limit(2.0, 1.0), pbl::OrderingViolation);
  EXPECT_THROW(pbl::solve_hermitian_limit(-1.0, 1.0), pbl::OrderingViolation);
}

TEST(Sweep, RowsMatchDirectCallsAndThreadCounts) {
  const auto grid = pbl::linspace(-5.0, 5.0, 201);
  const auto serial = pbl::mass_sweep(example(), grid, {}, 1);
  const auto threaded = pbl::mass_sweep(example(), grid, {}, 4);
  ASSERT_EQ(serial.size(), grid.size());
  int undefined = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(serial[i].lambda, grid[i]);
    EXPECT_EQ(serial[i].defined, threaded[i].defined);
    if (!serial[i].defined) {
      ++undefined;
      EXPECT_TRUE(std::isnan(serial[i].mass));
      continue;
    }
    EXPECT_EQ(serial[i].mass, threaded[i].mass);
    EXPECT_EQ(serial[i].epsilon, pbl::epsilon_of_lambda(example(), grid[i]));
  }
  // grid spacing 0.05 puts -0.95 ... -0.5 inside (-40/41, -8/17)
  EXPECT_EQ(undefined, 10);
}

TEST(Sweep, ComplexQuadrupleRejected) {
  const auto p = pbl::make_params(cplx(0.0, 1.0), 1.0, 1.0, 0.0);
  EXPECT_THROW(pbl::mass_sweep(p, {0.0}, {}), pbl::ConstraintViolation);
}

}  // namespace
