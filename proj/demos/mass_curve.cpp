// Prints the modified mass over lambda for one pseudo-Hermitian model, with
// the forbidden lambda window and the three closed-form special values.

#include <cstdio>

#include "pbl/pbl.hpp"

int main() {
  const auto params = pbl::make_params(0.5, 0.625, 2.0, 0.5);
  const pbl::PhysicalScales scales{};

  const auto window = pbl::admissible_lambda_window(params);
  std::printf("excluded lambda window: (%.6f, %.6f)\n", window.excluded_lo, window.excluded_hi);

  const auto special = pbl::special_masses(params, scales);
  std::printf("M(0) = %.6f  M(+1) = %.6f  M(-1) = %.6f\n", special.at_zero, special.at_plus_one,
              special.at_minus_one);

  std::printf("%10s %12s %12s\n", "lambda", "epsilon", "mass");
  for (const auto& row : pbl::mass_sweep(params, pbl::linspace(-3.0, 3.0, 25), scales)) {
    if (row.defined) {
      std::printf("%10.4f %12.6f %12.6f\n", row.lambda, row.epsilon, row.mass);
    } else {
      std::printf("%10.4f %12s %12s\n", row.lambda, "-", "-");
    }
  }
  return 0;
}
