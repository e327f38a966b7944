#pragma once

// The endpoint function g(lambda) = T(1/(1+lambda); lambda) and the critical
// length L* = max g.

#include <vector>

#include "pmc/quadrature.hpp"

namespace pmc::endpoint {

/// phi(z, lambda) = K(1/(1+lambda), z; lambda)
///               = lambda / (1+lambda)^(3/2) * z / (sqrt(1-z) sqrt(1 - z + lambda (1+z))).
[[nodiscard]] double phi(double z, double lambda, double one_minus_z);

/// d phi / d lambda.
[[nodiscard]] double phi_lambda(double z, double lambda, double one_minus_z);

/// g by quadrature of phi over (0, 1).
[[nodiscard]] double g_quadrature(double lambda, double tol = quadrature::kDefaultTolerance);

/// g from its three-branch closed form (log branch below 1, 1/3 at 1,
/// arcsec branch above 1). Within 1e-4 of lambda = 1 the branches cancel
/// catastrophically and the quadrature form is used.
[[nodiscard]] double g_closed(double lambda);

/// g'(lambda); closed form away from 1, quadrature of d phi/d lambda within 1e-2 of it.
[[nodiscard]] double g_prime(double lambda);

struct LStar {
  double c = 0.0;       // argmax of g, in (0, 1)
  double L_star = 0.0;  // g(c)
};

/// Maximizes g on (1e-8, 1] by golden section and polishes the argmax with
/// one secant step on g'. Throws NonConvergence if |g'(c)| stays above the
/// slope tolerance implied by tol.
[[nodiscard]] LStar compute_L_star(double tol = 1e-9);

struct EndpointCurve {
  std::vector<double> lambda_grid;
  std::vector<double> g_values;
  double c = 0.0;
  double L_star = 0.0;
};

[[nodiscard]] EndpointCurve endpoint_curve(const std::vector<double>& lambda_grid);

}  // namespace pmc::endpoint
